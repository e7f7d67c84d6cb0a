//! Two-qubit reduced states and the Wootters concurrence.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, partial_trace, DenseMatrix, C64};
use crate::spin_model::{build_hamiltonian, ClusterSpec};
use crate::thermo::{ThermalEnsemble, ThermalState};

/// Tolerance for accepting a 4×4 matrix as a density matrix.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct TwoQubitState {
    rho: DenseMatrix,
}

impl TwoQubitState {
    /// Checks unit trace, hermiticity and positivity within [`STATE_TOL`].
    pub fn new(rho: DenseMatrix) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::InvalidState(format!(
                "expected 4x4, got {0}x{0}",
                rho.dim()
            )));
        }
        if !rho.is_hermitian(STATE_TOL) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = hermitian_eig(&rho)?.values[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> &DenseMatrix {
        &self.rho
    }
}

/// Concurrence with its unclamped value λ₁ − λ₂ − λ₃ − λ₄.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue {
    pub c: f64,
    pub raw: f64,
}

impl ConcurrenceValue {
    fn from_raw(raw: f64) -> Self {
        Self {
            c: raw.max(0.0),
            raw,
        }
    }

    pub fn is_entangled(&self) -> bool {
        self.raw > 0.0
    }
}

/// Reduced state of sites `k` and `l` (both spin-1/2), kept in increasing site order.
pub fn pair_reduced_state(
    ts: &ThermalState,
    site_dims: &[usize],
    k: usize,
    l: usize,
) -> Result<TwoQubitState> {
    if k == l {
        return Err(Error::InvalidParameter("pair sites must differ".into()));
    }
    for &s in &[k, l] {
        match site_dims.get(s) {
            Some(2) => {}
            Some(d) => {
                return Err(Error::InvalidParameter(format!(
                    "site {s} has local dimension {d}; concurrence needs spin-1/2"
                )))
            }
            None => return Err(Error::InvalidParameter(format!("site {s} out of range"))),
        }
    }
    TwoQubitState::new(partial_trace(ts.rho(), site_dims, &[k, l])?)
}

fn sigma_y_sigma_y() -> DenseMatrix {
    let sy = DenseMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])
    .expect("2x2");
    kron(&sy, &sy).expect("4x4")
}

/// Wootters concurrence.
///
/// The eigenvalues of ρ·ρ̃ with ρ̃ = (σy⊗σy)ρ*(σy⊗σy) coincide with those of the
/// Hermitian matrix √ρ·ρ̃·√ρ, which is what gets diagonalized here.
pub fn concurrence(s: &TwoQubitState) -> Result<ConcurrenceValue> {
    let rho = s.rho();
    let yy = sigma_y_sigma_y();
    let flipped = yy.matmul(&rho.conj()).matmul(&yy);
    let eig = hermitian_eig(rho)?;
    let sqrt_rho = eig.reconstruct_with(|x| x.max(0.0).sqrt());
    let mut r = sqrt_rho.matmul(&flipped).matmul(&sqrt_rho);
    // remove rounding asymmetry before the Hermitian check
    r = DenseMatrix::from_fn(4, |i, j| (r[(i, j)] + r[(j, i)].conj()) * 0.5);
    let values = hermitian_eig(&r)?.values;
    if values[0] < -1e-9 {
        return Err(Error::InvalidState(format!(
            "spin-flip product has eigenvalue {:e}",
            values[0]
        )));
    }
    let mut lambdas: Vec<f64> = values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok(ConcurrenceValue::from_raw(
        lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3],
    ))
}

/// Spin-1/2 cluster prepared for repeated pair concurrence evaluations.
#[derive(Debug, Clone)]
pub struct PairConcurrence {
    ensemble: ThermalEnsemble,
    site_dims: Vec<usize>,
}

impl PairConcurrence {
    pub fn new(cluster: &ClusterSpec) -> Result<Self> {
        if cluster.spin().twice() != 1 {
            return Err(Error::InvalidParameter(
                "concurrence is only defined here for spin-1/2 clusters".into(),
            ));
        }
        let h = build_hamiltonian(cluster)?;
        Ok(Self {
            ensemble: ThermalEnsemble::new(&h)?,
            site_dims: cluster.site_dims(),
        })
    }

    pub fn at(&self, temperature: f64, k: usize, l: usize) -> Result<ConcurrenceValue> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature {temperature} must be > 0"
            )));
        }
        let ts = self.ensemble.state(1.0 / temperature)?;
        concurrence(&pair_reduced_state(&ts, &self.site_dims, k, l)?)
    }
}

/// C_kl on a strictly increasing temperature grid.
pub fn concurrence_vs_temperature(
    cluster: &ClusterSpec,
    pair: (usize, usize),
    t_grid: &[f64],
) -> Result<Vec<(f64, ConcurrenceValue)>> {
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "temperature grid must be increasing".into(),
        ));
    }
    let pc = PairConcurrence::new(cluster)?;
    t_grid
        .iter()
        .map(|&t| Ok((t, pc.at(t, pair.0, pair.1)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_model::SpinMagnitude;

    fn state(v: &[f64]) -> TwoQubitState {
        let ket: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        TwoQubitState::new(DenseMatrix::projector(&ket)).unwrap()
    }

    #[test]
    fn singlet_and_product() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = concurrence(&state(&[0.0, h, -h, 0.0])).unwrap();
        assert!((c.c - 1.0).abs() < 1e-12);
        let c = concurrence(&state(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(c.c.abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_is_separable() {
        let c =
            concurrence(&TwoQubitState::new(DenseMatrix::identity(4).scale_real(0.25)).unwrap())
                .unwrap();
        assert_eq!(c.c, 0.0);
        assert!((c.raw + 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_states() {
        assert!(TwoQubitState::new(DenseMatrix::identity(4)).is_err());
        assert!(TwoQubitState::new(DenseMatrix::diagonal(&[1.5, -0.5, 0.0, 0.0])).is_err());
        assert!(TwoQubitState::new(DenseMatrix::identity(2).scale_real(0.5)).is_err());
    }

    #[test]
    fn dimer_ground_state_pair() {
        let c = ClusterSpec::dimer(SpinMagnitude::HALF, 1.0);
        let pc = PairConcurrence::new(&c).unwrap();
        assert!((pc.at(1e-3, 0, 1).unwrap().c - 1.0).abs() < 1e-9);
        assert_eq!(pc.at(1e-3, 0, 1).unwrap(), pc.at(1e-3, 1, 0).unwrap());
    }

    #[test]
    fn pair_checks() {
        let pc = PairConcurrence::new(&ClusterSpec::dimer(SpinMagnitude::HALF, 1.0)).unwrap();
        assert!(pc.at(1.0, 0, 0).is_err());
        assert!(pc.at(1.0, 0, 2).is_err());
        assert!(pc.at(0.0, 0, 1).is_err());
        assert!(PairConcurrence::new(&ClusterSpec::dimer(SpinMagnitude::ONE, 1.0)).is_err());
    }

    #[test]
    fn tetramer_hot_limit() {
        let c = ClusterSpec::linear_tetramer(SpinMagnitude::HALF, 0.4, 92.7).unwrap();
        let pc = PairConcurrence::new(&c).unwrap();
        let ts = pc.ensemble.state(1e-12).unwrap();
        let r = pair_reduced_state(&ts, &pc.site_dims, 0, 1).unwrap();
        assert!(
            r.rho()
                .max_abs_diff(&DenseMatrix::identity(4).scale_real(0.25))
                < 1e-10
        );
    }

    #[test]
    fn tetramer_fig1_points() {
        let c = ClusterSpec::linear_tetramer(SpinMagnitude::HALF, 0.4, 92.7).unwrap();
        let rows = concurrence_vs_temperature(&c, (0, 1), &[1.0, 500.0]).unwrap();
        assert!(rows[0].1.c > 0.5);
        assert_eq!(rows[1].1.c, 0.0);
        assert!(rows[1].1.raw < 0.0);
        assert!(concurrence_vs_temperature(&c, (0, 1), &[2.0, 1.0]).is_err());
    }
}

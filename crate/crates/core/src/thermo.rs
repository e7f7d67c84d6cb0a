//! Thermal averages over spectra and density matrices.
//!
//! k_B = 1: β = 1/T with T in the same unit as the energies. All Boltzmann
//! weights are taken relative to the ground energy so large β·E cannot
//! overflow.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, DenseMatrix, EigenDecomposition};
use crate::spectra::Spectrum;
use crate::spin_model::{
    aniso_dimer_from_ops, AnisoDimerParams, Axis, SiteOperators, SpinMagnitude,
};

/// Strictly positive temperature.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl Temperature {
    pub fn new(kelvin: f64) -> Result<Self> {
        if !(kelvin.is_finite() && kelvin > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature {kelvin} must be > 0"
            )));
        }
        Ok(Self(kelvin))
    }

    pub fn kelvin(self) -> f64 {
        self.0
    }

    pub fn beta(self) -> f64 {
        1.0 / self.0
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta = {beta} must be > 0"
        )));
    }
    Ok(())
}

/// Shifted weights g·e^{-β(E - E_g)} and their sum.
fn shifted_weights(sp: &Spectrum, beta: f64) -> Result<(Vec<f64>, f64)> {
    check_beta(beta)?;
    let eg = sp.ground_energy();
    let w: Vec<f64> = sp
        .levels()
        .iter()
        .map(|l| l.degeneracy as f64 * (-beta * (l.energy - eg)).exp())
        .collect();
    let z = w.iter().sum();
    Ok((w, z))
}

/// Z = Σ g·e^{-βE}. May overflow to +inf when β|E_g| is large; use
/// [`log_partition_function`] there.
pub fn partition_function(sp: &Spectrum, beta: f64) -> Result<f64> {
    Ok(log_partition_function(sp, beta)?.exp())
}

pub fn log_partition_function(sp: &Spectrum, beta: f64) -> Result<f64> {
    let (_, zs) = shifted_weights(sp, beta)?;
    Ok(zs.ln() - beta * sp.ground_energy())
}

/// U = −∂ ln Z/∂β.
pub fn internal_energy(sp: &Spectrum, beta: f64) -> Result<f64> {
    let (w, z) = shifted_weights(sp, beta)?;
    Ok(w.iter()
        .zip(sp.levels())
        .map(|(wi, l)| wi * l.energy)
        .sum::<f64>()
        / z)
}

/// ⟨(S^tot)²⟩ from total-spin labels.
pub fn thermal_total_spin_squared(sp: &Spectrum, beta: f64) -> Result<f64> {
    if !sp.has_spin_labels() {
        return Err(Error::MissingSpinLabels);
    }
    let (w, z) = shifted_weights(sp, beta)?;
    let acc: f64 = w
        .iter()
        .zip(sp.levels())
        .map(|(wi, l)| {
            let s = l.s_tot().expect("checked above");
            wi * s * (s + 1.0)
        })
        .sum();
    Ok(acc / z)
}

/// Per-component zero-field susceptibility of an isotropic cluster,
/// χ = β⟨(S^tot)²⟩/3.
pub fn isotropic_zero_field_susceptibility(sp: &Spectrum, beta: f64) -> Result<f64> {
    Ok(beta * thermal_total_spin_squared(sp, beta)? / 3.0)
}

/// Eigendecomposition of a Hamiltonian, reusable across temperatures.
#[derive(Debug, Clone)]
pub struct ThermalEnsemble {
    eig: EigenDecomposition,
}

impl ThermalEnsemble {
    pub fn new(h: &DenseMatrix) -> Result<Self> {
        Ok(Self {
            eig: hermitian_eig(h)?,
        })
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eig
    }

    pub fn ground_energy(&self) -> f64 {
        self.eig.values[0]
    }

    /// ρ = V·diag(e^{−β(λ−λ_min)})·V† / Z'.
    pub fn state(&self, beta: f64) -> Result<ThermalState> {
        check_beta(beta)?;
        let e0 = self.ground_energy();
        let z: f64 = self
            .eig
            .values
            .iter()
            .map(|&e| (-beta * (e - e0)).exp())
            .sum();
        let rho = self.eig.reconstruct_with(|e| (-beta * (e - e0)).exp() / z);
        Ok(ThermalState { rho, beta })
    }

    pub fn internal_energy(&self, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        let e0 = self.ground_energy();
        let (mut num, mut z) = (0.0, 0.0);
        for &e in &self.eig.values {
            let w = (-beta * (e - e0)).exp();
            num += w * e;
            z += w;
        }
        Ok(num / z)
    }
}

/// Gibbs state at inverse temperature `beta`.
#[derive(Debug, Clone)]
pub struct ThermalState {
    rho: DenseMatrix,
    beta: f64,
}

impl ThermalState {
    pub fn rho(&self) -> &DenseMatrix {
        &self.rho
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    /// Re Tr(ρ A); exact for Hermitian A.
    pub fn expectation(&self, op: &DenseMatrix) -> f64 {
        self.rho.trace_product(op).re
    }
}

pub fn thermal_density_matrix(h: &DenseMatrix, beta: f64) -> Result<ThermalState> {
    ThermalEnsemble::new(h)?.state(beta)
}

/// ⟨M_α²⟩ − ⟨M_α⟩² for the total spin component along `axis`.
pub fn magnetization_variance(ts: &ThermalState, axis: Axis, ops: &SiteOperators) -> f64 {
    let m = ops.total(axis);
    let mean = ts.expectation(&m);
    ts.expectation(&m.matmul(&m)) - mean * mean
}

/// χ_α = β(⟨M_α²⟩ − ⟨M_α⟩²).
pub fn fluctuation_susceptibility(ts: &ThermalState, axis: Axis, ops: &SiteOperators) -> f64 {
    ts.beta * magnetization_variance(ts, axis, ops)
}

/// M = −⟨Σ_i S_i^z⟩. The field enters as +B·M_z, so this is positive for
/// B > 0 and the plateaus ascend with the field.
pub fn magnetization_z(ts: &ThermalState, ops: &SiteOperators) -> f64 {
    -ts.expectation(&ops.total(Axis::Z))
}

/// Relative field step of the centered difference in [`derivative_susceptibility_z`].
pub const FIELD_STEP: f64 = 1e-5;

/// ∂M/∂B for the anisotropic dimer by a centered difference with step
/// `FIELD_STEP·J`.
pub fn derivative_susceptibility_z(p: &AnisoDimerParams, beta: f64) -> Result<f64> {
    let model = AnisoDimerModel::new()?;
    let h = FIELD_STEP * p.j.abs();
    let m_plus = model.magnetization(&p.with_field(p.b + h), beta)?;
    let m_minus = model.magnetization(&p.with_field(p.b - h), beta)?;
    Ok((m_plus - m_minus) / (2.0 * h))
}

/// Magnetization–susceptibility complementarity pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplementarityPoint {
    /// ⟨M⟩²/(N S)²
    pub p: f64,
    /// 1 − T·χ̄/(N S)
    pub q: f64,
    pub b_over_j: f64,
    pub beta_j: f64,
    /// −⟨M_z⟩
    pub magnetization: f64,
}

impl ComplementarityPoint {
    pub fn sum(&self) -> f64 {
        self.p + self.q
    }
}

/// Complementarity pair of a thermal state of a uniform-spin cluster.
/// `b_over_j` and `beta_j` are carried through for labeling only.
pub fn complementarity_pq(
    ts: &ThermalState,
    ops: &SiteOperators,
    b_over_j: f64,
    beta_j: f64,
) -> ComplementarityPoint {
    let ns = ops.n_sites() as f64 * ops.spin.value();
    let mut m_sq = 0.0;
    let mut var_sum = 0.0;
    for axis in Axis::ALL {
        let m = ops.total(axis);
        let mean = ts.expectation(&m);
        m_sq += mean * mean;
        var_sum += ts.expectation(&m.matmul(&m)) - mean * mean;
    }
    ComplementarityPoint {
        p: m_sq / (ns * ns),
        // T·χ̄ = Σ_α Var(M_α)
        q: 1.0 - var_sum / ns,
        b_over_j,
        beta_j,
        magnetization: -ts.expectation(&ops.total(Axis::Z)),
    }
}

/// Cached operators for the anisotropic spin-1 dimer.
#[derive(Debug, Clone)]
pub struct AnisoDimerModel {
    ops: SiteOperators,
}

impl AnisoDimerModel {
    pub fn new() -> Result<Self> {
        Ok(Self {
            ops: SiteOperators::new(SpinMagnitude::ONE, 2)?,
        })
    }

    pub fn ops(&self) -> &SiteOperators {
        &self.ops
    }

    pub fn hamiltonian(&self, p: &AnisoDimerParams) -> DenseMatrix {
        aniso_dimer_from_ops(p, &self.ops)
    }

    pub fn state(&self, p: &AnisoDimerParams, beta: f64) -> Result<ThermalState> {
        thermal_density_matrix(&self.hamiltonian(p), beta)
    }

    pub fn magnetization(&self, p: &AnisoDimerParams, beta: f64) -> Result<f64> {
        Ok(magnetization_z(&self.state(p, beta)?, &self.ops))
    }

    /// (P, Q) at field `p.b` and inverse temperature `beta_j / J`.
    pub fn point(&self, p: &AnisoDimerParams, beta_j: f64) -> Result<ComplementarityPoint> {
        if p.j <= 0.0 {
            return Err(Error::InvalidParameter(
                "J must be > 0 for the dimer scan".into(),
            ));
        }
        let ts = self.state(p, beta_j / p.j)?;
        Ok(complementarity_pq(&ts, &self.ops, p.b / p.j, beta_j))
    }

    /// Evaluates [`Self::point`] on each field in `fields_over_j` (units of J).
    pub fn scan(
        &self,
        p: &AnisoDimerParams,
        beta_j: f64,
        fields_over_j: &[f64],
    ) -> Result<Vec<ComplementarityPoint>> {
        fields_over_j
            .iter()
            .map(|&b| self.point(&p.with_field(b * p.j), beta_j))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{all_to_all_spectrum, tetramer_spectrum};
    use crate::spin_model::{build_aniso_dimer, build_hamiltonian, ClusterSpec};

    fn dimer_half() -> Spectrum {
        all_to_all_spectrum(SpinMagnitude::HALF, 2, 1.0).unwrap()
    }

    #[test]
    fn temperature_validation() {
        assert!(Temperature::new(0.0).is_err());
        assert!(Temperature::new(-3.0).is_err());
        assert!(Temperature::new(f64::NAN).is_err());
        assert_eq!(Temperature::new(4.0).unwrap().beta(), 0.25);
        assert!(partition_function(&dimer_half(), 0.0).is_err());
    }

    #[test]
    fn dimer_partition_function_closed_form() {
        for beta in [0.1, 1.0, 3.7] {
            let z = partition_function(&dimer_half(), beta).unwrap();
            let expected = (0.75 * beta).exp() + 3.0 * (-0.25 * beta).exp();
            assert!((z - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn partition_function_limits() {
        let sp = tetramer_spectrum(0.4, 1.0).unwrap();
        assert!((partition_function(&sp, 1e-12).unwrap() - 16.0).abs() < 1e-9);
        // β → ∞: Z e^{βE_g} → ground degeneracy
        let beta = 800.0;
        let shifted =
            (log_partition_function(&sp, beta).unwrap() + beta * sp.ground_energy()).exp();
        assert!((shifted - 1.0).abs() < 1e-12);
        let tet = all_to_all_spectrum(SpinMagnitude::HALF, 4, 1.0).unwrap();
        let shifted =
            (log_partition_function(&tet, beta).unwrap() + beta * tet.ground_energy()).exp();
        assert!((shifted - 2.0).abs() < 1e-12);
    }

    #[test]
    fn internal_energy_limits() {
        let sp = tetramer_spectrum(0.4, 1.0).unwrap();
        assert!((internal_energy(&sp, 1e3).unwrap() - sp.ground_energy()).abs() < 1e-12);
        assert!(internal_energy(&sp, 1e-12).unwrap().abs() < 1e-10);
        let u = internal_energy(&dimer_half(), 1.0).unwrap();
        let (a, b) = (0.75f64.exp(), (-0.25f64).exp());
        let expected = (-0.75 * a + 0.75 * b) / (a + 3.0 * b);
        assert!((u - expected).abs() < 1e-14);
    }

    #[test]
    fn susceptibility_limits() {
        assert!(isotropic_zero_field_susceptibility(&dimer_half(), 200.0).unwrap() < 1e-60);
        // Curie: χT → N S(S+1)/3
        for (s, n) in [(SpinMagnitude::HALF, 4), (SpinMagnitude::ONE, 3)] {
            let sp = all_to_all_spectrum(s, n, 1.0).unwrap();
            let beta = 1e-7;
            let chi_t = isotropic_zero_field_susceptibility(&sp, beta).unwrap() / beta;
            assert!((chi_t - n as f64 * s.casimir() / 3.0).abs() < 1e-5);
        }
        let aniso =
            crate::spectra::aniso_dimer_spectrum(&AnisoDimerParams::new(1.0, 1.0, 0.0, 0.0))
                .unwrap();
        assert!(matches!(
            isotropic_zero_field_susceptibility(&aniso, 1.0),
            Err(Error::MissingSpinLabels)
        ));
    }

    #[test]
    fn density_matrix_limits() {
        let h = build_hamiltonian(&ClusterSpec::dimer(SpinMagnitude::HALF, 1.0)).unwrap();
        let hot = thermal_density_matrix(&h, 1e-12).unwrap();
        assert!(
            hot.rho()
                .max_abs_diff(&DenseMatrix::identity(4).scale_real(0.25))
                < 1e-10
        );
        let cold = thermal_density_matrix(&h, 500.0).unwrap();
        // singlet (|↑↓⟩ − |↓↑⟩)/√2 in the basis ↑↑, ↑↓, ↓↑, ↓↓
        let mut singlet = DenseMatrix::zeros(4);
        singlet[(1, 1)] = 0.5.into();
        singlet[(2, 2)] = 0.5.into();
        singlet[(1, 2)] = (-0.5).into();
        singlet[(2, 1)] = (-0.5).into();
        assert!(cold.rho().max_abs_diff(&singlet) < 1e-12);
    }

    #[test]
    fn density_matrix_path_matches_spectrum_path() {
        let j = 92.7;
        let c = ClusterSpec::linear_tetramer(SpinMagnitude::HALF, 0.4, j).unwrap();
        let h = build_hamiltonian(&c).unwrap();
        let ts = thermal_density_matrix(&h, 1.0 / 92.7).unwrap();
        let u_rho = ts.expectation(&h);
        let u_sp = internal_energy(&tetramer_spectrum(0.4, j).unwrap(), 1.0 / 92.7).unwrap();
        assert!((u_rho - u_sp).abs() < 1e-9 * u_sp.abs());
        assert!((ts.rho().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isotropic_fluctuations_match_spin_labels() {
        let c = ClusterSpec::dimer(SpinMagnitude::HALF, 1.0);
        let ops = SiteOperators::new(c.spin(), 2).unwrap();
        let ts = thermal_density_matrix(&build_hamiltonian(&c).unwrap(), 0.8).unwrap();
        let chi: Vec<f64> = Axis::ALL
            .iter()
            .map(|&a| fluctuation_susceptibility(&ts, a, &ops))
            .collect();
        let expected = isotropic_zero_field_susceptibility(&dimer_half(), 0.8).unwrap();
        for x in chi {
            assert!((x - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn magnetization_behaviour() {
        let model = AnisoDimerModel::new().unwrap();
        let zero = AnisoDimerParams::new(1.0, 1.0, 0.0, 0.0);
        for beta in [0.3, 3.0, 20.0] {
            assert!(model.magnetization(&zero, beta).unwrap().abs() < 1e-12);
        }
        let sat = model.magnetization(&zero.with_field(4.0), 20.0).unwrap();
        assert!((sat - 2.0).abs() < 1e-6);
        let mid = model.magnetization(&zero.with_field(1.5), 20.0).unwrap();
        assert!((mid - 1.0).abs() < 1e-3);
    }

    #[test]
    fn derivative_and_fluctuation_susceptibility_agree() {
        let model = AnisoDimerModel::new().unwrap();
        for (p, beta) in [
            (AnisoDimerParams::new(1.0, 1.0, 0.0, 0.7), 3.0),
            (AnisoDimerParams::new(1.0, 0.8, -0.4, 1.3), 1.0),
            (AnisoDimerParams::new(1.0, 1.0, 1.0, 2.4), 5.0),
        ] {
            let ts = thermal_density_matrix(&build_aniso_dimer(&p), beta).unwrap();
            let fluct = fluctuation_susceptibility(&ts, Axis::Z, model.ops());
            let deriv = derivative_susceptibility_z(&p, beta).unwrap();
            assert!(
                (fluct - deriv).abs() <= 1e-6 * fluct.abs(),
                "{fluct} vs {deriv}"
            );
        }
    }

    #[test]
    fn polarized_state_freezes_chi_z() {
        let p = AnisoDimerParams::new(1.0, 1.0, 0.0, 10.0);
        let model = AnisoDimerModel::new().unwrap();
        let ts = model.state(&p, 30.0).unwrap();
        assert!(fluctuation_susceptibility(&ts, Axis::Z, model.ops()) < 1e-60);
    }

    #[test]
    fn complementarity_limits() {
        let model = AnisoDimerModel::new().unwrap();
        let base = AnisoDimerParams::new(1.0, 1.0, 0.0, 0.0);
        let singlet = model.point(&base, 20.0).unwrap();
        assert!(singlet.q > 0.0);
        assert!(singlet.p.abs() < 1e-12);
        let sat = model.point(&base.with_field(5.0), 20.0).unwrap();
        assert!((sat.p - 1.0).abs() < 1e-9);
        assert!(sat.q <= 1e-9);
        assert!(sat.sum() <= 1.0 + 1e-9);
    }
}

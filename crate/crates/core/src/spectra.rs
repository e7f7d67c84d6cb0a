//! Closed-form spectra, total-spin multiplicities and separable energies.
//!
//! Energies carry whatever unit `j` carries. Passing `j = J/k_B` in Kelvin
//! gives spectra directly usable by [`crate::thermo`].

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, DenseMatrix, EigenDecomposition, C64};
use crate::spin_model::{
    build_hamiltonian, AnisoDimerParams, Axis, ClusterKind, ClusterSpec, SiteOperators,
    SpinMagnitude,
};

/// One energy level with its total degeneracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelRecord {
    pub energy: f64,
    pub degeneracy: usize,
    /// 2·S^tot when the level is a total-spin multiplet.
    pub twice_s_tot: Option<u32>,
}

impl LevelRecord {
    pub fn new(energy: f64, degeneracy: usize, twice_s_tot: Option<u32>) -> Self {
        Self {
            energy,
            degeneracy,
            twice_s_tot,
        }
    }

    pub fn s_tot(&self) -> Option<f64> {
        self.twice_s_tot.map(|t| f64::from(t) / 2.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    levels: Vec<LevelRecord>,
    dim: usize,
}

impl Spectrum {
    /// Sorts the levels ascending in energy. Zero-degeneracy records are dropped.
    pub fn new(mut levels: Vec<LevelRecord>) -> Result<Self> {
        levels.retain(|l| l.degeneracy > 0);
        if levels.is_empty() {
            return Err(Error::EmptySpectrum);
        }
        if levels.iter().any(|l| !l.energy.is_finite()) {
            return Err(Error::InvalidParameter("non-finite energy level".into()));
        }
        levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        let dim = levels.iter().map(|l| l.degeneracy).sum();
        Ok(Self { levels, dim })
    }

    /// Groups ascending eigenvalues into levels; values within
    /// `rel_tol·max(1, |λ|)` of the running group are merged.
    pub fn from_eigenvalues(values: &[f64], rel_tol: f64) -> Result<Self> {
        let groups = group_degenerate(values, rel_tol);
        let levels = groups
            .iter()
            .map(|g| {
                let mean = g.clone().map(|k| values[k]).sum::<f64>() / g.len() as f64;
                LevelRecord::new(mean, g.len(), None)
            })
            .collect();
        Self::new(levels)
    }

    pub fn levels(&self) -> &[LevelRecord] {
        &self.levels
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ground_energy(&self) -> f64 {
        self.levels[0].energy
    }

    pub fn max_energy(&self) -> f64 {
        self.levels[self.levels.len() - 1].energy
    }

    /// E_max - E_min
    pub fn energy_range(&self) -> f64 {
        self.max_energy() - self.ground_energy()
    }

    pub fn has_spin_labels(&self) -> bool {
        self.levels.iter().all(|l| l.twice_s_tot.is_some())
    }

    /// Every eigenvalue repeated by its degeneracy, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        self.levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.energy, l.degeneracy))
            .collect()
    }
}

fn group_degenerate(values: &[f64], rel_tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        let split = k == values.len() || {
            let scale = values[k].abs().max(1.0);
            (values[k] - values[k - 1]).abs() > rel_tol * scale
        };
        if split {
            groups.push(start..k);
            start = k;
        }
    }
    groups
}

/// Numerically diagonalized spectrum of an isotropic cluster, with each
/// level split and labeled by total spin.
pub fn numeric_spectrum(c: &ClusterSpec) -> Result<Spectrum> {
    let h = build_hamiltonian(c)?;
    let eig = hermitian_eig(&h)?;
    let ops = SiteOperators::new(c.spin(), c.n_sites())?;
    label_by_total_spin(&eig, &ops)
}

fn total_spin_squared(ops: &SiteOperators) -> DenseMatrix {
    let mut s2 = DenseMatrix::zeros(ops.dim());
    for axis in Axis::ALL {
        let m = ops.total(axis);
        s2 = &s2 + &m.matmul(&m);
    }
    s2
}

/// Within each degenerate eigenspace, diagonalizes S_tot² to resolve
/// accidental degeneracies between multiplets.
pub fn label_by_total_spin(eig: &EigenDecomposition, ops: &SiteOperators) -> Result<Spectrum> {
    let s2 = total_spin_squared(ops);
    let mut levels = Vec::new();
    for g in group_degenerate(&eig.values, 1e-9) {
        let vecs: Vec<Vec<C64>> = g.clone().map(|k| eig.vector(k)).collect();
        let s2_vecs: Vec<Vec<C64>> = vecs.iter().map(|v| s2.mul_vec(v)).collect();
        let block = DenseMatrix::from_fn(vecs.len(), |a, b| {
            vecs[a]
                .iter()
                .zip(&s2_vecs[b])
                .map(|(x, y)| x.conj() * y)
                .sum()
        });
        let energy = g.clone().map(|k| eig.values[k]).sum::<f64>() / g.len() as f64;
        let inner = hermitian_eig(&block)?;
        for run in group_degenerate(&inner.values, 1e-6) {
            let casimir = inner.values[run.start];
            // S(S+1) = x  =>  2S = sqrt(4x + 1) - 1
            let twice = ((4.0 * casimir + 1.0).max(0.0).sqrt() - 1.0).round();
            levels.push(LevelRecord::new(energy, run.len(), Some(twice as u32)));
        }
    }
    Spectrum::new(levels)
}

fn binomial(n: i64, r: i64) -> Result<i128> {
    if r < 0 || n < r {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: i128 = 1;
    for i in 1..=r {
        acc = acc
            .checked_mul(i128::from(n - r + i))
            .ok_or(Error::Overflow)?
            / i128::from(i);
    }
    Ok(acc)
}

/// Number of independent total-spin-S^tot multiplets formed by `n` spins of
/// magnitude `s` (alternating binomial sum). Returns 0 for unreachable S^tot.
pub fn multiplicity(s: SpinMagnitude, n: usize, twice_s_tot: u32) -> Result<u64> {
    let ts = i64::from(s.twice());
    let tt = i64::from(twice_s_tot);
    let n_i = n as i64;
    if n == 0 || tt > n_i * ts || (n_i * ts - tt) % 2 != 0 {
        return Ok(0);
    }
    if n == 1 {
        return Ok(u64::from(tt == ts));
    }
    // upper(k) = N(S+1) - S^tot - (2S+1)k - 2, all in doubled units then halved
    let upper_twice0 = n_i * (ts + 2) - tt - 4;
    let lower = n_i - 2;
    let mut total: i128 = 0;
    for k in 0..=n_i {
        let upper_twice = upper_twice0 - 2 * (ts + 1) * k;
        debug_assert!(upper_twice % 2 == 0);
        let upper = upper_twice / 2;
        if upper < lower {
            break;
        }
        let term = binomial(n_i, k)?
            .checked_mul(binomial(upper, lower)?)
            .ok_or(Error::Overflow)?;
        total = if k % 2 == 0 {
            total.checked_add(term)
        } else {
            total.checked_sub(term)
        }
        .ok_or(Error::Overflow)?;
    }
    u64::try_from(total).map_err(|_| Error::Overflow)
}

/// `E(S^tot) = ½[S^tot(S^tot+1) − N S(S+1)]·j` with degeneracy (2S^tot+1)·P.
pub fn all_to_all_spectrum(s: SpinMagnitude, n: usize, j: f64) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "cluster needs at least one site".into(),
        ));
    }
    let max_twice = n as u32 * s.twice();
    let mut levels = Vec::new();
    for tt in (max_twice % 2..=max_twice).step_by(2) {
        let p = multiplicity(s, n, tt)?;
        if p == 0 {
            continue;
        }
        let st = f64::from(tt) / 2.0;
        let e = 0.5 * (st * (st + 1.0) - n as f64 * s.casimir()) * j;
        levels.push(LevelRecord::new(
            e,
            (tt as usize + 1) * p as usize,
            Some(tt),
        ));
    }
    Spectrum::new(levels)
}

/// Below this α the closed forms lose precision to 1/α terms.
pub const TETRAMER_MIN_ALPHA: f64 = 1e-6;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= TETRAMER_MIN_ALPHA) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha}: closed-form tetramer levels need alpha >= {TETRAMER_MIN_ALPHA}; \
             use numeric_spectrum for this value"
        )));
    }
    Ok(())
}

/// The six closed-form levels E₁..E₆ of the open S=1/2 chain J, αJ, J, in that order.
pub fn tetramer_level_energies(alpha: f64, j: f64) -> [f64; 6] {
    let r13 = (1.0 + alpha * alpha).sqrt();
    let r0 = (1.0 - alpha / 2.0 + alpha * alpha / 4.0).sqrt();
    [
        (0.5 + alpha / 4.0) * j,
        (-0.5 + alpha / 4.0) * j,
        (-alpha / 4.0 + 0.5 * r13) * j,
        (-alpha / 4.0 - 0.5 * r13) * j,
        (-(0.5 + alpha / 4.0) + r0) * j,
        (-(0.5 + alpha / 4.0) - r0) * j,
    ]
}

const TETRAMER_DEGENERACY: [usize; 6] = [5, 3, 3, 3, 1, 1];
const TETRAMER_TWICE_S: [u32; 6] = [4, 2, 2, 2, 0, 0];

pub fn tetramer_spectrum(alpha: f64, j: f64) -> Result<Spectrum> {
    check_alpha(alpha)?;
    let levels = tetramer_level_energies(alpha, j)
        .iter()
        .zip(TETRAMER_DEGENERACY.iter().zip(TETRAMER_TWICE_S))
        .map(|(&e, (&d, t))| LevelRecord::new(e, d, Some(t)))
        .collect();
    Spectrum::new(levels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSource {
    /// Closed-form vector that passed the residual and orthogonality checks.
    Analytic,
    /// Closed form failed verification; replaced by a numeric eigenvector.
    Numeric,
}

#[derive(Debug, Clone)]
pub struct TetramerState {
    /// Level index 1..=6.
    pub level: usize,
    pub twice_sz: i32,
    pub energy: f64,
    pub vector: Vec<C64>,
    pub source: StateSource,
    /// Norm of the vector with the printed prefactor; `None` when not printed.
    pub printed_norm: Option<f64>,
}

/// Residual bound for accepting a closed-form eigenvector.
pub const ANALYTIC_RESIDUAL_TOL: f64 = 1e-8;

fn tetramer_ket(spins: &str) -> usize {
    spins
        .bytes()
        .fold(0, |acc, c| (acc << 1) | usize::from(c == b'd'))
}

fn twice_sz_of(index: usize) -> i32 {
    (0..4)
        .map(|k| if index >> k & 1 == 1 { -1 } else { 1 })
        .sum()
}

/// (level, 2S^z, printed prefactor, terms)
type TableRow = (usize, i32, Option<f64>, Vec<(f64, &'static str)>);

/// Closed-form eigenvectors as tabulated, one per (level, S^z) label.
/// The prefactor is `None` where the table leaves normalization implicit.
fn tetramer_table(alpha: f64) -> Vec<TableRow> {
    let r = f64::sqrt;
    let q = r(0.25 - 0.5 / alpha + 1.0 / (alpha * alpha));
    let (b1, b2) = (-2.0 / alpha + 2.0 * q, -2.0 / alpha - 2.0 * q);
    let (c1, c2) = (-1.0 + 2.0 / alpha - 2.0 * q, -1.0 + 2.0 / alpha + 2.0 * q);
    let g3 = alpha - r(1.0 + alpha * alpha);
    let g4 = alpha + r(1.0 + alpha * alpha);
    let h3 = 1.0 / alpha - r(1.0 + 1.0 / (alpha * alpha));
    let h4 = 1.0 / alpha + r(1.0 + 1.0 / (alpha * alpha));
    let s6 = 1.0 / r(6.0);
    vec![
        (1, 4, Some(1.0), vec![(1.0, "uuuu")]),
        (
            1,
            2,
            Some(0.5),
            vec![(1.0, "duuu"), (1.0, "uduu"), (1.0, "uudu"), (1.0, "uuud")],
        ),
        (
            1,
            0,
            Some(s6),
            vec![
                (1.0, "uudd"),
                (1.0, "udud"),
                (1.0, "uddu"),
                (1.0, "duud"),
                (1.0, "dudu"),
                (1.0, "dduu"),
            ],
        ),
        (
            1,
            -2,
            Some(0.5),
            vec![(1.0, "uddd"), (1.0, "dudd"), (1.0, "ddud"), (1.0, "dddu")],
        ),
        (1, -4, Some(1.0), vec![(1.0, "dddd")]),
        (
            2,
            2,
            Some(0.5),
            vec![(1.0, "duuu"), (-1.0, "uduu"), (-1.0, "uudu"), (1.0, "uuud")],
        ),
        // tabulated identical to the S^z = +1 state
        (
            2,
            -2,
            Some(0.5),
            vec![(1.0, "duuu"), (-1.0, "uduu"), (-1.0, "uudu"), (1.0, "uuud")],
        ),
        (2, 0, Some(s6), vec![(1.0, "uddu"), (-1.0, "duud")]),
        (
            3,
            2,
            None,
            vec![(1.0, "duuu"), (-1.0, "uuud"), (-g3, "uduu"), (g3, "uudu")],
        ),
        (
            3,
            -2,
            None,
            vec![(1.0, "uddd"), (-1.0, "dddu"), (-g3, "dudd"), (g3, "ddud")],
        ),
        (
            3,
            0,
            None,
            vec![(1.0, "uudd"), (-1.0, "dduu"), (-h3, "udud"), (h3, "dudu")],
        ),
        (
            4,
            2,
            None,
            vec![(1.0, "duuu"), (-1.0, "uuud"), (-g4, "uduu"), (g4, "uudu")],
        ),
        (
            4,
            -2,
            None,
            vec![(1.0, "uddd"), (-1.0, "dddu"), (-g4, "dudd"), (g4, "ddud")],
        ),
        (
            4,
            0,
            None,
            vec![(1.0, "uudd"), (-1.0, "dduu"), (-h4, "udud"), (h4, "dudu")],
        ),
        (
            5,
            0,
            None,
            vec![
                (1.0, "uudd"),
                (b1, "udud"),
                (c1, "uddu"),
                (c1, "duud"),
                (b1, "dudu"),
                (1.0, "dduu"),
            ],
        ),
        (
            6,
            0,
            None,
            vec![
                (1.0, "uudd"),
                (b2, "udud"),
                (c2, "uddu"),
                (c2, "duud"),
                (b2, "dudu"),
                (1.0, "dduu"),
            ],
        ),
    ]
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Orthonormal eigenbasis of the S=1/2 linear tetramer built from the closed
/// forms. Each tabulated state is normalized and kept only if
/// ‖Hψ − Eψ‖ ≤ [`ANALYTIC_RESIDUAL_TOL`], it lies in its labeled S^z sector and
/// it is orthogonal to the states already accepted; otherwise the slot is
/// filled from the numeric eigenspace of that level and sector.
pub fn tetramer_eigenstates(alpha: f64, j: f64) -> Result<Vec<TetramerState>> {
    check_alpha(alpha)?;
    let cluster = ClusterSpec::linear_tetramer(SpinMagnitude::HALF, alpha, j)?;
    let h = build_hamiltonian(&cluster)?;
    let energies = tetramer_level_energies(alpha, j);
    let eig = hermitian_eig(&h)?;
    let scale = j.abs().max(f64::MIN_POSITIVE);

    let mut states: Vec<TetramerState> = Vec::with_capacity(16);
    for (level, twice_sz, prefactor, terms) in tetramer_table(alpha) {
        let energy = energies[level - 1];
        let mut raw = vec![C64::new(0.0, 0.0); 16];
        for (coef, spins) in &terms {
            raw[tetramer_ket(spins)] += C64::new(*coef, 0.0);
        }
        let printed_norm = prefactor.map(|p| p * norm(&raw));
        let n = norm(&raw);
        let psi: Vec<C64> = raw.iter().map(|z| z / n).collect();

        let hpsi = h.mul_vec(&psi);
        let residual = norm(
            &hpsi
                .iter()
                .zip(&psi)
                .map(|(a, b)| a - b * energy)
                .collect::<Vec<_>>(),
        );
        let in_sector = psi
            .iter()
            .enumerate()
            .all(|(k, z)| z.norm() < 1e-12 || twice_sz_of(k) == twice_sz);
        let orthogonal = states.iter().all(|s| inner(&s.vector, &psi).norm() < 1e-8);

        let (vector, source) =
            if residual <= ANALYTIC_RESIDUAL_TOL * scale && in_sector && orthogonal {
                (psi, StateSource::Analytic)
            } else {
                let v = numeric_replacement(&eig, energy, twice_sz, &states, scale)?;
                (v, StateSource::Numeric)
            };
        states.push(TetramerState {
            level,
            twice_sz,
            energy,
            vector,
            source,
            printed_norm,
        });
    }
    Ok(states)
}

fn numeric_replacement(
    eig: &EigenDecomposition,
    energy: f64,
    twice_sz: i32,
    accepted: &[TetramerState],
    scale: f64,
) -> Result<Vec<C64>> {
    let level_vecs: Vec<Vec<C64>> = (0..eig.dim())
        .filter(|&k| (eig.values[k] - energy).abs() <= 1e-8 * scale)
        .map(|k| eig.vector(k))
        .collect();
    for basis in (0..16).filter(|&k| twice_sz_of(k) == twice_sz) {
        // P_level |basis⟩ stays in the S^z sector since [H, S^z] = 0
        let mut v = vec![C64::new(0.0, 0.0); 16];
        for u in &level_vecs {
            let c = u[basis].conj();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi += ui * c;
            }
        }
        for s in accepted {
            let c = inner(&s.vector, &v);
            for (vi, si) in v.iter_mut().zip(&s.vector) {
                *vi -= si * c;
            }
        }
        let n = norm(&v);
        if n > 1e-6 {
            return Ok(v.iter().map(|z| z / n).collect());
        }
    }
    Err(Error::InvalidState(format!(
        "no numeric eigenvector left at E = {energy} with 2Sz = {twice_sz}"
    )))
}

/// Labels of the nine anisotropic-dimer eigenvalues: (S^tot, S^z) of the
/// isotropic state each level continues from.
pub const ANISO_DIMER_LABELS: [(u32, i32); 9] = [
    (2, 2),
    (2, -2),
    (2, 1),
    (2, -1),
    (2, 0),
    (1, 1),
    (1, -1),
    (1, 0),
    (0, 0),
];

/// `R = sqrt((δJ/2 − d)² + 2J²)`
pub fn aniso_dimer_r(p: &AnisoDimerParams) -> f64 {
    let a = p.delta * p.j / 2.0 - p.d;
    (a * a + 2.0 * p.j * p.j).sqrt()
}

/// The nine closed-form eigenvalues in the order of [`ANISO_DIMER_LABELS`].
pub fn aniso_dimer_eigenvalues(p: &AnisoDimerParams) -> [f64; 9] {
    let AnisoDimerParams { j, delta, d, b } = *p;
    let r = aniso_dimer_r(p);
    [
        delta * j + 2.0 * d + 2.0 * b,
        delta * j + 2.0 * d - 2.0 * b,
        j + d + b,
        j + d - b,
        -delta * j / 2.0 + d + r,
        -j + d + b,
        -j + d - b,
        -delta * j + 2.0 * d,
        -delta * j / 2.0 + d - r,
    ]
}

/// Nine non-degenerate records (coincident values are kept as separate
/// records). No total-spin labels: S^tot is not conserved once δ ≠ 1 or d ≠ 0.
pub fn aniso_dimer_spectrum(p: &AnisoDimerParams) -> Result<Spectrum> {
    Spectrum::new(
        aniso_dimer_eigenvalues(p)
            .iter()
            .map(|&e| LevelRecord::new(e, 1, None))
            .collect(),
    )
}

/// Field at which λ_{0,0} and λ_{1,−1} cross (first magnetization step).
pub fn aniso_dimer_first_step(p: &AnisoDimerParams) -> f64 {
    -p.j + p.delta * p.j / 2.0 + aniso_dimer_r(p)
}

/// Field at which λ_{1,−1} and λ_{2,−2} cross (second magnetization step).
pub fn aniso_dimer_second_step(p: &AnisoDimerParams) -> f64 {
    p.delta * p.j + p.d + p.j
}

/// Minimum energy over product states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableEnergy {
    pub value: f64,
}

/// Closed-form minimum separable energy for the supported topologies:
/// all-to-all clusters of 2, 3 or 4 sites give −N S² J/2, the open tetramer
/// gives −(2 + α) S² J (Néel order minimizes each bond).
pub fn separable_energy(c: &ClusterSpec) -> Result<SeparableEnergy> {
    let s2 = c.spin().value().powi(2);
    let value = match c.kind() {
        ClusterKind::Dimer => -s2 * c.j(),
        ClusterKind::Trimer => -1.5 * s2 * c.j(),
        ClusterKind::Tetrahedron => -2.0 * s2 * c.j(),
        ClusterKind::LinearTetramer { alpha } => -(2.0 + alpha) * s2 * c.j(),
        ClusterKind::Custom if c.is_all_to_all() && (2..=4).contains(&c.n_sites()) => {
            -(c.n_sites() as f64) * s2 * c.j() / 2.0
        }
        ClusterKind::Custom => return Err(Error::UnsupportedCluster(
            "separable energy is only available for dimer, trimer, tetrahedron and linear tetramer"
                .into(),
        )),
    };
    Ok(SeparableEnergy { value })
}

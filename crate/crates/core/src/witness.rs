//! Witness temperatures: energy gap (T_E), susceptibility (T_C^χ) and pair
//! concurrence (T_C^kl), plus the α and S sweeps built from them.

use crate::entanglement::PairConcurrence;
use crate::error::{Error, Result};
use crate::spectra::{
    all_to_all_spectrum, numeric_spectrum, separable_energy, tetramer_spectrum, SeparableEnergy,
    Spectrum, TETRAMER_MIN_ALPHA,
};
use crate::spin_model::{ClusterKind, ClusterSpec, SpinMagnitude};
use crate::thermo::{internal_energy, thermal_total_spin_squared};

/// Default relative width at which bisection stops.
pub const ROOT_REL_TOL: f64 = 1e-8;
/// Hard ceiling for bracket expansion, in temperature units.
pub const T_CEILING: f64 = 1e6;
/// Grid points used to locate the last sign change of the concurrence.
pub const CONCURRENCE_SCAN_POINTS: usize = 400;

/// Temperatures where the target function takes opposite signs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidBracket { lo, hi });
        }
        Ok(Self { lo, hi })
    }
}

/// Bisection on a bracket with a sign change. Stops when the bracket width is
/// at most `rel_tol·|hi|` and returns its midpoint.
pub fn bisect(mut f: impl FnMut(f64) -> f64, b: Bracket, rel_tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (b.lo, b.hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum() && flo.is_finite() && fhi.is_finite()) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let lo_negative = flo < 0.0;
    // width halves each step; 2000 steps exhaust any f64 range
    for _ in 0..2000 {
        if hi - lo <= rel_tol * hi.abs().max(lo.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Widens `[lo, hi]` geometrically (halving `lo`, doubling `hi`) until `f`
/// changes sign, with `hi` capped at `t_max`.
pub fn find_bracket(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    t_max: f64,
) -> Result<Bracket> {
    let (mut lo, mut hi) = (lo, hi);
    let lo_floor = lo * 1e-9;
    let (mut flo, mut fhi) = (f(lo), f(hi));
    loop {
        if flo.signum() != fhi.signum() || flo == 0.0 || fhi == 0.0 {
            return Bracket::new(lo, hi);
        }
        let can_lower = lo / 2.0 >= lo_floor;
        let can_raise = hi * 2.0 <= t_max;
        if !can_lower && !can_raise {
            return Err(Error::InvalidBracket { lo, hi });
        }
        if can_raise {
            hi *= 2.0;
            fhi = f(hi);
        }
        if can_lower {
            lo /= 2.0;
            flo = f(lo);
        }
    }
}

fn seed_scale(sp: &Spectrum) -> f64 {
    let r = sp.energy_range();
    if r > 0.0 {
        r
    } else {
        1.0
    }
}

/// Temperature where U(T) = E_sep. Below it the thermal state is entangled.
pub fn entanglement_gap_temperature(sp: &Spectrum, e_sep: SeparableEnergy) -> Result<f64> {
    let gap = e_sep.value - sp.ground_energy();
    if gap <= 0.0 {
        return Err(Error::NoEntanglementGap { gap });
    }
    let f = |t: f64| internal_energy(sp, 1.0 / t).map_or(f64::NAN, |u| u - e_sep.value);
    let scale = seed_scale(sp);
    let t_max = T_CEILING.max(1e3 * scale);
    let b = find_bracket(f, 1e-3 * scale, 10.0 * scale, t_max)
        .map_err(|_| Error::NoEntanglementGap { gap })?;
    bisect(f, b, ROOT_REL_TOL)
}

/// Temperature where the isotropic susceptibility meets N·S/(3T); the
/// summed-susceptibility witness fires below it.
///
/// Solved as ⟨(S^tot)²⟩(T) = N·S, which is 3T·χ = N·S without the 1/T.
pub fn susceptibility_critical_temperature(
    sp: &Spectrum,
    n: usize,
    s: SpinMagnitude,
) -> Result<f64> {
    let target = n as f64 * s.value();
    let f = |t: f64| thermal_total_spin_squared(sp, 1.0 / t).map_or(f64::NAN, |x| x - target);
    if !sp.has_spin_labels() {
        return Err(Error::MissingSpinLabels);
    }
    let scale = seed_scale(sp);
    let t_max = T_CEILING.max(1e3 * scale);
    let b = find_bracket(f, 1e-3 * scale, 10.0 * scale, t_max)
        .map_err(|_| Error::NoWitnessDetection { t_max })?;
    bisect(f, b, ROOT_REL_TOL)
}

/// Largest temperature at which the pair's concurrence vanishes.
///
/// The unclamped concurrence is scanned on a log grid over
/// [1e-3·J, 10·J]; the grid is extended upward while the pair is still
/// entangled at the top. The last +/− sign change is then bisected.
pub fn concurrence_critical_temperature(
    cluster: &ClusterSpec,
    pair: (usize, usize),
) -> Result<f64> {
    let pc = PairConcurrence::new(cluster)?;
    concurrence_critical_temperature_with(&pc, cluster_scale(cluster), pair)
}

fn cluster_scale(cluster: &ClusterSpec) -> f64 {
    let w = cluster.edges().iter().map(|e| e.weight).fold(1.0, f64::max);
    let s = cluster.j().abs() * w;
    if s > 0.0 {
        s
    } else {
        1.0
    }
}

fn concurrence_critical_temperature_with(
    pc: &PairConcurrence,
    scale: f64,
    (k, l): (usize, usize),
) -> Result<f64> {
    let raw = |t: f64| pc.at(t, k, l).map(|c| c.raw);
    let lo = 1e-3 * scale;
    let mut hi = 10.0 * scale;
    while raw(hi)? > 0.0 {
        hi *= 2.0;
        if hi > T_CEILING.max(1e3 * scale) {
            return Err(Error::InvalidBracket { lo, hi });
        }
    }
    let n = CONCURRENCE_SCAN_POINTS;
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    let grid: Vec<f64> = (0..n).map(|i| lo * ratio.powi(i as i32)).collect();
    let mut last_entangled = None;
    for (i, &t) in grid.iter().enumerate() {
        if raw(t)? > 0.0 {
            last_entangled = Some(i);
        }
    }
    let i = last_entangled.ok_or(Error::NeverEntangled(k, l))?;
    let hi_t = if i + 1 < n { grid[i + 1] } else { hi };
    let mut err = None;
    let root = bisect(
        |t| match raw(t) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        },
        Bracket::new(grid[i], hi_t)?,
        ROOT_REL_TOL,
    );
    match err {
        Some(e) => Err(e),
        None => root,
    }
}

/// T_E / E_tot, the gap temperature in units of the spectral width.
pub fn scaled_gap_temperature(t_e: f64, sp: &Spectrum) -> f64 {
    t_e / sp.energy_range()
}

/// Witness temperatures of one cluster. `None` marks a witness that never
/// fires (no gap, no crossing, pair never entangled).
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub t_e: Option<f64>,
    pub t_e_scaled: Option<f64>,
    pub t_c_chi: Option<f64>,
    pub t_c_pairs: Vec<((usize, usize), Option<f64>)>,
    pub e_sep: f64,
    pub e_g: f64,
    pub e_tot: f64,
}

/// Spectrum of a cluster, using closed forms where they exist.
pub fn cluster_spectrum(c: &ClusterSpec) -> Result<Spectrum> {
    match c.kind() {
        ClusterKind::Dimer | ClusterKind::Trimer | ClusterKind::Tetrahedron => {
            all_to_all_spectrum(c.spin(), c.n_sites(), c.j())
        }
        ClusterKind::LinearTetramer { alpha }
            if c.spin() == SpinMagnitude::HALF && alpha >= TETRAMER_MIN_ALPHA =>
        {
            tetramer_spectrum(alpha, c.j())
        }
        _ => numeric_spectrum(c),
    }
}

fn optional(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(
            Error::NoEntanglementGap { .. }
            | Error::NoWitnessDetection { .. }
            | Error::NeverEntangled(..),
        ) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Evaluates every applicable witness. Pair concurrences are computed for
/// each coupled pair of a spin-1/2 cluster.
pub fn witness_report(c: &ClusterSpec) -> Result<WitnessReport> {
    let sp = cluster_spectrum(c)?;
    let e_sep = separable_energy(c)?;
    let t_e = optional(entanglement_gap_temperature(&sp, e_sep))?;
    let t_c_chi = optional(susceptibility_critical_temperature(
        &sp,
        c.n_sites(),
        c.spin(),
    ))?;
    let mut t_c_pairs = Vec::new();
    if c.spin() == SpinMagnitude::HALF {
        let pc = PairConcurrence::new(c)?;
        let scale = cluster_scale(c);
        for e in c.edges() {
            let t = optional(concurrence_critical_temperature_with(
                &pc,
                scale,
                (e.i, e.j),
            ))?;
            t_c_pairs.push(((e.i, e.j), t));
        }
    }
    Ok(WitnessReport {
        t_e,
        t_e_scaled: t_e.map(|t| scaled_gap_temperature(t, &sp)),
        t_c_chi,
        t_c_pairs,
        e_sep: e_sep.value,
        e_g: sp.ground_energy(),
        e_tot: sp.energy_range(),
    })
}

/// `n` evenly spaced points on [lo, hi]; a single point yields `[lo]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRow {
    pub alpha: f64,
    pub t_e: Option<f64>,
    pub t_c_chi: Option<f64>,
    pub t_c_12: Option<f64>,
    pub t_c_23: Option<f64>,
}

/// Location of the extrema of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridExtrema {
    pub argmin: usize,
    pub argmax: usize,
    pub len: usize,
}

impl GridExtrema {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut argmin = 0;
        let mut argmax = 0;
        for (i, &v) in values.iter().enumerate() {
            if v < values[argmin] {
                argmin = i;
            }
            if v > values[argmax] {
                argmax = i;
            }
        }
        Some(Self {
            argmin,
            argmax,
            len: values.len(),
        })
    }

    fn interior(&self, i: usize) -> bool {
        i > 0 && i + 1 < self.len
    }

    /// True when either extremum lies strictly inside the grid.
    pub fn non_monotonic(&self) -> bool {
        self.interior(self.argmin) || self.interior(self.argmax)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSweep {
    pub rows: Vec<AlphaRow>,
    /// Extrema of T_E over rows where it is defined.
    pub t_e_extrema: Option<GridExtrema>,
}

/// Witness temperatures of the S=1/2 open tetramer across `alphas` with
/// energy unit `j`. Pair concurrences are only computed when requested.
pub fn sweep_alpha(alphas: &[f64], j: f64, with_pairs: bool) -> Result<AlphaSweep> {
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let row = alpha_row(alpha, j, with_pairs).map_err(|e| e.at(format!("alpha = {alpha}")))?;
        rows.push(row);
    }
    let t_e: Vec<f64> = rows.iter().filter_map(|r| r.t_e).collect();
    Ok(AlphaSweep {
        t_e_extrema: GridExtrema::of(&t_e),
        rows,
    })
}

fn alpha_row(alpha: f64, j: f64, with_pairs: bool) -> Result<AlphaRow> {
    let half = SpinMagnitude::HALF;
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must be > 0"
        )));
    }
    let cluster = ClusterSpec::linear_tetramer(half, alpha, j)?;
    let sp = cluster_spectrum(&cluster)?;
    let e_sep = separable_energy(&cluster)?;
    let t_e = optional(entanglement_gap_temperature(&sp, e_sep))?;
    let t_c_chi = optional(susceptibility_critical_temperature(&sp, 4, half))?;
    let (t_c_12, t_c_23) = if with_pairs {
        let pc = PairConcurrence::new(&cluster)?;
        let scale = cluster_scale(&cluster);
        (
            optional(concurrence_critical_temperature_with(&pc, scale, (0, 1)))?,
            optional(concurrence_critical_temperature_with(&pc, scale, (1, 2)))?,
        )
    } else {
        (None, None)
    };
    Ok(AlphaRow {
        alpha,
        t_e,
        t_c_chi,
        t_c_12,
        t_c_23,
    })
}

/// The uniform all-to-all clusters studied as a function of S.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AllToAllKind {
    Dimer,
    Trimer,
    Tetrahedron,
}

impl AllToAllKind {
    pub const ALL: [AllToAllKind; 3] = [Self::Dimer, Self::Trimer, Self::Tetrahedron];

    pub fn n_sites(self) -> usize {
        match self {
            Self::Dimer => 2,
            Self::Trimer => 3,
            Self::Tetrahedron => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Dimer => "dimer",
            Self::Trimer => "trimer",
            Self::Tetrahedron => "tetrahedron",
        }
    }

    pub fn cluster(self, s: SpinMagnitude, j: f64) -> ClusterSpec {
        match self {
            Self::Dimer => ClusterSpec::dimer(s, j),
            Self::Trimer => ClusterSpec::trimer(s, j),
            Self::Tetrahedron => ClusterSpec::tetrahedron(s, j),
        }
    }
}

impl std::str::FromStr for AllToAllKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dimer" => Ok(Self::Dimer),
            "trimer" => Ok(Self::Trimer),
            "tetrahedron" => Ok(Self::Tetrahedron),
            other => Err(Error::InvalidParameter(format!(
                "unknown cluster kind '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinRow {
    pub spin: SpinMagnitude,
    pub t_e: f64,
    pub t_e_scaled: f64,
    pub e_sep: f64,
    pub e_g: f64,
    pub e_tot: f64,
}

/// T_E and t_E for S = 1/2, 1, ..., `s_max` (given as 2·S_max).
pub fn sweep_spin(kind: AllToAllKind, twice_s_max: u32, j: f64) -> Result<Vec<SpinRow>> {
    if twice_s_max == 0 {
        return Err(Error::InvalidParameter("s_max must be >= 1/2".into()));
    }
    (1..=twice_s_max)
        .map(|twice| spin_row(kind, twice, j).map_err(|e| e.at(format!("2S = {twice}"))))
        .collect()
}

fn spin_row(kind: AllToAllKind, twice: u32, j: f64) -> Result<SpinRow> {
    let s = SpinMagnitude::from_twice(twice)?;
    let c = kind.cluster(s, j);
    let sp = all_to_all_spectrum(s, kind.n_sites(), j)?;
    let e_sep = separable_energy(&c)?;
    let t_e = entanglement_gap_temperature(&sp, e_sep)?;
    Ok(SpinRow {
        spin: s,
        t_e,
        t_e_scaled: scaled_gap_temperature(t_e, &sp),
        e_sep: e_sep.value,
        e_g: sp.ground_energy(),
        e_tot: sp.energy_range(),
    })
}

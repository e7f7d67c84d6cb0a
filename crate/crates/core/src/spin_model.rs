//! Spin operators and cluster Hamiltonians.
//!
//! Basis convention: for a spin of magnitude S the local basis is ordered
//! m = S, S-1, ..., -S, and in a multi-site product space site 0 is the
//! leftmost tensor factor.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{kron, DenseMatrix, Tolerances, C64};

/// Spin magnitude stored as 2S so half-integers stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinMagnitude {
    twice_s: u32,
}

impl SpinMagnitude {
    pub const HALF: Self = Self { twice_s: 1 };
    pub const ONE: Self = Self { twice_s: 2 };

    pub fn from_twice(twice_s: u32) -> Result<Self> {
        if twice_s == 0 {
            return Err(Error::InvalidParameter(
                "spin magnitude must be positive".into(),
            ));
        }
        Ok(Self { twice_s })
    }

    /// Parses `0.5`, `1`, `1.5`, ... (any positive multiple of 1/2).
    pub fn from_f64(s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if !(twice.is_finite() && twice >= 1.0 && (twice - twice.round()).abs() < 1e-9) {
            return Err(Error::InvalidParameter(format!(
                "spin magnitude {s} is not a positive half-integer"
            )));
        }
        Self::from_twice(twice.round() as u32)
    }

    pub fn twice(self) -> u32 {
        self.twice_s
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_s) / 2.0
    }

    pub fn local_dim(self) -> usize {
        self.twice_s as usize + 1
    }

    /// S(S+1)
    pub fn casimir(self) -> f64 {
        let s = self.value();
        s * (s + 1.0)
    }
}

impl fmt::Display for SpinMagnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_s.is_multiple_of(2) {
            write!(f, "{}", self.twice_s / 2)
        } else {
            write!(f, "{}/2", self.twice_s)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Single-site Sx, Sy, Sz.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub x: DenseMatrix,
    pub y: DenseMatrix,
    pub z: DenseMatrix,
}

impl SpinOperators {
    pub fn component(&self, axis: Axis) -> &DenseMatrix {
        match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        }
    }
}

/// Ladder-operator construction of the spin matrices.
pub fn spin_operators(s: SpinMagnitude) -> SpinOperators {
    let dim = s.local_dim();
    let sv = s.value();
    let m = |i: usize| sv - i as f64;
    // S+ |m⟩ = sqrt(S(S+1) - m(m+1)) |m+1⟩; |m+1⟩ sits one row above |m⟩
    let mut splus = DenseMatrix::zeros(dim);
    for i in 1..dim {
        let mi = m(i);
        splus[(i - 1, i)] = C64::new((s.casimir() - mi * (mi + 1.0)).sqrt(), 0.0);
    }
    let sminus = splus.adjoint();
    let x = (&splus + &sminus).scale_real(0.5);
    let y = (&splus - &sminus).scale(C64::new(0.0, -0.5));
    let z = DenseMatrix::diagonal(&(0..dim).map(m).collect::<Vec<_>>());
    SpinOperators { x, y, z }
}

/// Embeds a single-site operator at `site` in an `n_sites` product space.
pub fn site_operator(op: &DenseMatrix, site: usize, n_sites: usize) -> Result<DenseMatrix> {
    if site >= n_sites {
        return Err(Error::InvalidParameter(format!(
            "site {site} out of range for {n_sites} sites"
        )));
    }
    let local = op.dim();
    let left = local.checked_pow(site as u32);
    let right = local.checked_pow((n_sites - site - 1) as u32);
    let max = Tolerances::default().max_dim;
    match (left, right) {
        (Some(l), Some(r)) if l.saturating_mul(r).saturating_mul(local) <= max => {
            let tmp = kron(&DenseMatrix::identity(l), op)?;
            kron(&tmp, &DenseMatrix::identity(r))
        }
        _ => Err(Error::DimensionOverflow {
            dim: usize::MAX,
            max,
        }),
    }
}

/// Site-embedded spin operators for a uniform cluster, indexed `[site]`.
#[derive(Debug, Clone)]
pub struct SiteOperators {
    pub spin: SpinMagnitude,
    pub sites: Vec<SpinOperators>,
}

impl SiteOperators {
    pub fn new(spin: SpinMagnitude, n_sites: usize) -> Result<Self> {
        let local = spin_operators(spin);
        let sites = (0..n_sites)
            .map(|k| {
                Ok(SpinOperators {
                    x: site_operator(&local.x, k, n_sites)?,
                    y: site_operator(&local.y, k, n_sites)?,
                    z: site_operator(&local.z, k, n_sites)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { spin, sites })
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn dim(&self) -> usize {
        self.sites[0].x.dim()
    }

    pub fn site_dims(&self) -> Vec<usize> {
        vec![self.spin.local_dim(); self.n_sites()]
    }

    /// M_α = Σ_i S_i^α
    pub fn total(&self, axis: Axis) -> DenseMatrix {
        let mut acc = DenseMatrix::zeros(self.dim());
        for s in &self.sites {
            acc = &acc + s.component(axis);
        }
        acc
    }

    /// S_i · S_j
    pub fn dot(&self, i: usize, j: usize) -> DenseMatrix {
        let (a, b) = (&self.sites[i], &self.sites[j]);
        let xx = a.x.matmul(&b.x);
        let yy = a.y.matmul(&b.y);
        let zz = a.z.matmul(&b.z);
        &(&xx + &yy) + &zz
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Named topologies with closed-form results elsewhere in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClusterKind {
    Dimer,
    Trimer,
    Tetrahedron,
    LinearTetramer { alpha: f64 },
    Custom,
}

/// Uniform-spin Heisenberg cluster: `H = J Σ_edges w_ij S_i·S_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSpec {
    n_sites: usize,
    spin: SpinMagnitude,
    edges: Vec<Edge>,
    j: f64,
    kind: ClusterKind,
}

impl ClusterSpec {
    pub fn new(n_sites: usize, spin: SpinMagnitude, edges: Vec<Edge>, j: f64) -> Result<Self> {
        Self::with_kind(n_sites, spin, edges, j, ClusterKind::Custom)
    }

    fn with_kind(
        n_sites: usize,
        spin: SpinMagnitude,
        mut edges: Vec<Edge>,
        j: f64,
        kind: ClusterKind,
    ) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidParameter(
                "cluster needs at least one site".into(),
            ));
        }
        if !j.is_finite() {
            return Err(Error::InvalidParameter("coupling J must be finite".into()));
        }
        for e in &mut edges {
            if e.i > e.j {
                std::mem::swap(&mut e.i, &mut e.j);
            }
            if e.i == e.j || e.j >= n_sites {
                return Err(Error::InvalidParameter(format!(
                    "edge ({}, {}) invalid for {n_sites} sites",
                    e.i, e.j
                )));
            }
            if !(e.weight.is_finite() && e.weight >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "edge weight {} must be finite and non-negative",
                    e.weight
                )));
            }
        }
        edges.sort_by_key(|e| (e.i, e.j));
        if edges
            .windows(2)
            .any(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j))
        {
            return Err(Error::InvalidParameter("duplicate edge".into()));
        }
        Ok(Self {
            n_sites,
            spin,
            edges,
            j,
            kind,
        })
    }

    fn all_to_all(n: usize, spin: SpinMagnitude, j: f64, kind: ClusterKind) -> Self {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push(Edge {
                    i: a,
                    j: b,
                    weight: 1.0,
                });
            }
        }
        Self::with_kind(n, spin, edges, j, kind).expect("all-to-all graph is valid")
    }

    pub fn dimer(spin: SpinMagnitude, j: f64) -> Self {
        Self::all_to_all(2, spin, j, ClusterKind::Dimer)
    }

    pub fn trimer(spin: SpinMagnitude, j: f64) -> Self {
        Self::all_to_all(3, spin, j, ClusterKind::Trimer)
    }

    pub fn tetrahedron(spin: SpinMagnitude, j: f64) -> Self {
        Self::all_to_all(4, spin, j, ClusterKind::Tetrahedron)
    }

    /// Open chain 0-1-2-3 with couplings J, αJ, J.
    pub fn linear_tetramer(spin: SpinMagnitude, alpha: f64, j: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha} must be >= 0"
            )));
        }
        let edges = vec![
            Edge {
                i: 0,
                j: 1,
                weight: 1.0,
            },
            Edge {
                i: 1,
                j: 2,
                weight: alpha,
            },
            Edge {
                i: 2,
                j: 3,
                weight: 1.0,
            },
        ];
        Self::with_kind(4, spin, edges, j, ClusterKind::LinearTetramer { alpha })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn spin(&self) -> SpinMagnitude {
        self.spin
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn kind(&self) -> ClusterKind {
        self.kind
    }

    pub fn dim(&self) -> Option<usize> {
        self.spin.local_dim().checked_pow(self.n_sites as u32)
    }

    pub fn site_dims(&self) -> Vec<usize> {
        vec![self.spin.local_dim(); self.n_sites]
    }

    pub fn is_all_to_all(&self) -> bool {
        let n = self.n_sites;
        self.edges.len() == n * (n - 1) / 2 && self.edges.iter().all(|e| e.weight == 1.0)
    }
}

fn check_dim(c: &ClusterSpec) -> Result<usize> {
    let max = Tolerances::default().max_dim;
    match c.dim() {
        Some(d) if d <= max => Ok(d),
        other => Err(Error::DimensionOverflow {
            dim: other.unwrap_or(usize::MAX),
            max,
        }),
    }
}

pub fn build_hamiltonian(c: &ClusterSpec) -> Result<DenseMatrix> {
    let dim = check_dim(c)?;
    let ops = SiteOperators::new(c.spin, c.n_sites)?;
    Ok(hamiltonian_from_ops(c, &ops, dim))
}

pub(crate) fn hamiltonian_from_ops(
    c: &ClusterSpec,
    ops: &SiteOperators,
    dim: usize,
) -> DenseMatrix {
    let mut h = DenseMatrix::zeros(dim);
    for e in &c.edges {
        if e.weight == 0.0 {
            continue;
        }
        h = &h + &ops.dot(e.i, e.j).scale_real(e.weight * c.j);
    }
    h
}

/// Anisotropic spin-1 dimer; B absorbs gμ_B and is an energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisoDimerParams {
    pub j: f64,
    pub delta: f64,
    pub d: f64,
    pub b: f64,
}

impl AnisoDimerParams {
    pub fn new(j: f64, delta: f64, d: f64, b: f64) -> Self {
        Self { j, delta, d, b }
    }

    pub fn with_field(self, b: f64) -> Self {
        Self { b, ..self }
    }
}

/// `J(S1x S2x + S1y S2y) + δJ S1z S2z + d[(S1z)² + (S2z)²] + B(S1z + S2z)`
pub fn build_aniso_dimer(p: &AnisoDimerParams) -> DenseMatrix {
    let ops = SiteOperators::new(SpinMagnitude::ONE, 2).expect("9-dim space");
    aniso_dimer_from_ops(p, &ops)
}

pub(crate) fn aniso_dimer_from_ops(p: &AnisoDimerParams, ops: &SiteOperators) -> DenseMatrix {
    let (s1, s2) = (&ops.sites[0], &ops.sites[1]);
    let xy = &s1.x.matmul(&s2.x) + &s1.y.matmul(&s2.y);
    let zz = s1.z.matmul(&s2.z);
    let single_ion = &s1.z.matmul(&s1.z) + &s2.z.matmul(&s2.z);
    let mz = &s1.z + &s2.z;
    let mut h = xy.scale_real(p.j);
    h = &h + &zz.scale_real(p.delta * p.j);
    h = &h + &single_ion.scale_real(p.d);
    &h + &mz.scale_real(p.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn spin_half_is_half_pauli() {
        let ops = spin_operators(SpinMagnitude::HALF);
        let sx = DenseMatrix::from_real_rows(&[vec![0.0, 0.5], vec![0.5, 0.0]]).unwrap();
        let sy = DenseMatrix::from_rows(&[
            vec![C64::new(0.0, 0.0), C64::new(0.0, -0.5)],
            vec![C64::new(0.0, 0.5), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        assert!(ops.x.max_abs_diff(&sx) < 1e-15);
        assert!(ops.y.max_abs_diff(&sy) < 1e-15);
        assert_eq!(ops.z, DenseMatrix::diagonal(&[0.5, -0.5]));
    }

    #[test]
    fn spin_one_sz() {
        assert_eq!(
            spin_operators(SpinMagnitude::ONE).z,
            DenseMatrix::diagonal(&[1.0, 0.0, -1.0])
        );
    }

    #[test]
    fn casimir_and_commutator() {
        for twice in 1..=6 {
            let s = SpinMagnitude::from_twice(twice).unwrap();
            let ops = spin_operators(s);
            let cas = &(&ops.x.matmul(&ops.x) + &ops.y.matmul(&ops.y)) + &ops.z.matmul(&ops.z);
            let expected = DenseMatrix::identity(s.local_dim()).scale_real(s.casimir());
            assert!(cas.max_abs_diff(&expected) < 1e-12, "S = {s}");
            let comm = ops.x.commutator(&ops.y);
            assert!(comm.max_abs_diff(&ops.z.scale(C64::new(0.0, 1.0))) < 1e-12);
            for op in [&ops.x, &ops.y, &ops.z] {
                assert!(op.is_hermitian(1e-15));
            }
        }
        let s = SpinMagnitude::from_f64(1.5).unwrap();
        let ops = spin_operators(s);
        let cas = &(&ops.x.matmul(&ops.x) + &ops.y.matmul(&ops.y)) + &ops.z.matmul(&ops.z);
        assert!(cas.max_abs_diff(&DenseMatrix::identity(4).scale_real(15.0 / 4.0)) < 1e-12);
    }

    #[test]
    fn spin_magnitude_parsing() {
        assert_eq!(SpinMagnitude::from_f64(0.5).unwrap(), SpinMagnitude::HALF);
        assert_eq!(SpinMagnitude::from_f64(3.0).unwrap().twice(), 6);
        assert!(SpinMagnitude::from_f64(0.3).is_err());
        assert!(SpinMagnitude::from_f64(0.0).is_err());
        assert!(SpinMagnitude::from_twice(0).is_err());
        assert_eq!(SpinMagnitude::from_twice(3).unwrap().to_string(), "3/2");
    }

    #[test]
    fn dimer_singlet_triplet() {
        let h = build_hamiltonian(&ClusterSpec::dimer(SpinMagnitude::HALF, 1.0)).unwrap();
        let eig = hermitian_eig(&h).unwrap();
        let expected = [-0.75, 0.25, 0.25, 0.25];
        for (a, e) in eig.values.iter().zip(expected) {
            assert!(close(*a, e, 1e-12));
        }
    }

    #[test]
    fn tetrahedron_levels() {
        let h = build_hamiltonian(&ClusterSpec::tetrahedron(SpinMagnitude::HALF, 1.0)).unwrap();
        let eig = hermitian_eig(&h).unwrap();
        let count = |e: f64| eig.values.iter().filter(|&&v| close(v, e, 1e-10)).count();
        assert_eq!(count(-1.5), 2);
        assert_eq!(count(-0.5), 9);
        // S^tot = 2: ½[6 − 3] = 3/2; the three levels sum to a traceless H
        assert_eq!(count(1.5), 5);
    }

    #[test]
    fn tetramer_ground_energy() {
        for (alpha, expected) in [
            (0.4, -(0.5 + 0.1) - (1.0f64 - 0.2 + 0.04).sqrt()),
            (1.0, -0.75 - 3f64.sqrt() / 2.0),
        ] {
            let c = ClusterSpec::linear_tetramer(SpinMagnitude::HALF, alpha, 1.0).unwrap();
            let eig = hermitian_eig(&build_hamiltonian(&c).unwrap()).unwrap();
            assert!(close(eig.values[0], expected, 1e-10), "{}", eig.values[0]);
        }
        assert!(close(-0.75 - 3f64.sqrt() / 2.0, -1.61603, 1e-5));
    }

    #[test]
    fn hamiltonians_conserve_total_sz() {
        let clusters = [
            ClusterSpec::dimer(SpinMagnitude::ONE, 1.3),
            ClusterSpec::trimer(SpinMagnitude::from_twice(3).unwrap(), 0.7),
            ClusterSpec::linear_tetramer(SpinMagnitude::HALF, 0.4, 92.7).unwrap(),
        ];
        for c in &clusters {
            let h = build_hamiltonian(c).unwrap();
            assert!(h.is_hermitian(1e-12));
            let mz = SiteOperators::new(c.spin(), c.n_sites())
                .unwrap()
                .total(Axis::Z);
            assert!(h.commutator(&mz).max_abs() < 1e-12);
        }
        let p = AnisoDimerParams::new(1.0, 0.6, -0.4, 0.9);
        let h = build_aniso_dimer(&p);
        assert_eq!(h.dim(), 9);
        assert!(h.is_hermitian(1e-14));
        let mz = SiteOperators::new(SpinMagnitude::ONE, 2)
            .unwrap()
            .total(Axis::Z);
        assert!(h.commutator(&mz).max_abs() < 1e-12);
    }

    #[test]
    fn isotropic_limit_of_aniso_dimer() {
        let aniso = build_aniso_dimer(&AnisoDimerParams::new(1.0, 1.0, 0.0, 0.0));
        let iso = build_hamiltonian(&ClusterSpec::dimer(SpinMagnitude::ONE, 1.0)).unwrap();
        assert!(aniso.max_abs_diff(&iso) < 1e-14);
        let eig = hermitian_eig(&aniso).unwrap();
        assert!(close(eig.values[0], -2.0, 1e-12));
    }

    #[test]
    fn aniso_dimer_fully_polarized_state() {
        let p = AnisoDimerParams::new(1.3, 0.8, 0.25, 0.4);
        let h = build_aniso_dimer(&p);
        // |1,1⟩ is basis index 0
        let e = h[(0, 0)].re;
        assert!(close(e, p.delta * p.j + 2.0 * p.d + 2.0 * p.b, 1e-14));
        assert!((1..9).all(|k| h[(0, k)].norm() < 1e-15));
    }

    #[test]
    fn rejects_bad_clusters() {
        let e = |i, j| Edge { i, j, weight: 1.0 };
        assert!(ClusterSpec::new(2, SpinMagnitude::HALF, vec![e(0, 0)], 1.0).is_err());
        assert!(ClusterSpec::new(2, SpinMagnitude::HALF, vec![e(0, 2)], 1.0).is_err());
        assert!(ClusterSpec::new(3, SpinMagnitude::HALF, vec![e(0, 1), e(1, 0)], 1.0).is_err());
        assert!(ClusterSpec::linear_tetramer(SpinMagnitude::HALF, -0.1, 1.0).is_err());
        let big = ClusterSpec::new(13, SpinMagnitude::HALF, vec![e(0, 1)], 1.0).unwrap();
        assert!(matches!(
            build_hamiltonian(&big),
            Err(Error::DimensionOverflow { .. })
        ));
    }
}

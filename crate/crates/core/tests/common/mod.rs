#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spinwitness::linalg::{DenseMatrix, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    // Box-Muller keeps the dependency surface to rand itself
    let mut normal = || {
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let v: f64 = rng.gen();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    };
    (0..n).map(|_| c(normal(), normal())).collect()
}

pub fn normalized(v: Vec<C64>) -> Vec<C64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Random full-rank density matrix G G† / tr.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DenseMatrix {
    let cols: Vec<Vec<C64>> = (0..dim).map(|_| gaussian_vec(rng, dim)).collect();
    let g = DenseMatrix::from_fn(dim, |i, j| cols[j][i]);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

/// Haar-ish random 2×2 unitary.
pub fn random_unitary2(rng: &mut ChaCha8Rng) -> DenseMatrix {
    let v = normalized(gaussian_vec(rng, 2));
    let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let (a, b) = (v[0], v[1]);
    DenseMatrix::from_rows(&[vec![a, b], vec![-b.conj() * phase, a.conj() * phase]]).unwrap()
}

/// p|ψ⁻⟩⟨ψ⁻| + (1-p) I/4
pub fn werner(p: f64) -> DenseMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = DenseMatrix::projector(&[c(0.0, 0.0), c(h, 0.0), c(-h, 0.0), c(0.0, 0.0)]);
    &singlet.scale_real(p) + &DenseMatrix::identity(4).scale_real((1.0 - p) / 4.0)
}

/// Tensor product of local kets, site 0 leftmost.
pub fn product_ket(locals: &[Vec<C64>]) -> Vec<C64> {
    locals.iter().fold(vec![c(1.0, 0.0)], |acc, v| {
        acc.iter()
            .flat_map(|a| v.iter().map(move |b| a * b))
            .collect()
    })
}

pub fn expectation(h: &DenseMatrix, ket: &[C64]) -> f64 {
    let hv = h.mul_vec(ket);
    ket.iter()
        .zip(&hv)
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .re
}

/// Spin-1/2 ket pointing along (θ, φ); basis ↑, ↓.
pub fn coherent_half(theta: f64, phi: f64) -> Vec<C64> {
    vec![
        c((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]
}

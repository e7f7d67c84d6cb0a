use super::{DenseMatrix, Tolerances, C64};
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// V · diag(f(λ)) · V†.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> DenseMatrix {
        let n = self.dim();
        let weights: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let v = &self.vectors;
        let mut out = DenseMatrix::zeros(n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                if vik.re == 0.0 && vik.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.reconstruct_with(|x| x)
    }
}

pub fn hermitian_eig(m: &DenseMatrix) -> Result<EigenDecomposition> {
    hermitian_eig_with(m, &Tolerances::default())
}

/// Cyclic complex Jacobi.
///
/// Each rotation acts on the (p, q) plane with the unitary
/// `[[c, s·e^{iφ}], [-s·e^{-iφ}, c]]`, where φ is the phase of `A[p][q]`.
/// That is the real Jacobi rotation conjugated by `diag(1, e^{-iφ})`, so the
/// 2×2 block becomes real symmetric before it is annihilated.
pub fn hermitian_eig_with(m: &DenseMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    if !m.is_finite() {
        return Err(Error::InvalidParameter(
            "matrix has non-finite entries".into(),
        ));
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol.hermitian {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.dim();
    // symmetrize so the iteration starts exactly Hermitian
    let mut a = DenseMatrix::from_fn(n, |i, j| {
        if i == j {
            C64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = DenseMatrix::identity(n);
    let norm = a.frobenius_norm();
    let target = tol.eig_off_diagonal * norm;

    let off_norm = |a: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut off = off_norm(&a);
    while off > target {
        if sweeps == tol.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = a[(p, q)];
                let g_abs = g.norm();
                if g_abs == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if sweeps > 4
                    && app.abs() + 100.0 * g_abs == app.abs()
                    && aqq.abs() + 100.0 * g_abs == aqq.abs()
                {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let phase = g / g_abs;
                let theta = (aqq - app) / (2.0 * g_abs);
                // signum(0.0) == 1.0, so equal diagonals rotate by π/4
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // U = [[upp, upq], [uqp, uqq]] on the (p, q) plane
                let upp = C64::new(c, 0.0);
                let upq = phase * s;
                let uqp = -phase.conj() * s;
                let uqq = C64::new(c, 0.0);

                // A <- A U (columns)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * upp + akq * uqp;
                    a[(k, q)] = akp * upq + akq * uqq;
                }
                // A <- U† A (rows)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
                    a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                // V <- V U
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * upp + vkq * uqp;
                    v[(k, q)] = vkp * upq + vkq * uqq;
                }
            }
        }
        off = off_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DenseMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition { values, vectors })
}

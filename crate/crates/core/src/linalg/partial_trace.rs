use super::{DenseMatrix, C64};
use crate::error::{Error, Result};

/// Traces out every site not listed in `keep`.
///
/// `site_dims[k]` is the local dimension of site `k`; site 0 is the most
/// significant digit of the product-basis index. Kept sites appear in the
/// result in increasing site order regardless of the order of `keep`.
pub fn partial_trace(
    rho: &DenseMatrix,
    site_dims: &[usize],
    keep: &[usize],
) -> Result<DenseMatrix> {
    if site_dims.is_empty() || site_dims.contains(&0) {
        return Err(Error::DimensionMismatch(
            "site dimensions must be positive".into(),
        ));
    }
    let total: usize = site_dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "site dimensions multiply to {total}, matrix has dimension {}",
            rho.dim()
        )));
    }
    let n_sites = site_dims.len();
    let mut kept = vec![false; n_sites];
    for &k in keep {
        if k >= n_sites {
            return Err(Error::DimensionMismatch(format!(
                "site {k} out of range for {n_sites} sites"
            )));
        }
        kept[k] = true;
    }
    if !kept.iter().any(|&b| b) {
        return Err(Error::DimensionMismatch("keep set is empty".into()));
    }

    // strides of each site in the full index
    let mut strides = vec![1usize; n_sites];
    for k in (0..n_sites - 1).rev() {
        strides[k] = strides[k + 1] * site_dims[k + 1];
    }
    let kept_sites: Vec<usize> = (0..n_sites).filter(|&k| kept[k]).collect();
    let traced_sites: Vec<usize> = (0..n_sites).filter(|&k| !kept[k]).collect();
    let dim_keep: usize = kept_sites.iter().map(|&k| site_dims[k]).product();
    let dim_trace: usize = traced_sites.iter().map(|&k| site_dims[k]).product();

    let offsets = |sites: &[usize], count: usize| -> Vec<usize> {
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for &k in sites.iter().rev() {
                    off += (idx % site_dims[k]) * strides[k];
                    idx /= site_dims[k];
                }
                off
            })
            .collect()
    };
    let keep_off = offsets(&kept_sites, dim_keep);
    let trace_off = offsets(&traced_sites, dim_trace);

    let mut out = DenseMatrix::zeros(dim_keep);
    for (a, &ka) in keep_off.iter().enumerate() {
        for (b, &kb) in keep_off.iter().enumerate() {
            let s: C64 = trace_off.iter().map(|&t| rho[(ka + t, kb + t)]).sum();
            out[(a, b)] = s;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    fn ket(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn product_state() {
        // |↑↑⟩ with ↑ = index 0
        let rho = DenseMatrix::projector(&ket(&[1.0, 0.0, 0.0, 0.0]));
        let r = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        assert_eq!(r, DenseMatrix::diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn singlet_is_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DenseMatrix::projector(&ket(&[0.0, h, -h, 0.0]));
        for site in 0..2 {
            let r = partial_trace(&rho, &[2, 2], &[site]).unwrap();
            assert!(r.max_abs_diff(&DenseMatrix::diagonal(&[0.5, 0.5])) < 1e-15);
        }
    }

    #[test]
    fn keeps_factor_of_product_operator() {
        let a = DenseMatrix::from_real_rows(&[vec![0.7, 0.1], vec![0.1, 0.3]]).unwrap();
        let b = DenseMatrix::diagonal(&[0.2, 0.3, 0.5]);
        let c = DenseMatrix::from_real_rows(&[vec![0.4, -0.2], vec![-0.2, 0.6]]).unwrap();
        let abc = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let dims = [2, 3, 2];
        assert!(partial_trace(&abc, &dims, &[1]).unwrap().max_abs_diff(&b) < 1e-15);
        let ac = kron(&a, &c).unwrap();
        assert!(
            partial_trace(&abc, &dims, &[2, 0])
                .unwrap()
                .max_abs_diff(&ac)
                < 1e-15
        );
    }

    #[test]
    fn mismatched_dims() {
        let rho = DenseMatrix::identity(4);
        assert!(partial_trace(&rho, &[2, 3], &[0]).is_err());
        assert!(partial_trace(&rho, &[2, 2], &[]).is_err());
        assert!(partial_trace(&rho, &[2, 2], &[2]).is_err());
    }
}

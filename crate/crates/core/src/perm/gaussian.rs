use nalgebra::{Cholesky, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};

use crate::stats::{mc_scalar, MCEstimate};
use crate::{CMatrix, Error, Result, C64};

/// Unbiased estimate of `Per(F)` for Hermitian positive-definite `F`.
///
/// With `F = L L*` and `v` a standard complex Gaussian vector
/// (`E |v_i|^2 = 1`), `Per(F) = E prod_i |(L v)_i|^2`. The variance grows
/// quickly with `n` and the condition of `F`; check
/// [`MCEstimate::rel_stderr`] on the result.
pub fn per_gaussian_estimate(f: &CMatrix, samples: usize, seed: u64) -> Result<MCEstimate> {
    let n = f.n();
    let tol = 1e-12 * f.max_abs().max(1.0);
    if !f.is_hermitian(tol) {
        return Err(Error::domain(
            "per_gaussian_estimate",
            "matrix is not Hermitian",
        ));
    }
    let m = f.to_nalgebra();
    // nalgebra's complex Cholesky takes complex square roots of negative
    // pivots instead of failing, so definiteness is checked on the spectrum.
    let min_eig = SymmetricEigen::new(m.clone()).eigenvalues.min();
    if min_eig <= 0.0 {
        return Err(Error::domain(
            "per_gaussian_estimate",
            format!("matrix is not positive definite (smallest eigenvalue {min_eig:e})"),
        ));
    }
    let chol = Cholesky::new(m)
        .ok_or_else(|| Error::domain("per_gaussian_estimate", "Cholesky factorisation failed"))?;
    let l = CMatrix::from_nalgebra(&chol.l());
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    mc_scalar(samples, seed, |rng| {
        let v: Vec<C64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                C64::new(re, im) * scale
            })
            .collect();
        let mut prod = 1.0;
        for i in 0..n {
            let x: C64 = (0..=i).map(|j| l[(i, j)] * v[j]).sum();
            prod *= x.norm_sqr();
        }
        Ok(C64::new(prod, 0.0))
    })
}

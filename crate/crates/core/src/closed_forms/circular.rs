//! CUE and Ginibre two-point functions and the rank-one unitary group
//! integral behind them.

use crate::orthopoly::Quadrature;
use crate::special::binomial;
use crate::{Error, Result, C64};

/// `<p(a) conj(p(b))>` over `U(n)` with Haar measure, sum form
/// `n! (n-1)! sum_{j=0}^{n} c^j / (j! (2n-1-j)!)`, `c = a conj(b)`,
/// evaluated as `sum_j C(2n-1, j) c^j / C(2n-1, n)`.
pub fn two_point_cue(n: usize, a: C64, b: C64) -> C64 {
    assert!(n >= 1, "dimension must be at least 1");
    let c = a * b.conj();
    let norm = binomial(2 * n - 1, n);
    let mut pow = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..=n {
        sum += pow * (binomial(2 * n - 1, j) / norm);
        pow *= c;
    }
    sum
}

/// Integral form `(n-1) int_0^1 (1-t)^(n-2) (c + t)^n dt`, by an `n`-point
/// Gauss-Legendre rule (exact: the integrand has degree `2n - 2`).
/// At `n = 1` the form degenerates and `1 + c` is returned.
pub fn two_point_cue_integral(n: usize, a: C64, b: C64) -> Result<C64> {
    if n == 0 {
        return Err(Error::domain(
            "two_point_cue_integral",
            "dimension must be at least 1",
        ));
    }
    let c = a * b.conj();
    if n == 1 {
        return Ok(c + 1.0);
    }
    let q = Quadrature::gauss_legendre_on(n, 0.0, 1.0);
    let val = q.integrate_poly(2 * n - 2, |t| {
        (c + t).powu(n as u32) * (1.0 - t).powi(n as i32 - 2)
    })?;
    Ok(val * (n - 1) as f64)
}

/// `<p(a) conj(p(b))>` over the `n x n` Ginibre ensemble,
/// `(n! / n^n) sum_{k=0}^{n} (n c)^k / k!`, `c = a conj(b)`.
pub fn two_point_ginibre(n: usize, a: C64, b: C64) -> C64 {
    assert!(n >= 1, "dimension must be at least 1");
    let c = a * b.conj();
    let nf = n as f64;
    // coefficient of c^k is n! / (k! n^(n-k)); built downward from k = n
    let mut coef = vec![0.0; n + 1];
    coef[n] = 1.0;
    for k in (1..=n).rev() {
        coef[k - 1] = coef[k] * k as f64 / nf;
    }
    coef.iter()
        .rev()
        .fold(C64::new(0.0, 0.0), |acc, &w| acc * c + w)
}

/// Integral form `int_0^inf exp(-u) (c + u/n)^n du` by Gauss-Laguerre.
pub fn two_point_ginibre_integral(n: usize, a: C64, b: C64) -> Result<C64> {
    if n == 0 {
        return Err(Error::domain(
            "two_point_ginibre_integral",
            "dimension must be at least 1",
        ));
    }
    let c = a * b.conj();
    let nf = n as f64;
    let q = Quadrature::gauss_laguerre(n / 2 + 1);
    q.integrate_poly(n, |u| (c + u / nf).powu(n as u32))
}

/// `sum_j x^j / (j!)^2`, i.e. `I_0(2 sqrt(x))`, for any complex `x`.
fn bessel_i0_sqrt(x: C64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for j in 1..500 {
        term *= x / ((j * j) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn check_fk(op: &'static str, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(op, format!("requires N >= 2, got {n}")));
    }
    Ok(())
}

/// `E exp(Tr[A U + U* B*])` over Haar `U(n)` for rank-one `A B*` with
/// nonzero eigenvalue `v2`, as `(n-1) int_0^1 (1-t)^(n-2) I_0(2 sqrt(t v2)) dt`
/// by 48-point Gauss-Legendre.
pub fn fk_rank_one_quadrature(v2: C64, n: usize) -> Result<C64> {
    check_fk("fk_rank_one", n)?;
    let q = Quadrature::gauss_legendre_on(48, 0.0, 1.0);
    Ok(
        q.integrate_complex(|t| bessel_i0_sqrt(v2 * t) * (1.0 - t).powi(n as i32 - 2))
            * (n - 1) as f64,
    )
}

/// Same quantity from the term-integrated series
/// `(n-1)! sum_j v2^j / (j! (n-1+j)!)`.
pub fn fk_rank_one_series(v2: C64, n: usize) -> Result<C64> {
    check_fk("fk_rank_one", n)?;
    // term_j = (n-1)! v2^j / (j! (n-1+j)!), term_0 = 1
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for j in 1..1000 {
        term *= v2 / (j as f64 * (n - 1 + j) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    Ok(sum)
}

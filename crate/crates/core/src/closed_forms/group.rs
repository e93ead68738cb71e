//! Unitary group integrals of Harish-Chandra-Itzykson-Zuber type and the
//! complete symmetric functions behind their rank-one case.

use nalgebra::DMatrix;

use crate::special::factorial;
use crate::{Error, Result, C64};

/// Complete symmetric function `h_n(x_1, ..., x_N)`.
pub fn complete_symmetric(n: usize, xs: &[C64]) -> C64 {
    let mut h = vec![C64::new(0.0, 0.0); n + 1];
    h[0] = C64::new(1.0, 0.0);
    for &x in xs {
        for k in 1..=n {
            let prev = h[k - 1];
            h[k] += x * prev;
        }
    }
    h[n]
}

fn min_gap<T: Copy>(xs: &[T], dist: impl Fn(T, T) -> f64) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            g = g.min(dist(xs[i], xs[j]));
        }
    }
    g
}

/// Both sides of
/// `sum_i x_i^(n+N-1) / prod_{j != i} (x_i - x_j) = h_n(x)` for `n >= 0`
/// and `= 0` for `-(N-1) <= n < 0`. Returns `(lhs, rhs)`.
pub fn identity_check_symfun1(n: i64, xs: &[C64]) -> Result<(C64, C64)> {
    let big_n = xs.len() as i64;
    if big_n == 0 {
        return Err(Error::domain(
            "identity_check_symfun1",
            "need at least one variable",
        ));
    }
    if n < -(big_n - 1) {
        return Err(Error::domain(
            "identity_check_symfun1",
            format!("n = {n} is below -(N-1)"),
        ));
    }
    let scale = xs.iter().map(|x| x.norm()).fold(1.0, f64::max);
    if min_gap(xs, |a, b| (a - b).norm()) <= 1e-8 * scale {
        return Err(Error::Conditioning {
            op: "identity_check_symfun1",
            msg: "variables must be pairwise distinct".into(),
        });
    }
    let p = (n + big_n - 1) as u32;
    let lhs = xs
        .iter()
        .enumerate()
        .map(|(i, &xi)| {
            let den: C64 = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &xj)| xi - xj)
                .product();
            xi.powu(p) / den
        })
        .sum();
    let rhs = if n >= 0 {
        complete_symmetric(n as usize, xs)
    } else {
        C64::new(0.0, 0.0)
    };
    Ok((lhs, rhs))
}

/// Haar average of `exp(beta Tr[U diag(lambda) U* Gamma])` for rank-one
/// `Gamma` with nonzero eigenvalue `gamma`, as a function of `t = beta gamma`:
/// `(N-1)! / t^(N-1) sum_i exp(t l_i) / prod_{j != i} (l_i - l_j)`.
///
/// Near-coincident eigenvalues or small `t` make that sum cancel; there the
/// entire series `sum_k (N-1)! / (N-1+k)! t^k h_k(lambda)` is summed instead
/// until the relative tail drops below `1e-14`. Eigenvalues are first shifted
/// so that `Re(t l_i) >= 0`, which keeps the series terms from cancelling.
pub fn hciz_rank_one(lambda: &[f64], t: C64) -> C64 {
    let n = lambda.len();
    assert!(n >= 1, "need at least one eigenvalue");
    let lo = lambda.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = lambda.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shift = if t.re >= 0.0 { lo } else { hi };
    let lam: Vec<f64> = lambda.iter().map(|&l| l - shift).collect();
    let outer = (t * shift).exp();
    if n == 1 {
        return (t * lambda[0]).exp();
    }
    if let Some(v) = rank_one_closed(&lam, t) {
        return outer * v;
    }
    outer * rank_one_series(&lam, t)
}

fn rank_one_closed(lam: &[f64], t: C64) -> Option<C64> {
    let n = lam.len();
    if t.norm() == 0.0 || min_gap(lam, |a, b| (a - b).abs()) == 0.0 {
        return None;
    }
    let terms: Vec<C64> = (0..n)
        .map(|i| {
            let den: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| lam[i] - lam[j])
                .product();
            (t * lam[i]).exp() / den
        })
        .collect();
    let sum: C64 = terms.iter().sum();
    let mag: f64 = terms.iter().map(|z| z.norm()).sum();
    let result = sum * factorial(n - 1) / t.powu(n as u32 - 1);
    // relative rounding error of the alternating sum is about eps * mag / |sum|
    if !result.norm().is_finite() || mag > 1e4 * sum.norm() {
        return None;
    }
    Some(result)
}

fn rank_one_series(lam: &[f64], t: C64) -> C64 {
    let n = lam.len();
    // h[m] = h_k(lam_0..lam_m) for the current k
    let mut h = vec![1.0f64; n];
    let mut coef = C64::new(1.0, 0.0);
    let mut sum = C64::new(1.0, 0.0);
    let tmax = t.norm() * lam.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    for k in 1..100_000usize {
        let mut prev_row = 0.0;
        for m in 0..n {
            // h_k(x_0..x_m) = h_k(x_0..x_{m-1}) + x_m h_{k-1}(x_0..x_m)
            h[m] = prev_row + lam[m] * h[m];
            prev_row = h[m];
        }
        coef *= t / (n - 1 + k) as f64;
        let term = coef * h[n - 1];
        sum += term;
        if k as f64 > tmax && term.norm() <= 1e-14 * sum.norm() {
            break;
        }
    }
    sum
}

/// Haar average of `exp(beta Tr[U diag(lambda) U* diag(gamma)])` over `U(N)`:
/// `beta^(-N(N-1)/2) (prod_{p<N} p!) det[exp(beta l_i g_j)] / (D(lambda) D(gamma))`
/// with `D(x) = prod_{i<j} (x_i - x_j)`.
pub fn hciz_full(lambda: &[f64], gamma: &[f64], beta: f64) -> Result<f64> {
    let n = lambda.len();
    if n == 0 || gamma.len() != n {
        return Err(Error::domain(
            "hciz_full",
            "spectra must be non-empty and of equal length",
        ));
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    for (name, xs) in [("lambda", lambda), ("gamma", gamma)] {
        let scale = xs.iter().fold(1.0f64, |a, &x| a.max(x.abs()));
        if min_gap(xs, |a, b| (a - b).abs()) <= 1e-8 * scale {
            return Err(Error::Conditioning {
                op: "hciz_full",
                msg: format!("{name} has near-coincident entries; use hciz_rank_one or perturb"),
            });
        }
    }
    let m = DMatrix::from_fn(n, n, |i, j| (beta * lambda[i] * gamma[j]).exp());
    let vander = |x: &[f64]| -> f64 {
        let mut d = 1.0;
        for i in 0..n {
            for j in i + 1..n {
                d *= x[i] - x[j];
            }
        }
        d
    };
    let pref: f64 = (1..n).map(factorial).product();
    let exponent = (n * (n - 1) / 2) as i32;
    Ok(pref * m.determinant() / (vander(lambda) * vander(gamma) * beta.powi(exponent)))
}

//! GUE, GOE and general unitary-invariant expectations.
//!
//! `pi_k` below is the monic Hermite polynomial of [`hermite_monic`] with
//! parameter `N = n`, the matrix dimension.

use std::f64::consts::PI;

use crate::ensembles::Potential;
use crate::orthopoly::{
    hermite_monic, hermite_monic_scaled, monic_ops_from_potential, RecurrenceCoeffs,
};
use crate::special::{binomial, factorial, gaussian_moment_var};
use crate::{Error, Poly, Result, C64};

pub const MEAN_PERM_POLY_GENERAL_MAX_N: usize = 10;
pub const TWO_POINT_GOE_MAX_N: usize = 20;
const MOMENT_MAX_N: usize = 20;

fn i_pow(n: usize) -> C64 {
    match n % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Unnormalised coefficients `a_0..a_n` of the mean permanental polynomial
/// for the weight `exp(-n Tr V(H))`:
/// `a_k = (-1)^(n+k) C(2n-1, k) int lambda^(2n-1-k) pi_{n-1}(lambda) dw`,
/// with `pi_{n-1}` monic orthogonal for `dw = exp(-n V) dx`.
pub fn perm_poly_moment_coeffs(v: &Potential, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain(
            "mean_perm_poly_general",
            "dimension must be at least 1",
        ));
    }
    if n > MEAN_PERM_POLY_GENERAL_MAX_N {
        return Err(Error::size(
            "mean_perm_poly_general",
            n,
            MEAN_PERM_POLY_GENERAL_MAX_N,
        ));
    }
    let nf = n as f64;
    let degree = 3 * n - 2;
    let nodes = 3 * n / 2;
    let len = nodes.max(n);
    let rc = if v.is_gaussian() {
        RecurrenceCoeffs::hermite(nf, len)
    } else {
        monic_ops_from_potential(v, nf, len - 1)?
    };
    let q = rc.gauss_rule(nodes)?;
    let mut a = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let p = 2 * n - 1 - k;
        let integral = q.integrate_poly(degree - k, |x| {
            rc.eval(n - 1, C64::new(x, 0.0)) * x.powi(p as i32)
        })?;
        let sign = if (n + k) % 2 == 0 { 1.0 } else { -1.0 };
        a.push(sign * binomial(2 * n - 1, k) * integral.re);
    }
    Ok(a)
}

/// Expected permanental polynomial `<Per(mu I - H)>` for the weight
/// `exp(-n Tr V(H))`, as the monic polynomial `sum_k a_k mu^k / a_n`.
pub fn mean_perm_poly_general(v: &Potential, n: usize) -> Result<Poly> {
    let a = perm_poly_moment_coeffs(v, n)?;
    let lead = a[n];
    if !(lead.abs() > 1e-300) {
        return Err(Error::Conditioning {
            op: "mean_perm_poly_general",
            msg: format!("normalisation a_n = {lead:e} vanishes"),
        });
    }
    let mut coeffs: Vec<C64> = a.iter().map(|&x| C64::new(x / lead, 0.0)).collect();
    coeffs[n] = C64::new(1.0, 0.0);
    Ok(Poly::new(coeffs))
}

/// `<Per(mu I - H)>` over the `n x n` GUE: `i^n pi_n(-i mu)`.
pub fn mean_perm_poly_gue(n: usize, mu: C64) -> C64 {
    i_pow(n) * hermite_monic(n, n as f64, C64::new(0.0, -1.0) * mu)
}

/// `<Per(mu I - H)>` over the `n x n` GOE: `i^n 2^(-n/2) pi_n(-i sqrt(2) mu)`.
pub fn mean_perm_poly_goe(n: usize, mu: C64) -> C64 {
    let x = C64::new(0.0, -(2f64.sqrt())) * mu;
    i_pow(n) * hermite_monic(n, n as f64, x) / 2f64.powf(n as f64 / 2.0)
}

/// Coefficients of [`mean_perm_poly_gue`] as a polynomial in `mu`.
pub fn mean_perm_poly_gue_poly(n: usize) -> Poly {
    hermite_mean_poly(n, 1.0)
}

/// Coefficients of [`mean_perm_poly_goe`] as a polynomial in `mu`.
pub fn mean_perm_poly_goe_poly(n: usize) -> Poly {
    hermite_mean_poly(n, 2f64.sqrt())
}

// i^n s^-n pi_n(-i s mu), expanded in powers of mu
fn hermite_mean_poly(n: usize, s: f64) -> Poly {
    let c = RecurrenceCoeffs::hermite(n as f64, n + 1).monomial_coeffs(n);
    let coeffs = c
        .iter()
        .enumerate()
        .map(|(k, &ck)| i_pow(n) * i_pow(3 * k) * (ck * s.powi(k as i32 - n as i32)))
        .collect();
    Poly::new(coeffs)
}

/// `<det(x - H) det(y - H)>` over the `n x n` GUE:
/// `[pi_{n+1}(x) pi_n(y) - pi_n(x) pi_{n+1}(y)] / (x - y)`.
///
/// Coincident arguments have no value in this form; use
/// [`char_two_point_gue_confluent`].
pub fn char_two_point_gue(n: usize, x: C64, y: C64) -> Result<C64> {
    let scale = 1f64.max(x.norm()).max(y.norm());
    if (x - y).norm() <= 1e-12 * scale {
        return Err(Error::domain(
            "char_two_point_gue",
            "coincident arguments divide by zero; use the confluent form",
        ));
    }
    let nf = n as f64;
    let a = hermite_monic_scaled(n, nf, x);
    let b = hermite_monic_scaled(n, nf, y);
    let num = a.pi_next * b.pi - a.pi * b.pi_next;
    Ok(num / (x - y) * (a.log_scale + b.log_scale).exp())
}

/// `<det(x - H)^2>` over the `n x n` GUE, the `y -> x` limit of
/// [`char_two_point_gue`]: `pi_n(x) pi'_{n+1}(x) - pi_{n+1}(x) pi'_n(x)`.
pub fn char_two_point_gue_confluent(n: usize, x: C64) -> C64 {
    let a = hermite_monic_scaled(n, n as f64, x);
    (a.pi * a.d_pi_next - a.pi_next * a.d_pi) * (2.0 * a.log_scale).exp()
}

/// `<p(mu1) p(mu2)>` over the `n x n` GUE, equal to
/// `<det(-i mu1 - H) det(i mu2 - H)>`.
pub fn two_point_gue(n: usize, mu1: C64, mu2: C64) -> Result<C64> {
    let i = C64::new(0.0, 1.0);
    char_two_point_gue(n, -i * mu1, i * mu2).map_err(|_| {
        Error::domain(
            "two_point_gue",
            "mu1 = -mu2 is the confluent point; use two_point_gue_confluent",
        )
    })
}

/// `<p(mu) p(-mu)>` over the `n x n` GUE.
pub fn two_point_gue_confluent(n: usize, mu: C64) -> C64 {
    char_two_point_gue_confluent(n, C64::new(0.0, -1.0) * mu)
}

/// `<d(mu1) d(mu2)> / <d(mu1)^2>` for the `n x n` GUE at `mu1 = mu` and
/// `mu2 = mu + delta / (pi n rho(mu))`, `rho` the semicircle density.
/// Tends to `sin(delta) / delta` for large `n`.
pub fn dyson_kernel_ratio(n: usize, mu: f64, delta: f64) -> Result<f64> {
    if !(mu > -2.0 && mu < 2.0) {
        return Err(Error::domain(
            "dyson_kernel_ratio",
            format!("mu = {mu} is outside the bulk (-2, 2)"),
        ));
    }
    if n == 0 {
        return Err(Error::domain(
            "dyson_kernel_ratio",
            "dimension must be at least 1",
        ));
    }
    if delta == 0.0 {
        return Ok(1.0);
    }
    let nf = n as f64;
    let rho = (4.0 - mu * mu).sqrt() / (2.0 * PI);
    let mu2 = mu + delta / (PI * nf * rho);
    let a = hermite_monic_scaled(n, nf, C64::new(mu, 0.0));
    let b = hermite_monic_scaled(n, nf, C64::new(mu2, 0.0));
    let num = (a.pi_next * b.pi - a.pi * b.pi_next) / (mu - mu2);
    let den = a.pi * a.d_pi_next - a.pi_next * a.d_pi;
    Ok((num / den).re * (b.log_scale - a.log_scale).exp())
}

/// `E[(mu + g)^j]` for `j = 0..=n`, `g` centred Gaussian of the given variance.
fn shifted_moments(mu: C64, variance: f64, n: usize) -> Vec<C64> {
    (0..=n)
        .map(|j| {
            (0..=j)
                .step_by(2)
                .map(|i| {
                    mu.powu((j - i) as u32) * binomial(j, i) * gaussian_moment_var(i, variance)
                })
                .sum()
        })
        .collect()
}

/// `<p(mu1) p(mu2)>` over the `n x n` GOE as
/// `E[((mu1 + a)(mu2 - b) + R)^n]` with `a, b ~ N(0, 1/(2n))` and
/// `R = |q12|^2 + |q3|^2 ~ Gamma(2, 1/(2n))`, expanded into Gaussian and
/// Gamma moments.
pub fn two_point_goe(n: usize, mu1: C64, mu2: C64) -> Result<C64> {
    if n == 0 {
        return Err(Error::domain(
            "two_point_goe",
            "dimension must be at least 1",
        ));
    }
    if n > TWO_POINT_GOE_MAX_N {
        return Err(Error::size("two_point_goe", n, TWO_POINT_GOE_MAX_N));
    }
    let var = 1.0 / (2.0 * n as f64);
    let ea = shifted_moments(mu1, var, n);
    let eb = shifted_moments(mu2, var, n);
    Ok((0..=n)
        .map(|j| {
            let m = n - j;
            let er = factorial(m + 1) * var.powi(m as i32);
            ea[j] * eb[j] * (binomial(n, j) * er)
        })
        .sum())
}

/// Right-hand side of the two-point Gaussian duality for a `2 x 2`
/// Hermitian `q` with weight `exp(-(N/2) Tr q^2)`:
/// `E[Per(diag(mu1, mu2) - q)^N] = E[((mu1 - q11)(mu2 - q22) + |q12|^2)^N]`,
/// expanded with `q_ii ~ N(0, 1/N)` and `|q12|^2 ~ Exp(mean 1/N)`.
pub fn maingau_moment(mu1: C64, mu2: C64, n: usize) -> Result<C64> {
    if n == 0 {
        return Err(Error::domain("maingau_rhs", "N must be at least 1"));
    }
    if n > MOMENT_MAX_N {
        return Err(Error::size("maingau_rhs", n, MOMENT_MAX_N));
    }
    let nf = n as f64;
    let ea = shifted_moments(mu1, 1.0 / nf, n);
    let eb = shifted_moments(mu2, 1.0 / nf, n);
    Ok((0..=n)
        .map(|j| {
            let m = n - j;
            let er = factorial(m) / nf.powi(m as i32);
            ea[j] * eb[j] * (binomial(n, j) * er)
        })
        .sum())
}

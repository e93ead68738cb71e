use crate::perm::per_ryser;
use crate::{CMatrix, Error, Poly, Result, C64};

pub const PERM_POLY_MAX_N: usize = 14;
pub const PERM_POLY_RYSER_MAX_N: usize = 24;

/// Coefficients of `Per(mu I - A)` from sums of principal permanents:
/// the coefficient of `mu^(n-k)` is `(-1)^k sum_{|S| = k} Per(A[S, S])`.
pub fn perm_poly(a: &CMatrix) -> Result<Poly> {
    let n = a.n();
    if n > PERM_POLY_MAX_N {
        return Err(Error::size("perm_poly", n, PERM_POLY_MAX_N));
    }
    let mut sums = vec![C64::new(0.0, 0.0); n + 1];
    sums[0] = C64::new(1.0, 0.0);
    let mut idx = Vec::with_capacity(n);
    for mask in 1u32..(1u32 << n) {
        idx.clear();
        idx.extend((0..n).filter(|&i| mask & (1 << i) != 0));
        sums[idx.len()] += per_ryser(&a.principal(&idx))?;
    }
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    for (k, s) in sums.into_iter().enumerate() {
        coeffs[n - k] = if k % 2 == 0 { s } else { -s };
    }
    Ok(Poly::new(coeffs))
}

/// Same polynomial as [`perm_poly`] from one polynomial-valued Ryser pass:
/// for each column subset `S` the row sums of `mu I - A` restricted to `S`
/// are `mu [i in S] - r_i`, so each term is
/// `prod_{i not in S} (-r_i) * prod_{i in S} (mu - r_i)`.
/// Cost `O(2^n n^2)` instead of `O(3^n n)`.
pub fn perm_poly_ryser(a: &CMatrix) -> Result<Poly> {
    let n = a.n();
    if n > PERM_POLY_RYSER_MAX_N {
        return Err(Error::size("perm_poly_ryser", n, PERM_POLY_RYSER_MAX_N));
    }
    let cols: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)]).collect())
        .collect();
    let mut r = vec![C64::new(0.0, 0.0); n];
    let mut in_set = vec![false; n];
    let mut size = 0usize;
    let mut acc = vec![C64::new(0.0, 0.0); n + 1];
    let mut q = vec![C64::new(0.0, 0.0); n + 1];
    for step in 1u64..(1u64 << n) {
        let j = step.trailing_zeros() as usize;
        if in_set[j] {
            for (ri, &x) in r.iter_mut().zip(&cols[j]) {
                *ri -= x;
            }
            size -= 1;
        } else {
            for (ri, &x) in r.iter_mut().zip(&cols[j]) {
                *ri += x;
            }
            size += 1;
        }
        in_set[j] = !in_set[j];

        let mut outside = C64::new(1.0, 0.0);
        q[0] = C64::new(1.0, 0.0);
        let mut deg = 0;
        for i in 0..n {
            if in_set[i] {
                // q <- q * (mu - r_i)
                q[deg + 1] = q[deg];
                for t in (1..=deg).rev() {
                    q[t] = q[t - 1] - q[t] * r[i];
                }
                q[0] = -q[0] * r[i];
                deg += 1;
            } else {
                outside *= -r[i];
            }
        }
        let sign = if (n - size) % 2 == 0 { 1.0 } else { -1.0 };
        let f = outside * sign;
        for t in 0..=deg {
            acc[t] += q[t] * f;
        }
    }
    acc[n] = C64::new(1.0, 0.0);
    Ok(Poly::new(acc))
}

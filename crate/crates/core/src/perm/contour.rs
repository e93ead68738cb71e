use std::f64::consts::PI;

use rayon::prelude::*;

use crate::{CMatrix, Error, Result, C64};

pub const PER_CONTOUR_MAX_N: usize = 8;
pub const PER_CONTOUR_FULL_MAX_N: usize = 2;

fn roots_of_unity(k: usize) -> Vec<C64> {
    (0..k)
        .map(|m| C64::from_polar(1.0, 2.0 * PI * m as f64 / k as f64))
        .collect()
}

fn check_nodes(op: &'static str, n: usize, k: usize) -> Result<()> {
    if k < n + 2 {
        return Err(Error::Aliasing { op, k, min: n + 2 });
    }
    Ok(())
}

/// Permanent as the coefficient of `z_1 ... z_n` in `prod_i (sum_j A[i,j] z_j)`,
/// extracted by the `K`-point trapezoid rule on each unit circle `|z_k| = 1`.
///
/// The integrand is a Laurent polynomial of degree at most `n` in every
/// variable, so the rule is exact to rounding once `K >= n + 2`. The sum is
/// invariant under a common rotation of all `z_k`, which lets the first node
/// be pinned and leaves `K^(n-1)` grid points.
pub fn per_contour(a: &CMatrix, k: usize) -> Result<C64> {
    let n = a.n();
    if n > PER_CONTOUR_MAX_N {
        return Err(Error::size("per_contour", n, PER_CONTOUR_MAX_N));
    }
    check_nodes("per_contour", n, k)?;
    let w = roots_of_unity(k);
    // table[j][m] = column j of A times w^m
    let table: Vec<Vec<Vec<C64>>> = (0..n)
        .map(|j| {
            (0..k)
                .map(|m| (0..n).map(|i| a[(i, j)] * w[m]).collect())
                .collect()
        })
        .collect();
    let first: Vec<C64> = table[0][0].clone();
    if n == 1 {
        return Ok(first[0]);
    }
    let ctx = Walk {
        n,
        k,
        w: &w,
        table: &table,
    };
    let partial: Vec<C64> = (0..k)
        .into_par_iter()
        .map(|m| {
            let mut levels = vec![vec![C64::new(0.0, 0.0); n]; n + 1];
            for i in 0..n {
                levels[2][i] = first[i] + table[1][m][i];
            }
            ctx.descend(2, m % k, &mut levels)
        })
        .collect();
    let total: C64 = partial.iter().sum();
    Ok(total / (k as f64).powi(n as i32 - 1))
}

struct Walk<'a> {
    n: usize,
    k: usize,
    w: &'a [C64],
    table: &'a [Vec<Vec<C64>>],
}

impl Walk<'_> {
    // levels[d] holds the row sums over columns 0..d.
    fn descend(&self, depth: usize, phase: usize, levels: &mut [Vec<C64>]) -> C64 {
        if depth == self.n {
            let prod = levels[depth].iter().fold(C64::new(1.0, 0.0), |p, &r| p * r);
            return prod * self.w[(self.k - phase) % self.k];
        }
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..self.k {
            let (lo, hi) = levels.split_at_mut(depth + 1);
            let col = &self.table[depth][m];
            for i in 0..self.n {
                hi[0][i] = lo[depth][i] + col[i];
            }
            acc += self.descend(depth + 1, (phase + m) % self.k, levels);
        }
        acc
    }
}

/// [`per_contour`] with the smallest alias-free node count `K = n + 2`.
pub fn per_contour_default(a: &CMatrix) -> Result<C64> {
    per_contour(a, a.n() + 2)
}

/// Permanent as the coefficient of `prod_k w_k z_k` in `exp(sum_ij w_i A[i,j] z_j)`,
/// discretising all `2n` circles with `K` nodes each.
///
/// Unlike the reduced form the integrand is entire rather than polynomial,
/// so the rule carries an aliasing error of order `|A|^K / K!`; `K` around
/// 24 reaches double precision for entries of order one.
pub fn per_contour_full(a: &CMatrix, k: usize) -> Result<C64> {
    let n = a.n();
    if n > PER_CONTOUR_FULL_MAX_N {
        return Err(Error::size("per_contour_full", n, PER_CONTOUR_FULL_MAX_N));
    }
    check_nodes("per_contour_full", n, k)?;
    let w = roots_of_unity(k);
    let points = k.pow(2 * n as u32);
    let mut total = C64::new(0.0, 0.0);
    let mut idx = vec![0usize; 2 * n];
    for p in 0..points {
        let mut rem = p;
        for d in idx.iter_mut() {
            *d = rem % k;
            rem /= k;
        }
        let (wi, zi) = idx.split_at(n);
        let mut expo = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                expo += w[wi[i]] * a[(i, j)] * w[zi[j]];
            }
        }
        let phase: usize = idx.iter().sum();
        total += expo.exp() * w[(k - phase % k) % k];
    }
    Ok(total / points as f64)
}

use crate::{CMatrix, Error, Result, C64};

pub const PER_NAIVE_MAX_N: usize = 10;
pub const PER_EXACT_MAX_N: usize = 32;

/// Permanent by explicit enumeration of all permutations.
pub fn per_naive(a: &CMatrix) -> Result<C64> {
    let n = a.n();
    if n > PER_NAIVE_MAX_N {
        return Err(Error::size("per_naive", n, PER_NAIVE_MAX_N));
    }
    fn walk(a: &CMatrix, row: usize, used: u32, prod: C64) -> C64 {
        if row == a.n() {
            return prod;
        }
        let mut acc = C64::new(0.0, 0.0);
        for col in 0..a.n() {
            if used & (1 << col) == 0 {
                acc += walk(a, row + 1, used | (1 << col), prod * a[(row, col)]);
            }
        }
        acc
    }
    Ok(walk(a, 0, 0, C64::new(1.0, 0.0)))
}

/// Ryser's inclusion-exclusion formula
/// `Per(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} A[i, j]`,
/// walking column subsets in Gray-code order so each step updates the row
/// sums in `O(n)`.
pub fn per_ryser(a: &CMatrix) -> Result<C64> {
    let n = a.n();
    if n > PER_EXACT_MAX_N {
        return Err(Error::size("per_ryser", n, PER_EXACT_MAX_N));
    }
    let cols = transpose_rows(a);
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut in_set = vec![false; n];
    let mut size = 0usize;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        let col = &cols[j * n..(j + 1) * n];
        if in_set[j] {
            for (r, &c) in row_sums.iter_mut().zip(col) {
                *r -= c;
            }
            size -= 1;
        } else {
            for (r, &c) in row_sums.iter_mut().zip(col) {
                *r += c;
            }
            size += 1;
        }
        in_set[j] = !in_set[j];
        let prod = row_sums.iter().fold(C64::new(1.0, 0.0), |p, &r| p * r);
        if (n - size) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}

/// Glynn's formula
/// `Per(A) = 2^{1-n} sum_{delta, delta_1 = 1} (prod_k delta_k) prod_j sum_i delta_i A[i, j]`
/// with sign vectors visited in Gray-code order.
pub fn per_glynn(a: &CMatrix) -> Result<C64> {
    let n = a.n();
    if n > PER_EXACT_MAX_N {
        return Err(Error::size("per_glynn", n, PER_EXACT_MAX_N));
    }
    let mut col_sums: Vec<C64> = (0..n).map(|j| (0..n).map(|i| a[(i, j)]).sum()).collect();
    let mut delta = vec![1.0f64; n];
    let mut sign = 1.0f64;
    let mut total = col_sums.iter().fold(C64::new(1.0, 0.0), |p, &s| p * s);
    for k in 1u64..(1u64 << (n - 1)) {
        let i = k.trailing_zeros() as usize + 1;
        delta[i] = -delta[i];
        sign = -sign;
        let row = a.row(i);
        let f = 2.0 * delta[i];
        for (s, &x) in col_sums.iter_mut().zip(row) {
            *s += x * f;
        }
        let prod = col_sums.iter().fold(C64::new(1.0, 0.0), |p, &s| p * s);
        total += prod * sign;
    }
    Ok(total / 2f64.powi(n as i32 - 1))
}

/// Column-major copy of the entries.
fn transpose_rows(a: &CMatrix) -> Vec<C64> {
    let n = a.n();
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            out.push(a[(i, j)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_and_all_ones() {
        for n in 1..=6 {
            let id = CMatrix::identity(n);
            assert_eq!(per_naive(&id).unwrap(), c(1.0, 0.0));
            assert!((per_ryser(&id).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
            assert!((per_glynn(&id).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        }
        let ones = CMatrix::from_fn(3, |_, _| c(1.0, 0.0));
        assert_eq!(per_naive(&ones).unwrap(), c(6.0, 0.0));
        assert!((per_ryser(&ones).unwrap() - c(6.0, 0.0)).norm() < 1e-13);
        assert!((per_glynn(&ones).unwrap() - c(6.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn two_by_two_expansion() {
        let (a, b, cc, d) = (c(1.0, 2.0), c(-0.5, 1.0), c(3.0, 0.25), c(0.0, -1.5));
        let m = CMatrix::from_rows(&[vec![a, b], vec![cc, d]]).unwrap();
        let expect = a * d + b * cc;
        assert!((per_naive(&m).unwrap() - expect).norm() < 1e-14);
        assert!((per_ryser(&m).unwrap() - expect).norm() < 1e-14);
        assert!((per_glynn(&m).unwrap() - expect).norm() < 1e-14);
    }

    #[test]
    fn diagonal_is_product() {
        let d = [c(2.0, 0.0), c(0.0, 1.0), c(-1.5, 0.5), c(3.0, -2.0)];
        let expect = d.iter().fold(c(1.0, 0.0), |p, &x| p * x);
        let m = CMatrix::diag(&d);
        assert!((per_ryser(&m).unwrap() - expect).norm() < 1e-13);
        assert!((per_glynn(&m).unwrap() - expect).norm() < 1e-13);
    }

    #[test]
    fn one_by_one() {
        let m = CMatrix::new(1, vec![c(2.5, -1.0)]).unwrap();
        assert_eq!(per_ryser(&m).unwrap(), c(2.5, -1.0));
        assert_eq!(per_glynn(&m).unwrap(), c(2.5, -1.0));
        assert_eq!(per_naive(&m).unwrap(), c(2.5, -1.0));
    }

    #[test]
    fn size_guards() {
        assert!(matches!(
            per_naive(&CMatrix::identity(11)),
            Err(Error::Size { .. })
        ));
        assert!(matches!(
            per_ryser(&CMatrix::identity(33)),
            Err(Error::Size { .. })
        ));
        assert!(matches!(
            per_glynn(&CMatrix::identity(33)),
            Err(Error::Size { .. })
        ));
    }
}

//! Factorials, binomials and Gaussian moments.

/// `n!` as a float. Exact up to 22!, overflows past 170!.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `ln(n!)`.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(k-1)!!` for even `k`, i.e. `E[g^k]` for a unit-variance Gaussian; zero for odd `k`.
pub fn gaussian_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    (1..k).step_by(2).fold(1.0, |acc, j| acc * j as f64)
}

/// `E[g^k]` for a centred real Gaussian of the given variance.
pub fn gaussian_moment_var(k: usize, variance: f64) -> f64 {
    gaussian_moment(k) * variance.powi((k / 2) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(5), 120.0);
        assert!((ln_factorial(20) - factorial(20).ln()).abs() < 1e-12);
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 5), 0.0);
        assert_eq!(gaussian_moment(4), 3.0);
        assert_eq!(gaussian_moment(6), 15.0);
        assert_eq!(gaussian_moment(3), 0.0);
        assert!((gaussian_moment_var(2, 0.5) - 0.5).abs() < 1e-15);
    }
}

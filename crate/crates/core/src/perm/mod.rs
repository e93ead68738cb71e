//! Exact and estimated matrix permanents and permanental polynomials.
//!
//! All exact kernels compute `Per(A) = sum_sigma prod_i A[i, sigma(i)]`:
//!
//! | kernel              | cost           | max n |
//! |---------------------|----------------|-------|
//! | [`per_naive`]       | `O(n! n)`      | 10    |
//! | [`per_ryser`]       | `O(2^n n)`     | 32    |
//! | [`per_glynn`]       | `O(2^n n)`     | 32    |
//! | [`per_contour`]     | `O(K^(n-1) n)` | 8     |
//!
//! [`perm_poly`] returns the coefficients of `Per(mu I - A)` from principal
//! permanents; [`perm_poly_ryser`] computes the same polynomial with a single
//! polynomial-valued inclusion-exclusion pass and is used for root clouds.

mod contour;
mod gaussian;
mod kernels;
mod poly;

pub use contour::{
    per_contour, per_contour_default, per_contour_full, PER_CONTOUR_FULL_MAX_N, PER_CONTOUR_MAX_N,
};
pub use gaussian::per_gaussian_estimate;
pub use kernels::{per_glynn, per_naive, per_ryser, PER_EXACT_MAX_N, PER_NAIVE_MAX_N};
pub use poly::{perm_poly, perm_poly_ryser, PERM_POLY_MAX_N, PERM_POLY_RYSER_MAX_N};

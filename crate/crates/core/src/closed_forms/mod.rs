//! Closed-form expectations, group integrals and large-N potentials.
//!
//! Everything here is deterministic and serves as the oracle side of the
//! Monte-Carlo comparisons in [`crate::montecarlo`] and [`crate::verify`].

mod asymptotics;
mod circular;
mod gaussian;
mod group;

pub use asymptotics::{asymptotic_phi, density_oracle, semicircle, AsymptoticProfile, PhiKind};
pub use circular::{
    fk_rank_one_quadrature, fk_rank_one_series, two_point_cue, two_point_cue_integral,
    two_point_ginibre, two_point_ginibre_integral,
};
pub use gaussian::{
    char_two_point_gue, char_two_point_gue_confluent, dyson_kernel_ratio, maingau_moment,
    mean_perm_poly_general, mean_perm_poly_goe, mean_perm_poly_goe_poly, mean_perm_poly_gue,
    mean_perm_poly_gue_poly, perm_poly_moment_coeffs, two_point_goe, two_point_gue,
    two_point_gue_confluent, MEAN_PERM_POLY_GENERAL_MAX_N, TWO_POINT_GOE_MAX_N,
};
pub use group::{complete_symmetric, hciz_full, hciz_rank_one, identity_check_symfun1};

mod common;

use common::{goe_cov, gue_cov, wick_mean, wick_two_point};
use permpoly::closed_forms::{
    mean_perm_poly_general, mean_perm_poly_goe, mean_perm_poly_gue, two_point_goe, two_point_gue,
};
use permpoly::ensembles::Potential;
use permpoly::C64;

fn points() -> Vec<C64> {
    vec![C64::new(0.3, 0.0), C64::new(-0.7, 0.4), C64::new(1.2, -0.5), C64::new(0.0, 0.9)]
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

#[test]
fn gue_mean_matches_wick() {
    for n in 1..=3 {
        for mu in points() {
            let w = wick_mean(n, mu, gue_cov);
            assert!(close(mean_perm_poly_gue(n, mu), w, 1e-12), "n={n} mu={mu}");
            let general = mean_perm_poly_general(&Potential::gaussian(), n).unwrap().eval(mu);
            assert!(close(general, w, 1e-10), "general n={n} mu={mu}");
        }
    }
}

#[test]
fn goe_mean_matches_wick() {
    for n in 1..=3 {
        for mu in points() {
            assert!(close(mean_perm_poly_goe(n, mu), wick_mean(n, mu, goe_cov), 1e-12), "n={n} mu={mu}");
        }
    }
}

#[test]
fn gue_two_point_matches_wick() {
    let pts = points();
    for n in 1..=3 {
        for (a, b) in pts.iter().zip(pts.iter().rev()) {
            let w = wick_two_point(n, *a, *b, gue_cov);
            assert!(close(two_point_gue(n, *a, *b).unwrap(), w, 1e-12), "n={n} a={a} b={b}");
        }
    }
}

#[test]
fn goe_two_point_matches_wick() {
    let pts = points();
    for n in 1..=3 {
        for (a, b) in pts.iter().zip(pts.iter().rev()) {
            let w = wick_two_point(n, *a, *b, goe_cov);
            assert!(close(two_point_goe(n, *a, *b).unwrap(), w, 1e-12), "n={n} a={a} b={b}");
        }
    }
}

//! Monte-Carlo estimators over the ensembles and over Haar `U(N)`.
//!
//! Every estimator is a pure function of its arguments and `seed`; see
//! [`crate::stats`] for the reproducibility contract.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::Serialize;

use crate::closed_forms::{maingau_moment, TWO_POINT_GOE_MAX_N};
use crate::ensembles::{sample_cue, sample_gue_scaled, EnsembleKind, EnsembleSpec};
use crate::perm::{per_ryser, perm_poly, PERM_POLY_MAX_N};
use crate::stats::{derive_seed, mc_scalar, mc_vector, MCEstimate};
use crate::{CMatrix, Error, Result, C64};

/// Fewest draws accepted by [`mc_mean_perm_poly`].
pub const MC_POLY_MIN_SAMPLES: usize = 100;

/// Per-coefficient Monte-Carlo mean of the permanental polynomial,
/// coefficients in ascending order. The leading coefficient is exactly 1.
pub fn mc_mean_perm_poly(
    spec: &EnsembleSpec,
    samples: usize,
    seed: u64,
) -> Result<Vec<MCEstimate>> {
    if spec.n > PERM_POLY_MAX_N {
        return Err(Error::size("mc_mean_perm_poly", spec.n, PERM_POLY_MAX_N));
    }
    if samples < MC_POLY_MIN_SAMPLES {
        return Err(Error::Usage(format!(
            "mc_mean_perm_poly needs at least {MC_POLY_MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let dim = spec.n + 1;
    mc_vector(samples, seed, dim, |rng| {
        let h = spec.sample(rng);
        let p = perm_poly(&h)?;
        Ok((0..dim).map(|k| p.coeff(k)).collect())
    })
}

/// Monte-Carlo `<p(mu)>` at a single point.
pub fn mc_mean_perm_poly_at(
    spec: &EnsembleSpec,
    mu: C64,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    mc_scalar(samples, seed, |rng| {
        let h = spec.sample(rng);
        per_ryser(&h.characteristic(mu))
    })
}

/// Monte-Carlo `<p(mu1) p(mu2)>`, or `<p(mu1) conj(p(mu2))>` when
/// `conjugate_second` is set. CUE and Ginibre require the conjugate pairing.
pub fn mc_two_point(
    spec: &EnsembleSpec,
    mu1: C64,
    mu2: C64,
    conjugate_second: bool,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    if !conjugate_second && matches!(spec.kind, EnsembleKind::Cue | EnsembleKind::Ginibre) {
        return Err(Error::Usage(format!(
            "{} two-point functions pair p with conj(p); pass the conjugate flag",
            spec.kind
        )));
    }
    mc_scalar(samples, seed, |rng| {
        let h = spec.sample(rng);
        let a = per_ryser(&h.characteristic(mu1))?;
        let b = per_ryser(&h.characteristic(mu2))?;
        Ok(if conjugate_second {
            a * b.conj()
        } else {
            a * b
        })
    })
}

/// Monte-Carlo `<d(mu1) d(mu2)>` with `d(mu) = det(mu I - H)`.
pub fn mc_char_two_point(
    spec: &EnsembleSpec,
    mu1: C64,
    mu2: C64,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    mc_scalar(samples, seed, |rng| {
        let h = spec.sample(rng);
        Ok(h.characteristic(mu1).det() * h.characteristic(mu2).det())
    })
}

/// Largest matrix size on either side of [`duality_check`].
pub const DUALITY_MAX_N: usize = 6;

/// Both sides of the Gaussian duality
/// `<Per(mu I_N - H)^n>_{N x N} = <Per(mu I_n - q)^N>_{n x n}`, where `H` is
/// GUE and `q` is `n x n` Hermitian with weight `exp(-(N/2) Tr q^2)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DualityReport {
    pub n: usize,
    pub big_n: usize,
    pub mu: f64,
    pub lhs: MCEstimate,
    pub rhs: MCEstimate,
    pub z: f64,
}

impl DualityReport {
    pub fn passed(&self, threshold: f64) -> bool {
        self.z < threshold
    }
}

pub fn duality_check(
    n: usize,
    big_n: usize,
    mu: f64,
    samples: usize,
    seed: u64,
) -> Result<DualityReport> {
    for (name, v) in [("n", n), ("N", big_n)] {
        if v == 0 {
            return Err(Error::domain(
                "duality_check",
                format!("{name} must be at least 1"),
            ));
        }
        if v > DUALITY_MAX_N {
            return Err(Error::size("duality_check", v, DUALITY_MAX_N));
        }
    }
    let mu_c = C64::new(mu, 0.0);
    let lhs = mc_scalar(samples, derive_seed(seed, "duality-lhs"), |rng| {
        let h = sample_gue_scaled(big_n, big_n as f64, rng);
        Ok(per_ryser(&h.characteristic(mu_c))?.powu(n as u32))
    })?;
    let rhs = mc_scalar(samples, derive_seed(seed, "duality-rhs"), |rng| {
        let q = sample_gue_scaled(n, big_n as f64, rng);
        Ok(per_ryser(&q.characteristic(mu_c))?.powu(big_n as u32))
    })?;
    let z = lhs.z_score_vs(&rhs);
    Ok(DualityReport {
        n,
        big_n,
        mu,
        lhs,
        rhs,
        z,
    })
}

/// How to evaluate the `2 x 2` Gaussian integral on the right of the
/// two-point identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaingauMethod {
    /// Termwise Gaussian and exponential moments, exact up to rounding.
    Moment,
    /// Direct sampling of `q`.
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MaingauValue {
    Exact(C64),
    Estimate(MCEstimate),
}

impl MaingauValue {
    pub fn value(&self) -> C64 {
        match self {
            Self::Exact(v) => *v,
            Self::Estimate(e) => e.mean,
        }
    }
}

/// `E[Per(diag(mu) - q)^N]` over `n x n` Hermitian `q` with weight
/// `exp(-(N/2) Tr q^2)`. Only `n = mus.len() = 2` is supported.
pub fn maingau_rhs(mus: &[C64], big_n: usize, method: MaingauMethod) -> Result<MaingauValue> {
    if mus.len() != 2 {
        return Err(Error::domain(
            "maingau_rhs",
            format!(
                "only the two-point case is implemented, got {} points",
                mus.len()
            ),
        ));
    }
    match method {
        MaingauMethod::Moment => maingau_moment(mus[0], mus[1], big_n).map(MaingauValue::Exact),
        MaingauMethod::MonteCarlo { samples, seed } => {
            if big_n == 0 {
                return Err(Error::domain("maingau_rhs", "N must be at least 1"));
            }
            let m = CMatrix::diag(mus);
            let est = mc_scalar(samples, seed, |rng| {
                let q = sample_gue_scaled(2, big_n as f64, rng);
                let d = CMatrix::from_fn(2, |i, j| m[(i, j)] - q[(i, j)]);
                Ok(per_ryser(&d)?.powu(big_n as u32))
            })?;
            Ok(MaingauValue::Estimate(est))
        }
    }
}

/// Sampling counterpart of [`crate::closed_forms::two_point_goe`] for sizes
/// past its moment-expansion cap: draws `a, b ~ N(0, 1/(2n))` and
/// `R ~ Gamma(2, 1/(2n))` and averages `((mu1 + a)(mu2 - b) + R)^n`.
pub fn two_point_goe_mc(
    n: usize,
    mu1: C64,
    mu2: C64,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    if n == 0 {
        return Err(Error::domain(
            "two_point_goe_mc",
            "dimension must be at least 1",
        ));
    }
    let var = 1.0 / (2.0 * n as f64);
    let sd = var.sqrt();
    mc_scalar(samples, seed, |rng| {
        let a: f64 = rng.sample::<f64, _>(StandardNormal) * sd;
        let b: f64 = rng.sample::<f64, _>(StandardNormal) * sd;
        let r: f64 = var * (rng.sample::<f64, _>(Exp1) + rng.sample::<f64, _>(Exp1));
        Ok(((mu1 + a) * (mu2 - b) + r).powu(n as u32))
    })
}

/// Whether `n` is past the exact GOE two-point expansion.
pub fn two_point_goe_needs_mc(n: usize) -> bool {
    n > TWO_POINT_GOE_MAX_N
}

/// Haar average of `exp(t (U diag(lambda) U*)_{11})`.
pub fn hciz_rank_one_mc(lambda: &[f64], t: C64, samples: usize, seed: u64) -> Result<MCEstimate> {
    let n = lambda.len();
    mc_scalar(samples, seed, |rng| {
        let u = sample_cue(n, rng);
        let s: f64 = (0..n).map(|k| u[(0, k)].norm_sqr() * lambda[k]).sum();
        Ok((t * s).exp())
    })
}

/// Haar average of `exp(beta Tr[U diag(lambda) U* diag(gamma)])`.
pub fn hciz_full_mc(
    lambda: &[f64],
    gamma: &[f64],
    beta: f64,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    let n = lambda.len();
    if gamma.len() != n {
        return Err(Error::domain(
            "hciz_full_mc",
            "spectra must have equal length",
        ));
    }
    mc_scalar(samples, seed, |rng| {
        let u = sample_cue(n, rng);
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                s += gamma[j] * u[(j, k)].norm_sqr() * lambda[k];
            }
        }
        Ok(C64::new((beta * s).exp(), 0.0))
    })
}

/// Haar average of `exp(Tr[A U + U* B*])`.
pub fn fk_haar_mc(a: &CMatrix, b: &CMatrix, samples: usize, seed: u64) -> Result<MCEstimate> {
    let n = a.n();
    if b.n() != n {
        return Err(Error::domain("fk_haar_mc", "A and B must have equal size"));
    }
    let b_adj = b.adjoint();
    mc_scalar(samples, seed, |rng| {
        let u = sample_cue(n, rng);
        Ok((a.matmul(&u).trace() + u.adjoint().matmul(&b_adj).trace()).exp())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{two_point_goe, two_point_gue};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn leading_coefficient_exact() {
        let est = mc_mean_perm_poly(&EnsembleSpec::ginibre(3), 200, 1).unwrap();
        assert_eq!(est[3].mean, c(1.0, 0.0));
        assert_eq!(est[3].stderr(), 0.0);
        assert!(mc_mean_perm_poly(&EnsembleSpec::gue(3), 50, 1).is_err());
    }

    #[test]
    fn cue_requires_conjugate_flag() {
        let spec = EnsembleSpec::cue(2);
        assert!(matches!(
            mc_two_point(&spec, c(0.1, 0.0), c(0.2, 0.0), false, 100, 1),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn gue_one_by_one() {
        let spec = EnsembleSpec::gue(1);
        let (m1, m2) = (c(0.3, 0.2), c(-0.4, 0.5));
        let p = mc_two_point(&spec, m1, m2, false, 20_000, 5).unwrap();
        assert!(p.z_score(m1 * m2 + 1.0) < 4.0);
        let d = mc_char_two_point(&spec, m1, m2, 20_000, 6).unwrap();
        assert!(d.z_score(m1 * m2 + 1.0) < 4.0);
    }

    #[test]
    fn maingau_methods_agree() {
        let mus = [c(0.3, 0.0), c(-0.1, 0.0)];
        let exact = maingau_rhs(&mus, 3, MaingauMethod::Moment).unwrap().value();
        assert!((exact - two_point_gue(3, mus[0], mus[1]).unwrap()).norm() < 1e-9);
        let MaingauValue::Estimate(est) = maingau_rhs(
            &mus,
            3,
            MaingauMethod::MonteCarlo {
                samples: 40_000,
                seed: 2,
            },
        )
        .unwrap() else {
            panic!("expected an estimate");
        };
        assert!(est.z_score(exact) < 4.0);
        assert!(maingau_rhs(&mus[..1], 3, MaingauMethod::Moment).is_err());
    }

    #[test]
    fn goe_sampler_matches_expansion() {
        let (m1, m2) = (c(0.5, 0.1), c(-0.2, 0.3));
        let est = two_point_goe_mc(4, m1, m2, 40_000, 9).unwrap();
        assert!(est.z_score(two_point_goe(4, m1, m2).unwrap()) < 4.0);
        assert!(two_point_goe_needs_mc(TWO_POINT_GOE_MAX_N + 1));
    }

    #[test]
    fn duality_trivial_case() {
        let r = duality_check(1, 1, 0.4, 20_000, 3).unwrap();
        assert!(r.passed(4.0), "{r:?}");
        assert!(duality_check(7, 1, 0.4, 100, 3).is_err());
    }
}

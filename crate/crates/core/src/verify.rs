//! Named check suites: exact identities as residuals, Monte-Carlo agreement
//! as z-scores.
//!
//! Every check draws from its own seed, derived from the suite seed and the
//! check name, so adding or filtering checks never changes the others.
//! Reports contain no timings and are byte-identical across reruns and
//! worker counts.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::closed_forms::{
    asymptotic_phi, dyson_kernel_ratio, fk_rank_one_series, hciz_full, hciz_rank_one,
    identity_check_symfun1, maingau_moment, mean_perm_poly_general, mean_perm_poly_goe_poly,
    mean_perm_poly_gue_poly, perm_poly_moment_coeffs, semicircle, two_point_cue,
    two_point_cue_integral, two_point_ginibre, two_point_ginibre_integral, two_point_goe,
    two_point_gue, PhiKind,
};
use crate::ensembles::{EnsembleSpec, Potential};
use crate::montecarlo::{
    duality_check, fk_haar_mc, hciz_full_mc, hciz_rank_one_mc, maingau_rhs, mc_char_two_point,
    mc_mean_perm_poly, mc_two_point, two_point_goe_mc, MaingauMethod,
};
use crate::perm::{
    per_contour_default, per_glynn, per_naive, per_ryser, perm_poly, perm_poly_ryser,
};
use crate::special::factorial;
use crate::stats::{derive_seed, MCEstimate};
use crate::{CMatrix, Error, Result, C64};

/// z-scores below this pass.
pub const Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Exact,
    Gue,
    Goe,
    Cue,
    Ginibre,
    GroupIntegrals,
    Duality,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = [
        "exact",
        "gue",
        "goe",
        "cue",
        "ginibre",
        "group-integrals",
        "duality",
        "all",
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => Self::Exact,
            "gue" => Self::Gue,
            "goe" => Self::Goe,
            "cue" => Self::Cue,
            "ginibre" => Self::Ginibre,
            "group-integrals" => Self::GroupIntegrals,
            "duality" => Self::Duality,
            "all" => Self::All,
            _ => {
                return Err(Error::Usage(format!(
                    "unknown suite '{s}'; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

/// Overrides for a suite run. `None` keeps the suite defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Matrix size for the Monte-Carlo checks (duality: the power `n`).
    pub n: Option<usize>,
    /// Duality: the matrix size `N`.
    pub big_n: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
}

impl VerifyOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            n: None,
            big_n: None,
            samples: None,
            seed,
        }
    }

    fn sizes(&self, default: &[usize]) -> Vec<usize> {
        self.n.map_or_else(|| default.to_vec(), |n| vec![n])
    }

    fn samples(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn seed(&self, check: &str) -> u64 {
        derive_seed(self.seed, check)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Componentwise z-score, passes below the threshold.
    Z,
    /// Error bound, passes at or below the threshold.
    Residual,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: C64,
    pub reference: C64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    pub metric: Metric,
    pub score: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn z(name: String, est: &MCEstimate, reference: C64) -> Self {
        let score = est.z_score(reference);
        Self {
            name,
            value: est.mean,
            reference,
            stderr: Some(est.stderr()),
            metric: Metric::Z,
            score,
            threshold: Z_THRESHOLD,
            passed: score < Z_THRESHOLD,
        }
    }

    fn z_pair(name: String, a: &MCEstimate, b: &MCEstimate) -> Self {
        let score = a.z_score_vs(b);
        Self {
            name,
            value: a.mean,
            reference: b.mean,
            stderr: Some(a.stderr().hypot(b.stderr())),
            metric: Metric::Z,
            score,
            threshold: Z_THRESHOLD,
            passed: score < Z_THRESHOLD,
        }
    }

    fn residual(name: String, value: C64, reference: C64, residual: f64, tol: f64) -> Self {
        Self {
            name,
            value,
            reference,
            stderr: None,
            metric: Metric::Residual,
            score: residual,
            threshold: tol,
            passed: residual <= tol,
        }
    }

    /// `|value - reference| / max(1, |reference|)`.
    fn close(name: String, value: C64, reference: C64, tol: f64) -> Self {
        let r = (value - reference).norm() / reference.norm().max(1.0);
        Self::residual(name, value, reference, r, tol)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, op) = match self.metric {
            Metric::Z => ("z", "<"),
            Metric::Residual => ("residual", "<="),
        };
        write!(
            f,
            "{} {}  value=({:.9e}, {:.9e})  reference=({:.9e}, {:.9e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value.re,
            self.value.im,
            self.reference.re,
            self.reference.im
        )?;
        if let Some(se) = self.stderr {
            write!(f, "  stderr={se:.3e}")?;
        }
        write!(f, "  {tag}={:.3e} {op} {:e}", self.score, self.threshold)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {})", self.suite.name(), self.seed)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(
            f,
            "{}: {} checks, {} failed",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failures()
        )
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Exact => exact(opts)?,
        Suite::Gue => gue(opts)?,
        Suite::Goe => goe(opts)?,
        Suite::Cue => cue(opts)?,
        Suite::Ginibre => ginibre(opts)?,
        Suite::GroupIntegrals => group_integrals(opts)?,
        Suite::Duality => duality(opts)?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Exact,
                Suite::Gue,
                Suite::Goe,
                Suite::Cue,
                Suite::Ginibre,
                Suite::GroupIntegrals,
                Suite::Duality,
            ] {
                all.extend(run_suite(s, opts)?.checks);
            }
            all
        }
    };
    Ok(SuiteReport {
        suite,
        seed: opts.seed,
        checks,
    })
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn gaussian_matrix(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) / 2f64.sqrt()
    })
}

const MU_A: C64 = C64::new(0.3, 0.0);
const MU_B: C64 = C64::new(-0.1, 0.0);

fn exact(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed("exact.kernels"));
    let mut worst = [0.0f64; 3];
    for t in 0..200 {
        let a = gaussian_matrix(1 + t % 8, &mut rng);
        let exact = per_naive(&a)?;
        let scale = exact.norm().max(1e-300);
        let got = [per_ryser(&a)?, per_glynn(&a)?, per_contour_default(&a)?];
        for (w, g) in worst.iter_mut().zip(got) {
            *w = w.max((g - exact).norm() / scale);
        }
    }
    let mut out = Vec::new();
    for (name, w, tol) in [
        ("ryser", worst[0], 1e-12),
        ("glynn", worst[1], 1e-12),
        ("contour", worst[2], 1e-9),
    ] {
        out.push(Check::residual(
            format!("exact.{name}_vs_naive[200 matrices, n<=8]"),
            c(w, 0.0),
            c(0.0, 0.0),
            w,
            tol,
        ));
    }
    let mut worst_poly = 0.0f64;
    for n in 1..=10 {
        let a = gaussian_matrix(n, &mut rng);
        let p = perm_poly(&a)?;
        let q = perm_poly_ryser(&a)?;
        let scale = p.coeffs().iter().fold(1.0f64, |m, z| m.max(z.norm()));
        worst_poly = worst_poly.max(p.max_coeff_diff(&q) / scale);
    }
    out.push(Check::residual(
        "exact.perm_poly_principal_vs_ryser[n<=10]".into(),
        c(worst_poly, 0.0),
        c(0.0, 0.0),
        worst_poly,
        1e-12,
    ));
    Ok(out)
}

fn gue(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    // mean polynomial, one check per non-leading coefficient
    for n in opts.sizes(&[2, 4]) {
        let name = format!("gue.mean_poly[n={n}]");
        let est = mc_mean_perm_poly(
            &EnsembleSpec::gue(n),
            opts.samples(100_000),
            opts.seed(&name),
        )?;
        let oracle = mean_perm_poly_gue_poly(n);
        for (k, e) in est.iter().enumerate().take(n) {
            out.push(Check::z(format!("{name}.c{k}"), e, oracle.coeff(k)));
        }
    }
    for n in opts.sizes(&[1, 2, 3]) {
        let name = format!("gue.two_point[n={n}]");
        let spec = EnsembleSpec::gue(n);
        let m = opts.samples(200_000);
        let est = mc_two_point(&spec, MU_A, MU_B, false, m, opts.seed(&name))?;
        out.push(Check::z(name, &est, two_point_gue(n, MU_A, MU_B)?));
        let name = format!("gue.relgue[n={n}]");
        let d = mc_char_two_point(
            &spec,
            -C64::i() * MU_A,
            C64::i() * MU_B,
            m,
            opts.seed(&name),
        )?;
        out.push(Check::z_pair(name, &est, &d));
    }
    for big_n in 1..=10 {
        let m = maingau_moment(MU_A, MU_B, big_n)?;
        out.push(Check::close(
            format!("gue.maingau_moment_vs_two_point[N={big_n}]"),
            m,
            two_point_gue(big_n, MU_A, MU_B)?,
            1e-9,
        ));
    }
    for big_n in opts.sizes(&[3]) {
        let name = format!("gue.maingau_mc[N={big_n}]");
        let method = MaingauMethod::MonteCarlo {
            samples: opts.samples(200_000),
            seed: opts.seed(&name),
        };
        if let crate::montecarlo::MaingauValue::Estimate(e) =
            maingau_rhs(&[MU_A, MU_B], big_n, method)?
        {
            out.push(Check::z(name, &e, maingau_moment(MU_A, MU_B, big_n)?));
        }
    }
    // mean polynomial for a general potential, Gaussian case
    for n in 1..=8 {
        let p = mean_perm_poly_general(&Potential::gaussian(), n)?;
        let r = mean_perm_poly_gue_poly(n);
        let d = p.max_coeff_diff(&r);
        out.push(Check::residual(
            format!("gue.general_potential_vs_hermite[n={n}]"),
            c(d, 0.0),
            c(0.0, 0.0),
            d,
            1e-8,
        ));
        let nf = n as f64;
        let a_n = perm_poly_moment_coeffs(&Potential::gaussian(), n)?[n];
        let expect =
            factorial(2 * n - 1) / (nf.powi(n as i32) * factorial(n - 1)) * (2.0 * PI / nf).sqrt();
        out.push(Check::residual(
            format!("gue.normalisation_a_n[n={n}]"),
            c(a_n, 0.0),
            c(expect, 0.0),
            (a_n / expect - 1.0).abs(),
            1e-9,
        ));
    }
    for delta in [0.5, 1.5, 3.0] {
        let r = dyson_kernel_ratio(200, 0.0, delta)?;
        let s = delta.sin() / delta;
        out.push(Check::residual(
            format!("gue.dyson_ratio[n=200, delta={delta}]"),
            c(r, 0.0),
            c(s, 0.0),
            (r - s).abs(),
            2e-2,
        ));
    }
    out.extend(potential_theory());
    Ok(out)
}

fn potential_theory() -> Vec<Check> {
    let phi = |x: f64, y: f64| asymptotic_phi(PhiKind::GuePermanental, c(x, y));
    let h = 3e-4;
    let mut worst = 0.0f64;
    for ix in -10i32..=10 {
        for iy in -12..=12 {
            let (x, y) = (ix as f64 * 0.1, iy as f64 * 0.25);
            if ix.abs() < 2 {
                continue;
            }
            let lap = (phi(x + h, y) + phi(x - h, y) + phi(x, y + h) + phi(x, y - h)
                - 4.0 * phi(x, y))
                / (h * h);
            worst = worst.max(lap.abs() / phi(x, y).abs().max(1.0));
        }
    }
    let mut out = vec![Check::residual(
        "gue.phi_harmonic[|x|>=0.2]".into(),
        c(worst, 0.0),
        c(0.0, 0.0),
        worst,
        1e-6,
    )];
    let d = 1e-6;
    for y in [0.0, 1.0, -1.0, 1.8, -1.8] {
        let right = (phi(2.0 * d, y) - phi(d, y)) / d;
        let left = (phi(-d, y) - phi(-2.0 * d, y)) / d;
        let expect = 4.0 * PI * semicircle(y, 2.0);
        out.push(Check::residual(
            format!("gue.phi_jump_semicircle[y={y}]"),
            c(right - left, 0.0),
            c(expect, 0.0),
            (right - left - expect).abs(),
            1e-3,
        ));
    }
    out
}

fn goe(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in opts.sizes(&[2, 4]) {
        let name = format!("goe.mean_poly[n={n}]");
        let est = mc_mean_perm_poly(
            &EnsembleSpec::goe(n),
            opts.samples(100_000),
            opts.seed(&name),
        )?;
        let oracle = mean_perm_poly_goe_poly(n);
        for (k, e) in est.iter().enumerate().take(n) {
            out.push(Check::z(format!("{name}.c{k}"), e, oracle.coeff(k)));
        }
    }
    for n in opts.sizes(&[2, 3]) {
        let spec = EnsembleSpec::goe(n);
        let m = opts.samples(200_000);
        let exact = two_point_goe(n, MU_A, MU_B)?;
        let name = format!("goe.two_point[n={n}]");
        let est = mc_two_point(&spec, MU_A, MU_B, false, m, opts.seed(&name))?;
        out.push(Check::z(name, &est, exact));
        let name = format!("goe.two_point_q_sampling[n={n}]");
        out.push(Check::z(
            name.clone(),
            &two_point_goe_mc(n, MU_A, MU_B, m, opts.seed(&name))?,
            exact,
        ));
        let name = format!("goe.relgoe[n={n}]");
        let d = mc_char_two_point(
            &spec,
            C64::i() * MU_A,
            -C64::i() * MU_B,
            m,
            opts.seed(&name),
        )?;
        out.push(Check::z(name, &d, exact));
    }
    Ok(out)
}

fn cue(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (a, b) = (c(0.5, 0.2), c(0.3, -0.4));
    let mut worst = 0.0f64;
    for n in 1..=20 {
        for (x, y) in [
            (a, b),
            (c(0.9, 0.3), c(-0.7, 0.6)),
            (c(1.4, 0.0), c(1.2, 0.5)),
        ] {
            let s = two_point_cue(n, x, y);
            worst = worst.max((s - two_point_cue_integral(n, x, y)?).norm() / s.norm());
        }
    }
    out.push(Check::residual(
        "cue.sum_vs_integral[N<=20]".into(),
        c(worst, 0.0),
        c(0.0, 0.0),
        worst,
        1e-10,
    ));
    for n in opts.sizes(&[1, 4]) {
        let name = format!("cue.two_point[n={n}]");
        let est = mc_two_point(
            &EnsembleSpec::cue(n),
            a,
            b,
            true,
            opts.samples(100_000),
            opts.seed(&name),
        )?;
        out.push(Check::z(name, &est, two_point_cue(n, a, b)));
    }
    // rank-one A = x y^T, B = w z^T: A B* = (y . conj z) x w*, v^2 = (y . conj z)(w* x)
    let n = 3;
    let x = [c(0.6, 0.1), c(-0.2, 0.4), c(0.3, 0.0)];
    let y = [c(0.5, -0.3), c(0.1, 0.2), c(-0.4, 0.1)];
    let w = [c(0.2, 0.5), c(0.7, 0.0), c(-0.1, -0.3)];
    let z = [c(-0.3, 0.4), c(0.6, 0.2), c(0.2, -0.5)];
    let am = CMatrix::from_fn(n, |i, j| x[i] * y[j]);
    let bm = CMatrix::from_fn(n, |i, j| w[i] * z[j]);
    let yz: C64 = (0..n).map(|k| y[k] * z[k].conj()).sum();
    let wx: C64 = (0..n).map(|k| w[k].conj() * x[k]).sum();
    let name = "cue.fk_rank_one[N=3]".to_string();
    let est = fk_haar_mc(&am, &bm, opts.samples(100_000), opts.seed(&name))?;
    out.push(Check::z(name, &est, fk_rank_one_series(yz * wx, n)?));
    Ok(out)
}

fn ginibre(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (a, b) = (c(0.5, 0.2), c(0.3, -0.4));
    let mut worst = 0.0f64;
    for n in 1..=20 {
        for (x, y) in [
            (a, b),
            (c(0.9, 0.3), c(-0.7, 0.6)),
            (c(1.4, 0.0), c(1.2, 0.5)),
        ] {
            let s = two_point_ginibre(n, x, y);
            worst = worst.max((s - two_point_ginibre_integral(n, x, y)?).norm() / s.norm());
        }
    }
    out.push(Check::residual(
        "ginibre.sum_vs_integral[N<=20]".into(),
        c(worst, 0.0),
        c(0.0, 0.0),
        worst,
        1e-10,
    ));
    for n in opts.sizes(&[1, 3]) {
        let name = format!("ginibre.two_point[n={n}]");
        let est = mc_two_point(
            &EnsembleSpec::ginibre(n),
            a,
            b,
            true,
            opts.samples(100_000),
            opts.seed(&name),
        )?;
        out.push(Check::z(name, &est, two_point_ginibre(n, a, b)));
    }
    Ok(out)
}

fn group_integrals(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let lambdas: [&[f64]; 2] = [&[0.8, -0.5], &[0.9, -0.3, 0.4]];
    let gammas: [&[f64]; 2] = [&[0.6, -0.7], &[0.5, 0.1, -0.8]];
    for (lam, gam) in lambdas.iter().zip(gammas) {
        let n = lam.len();
        let m = opts.samples(100_000);
        let t = c(0.7, 0.0);
        let name = format!("group.hciz_rank_one[N={n}]");
        out.push(Check::z(
            name.clone(),
            &hciz_rank_one_mc(lam, t, m, opts.seed(&name))?,
            hciz_rank_one(lam, t),
        ));
        let beta = 0.8;
        let name = format!("group.hciz_full[N={n}]");
        let exact = hciz_full(lam, gam, beta)?;
        out.push(Check::z(
            name.clone(),
            &hciz_full_mc(lam, gam, beta, m, opts.seed(&name))?,
            c(exact, 0.0),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed("group.symfun1"));
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let big_n = rng.random_range(2..=5usize);
        let xs: Vec<C64> = (0..big_n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let n = rng.random_range(-(big_n as i64 - 1)..=4);
        let (l, r) = match identity_check_symfun1(n, &xs) {
            Ok(v) => v,
            Err(Error::Conditioning { .. }) => continue,
            Err(e) => return Err(e),
        };
        worst = worst.max((l - r).norm() / r.norm().max(1.0));
    }
    out.push(Check::residual(
        "group.symfun1[100 random]".into(),
        c(worst, 0.0),
        c(0.0, 0.0),
        worst,
        1e-9,
    ));
    Ok(out)
}

fn duality(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let pairs = match (opts.n, opts.big_n) {
        (None, None) => vec![(2, 3), (3, 2), (1, 4)],
        (n, big_n) => vec![(n.unwrap_or(2), big_n.unwrap_or(3))],
    };
    let mut out = Vec::new();
    for (n, big_n) in pairs {
        let name = format!("duality[n={n}, N={big_n}, mu=0.5]");
        let r = duality_check(n, big_n, 0.5, opts.samples(200_000), opts.seed(&name))?;
        out.push(Check::z_pair(name, &r.lhs, &r.rhs));
    }
    Ok(out)
}

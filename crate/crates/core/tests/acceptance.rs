//! Acceptance run: prints one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p permpoly-core --test acceptance`.

use std::time::Instant;

use permpoly::ensembles::{EnsembleKind, EnsembleSpec};
use permpoly::roots::{conjecture_report, root_cloud, size_report};
use permpoly::stats::with_workers;
use permpoly::verify::{run_suite, Check, Suite, SuiteReport, VerifyOptions};

const SEED: u64 = 20_240_101;
const WORKERS: usize = 4;

/// Criterion parts whose matrix sizes are beyond exact permanental
/// polynomials on this hardware; they are run and reported, and may fail only
/// by hitting the size cap.
const INFEASIBLE: [&str; 2] = ["gue median |Re z| decreasing over n=8,16,32", "gue n=40 y-marginal L1 <= 0.2"];

struct Outcome {
    id: usize,
    title: &'static str,
    passed: bool,
    detail: String,
    seconds: f64,
    budget: Option<f64>,
}

impl Outcome {
    fn line(&self) -> String {
        let within = self.budget.map_or(true, |b| self.seconds < b);
        let ok = self.passed && within;
        let budget = self.budget.map_or(String::new(), |b| format!(" budget={b:.0}s"));
        format!(
            "criterion {:>2} {} {}  [{}] time={:.1}s{}",
            self.id,
            if ok { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.seconds,
            budget
        )
    }

    fn ok(&self) -> bool {
        self.passed && self.budget.map_or(true, |b| self.seconds < b)
    }
}

fn run(suite: Suite) -> (SuiteReport, f64) {
    let t = Instant::now();
    let r = with_workers(WORKERS, || run_suite(suite, &VerifyOptions::with_seed(SEED))).expect("suite runs");
    (r, t.elapsed().as_secs_f64())
}

fn select<'a>(r: &'a SuiteReport, prefixes: &[&str]) -> Vec<&'a Check> {
    r.checks.iter().filter(|c| prefixes.iter().any(|p| c.name.starts_with(p))).collect()
}

fn from_checks(id: usize, title: &'static str, checks: &[&Check], seconds: f64, budget: Option<f64>) -> Outcome {
    assert!(!checks.is_empty(), "criterion {id} selected no checks");
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let worst = checks.iter().map(|c| c.score / c.threshold).fold(0.0, f64::max);
    let detail = if failed.is_empty() {
        format!("{} checks, worst score/threshold {:.3}", checks.len(), worst)
    } else {
        format!("{} of {} checks failed: {}", failed.len(), checks.len(), failed.join(", "))
    };
    Outcome { id, title, passed: failed.is_empty(), detail, seconds, budget }
}

struct Part {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn root_parts() -> Vec<Part> {
    let mut parts = Vec::new();
    with_workers(WORKERS, || {
        for kind in [EnsembleKind::Gue, EnsembleKind::Goe] {
            let cloud = root_cloud(&EnsembleSpec::new(kind, 8).unwrap(), 500, SEED).unwrap();
            let closed = cloud.conjugate_closed_samples();
            parts.push(Part {
                name: if kind == EnsembleKind::Gue { "gue conjugate-pair closure" } else { "goe conjugate-pair closure" },
                passed: closed == cloud.n_samples(),
                detail: format!("{closed}/{} samples", cloud.n_samples()),
            });
        }

        let gue = conjecture_report(EnsembleKind::Gue, &[8, 16, 32], 500, SEED);
        let medians: Vec<String> = gue
            .sizes
            .iter()
            .map(|s| match (&s.median_abs_re, &s.skipped) {
                (Some(m), _) => format!("n={}: {m:.4}", s.n),
                (None, Some(why)) => format!("n={}: skipped ({why})", s.n),
                _ => format!("n={}: n/a", s.n),
            })
            .collect();
        parts.push(Part {
            name: INFEASIBLE[0],
            passed: gue.median_abs_re_decreasing == Some(true),
            detail: medians.join("; "),
        });
        let (m8, m16) = (gue.sizes[0].median_abs_re, gue.sizes[1].median_abs_re);
        parts.push(Part {
            name: "gue median |Re z| decreasing over n=8,16",
            passed: matches!((m8, m16), (Some(a), Some(b)) if b < a),
            detail: format!("{m8:?} -> {m16:?}"),
        });

        let big = EnsembleSpec::new(EnsembleKind::Gue, 40).and_then(|s| root_cloud(&s, 500, SEED));
        parts.push(match big {
            Ok(cloud) => {
                let l1 = size_report(&cloud).l1_distance;
                Part { name: INFEASIBLE[1], passed: l1.is_some_and(|v| v <= 0.2), detail: format!("L1 {l1:?}") }
            }
            Err(e) => Part { name: INFEASIBLE[1], passed: false, detail: format!("not evaluated: {e}") },
        });

        let gin = conjecture_report(EnsembleKind::Ginibre, &[8, 14], 500, SEED);
        let l1: Vec<Option<f64>> = gin.sizes.iter().map(|s| s.l1_distance).collect();
        parts.push(Part {
            name: "ginibre L1 to 1/pi decreasing n=8 -> 14",
            passed: gin.l1_decreasing == Some(true),
            detail: format!("{l1:?}"),
        });

        let cue = root_cloud(&EnsembleSpec::cue(12), 1000, SEED).unwrap();
        let l1 = size_report(&cue).l1_distance;
        parts.push(Part {
            name: "cue n=12 2-D L1 <= 0.35",
            passed: l1.is_some_and(|v| v <= 0.35),
            detail: format!("L1 {l1:?}"),
        });
    });
    parts
}

fn main() {
    let mut out = Vec::new();

    let (exact, t_exact) = run(Suite::Exact);
    out.push(from_checks(1, "kernel exactness", &select(&exact, &["exact.ryser_vs", "exact.glynn_vs", "exact.contour_vs"]), t_exact, Some(30.0)));

    let (gue, t_gue) = run(Suite::Gue);
    out.push(from_checks(2, "general-potential mean polynomial and normalisation", &select(&gue, &["gue.general_potential", "gue.normalisation"]), t_gue, None));
    out.push(from_checks(3, "GUE Monte-Carlo suite", &select(&gue, &["gue.mean_poly", "gue.two_point", "gue.relgue"]), t_gue, Some(180.0)));

    let (dual, t_dual) = run(Suite::Duality);
    let mut c4 = select(&gue, &["gue.maingau_moment"]);
    c4.extend(select(&dual, &["duality[n=2, N=3"]));
    out.push(from_checks(4, "two-point duality", &c4, t_dual, None));

    let (cue, t_cue) = run(Suite::Cue);
    out.push(from_checks(5, "CUE suite", &select(&cue, &["cue."]), t_cue, None));
    let (gin, t_gin) = run(Suite::Ginibre);
    out.push(from_checks(6, "Ginibre suite", &select(&gin, &["ginibre."]), t_gin, None));
    let (goe, t_goe) = run(Suite::Goe);
    out.push(from_checks(7, "GOE suite", &select(&goe, &["goe."]), t_goe, None));
    let (grp, t_grp) = run(Suite::GroupIntegrals);
    out.push(from_checks(8, "group integrals", &select(&grp, &["group."]), t_grp, None));
    out.push(from_checks(9, "Dyson kernel at n=200", &select(&gue, &["gue.dyson_ratio"]), t_gue, None));
    out.push(from_checks(10, "GUE potential harmonicity and jump", &select(&gue, &["gue.phi_"]), t_gue, None));

    let t = Instant::now();
    let parts = root_parts();
    let t_roots = t.elapsed().as_secs_f64();
    let failed: Vec<&str> = parts.iter().filter(|p| !p.passed).map(|p| p.name).collect();
    out.push(Outcome {
        id: 11,
        title: "root conjectures",
        passed: failed.is_empty(),
        detail: if failed.is_empty() { "all parts pass".into() } else { format!("failed: {}", failed.join(", ")) },
        seconds: t_roots,
        budget: Some(600.0),
    });

    let t = Instant::now();
    let mut differing = Vec::new();
    for (suite, first) in [
        (Suite::Exact, &exact),
        (Suite::Gue, &gue),
        (Suite::Goe, &goe),
        (Suite::Cue, &cue),
        (Suite::Ginibre, &gin),
        (Suite::GroupIntegrals, &grp),
        (Suite::Duality, &dual),
    ] {
        let again = with_workers(1, || run_suite(suite, &VerifyOptions::with_seed(SEED))).unwrap();
        if again.to_string() != first.to_string() {
            differing.push(suite.name());
        }
    }
    out.push(Outcome {
        id: 12,
        title: "determinism across worker counts",
        passed: differing.is_empty(),
        detail: if differing.is_empty() { "7 suites byte-identical, workers 4 vs 1".into() } else { format!("differ: {}", differing.join(", ")) },
        seconds: t.elapsed().as_secs_f64(),
        budget: None,
    });

    println!();
    for o in &out {
        println!("{}", o.line());
        if o.id == 11 {
            for p in &parts {
                println!("    {} {}  [{}]", if p.passed { "pass" } else { "fail" }, p.name, p.detail);
            }
        }
    }

    let unexpected: Vec<String> = out
        .iter()
        .filter(|o| !o.ok())
        .filter(|o| o.id != 11 || parts.iter().any(|p| !p.passed && !INFEASIBLE.contains(&p.name)) || !o.budget.map_or(true, |b| o.seconds < b))
        .map(|o| o.line())
        .collect();
    let mut problems = unexpected;
    for p in parts.iter().filter(|p| !p.passed && !p.detail.contains("exceeds")) {
        problems.push(format!("{} failed for a reason other than the size cap: {}", p.name, p.detail));
    }
    if !problems.is_empty() {
        eprintln!("unexpected acceptance failures:\n{}", problems.join("\n"));
        std::process::exit(1);
    }
}

use std::fs;
use std::path::Path;
use std::time::Instant;

use permpoly::closed_forms::{
    mean_perm_poly_general, mean_perm_poly_goe, mean_perm_poly_gue, two_point_cue,
    two_point_ginibre, two_point_goe, two_point_gue, two_point_gue_confluent, AsymptoticProfile,
    TWO_POINT_GOE_MAX_N,
};
use permpoly::ensembles::{EnsembleKind, EnsembleSpec};
use permpoly::montecarlo::{mc_mean_perm_poly_at, mc_two_point};
use permpoly::roots::{default_grid, root_cloud, size_report, Axis, GridSpec};
use permpoly::verify::{run_suite, Suite, VerifyOptions};
use permpoly::C64;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

const MAX_GRID_POINTS: usize = 2001;

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Failed(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn complex_json(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn verify(cfg: &RunConfig, suite: &str) -> Result<bool, CliError> {
    let suite = Suite::parse(suite)?;
    let opts = VerifyOptions { n: cfg.n, big_n: cfg.big_n, samples: cfg.samples, seed: cfg.seed };
    let report = run_suite(suite, &opts)?;
    let text = match cfg.format.unwrap_or(Format::Text) {
        Format::Text => format!("{report}\n"),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("report serialises")),
        Format::Csv => return Err(CliError::Usage("verify writes text or json".into())),
    };
    write_out(cfg.out.as_deref(), &text)?;
    Ok(report.passed())
}

fn mean_oracle(spec: &EnsembleSpec, mu: C64) -> Option<C64> {
    match spec.kind {
        EnsembleKind::Gue => Some(mean_perm_poly_gue(spec.n, mu)),
        EnsembleKind::Goe => Some(mean_perm_poly_goe(spec.n, mu)),
        EnsembleKind::UnitaryInvariant => {
            let v = spec.potential.as_ref()?;
            mean_perm_poly_general(v, spec.n).ok().map(|p| p.eval(mu))
        }
        EnsembleKind::Cue | EnsembleKind::Ginibre => None,
    }
}

fn two_point_oracle(spec: &EnsembleSpec, a: C64, b: C64) -> Option<C64> {
    let n = spec.n;
    match spec.kind {
        EnsembleKind::Gue => Some(two_point_gue(n, a, b).unwrap_or_else(|_| two_point_gue_confluent(n, a))),
        EnsembleKind::Goe if n <= TWO_POINT_GOE_MAX_N => two_point_goe(n, a, b).ok(),
        EnsembleKind::Cue => Some(two_point_cue(n, a, b)),
        EnsembleKind::Ginibre => Some(two_point_ginibre(n, a, b)),
        _ => None,
    }
}

pub fn estimate(cfg: &RunConfig, quantity: &str) -> Result<bool, CliError> {
    if matches!(cfg.format, Some(Format::Text | Format::Csv)) {
        return Err(CliError::Usage("estimate writes json".into()));
    }
    let spec = cfg.spec()?;
    let samples = cfg.samples.unwrap_or(100_000);
    let start = Instant::now();
    let (mus, est, oracle) = match quantity {
        "mean-poly" => {
            let mu = match cfg.mu.as_slice() {
                [] => C64::new(0.0, 0.0),
                [m] => *m,
                _ => return Err(CliError::Usage("mean-poly takes at most one --mu".into())),
            };
            let est = mc_mean_perm_poly_at(&spec, mu, samples, cfg.seed)?;
            (vec![mu], est, mean_oracle(&spec, mu))
        }
        "two-point" => {
            let [a, b] = cfg.mu.as_slice() else {
                return Err(CliError::Usage("two-point needs exactly two --mu values".into()));
            };
            let conj = matches!(spec.kind, EnsembleKind::Cue | EnsembleKind::Ginibre);
            let est = mc_two_point(&spec, *a, *b, conj, samples, cfg.seed)?;
            (vec![*a, *b], est, two_point_oracle(&spec, *a, *b))
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown quantity '{other}'; expected mean-poly or two-point"
            )))
        }
    };
    let doc = json!({
        "quantity": quantity,
        "ensemble": spec.kind.name(),
        "n": spec.n,
        "mu": mus.iter().map(|m| [m.re, m.im]).collect::<Vec<_>>(),
        "estimate": complex_json(est.mean),
        "stderr": { "re": est.stderr_re, "im": est.stderr_im },
        "oracle": oracle.map(complex_json),
        "z": oracle.map(|o| est.z_score(o)),
        "samples": est.n_samples,
        "seed": est.seed,
        "elapsed_s": start.elapsed().as_secs_f64(),
    });
    write_out(cfg.out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")))?;
    Ok(true)
}

fn grid_from(cfg: &RunConfig, default: GridSpec) -> Result<GridSpec, CliError> {
    let mut g = default;
    if let Some(w) = cfg.half_width {
        if !(w > 0.0 && w.is_finite()) {
            return Err(CliError::Usage("--half-width must be positive".into()));
        }
        g = GridSpec { nx: g.nx, ny: g.ny, ..GridSpec::square(w, 1) };
    }
    if let Some(b) = cfg.bins {
        if b == 0 {
            return Err(CliError::Usage("--bins must be positive".into()));
        }
        g.nx = b;
        g.ny = b;
    }
    Ok(g)
}

pub fn roots(cfg: &RunConfig) -> Result<bool, CliError> {
    if matches!(cfg.format, Some(Format::Text)) {
        return Err(CliError::Usage("roots writes csv and json".into()));
    }
    let spec = cfg.spec()?;
    let grid = grid_from(cfg, default_grid(spec.kind))?;
    let cloud = root_cloud(&spec, cfg.samples.unwrap_or(500), cfg.seed)?;
    let hist = cloud.histogram(&grid)?;
    let summary = json!({
        "ensemble": spec.kind.name(),
        "n": spec.n,
        "samples": cloud.n_samples(),
        "seed": cfg.seed,
        "grid": grid,
        "outside_grid": hist.outside,
        "report": size_report(&cloud),
    });
    let summary = format!("{}\n", serde_json::to_string_pretty(&summary).expect("json"));
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::Failed(format!("cannot create {}: {e}", dir.display())))?;
            write_out(Some(&dir.join("histogram.csv")), &hist.to_csv())?;
            write_out(Some(&dir.join("marginal_re.csv")), &hist.marginal(Axis::Re).to_csv())?;
            write_out(Some(&dir.join("marginal_im.csv")), &hist.marginal(Axis::Im).to_csv())?;
            write_out(Some(&dir.join("summary.json")), &summary)?;
        }
        None => write_out(None, &summary)?,
    }
    Ok(true)
}

pub fn asymptotics(cfg: &RunConfig) -> Result<bool, CliError> {
    if matches!(cfg.format, Some(Format::Text | Format::Json)) {
        return Err(CliError::Usage("asymptotics writes csv".into()));
    }
    let kind = cfg.require_ensemble()?;
    let profile = AsymptoticProfile::new(kind)?;
    let half = cfg.half_width.unwrap_or(if kind.is_hermitian() { 3.0 } else { 1.5 });
    if !(half > 0.0 && half.is_finite()) {
        return Err(CliError::Usage("--half-width must be positive".into()));
    }
    let mut points = cfg.bins.unwrap_or(61);
    if points < 2 {
        return Err(CliError::Usage("--bins must be at least 2".into()));
    }
    if points > MAX_GRID_POINTS {
        eprintln!("warning: --bins {points} clamped to {MAX_GRID_POINTS}");
        points = MAX_GRID_POINTS;
    }
    let step = 2.0 * half / (points - 1) as f64;
    let mut out = String::from("re,im,phi,density\n");
    for iy in 0..points {
        let y = -half + iy as f64 * step;
        for ix in 0..points {
            let x = -half + ix as f64 * step;
            let z = C64::new(x, y);
            let phi = profile.phi(z).map(|p| p.to_string()).unwrap_or_default();
            out.push_str(&format!("{x},{y},{phi},{}\n", profile.density(z)));
        }
    }
    write_out(cfg.out.as_deref(), &out)?;
    Ok(true)
}

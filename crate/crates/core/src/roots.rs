//! Roots of permanental polynomials and their empirical densities.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_forms::density_oracle;
use crate::ensembles::{EnsembleKind, EnsembleSpec};
use crate::perm::{perm_poly_ryser, PERM_POLY_RYSER_MAX_N};
use crate::stats::sample_rng;
use crate::{Error, Poly, Result, C64};

/// Backward-error bound every returned root satisfies.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;

const POLISH_ITERS: usize = 60;

/// `|p(z)| / sum_k |a_k| |z|^k`, the relative backward error of `z` as a root.
pub fn root_residual(p: &Poly, z: C64) -> f64 {
    let r = z.norm();
    let scale = p
        .coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, a| acc * r + a.norm());
    if scale == 0.0 {
        return 0.0;
    }
    p.eval(z).norm() / scale
}

/// All roots of `p` with multiplicity: eigenvalues of the companion matrix,
/// polished by simultaneous Aberth iteration.
pub fn poly_roots(p: &Poly) -> Result<Vec<C64>> {
    let d = p.degree();
    if p.is_zero() || d == 0 {
        return Err(Error::domain(
            "poly_roots",
            "polynomial must have degree at least 1",
        ));
    }
    let lead = p.leading();
    let monic: Vec<C64> = p.coeffs().iter().map(|&a| a / lead).collect();
    if d == 1 {
        return Ok(vec![-monic[0]]);
    }
    let mut comp = DMatrix::<C64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -monic[i];
    }
    let mut z: Vec<C64> = match Schur::try_new(comp, 1e-15, 10_000) {
        Some(s) => {
            let (_, t) = s.unpack();
            (0..d).map(|i| t[(i, i)]).collect()
        }
        // fall back to the usual Aberth starting circle
        None => {
            let r = monic.iter().take(d).fold(0.0f64, |a, c| a.max(c.norm())) + 1.0;
            (0..d)
                .map(|k| C64::from_polar(r, 2.0 * PI * (k as f64 + 0.25) / d as f64))
                .collect()
        }
    };
    let mp = Poly::new(monic);
    aberth(&mp, &mut z);
    let worst = z.iter().map(|&r| root_residual(&mp, r)).fold(0.0, f64::max);
    if !(worst <= ROOT_RESIDUAL_TOL) {
        return Err(Error::Convergence {
            op: "poly_roots",
            iterations: POLISH_ITERS,
            residual: worst,
        });
    }
    Ok(z)
}

fn aberth(p: &Poly, z: &mut [C64]) {
    let d = z.len();
    for _ in 0..POLISH_ITERS {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (v, dv) = p.eval_with_derivative(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let s: C64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| z[k] - z[j])
                .filter(|w| w.norm() > 0.0)
                .map(|w| w.inv())
                .sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            moved = moved.max(step.norm() / z[k].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
}

/// Roots of `M` sampled permanental polynomials, grouped by sample.
#[derive(Debug, Clone, Serialize)]
pub struct RootCloud {
    pub spec: EnsembleSpec,
    pub seed: u64,
    /// Sample-major: roots of sample `i` are `roots[i*n .. (i+1)*n]`.
    pub roots: Vec<C64>,
}

impl RootCloud {
    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn n_samples(&self) -> usize {
        self.roots.len() / self.spec.n
    }

    pub fn sample(&self, i: usize) -> &[C64] {
        let n = self.spec.n;
        &self.roots[i * n..(i + 1) * n]
    }

    /// Number of samples whose roots close under conjugation.
    pub fn conjugate_closed_samples(&self) -> usize {
        (0..self.n_samples())
            .filter(|&i| is_conjugate_closed(self.sample(i)))
            .count()
    }

    pub fn histogram(&self, grid: &GridSpec) -> Result<DensityHistogram> {
        density_histogram(&self.roots, grid)
    }
}

/// Greedy nearest-neighbour matching of each root with the conjugate of
/// another (or itself, when real), tolerance `1e-8` scaled by magnitude.
pub fn is_conjugate_closed(roots: &[C64]) -> bool {
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let target = roots[i].conj();
        let tol = 1e-8 * roots[i].norm().max(1.0);
        let best = (0..roots.len())
            .filter(|&j| !used[j] && j != i)
            .map(|j| (j, (roots[j] - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        used[i] = true;
        if roots[i].im.abs() <= tol {
            continue;
        }
        match best {
            Some((j, dist)) if dist <= tol => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// Samples `M` matrices, forms their permanental polynomials and collects
/// the roots. Sample `i` uses RNG stream `i`, so the cloud is independent of
/// the thread count.
pub fn root_cloud(spec: &EnsembleSpec, samples: usize, seed: u64) -> Result<RootCloud> {
    if spec.n > PERM_POLY_RYSER_MAX_N {
        return Err(Error::size("root_cloud", spec.n, PERM_POLY_RYSER_MAX_N));
    }
    if samples == 0 || spec.n == 0 {
        return Err(Error::domain(
            "root_cloud",
            "need at least one sample of size at least 1",
        ));
    }
    let per_sample: Vec<Result<Vec<C64>>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let h = spec.sample(&mut rng);
            poly_roots(&perm_poly_ryser(&h)?)
        })
        .collect();
    let mut roots = Vec::with_capacity(samples * spec.n);
    for r in per_sample {
        roots.extend(r?);
    }
    Ok(RootCloud {
        spec: spec.clone(),
        seed,
        roots,
    })
}

/// Rectangular binning of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn square(half_width: f64, bins: usize) -> Self {
        Self {
            x_min: -half_width,
            x_max: half_width,
            y_min: -half_width,
            y_max: half_width,
            nx: bins,
            ny: bins,
        }
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    fn validate(&self) -> Result<()> {
        let ok = self.nx > 0 && self.ny > 0 && self.x_max > self.x_min && self.y_max > self.y_min;
        if !ok {
            return Err(Error::domain(
                "GridSpec",
                "need positive bin counts and non-empty ranges",
            ));
        }
        Ok(())
    }

    /// Bin index `(ix, iy)` of `z`, if inside.
    pub fn locate(&self, z: C64) -> Option<(usize, usize)> {
        let fx = (z.re - self.x_min) / self.dx();
        let fy = (z.im - self.y_min) / self.dy();
        if !(fx >= 0.0 && fy >= 0.0) {
            return None;
        }
        let (ix, iy) = (fx as usize, fy as usize);
        (ix < self.nx && iy < self.ny).then_some((ix, iy))
    }

    pub fn center(&self, ix: usize, iy: usize) -> C64 {
        C64::new(
            self.x_min + (ix as f64 + 0.5) * self.dx(),
            self.y_min + (iy as f64 + 0.5) * self.dy(),
        )
    }
}

/// Normalised 2-D histogram; `counts[iy * nx + ix]`.
#[derive(Debug, Clone, Serialize)]
pub struct DensityHistogram {
    pub grid: GridSpec,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
    /// Points that fell inside the grid.
    pub total: u64,
    /// Points that fell outside and are not represented.
    pub outside: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    Re,
    Im,
}

/// One-dimensional marginal of a [`DensityHistogram`].
#[derive(Debug, Clone, Serialize)]
pub struct Marginal {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
}

pub fn density_histogram(points: &[C64], grid: &GridSpec) -> Result<DensityHistogram> {
    grid.validate()?;
    if points.is_empty() {
        return Err(Error::domain("density_histogram", "no points"));
    }
    let mut counts = vec![0u64; grid.nx * grid.ny];
    let mut outside = 0;
    for &z in points {
        match grid.locate(z) {
            Some((ix, iy)) => counts[iy * grid.nx + ix] += 1,
            None => outside += 1,
        }
    }
    let total = points.len() as u64 - outside;
    if total == 0 {
        return Err(Error::domain(
            "density_histogram",
            "every point lies outside the grid",
        ));
    }
    let area = grid.dx() * grid.dy();
    let density = counts
        .iter()
        .map(|&c| c as f64 / (total as f64 * area))
        .collect();
    Ok(DensityHistogram {
        grid: *grid,
        counts,
        density,
        total,
        outside,
    })
}

impl DensityHistogram {
    pub fn bin_area(&self) -> f64 {
        self.grid.dx() * self.grid.dy()
    }

    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_area()
    }

    pub fn marginal(&self, axis: Axis) -> Marginal {
        let g = &self.grid;
        let (bins, lo, hi, width) = match axis {
            Axis::Re => (g.nx, g.x_min, g.x_max, g.dx()),
            Axis::Im => (g.ny, g.y_min, g.y_max, g.dy()),
        };
        let mut counts = vec![0u64; bins];
        for iy in 0..g.ny {
            for ix in 0..g.nx {
                let b = if axis == Axis::Re { ix } else { iy };
                counts[b] += self.counts[iy * g.nx + ix];
            }
        }
        let density = counts
            .iter()
            .map(|&c| c as f64 / (self.total as f64 * width))
            .collect();
        Marginal {
            lo,
            hi,
            counts,
            density,
        }
    }

    /// `sum_bins |rho_hist - <rho>_bin| * area`, with the reference density
    /// averaged over an 8 x 8 midpoint sub-grid of each bin.
    pub fn l1_distance(&self, rho: impl Fn(C64) -> f64) -> f64 {
        const SUB: usize = 8;
        let g = &self.grid;
        let (dx, dy) = (g.dx(), g.dy());
        let mut l1 = 0.0;
        for iy in 0..g.ny {
            for ix in 0..g.nx {
                let mut avg = 0.0;
                for sy in 0..SUB {
                    for sx in 0..SUB {
                        let z = C64::new(
                            g.x_min + (ix as f64 + (sx as f64 + 0.5) / SUB as f64) * dx,
                            g.y_min + (iy as f64 + (sy as f64 + 0.5) / SUB as f64) * dy,
                        );
                        avg += rho(z);
                    }
                }
                avg /= (SUB * SUB) as f64;
                l1 += (self.density[iy * g.nx + ix] - avg).abs();
            }
        }
        l1 * dx * dy
    }

    pub fn to_csv(&self) -> String {
        let g = &self.grid;
        let mut out = String::from("re,im,count,density\n");
        for iy in 0..g.ny {
            for ix in 0..g.nx {
                let c = g.center(ix, iy);
                let k = iy * g.nx + ix;
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    c.re, c.im, self.counts[k], self.density[k]
                ));
            }
        }
        out
    }
}

impl Marginal {
    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn center(&self, b: usize) -> f64 {
        self.lo + (b as f64 + 0.5) * self.width()
    }

    /// `sum_bins |rho_hist - <rho>_bin| * width`, reference averaged over 16
    /// midpoints per bin.
    pub fn l1_distance(&self, rho: impl Fn(f64) -> f64) -> f64 {
        const SUB: usize = 16;
        let w = self.width();
        let mut l1 = 0.0;
        for (b, &d) in self.density.iter().enumerate() {
            let avg = (0..SUB)
                .map(|s| rho(self.lo + (b as f64 + (s as f64 + 0.5) / SUB as f64) * w))
                .sum::<f64>()
                / SUB as f64;
            l1 += (d - avg).abs();
        }
        l1 * w
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("coord,count,density\n");
        for b in 0..self.counts.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.center(b),
                self.counts[b],
                self.density[b]
            ));
        }
        out
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 0 {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

/// Root statistics at one matrix size.
#[derive(Debug, Clone, Serialize)]
pub struct SizeReport {
    pub n: usize,
    pub samples: usize,
    /// Set when this size could not be evaluated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    pub conjugate_closed_fraction: Option<f64>,
    /// Median `|Re z|` (Hermitian ensembles).
    pub median_abs_re: Option<f64>,
    /// Semicircle radius matched to the second moment of `Im z`, `2 sqrt(<y^2>)`
    /// (Hermitian ensembles).
    pub support_edge: Option<f64>,
    /// L1 distance of the `Im z` marginal (Hermitian) or of the 2-D histogram
    /// (CUE, Ginibre) to the conjectured limiting density.
    pub l1_distance: Option<f64>,
}

/// Trends across sizes; `None` when some size was skipped.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub ensemble: EnsembleKind,
    pub sizes: Vec<SizeReport>,
    pub median_abs_re_decreasing: Option<bool>,
    pub l1_decreasing: Option<bool>,
}

/// Grid on which a cloud of the given ensemble is compared with its oracle.
pub fn default_grid(kind: EnsembleKind) -> GridSpec {
    match kind {
        EnsembleKind::Gue => GridSpec {
            x_min: -3.0,
            x_max: 3.0,
            y_min: -3.0,
            y_max: 3.0,
            nx: 30,
            ny: 30,
        },
        EnsembleKind::Goe | EnsembleKind::UnitaryInvariant => GridSpec {
            x_min: -4.0,
            x_max: 4.0,
            y_min: -4.0,
            y_max: 4.0,
            nx: 32,
            ny: 32,
        },
        EnsembleKind::Cue | EnsembleKind::Ginibre => GridSpec::square(1.5, 20),
    }
}

/// Distance of a cloud to its conjectured limit, as used in [`SizeReport`].
pub fn cloud_l1_distance(cloud: &RootCloud) -> Result<f64> {
    let kind = cloud.spec.kind;
    let hist = cloud.histogram(&default_grid(kind))?;
    if kind.is_hermitian() {
        // the histogram is normalised over in-grid points; rescale to all roots
        let frac = hist.total as f64 / cloud.roots.len() as f64;
        let m = hist.marginal(Axis::Im);
        let l1 = m.l1_distance(|y| density_oracle(kind, C64::new(0.0, y)).unwrap_or(0.0) / frac);
        Ok(l1 * frac + (1.0 - frac))
    } else {
        let frac = hist.total as f64 / cloud.roots.len() as f64;
        let l1 = hist.l1_distance(|z| density_oracle(kind, z).unwrap_or(0.0) / frac);
        Ok(l1 * frac + (1.0 - frac))
    }
}

/// Statistics of one cloud, as reported by [`conjecture_report`].
pub fn size_report(cloud: &RootCloud) -> SizeReport {
    let closed = cloud.conjugate_closed_samples() as f64 / cloud.n_samples() as f64;
    let (median_abs_re, support_edge) = if cloud.spec.kind.is_hermitian() {
        let m = median(cloud.roots.iter().map(|z| z.re.abs()).collect());
        let y2 = cloud.roots.iter().map(|z| z.im * z.im).sum::<f64>() / cloud.roots.len() as f64;
        (Some(m), Some(2.0 * y2.sqrt()))
    } else {
        (None, None)
    };
    SizeReport {
        n: cloud.n(),
        samples: cloud.n_samples(),
        skipped: None,
        conjugate_closed_fraction: Some(closed),
        median_abs_re,
        support_edge,
        l1_distance: cloud_l1_distance(cloud).ok(),
    }
}

/// Empirical root statistics for a list of sizes, with trend verdicts and
/// no pass/fail judgement.
pub fn conjecture_report(
    kind: EnsembleKind,
    sizes: &[usize],
    samples: usize,
    seed: u64,
) -> ConjectureReport {
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let spec = EnsembleSpec::new(kind, n).and_then(|spec| root_cloud(&spec, samples, seed));
        let cloud = match spec {
            Ok(c) => c,
            Err(e) => {
                out.push(SizeReport {
                    n,
                    samples,
                    skipped: Some(e.to_string()),
                    conjugate_closed_fraction: None,
                    median_abs_re: None,
                    support_edge: None,
                    l1_distance: None,
                });
                continue;
            }
        };
        out.push(size_report(&cloud));
    }
    let decreasing = |f: &dyn Fn(&SizeReport) -> Option<f64>| -> Option<bool> {
        let vals: Option<Vec<f64>> = out.iter().map(f).collect();
        vals.map(|v| v.windows(2).all(|w| w[1] < w[0]))
    };
    let median_abs_re_decreasing = if kind.is_hermitian() {
        decreasing(&|s: &SizeReport| s.median_abs_re)
    } else {
        None
    };
    let l1_decreasing = decreasing(&|s: &SizeReport| s.l1_distance);
    ConjectureReport {
        ensemble: kind,
        sizes: out,
        median_abs_re_decreasing,
        l1_decreasing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn matched(found: &[C64], expect: &[C64], tol: f64) -> bool {
        let mut used = vec![false; found.len()];
        expect.iter().all(|e| {
            let j = (0..found.len())
                .filter(|&j| !used[j])
                .min_by(|&a, &b| (found[a] - e).norm().total_cmp(&(found[b] - e).norm()));
            match j {
                Some(j) if (found[j] - e).norm() <= tol => {
                    used[j] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn trivial_roots() {
        assert!((poly_roots(&Poly::from_real(&[-0.7, 1.0])).unwrap()[0] - 0.7).norm() < 1e-15);
        let r = poly_roots(&Poly::from_real(&[1.0, 0.0, 1.0])).unwrap();
        assert!(matched(&r, &[c(0.0, 1.0), c(0.0, -1.0)], 1e-12));
        assert!(poly_roots(&Poly::from_real(&[3.0])).is_err());
    }

    #[test]
    fn recovers_constructed_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let roots: Vec<C64> = (0..8)
                .map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
                .collect();
            let found = poly_roots(&Poly::from_roots(&roots)).unwrap();
            assert!(matched(&found, &roots, 1e-8), "{roots:?} vs {found:?}");
        }
        // double root stays within the backward-error bound
        let p = Poly::from_roots(&[c(0.5, 0.0), c(0.5, 0.0), c(-1.0, 1.0)]);
        assert!(poly_roots(&p).is_ok());
    }

    #[test]
    fn conjugate_pairing() {
        assert!(is_conjugate_closed(&[
            c(1.0, 2.0),
            c(0.3, 0.0),
            c(1.0, -2.0)
        ]));
        assert!(!is_conjugate_closed(&[c(1.0, 2.0), c(1.0, 2.0)]));
        let cloud = root_cloud(&EnsembleSpec::gue(8), 20, 1).unwrap();
        assert_eq!(cloud.roots.len(), 160);
        assert_eq!(cloud.conjugate_closed_samples(), 20);
    }

    #[test]
    fn histogram_normalised() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let pts: Vec<C64> = (0..5000)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let h = density_histogram(&pts, &GridSpec::square(1.0, 10)).unwrap();
        assert!((h.mass() - 1.0).abs() < 1e-12);
        for axis in [Axis::Re, Axis::Im] {
            let m = h.marginal(axis);
            assert!((m.density.iter().sum::<f64>() * m.width() - 1.0).abs() < 1e-12);
        }
        assert!(h.to_csv().starts_with("re,im,count,density\n"));
        assert_eq!(h.to_csv().lines().count(), 101);
        assert!(density_histogram(&[], &GridSpec::square(1.0, 10)).is_err());
    }

    #[test]
    fn uniform_disk_calibration() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let pts: Vec<C64> = (0..100_000)
            .map(|_| C64::from_polar(rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>()))
            .collect();
        let h = density_histogram(&pts, &GridSpec::square(1.5, 20)).unwrap();
        let l1 = h.l1_distance(|z| density_oracle(EnsembleKind::Ginibre, z).unwrap());
        assert!(l1 <= 0.1, "{l1}");
    }
}

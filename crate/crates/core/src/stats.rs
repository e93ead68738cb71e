//! Reproducible parallel Monte-Carlo accumulation.
//!
//! Sample `i` of a run with seed `s` always draws from ChaCha8 stream `i` of
//! key `s`, whatever thread evaluates it. Samples are grouped into fixed
//! chunks of [`CHUNK`] indices; each chunk is accumulated sequentially and
//! the chunk summaries are merged left to right. The result is therefore
//! bit-identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::{Error, Result, C64};

/// Number of consecutive sample indices accumulated sequentially.
pub const CHUNK: usize = 1024;

/// RNG for sample `index` of a run keyed by `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mixes a label into a seed (splitmix64 finaliser) so that independent
/// checks sharing a user seed draw from unrelated streams.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in label.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100_0000_01b3);
    }
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Runs `f` inside a dedicated pool of `workers` threads (`0` = rayon default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Monte-Carlo estimate of a complex expectation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: C64,
    /// Standard error of the real part of the mean.
    pub stderr_re: f64,
    /// Standard error of the imaginary part of the mean.
    pub stderr_im: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    /// Combined standard error `sqrt(se_re^2 + se_im^2)`.
    pub fn stderr(&self) -> f64 {
        self.stderr_re.hypot(self.stderr_im)
    }

    /// Combined standard error relative to `|mean|`.
    pub fn rel_stderr(&self) -> f64 {
        self.stderr() / self.mean.norm()
    }

    /// Largest componentwise z-score of the mean against an exact value.
    pub fn z_score(&self, exact: C64) -> f64 {
        let scale = 1.0_f64.max(self.mean.norm()).max(exact.norm());
        let d = self.mean - exact;
        component_z(d.re, self.stderr_re, scale).max(component_z(d.im, self.stderr_im, scale))
    }

    /// Largest componentwise z-score of the difference of two independent estimates.
    pub fn z_score_vs(&self, other: &MCEstimate) -> f64 {
        let scale = 1.0_f64.max(self.mean.norm()).max(other.mean.norm());
        let d = self.mean - other.mean;
        component_z(d.re, self.stderr_re.hypot(other.stderr_re), scale).max(component_z(
            d.im,
            self.stderr_im.hypot(other.stderr_im),
            scale,
        ))
    }
}

// Components that are real (or imaginary) by construction carry only rounding
// noise; floor their error so that rounding does not read as a deviation.
fn component_z(delta: f64, se: f64, scale: f64) -> f64 {
    let se = se.max(1e-12 * scale);
    delta.abs() / se
}

#[derive(Debug, Clone)]
struct Moments {
    count: u64,
    mean: Vec<C64>,
    m2_re: Vec<f64>,
    m2_im: Vec<f64>,
}

impl Moments {
    fn new(dim: usize) -> Self {
        Self {
            count: 0,
            mean: vec![C64::new(0.0, 0.0); dim],
            m2_re: vec![0.0; dim],
            m2_im: vec![0.0; dim],
        }
    }

    fn push(&mut self, x: &[C64]) {
        self.count += 1;
        let n = self.count as f64;
        for (k, &v) in x.iter().enumerate() {
            let d = v - self.mean[k];
            self.mean[k] += d / n;
            let d2 = v - self.mean[k];
            self.m2_re[k] += d.re * d2.re;
            self.m2_im[k] += d.im * d2.im;
        }
    }

    fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        for k in 0..self.mean.len() {
            let d = other.mean[k] - self.mean[k];
            self.mean[k] += d * (nb / n);
            self.m2_re[k] += other.m2_re[k] + d.re * d.re * na * nb / n;
            self.m2_im[k] += other.m2_im[k] + d.im * d.im * na * nb / n;
        }
        self.count += other.count;
    }

    fn estimates(&self, seed: u64) -> Vec<MCEstimate> {
        let n = self.count as f64;
        (0..self.mean.len())
            .map(|k| MCEstimate {
                mean: self.mean[k],
                stderr_re: (self.m2_re[k] / (n - 1.0) / n).sqrt(),
                stderr_im: (self.m2_im[k] / (n - 1.0) / n).sqrt(),
                n_samples: self.count,
                seed,
            })
            .collect()
    }
}

/// Estimates the mean of a vector-valued sample function over `samples`
/// independent draws. `f` receives the sample's private RNG.
pub fn mc_vector<F>(samples: usize, seed: u64, dim: usize, f: F) -> Result<Vec<MCEstimate>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Vec<C64>> + Sync,
{
    if samples < 2 {
        return Err(Error::Usage(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<Result<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = Moments::new(dim);
            let end = ((c + 1) * CHUNK).min(samples);
            for i in c * CHUNK..end {
                let mut rng = sample_rng(seed, i as u64);
                let x = f(&mut rng)?;
                debug_assert_eq!(x.len(), dim);
                acc.push(&x);
            }
            Ok(acc)
        })
        .collect();
    let mut total = Moments::new(dim);
    for p in partial {
        total.merge(&p?);
    }
    Ok(total.estimates(seed))
}

/// Scalar form of [`mc_vector`].
pub fn mc_scalar<F>(samples: usize, seed: u64, f: F) -> Result<MCEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<C64> + Sync,
{
    let v = mc_vector(samples, seed, 1, |rng| f(rng).map(|x| vec![x]))?;
    Ok(v[0])
}

/// Mean and batch-means standard error of an autocorrelated series.
pub fn batch_means(values: &[f64], batches: usize) -> (f64, f64) {
    let n = values.len();
    let batches = batches.clamp(2, n.max(2));
    let size = n / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| values[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let grand = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (grand, (var / batches as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn independent_of_worker_count() {
        let f = |rng: &mut ChaCha8Rng| -> Result<C64> {
            Ok(C64::new(rng.random::<f64>(), rng.random::<f64>() * 2.0))
        };
        let a = with_workers(1, || mc_scalar(5000, 11, f).unwrap());
        let b = with_workers(3, || mc_scalar(5000, 11, f).unwrap());
        let c = with_workers(8, || mc_scalar(5000, 11, f).unwrap());
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.z_score(C64::new(0.5, 1.0)) < 4.0);
    }

    #[test]
    fn uniform_stderr_is_right() {
        let est = mc_scalar(40_000, 3, |rng| Ok(C64::new(rng.random::<f64>(), 0.0))).unwrap();
        let expected = (1.0f64 / 12.0 / 40_000.0).sqrt();
        assert!((est.stderr_re / expected - 1.0).abs() < 0.05);
        assert_eq!(est.stderr_im, 0.0);
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, "a"), derive_seed(1, "b"));
        assert_ne!(derive_seed(1, "a"), derive_seed(2, "a"));
        assert_eq!(derive_seed(7, "x"), derive_seed(7, "x"));
    }

    #[test]
    fn too_few_samples() {
        assert!(mc_scalar(1, 0, |_| Ok(C64::new(0.0, 0.0))).is_err());
    }
}

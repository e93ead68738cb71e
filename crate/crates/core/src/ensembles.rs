//! Random-matrix samplers.
//!
//! Normalisations (entry densities for an `n x n` matrix):
//!
//! | ensemble | diagonal              | off-diagonal                                 |
//! |----------|-----------------------|----------------------------------------------|
//! | GUE      | `exp(-(n/2) H_ii^2)`  | `exp(-n |H_ij|^2)`, re/im variance `1/(2n)`  |
//! | GOE      | `exp(-(n/2) H_ii^2)`  | `exp(-n H_ij^2)`, variance `1/(2n)`          |
//! | Ginibre  | `exp(-n |Z_ij|^2)`    | same                                         |
//!
//! CUE matrices are Haar unitaries. Unitary-invariant ensembles with weight
//! `exp(-n Tr V(H))` are sampled through their eigenvalues by Metropolis.

use std::fmt;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::stats::batch_means;
use crate::{CMatrix, Error, Result, C64};

/// Real polynomial potential `V(x) = sum_k coeffs[k] x^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Potential {
    coeffs: Vec<f64>,
}

impl Potential {
    /// Rejects potentials for which `exp(-N V)` is not integrable: the degree
    /// must be even and at least 2 with a positive leading coefficient.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain(
                "Potential::new",
                "coefficients must be finite",
            ));
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        let deg = coeffs.len().saturating_sub(1);
        if deg < 2 || deg % 2 == 1 {
            return Err(Error::domain(
                "Potential::new",
                format!("degree must be even and >= 2, got {deg}"),
            ));
        }
        if coeffs[deg] <= 0.0 {
            return Err(Error::domain(
                "Potential::new",
                "leading coefficient must be positive",
            ));
        }
        Ok(Self { coeffs })
    }

    /// `V(x) = x^2 / 2`.
    pub fn gaussian() -> Self {
        Self {
            coeffs: vec![0.0, 0.0, 0.5],
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0)
    }

    pub fn is_gaussian(&self) -> bool {
        self.coeffs == [0.0, 0.0, 0.5]
    }
}

impl TryFrom<Vec<f64>> for Potential {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Potential> for Vec<f64> {
    fn from(p: Potential) -> Self {
        p.coeffs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnsembleKind {
    #[serde(rename = "GUE", alias = "gue")]
    Gue,
    #[serde(rename = "GOE", alias = "goe")]
    Goe,
    #[serde(rename = "CUE", alias = "cue")]
    Cue,
    #[serde(rename = "Ginibre", alias = "ginibre")]
    Ginibre,
    #[serde(rename = "UnitaryInvariant", alias = "unitary-invariant")]
    UnitaryInvariant,
}

impl EnsembleKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gue => "GUE",
            Self::Goe => "GOE",
            Self::Cue => "CUE",
            Self::Ginibre => "Ginibre",
            Self::UnitaryInvariant => "UnitaryInvariant",
        }
    }

    /// Hermitian ensembles have real permanental polynomials.
    pub fn is_hermitian(self) -> bool {
        matches!(self, Self::Gue | Self::Goe | Self::UnitaryInvariant)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gue" => Ok(Self::Gue),
            "goe" => Ok(Self::Goe),
            "cue" => Ok(Self::Cue),
            "ginibre" => Ok(Self::Ginibre),
            "unitary-invariant" | "unitaryinvariant" => Ok(Self::UnitaryInvariant),
            _ => Err(Error::Usage(format!("unknown ensemble '{s}'"))),
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ensemble and matrix dimension; `potential` is present exactly for
/// [`EnsembleKind::UnitaryInvariant`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub potential: Option<Potential>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    kind: EnsembleKind,
    n: usize,
    #[serde(default)]
    potential: Option<Potential>,
}

impl TryFrom<RawSpec> for EnsembleSpec {
    type Error = Error;

    fn try_from(r: RawSpec) -> Result<Self> {
        match (r.kind, r.potential) {
            (EnsembleKind::UnitaryInvariant, Some(v)) => Self::unitary_invariant(v, r.n),
            (_, Some(_)) => Err(Error::domain(
                "EnsembleSpec",
                "potential is only valid for UnitaryInvariant",
            )),
            (kind, None) => Self::new(kind, r.n),
        }
    }
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain(
                "EnsembleSpec",
                "dimension must be at least 1",
            ));
        }
        if kind == EnsembleKind::UnitaryInvariant {
            return Err(Error::domain(
                "EnsembleSpec",
                "UnitaryInvariant requires a potential",
            ));
        }
        Ok(Self {
            kind,
            n,
            potential: None,
        })
    }

    pub fn unitary_invariant(potential: Potential, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain(
                "EnsembleSpec",
                "dimension must be at least 1",
            ));
        }
        if n > METROPOLIS_MAX_N {
            return Err(Error::size("EnsembleSpec", n, METROPOLIS_MAX_N));
        }
        Ok(Self {
            kind: EnsembleKind::UnitaryInvariant,
            n,
            potential: Some(potential),
        })
    }

    pub fn gue(n: usize) -> Self {
        Self::new(EnsembleKind::Gue, n).expect("n >= 1")
    }

    pub fn goe(n: usize) -> Self {
        Self::new(EnsembleKind::Goe, n).expect("n >= 1")
    }

    pub fn cue(n: usize) -> Self {
        Self::new(EnsembleKind::Cue, n).expect("n >= 1")
    }

    pub fn ginibre(n: usize) -> Self {
        Self::new(EnsembleKind::Ginibre, n).expect("n >= 1")
    }

    /// Draws one matrix. Unitary-invariant draws run a fresh Metropolis chain
    /// with default settings and rotate its final state by a Haar unitary.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        match self.kind {
            EnsembleKind::Gue => sample_gue(self.n, rng),
            EnsembleKind::Goe => sample_goe(self.n, rng),
            EnsembleKind::Cue => sample_cue(self.n, rng),
            EnsembleKind::Ginibre => sample_ginibre(self.n, rng),
            EnsembleKind::UnitaryInvariant => {
                let v = self.potential.as_ref().expect("validated at construction");
                let sampler = MetropolisConfig::default();
                let mut chain_rng = ChaCha8Rng::seed_from_u64(rng.random());
                let eig = sampler.final_state(v, self.n, &mut chain_rng);
                let u = sample_cue(self.n, rng);
                compose_unitary_invariant(&eig, &u)
            }
        }
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// GUE matrix for the weight `exp(-(scale/2) Tr H^2)`.
pub fn sample_gue_scaled<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> CMatrix {
    let sd_diag = (1.0 / scale).sqrt();
    let sd_off = (1.0 / (2.0 * scale)).sqrt();
    let mut h = CMatrix::zeros(n);
    for i in 0..n {
        h[(i, i)] = C64::new(sd_diag * normal(rng), 0.0);
        for j in i + 1..n {
            let z = C64::new(sd_off * normal(rng), sd_off * normal(rng));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

pub fn sample_gue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    sample_gue_scaled(n, n as f64, rng)
}

pub fn sample_goe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let sd_diag = (1.0 / n as f64).sqrt();
    let sd_off = (1.0 / (2.0 * n as f64)).sqrt();
    let mut h = CMatrix::zeros(n);
    for i in 0..n {
        h[(i, i)] = C64::new(sd_diag * normal(rng), 0.0);
        for j in i + 1..n {
            let x = C64::new(sd_off * normal(rng), 0.0);
            h[(i, j)] = x;
            h[(j, i)] = x;
        }
    }
    h
}

pub fn sample_ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let sd = (1.0 / (2.0 * n as f64)).sqrt();
    CMatrix::from_fn(n, |_, _| C64::new(sd * normal(rng), sd * normal(rng)))
}

/// Haar unitary: `Q diag(r_ii / |r_ii|)` from the QR factorisation of a
/// Ginibre draw.
pub fn sample_cue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let z = sample_ginibre(n, rng).to_nalgebra();
    let qr = z.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    CMatrix::from_nalgebra(&q)
}

/// `U diag(eigenvalues) U*`.
pub fn compose_unitary_invariant(eigenvalues: &[f64], u: &CMatrix) -> CMatrix {
    let n = eigenvalues.len();
    assert_eq!(n, u.n(), "dimension mismatch");
    CMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| u[(i, k)] * eigenvalues[k] * u[(j, k)].conj())
            .sum()
    })
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let m: DMatrix<C64> = h.to_nalgebra();
    let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    e.sort_by(|a, b| a.total_cmp(b));
    e
}

pub const METROPOLIS_MAX_N: usize = 8;

/// Random-walk Metropolis for the eigenvalue density
/// `prod_{i<j} (l_i - l_j)^2 prod_i exp(-n V(l_i))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetropolisConfig {
    /// Sweeps (one proposal per eigenvalue) discarded before recording.
    pub burn_in: usize,
    /// Sweeps between recorded states.
    pub thin: usize,
    /// Standard deviation of the Gaussian proposal.
    pub step: f64,
}

impl Default for MetropolisConfig {
    fn default() -> Self {
        Self {
            burn_in: 500,
            thin: 5,
            step: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenChain {
    /// Recorded states, each with `n` eigenvalues.
    pub samples: Vec<Vec<f64>>,
    pub acceptance_rate: f64,
}

impl EigenChain {
    /// Mean of `f` over recorded states with a batch-means standard error.
    pub fn mean_of(&self, f: impl Fn(&[f64]) -> f64) -> (f64, f64) {
        let values: Vec<f64> = self.samples.iter().map(|s| f(s)).collect();
        batch_means(&values, 50)
    }
}

struct ChainState<'a> {
    v: &'a Potential,
    n: usize,
    lambda: Vec<f64>,
    accepted: u64,
    proposed: u64,
}

impl ChainState<'_> {
    fn sweep<R: Rng + ?Sized>(&mut self, step: f64, rng: &mut R) {
        let nf = self.n as f64;
        for i in 0..self.n {
            let old = self.lambda[i];
            let new = old + step * normal(rng);
            let mut delta = -nf * (self.v.eval(new) - self.v.eval(old));
            for (j, &l) in self.lambda.iter().enumerate() {
                if j != i {
                    delta += 2.0 * ((new - l).abs().ln() - (old - l).abs().ln());
                }
            }
            self.proposed += 1;
            if delta >= 0.0 || rng.random::<f64>() < delta.exp() {
                self.lambda[i] = new;
                self.accepted += 1;
            }
        }
    }
}

impl MetropolisConfig {
    fn start<'a>(&self, v: &'a Potential, n: usize) -> ChainState<'a> {
        let lambda = (0..n)
            .map(|i| {
                if n == 1 {
                    0.0
                } else {
                    -1.0 + 2.0 * i as f64 / (n - 1) as f64
                }
            })
            .collect();
        ChainState {
            v,
            n,
            lambda,
            accepted: 0,
            proposed: 0,
        }
    }

    fn final_state<R: Rng + ?Sized>(&self, v: &Potential, n: usize, rng: &mut R) -> Vec<f64> {
        let mut st = self.start(v, n);
        for _ in 0..self.burn_in {
            st.sweep(self.step, rng);
        }
        st.lambda
    }
}

/// Runs a chain recording `samples` states.
pub fn sample_unitary_invariant(
    v: &Potential,
    n: usize,
    samples: usize,
    config: &MetropolisConfig,
    seed: u64,
) -> Result<EigenChain> {
    if n == 0 {
        return Err(Error::domain(
            "sample_unitary_invariant",
            "dimension must be at least 1",
        ));
    }
    if n > METROPOLIS_MAX_N {
        return Err(Error::size("sample_unitary_invariant", n, METROPOLIS_MAX_N));
    }
    if config.step <= 0.0 || config.thin == 0 {
        return Err(Error::domain(
            "sample_unitary_invariant",
            "step must be positive and thin at least 1",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = config.start(v, n);
    for _ in 0..config.burn_in {
        st.sweep(config.step, &mut rng);
    }
    st.accepted = 0;
    st.proposed = 0;
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        for _ in 0..config.thin {
            st.sweep(config.step, &mut rng);
        }
        out.push(st.lambda.clone());
    }
    let acceptance_rate = if st.proposed == 0 {
        0.0
    } else {
        st.accepted as f64 / st.proposed as f64
    };
    Ok(EigenChain {
        samples: out,
        acceptance_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{mc_vector, sample_rng};

    #[test]
    fn potential_validation() {
        assert!(Potential::new(vec![0.0, 0.0, 0.5]).is_ok());
        assert!(Potential::new(vec![0.0, 0.0, -0.5]).is_err());
        assert!(Potential::new(vec![0.0, 1.0, 0.0, 1.0]).is_err());
        assert!(Potential::new(vec![1.0]).is_err());
        assert!(Potential::new(vec![0.0, 0.0, 0.5, 0.0, 0.1])
            .unwrap()
            .is_even());
        assert!(!Potential::new(vec![0.0, 0.3, 0.5]).unwrap().is_even());
    }

    #[test]
    fn spec_json_roundtrip() {
        let s: EnsembleSpec = serde_json::from_str(r#"{"kind": "GUE", "n": 4}"#).unwrap();
        assert_eq!(s, EnsembleSpec::gue(4));
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"kind":"GUE","n":4}"#
        );
        let u: EnsembleSpec = serde_json::from_str(
            r#"{"kind": "UnitaryInvariant", "n": 3, "potential": [0, 0, 0.5, 0, 0.1]}"#,
        )
        .unwrap();
        assert_eq!(u.potential.unwrap().degree(), 4);
        assert!(
            serde_json::from_str::<EnsembleSpec>(r#"{"kind": "GUE", "n": 4, "beta": 2}"#).is_err()
        );
        assert!(
            serde_json::from_str::<EnsembleSpec>(r#"{"kind": "UnitaryInvariant", "n": 3}"#)
                .is_err()
        );
        assert!(serde_json::from_str::<EnsembleSpec>(r#"{"kind": "GUE", "n": 0}"#).is_err());
    }

    #[test]
    fn structure_is_exact() {
        let mut rng = sample_rng(1, 0);
        let h = sample_gue(5, &mut rng);
        assert_eq!(h.max_abs_diff(&h.adjoint()), 0.0);
        let g = sample_goe(5, &mut rng);
        assert_eq!(g.max_abs_diff(&g.transpose()), 0.0);
        assert!(g.as_slice().iter().all(|z| z.im == 0.0));
        let u = sample_cue(6, &mut rng);
        assert!(u.adjoint().matmul(&u).max_abs_diff(&CMatrix::identity(6)) < 1e-12);
    }

    #[test]
    fn deterministic_streams() {
        let a = sample_gue(4, &mut sample_rng(9, 3));
        let b = sample_gue(4, &mut sample_rng(9, 3));
        assert_eq!(a, b);
    }

    #[test]
    fn second_moments() {
        let n = 3;
        let nf = n as f64;
        let est = mc_vector(100_000, 21, 6, |rng| {
            let h = sample_gue(n, rng);
            let g = sample_goe(n, rng);
            let z = sample_ginibre(n, rng);
            Ok(vec![
                C64::new(h[(0, 0)].re.powi(2), 0.0),
                C64::new(h[(0, 1)].norm_sqr(), 0.0),
                C64::new(g[(0, 0)].re.powi(2), 0.0),
                C64::new(g[(0, 1)].re.powi(2), 0.0),
                C64::new(z[(0, 0)].norm_sqr(), 0.0),
                z[(0, 0)] * z[(0, 1)].conj(),
            ])
        })
        .unwrap();
        let expect = [1.0 / nf, 1.0 / nf, 1.0 / nf, 0.5 / nf, 1.0 / nf, 0.0];
        for (e, x) in est.iter().zip(expect) {
            assert!(e.z_score(C64::new(x, 0.0)) < 4.0, "{e:?} vs {x}");
        }
    }

    #[test]
    fn haar_moments() {
        let n = 3;
        let est = mc_vector(100_000, 4, 2, |rng| {
            let u = sample_cue(n, rng);
            Ok(vec![u[(0, 0)], C64::new(u[(0, 0)].norm_sqr(), 0.0)])
        })
        .unwrap();
        assert!(est[0].z_score(C64::new(0.0, 0.0)) < 4.0);
        assert!(est[1].z_score(C64::new(1.0 / n as f64, 0.0)) < 4.0);
        let one = sample_cue(1, &mut sample_rng(0, 0));
        assert!((one[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn metropolis_matches_gue_second_moment() {
        let chain = sample_unitary_invariant(
            &Potential::gaussian(),
            2,
            40_000,
            &MetropolisConfig::default(),
            3,
        )
        .unwrap();
        assert!(chain.acceptance_rate > 0.0 && chain.acceptance_rate < 1.0);
        let (m2, se2) = chain.mean_of(|l| l.iter().map(|x| x * x).sum::<f64>() / l.len() as f64);
        // E[lambda^2] = E[Tr H^2] / n = 1 for the 2x2 GUE.
        assert!((m2 - 1.0).abs() < 5.0 * se2, "{m2} +- {se2}");
        let (m1, se1) = chain.mean_of(|l| l.iter().sum::<f64>() / l.len() as f64);
        assert!(m1.abs() < 4.0 * se1, "{m1} +- {se1}");
    }
}

//! Monic orthogonal polynomials for weights `exp(-N V(x)) dx` on the real
//! line, and Gauss-type quadrature.
//!
//! Polynomials follow `pi_{k+1}(x) = (x - b_k) pi_k(x) - c_k pi_{k-1}(x)`
//! with `pi_0 = 1`, `pi_{-1} = 0`. The entry `c_0` stores the total mass of
//! the measure so that `int pi_k^2 dw = c_0 c_1 ... c_k`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::ensembles::Potential;
use crate::{Error, Result, C64};

/// Monic Hermite polynomial for the weight `exp(-N x^2 / 2)`:
/// `pi_{k+1} = x pi_k - (k / N) pi_{k-1}`.
pub fn hermite_monic(k: usize, n_param: f64, x: C64) -> C64 {
    let mut prev = C64::new(0.0, 0.0);
    let mut cur = C64::new(1.0, 0.0);
    for j in 0..k {
        let next = x * cur - prev * (j as f64 / n_param);
        prev = cur;
        cur = next;
    }
    cur
}

/// `pi_k, pi_{k+1}` and their derivatives at `x`, all multiplied by
/// `exp(-log_scale)` so that large degrees neither overflow nor underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitePair {
    pub pi: C64,
    pub pi_next: C64,
    pub d_pi: C64,
    pub d_pi_next: C64,
    pub log_scale: f64,
}

pub fn hermite_monic_scaled(k: usize, n_param: f64, x: C64) -> HermitePair {
    let zero = C64::new(0.0, 0.0);
    // state (pi_{j-1}, pi_j, pi'_{j-1}, pi'_j) at j = 0
    let (mut p0, mut p1, mut d0, mut d1) = (zero, C64::new(1.0, 0.0), zero, zero);
    let mut log_scale = 0.0;
    for j in 0..=k {
        let cj = j as f64 / n_param;
        let p2 = x * p1 - p0 * cj;
        let d2 = p1 + x * d1 - d0 * cj;
        (p0, p1, d0, d1) = (p1, p2, d1, d2);
        let m = p0.norm().max(p1.norm()).max(d0.norm()).max(d1.norm());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            p0 /= m;
            p1 /= m;
            d0 /= m;
            d1 /= m;
            log_scale += m.ln();
        }
    }
    HermitePair {
        pi: p0,
        pi_next: p1,
        d_pi: d0,
        d_pi_next: d1,
        log_scale,
    }
}

/// Three-term recurrence coefficients; see the module docs for the convention.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoeffs {
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl RecurrenceCoeffs {
    /// Closed-form coefficients of the weight `exp(-N x^2 / 2)`:
    /// `b_k = 0`, `c_k = k / N`, `c_0 = sqrt(2 pi / N)`.
    pub fn hermite(n_param: f64, len: usize) -> Self {
        let c = (0..len)
            .map(|k| {
                if k == 0 {
                    (2.0 * PI / n_param).sqrt()
                } else {
                    k as f64 / n_param
                }
            })
            .collect();
        Self {
            b: vec![0.0; len],
            c,
        }
    }

    /// Highest degree `k` for which `pi_k` is available.
    pub fn max_degree(&self) -> usize {
        self.b.len()
    }

    /// `pi_0(x), ..., pi_k(x)`.
    pub fn eval_all(&self, k: usize, x: C64) -> Vec<C64> {
        assert!(
            k <= self.max_degree(),
            "degree {k} exceeds the available recurrence"
        );
        let mut out = Vec::with_capacity(k + 1);
        out.push(C64::new(1.0, 0.0));
        let mut prev = C64::new(0.0, 0.0);
        for j in 0..k {
            let cur = out[j];
            let cj = if j == 0 { 0.0 } else { self.c[j] };
            let next = (x - self.b[j]) * cur - prev * cj;
            prev = cur;
            out.push(next);
        }
        out
    }

    pub fn eval(&self, k: usize, x: C64) -> C64 {
        self.eval_all(k, x)[k]
    }

    /// Coefficients of `pi_k` in ascending order.
    pub fn monomial_coeffs(&self, k: usize) -> Vec<f64> {
        assert!(
            k <= self.max_degree(),
            "degree {k} exceeds the available recurrence"
        );
        let mut prev: Vec<f64> = vec![];
        let mut cur = vec![1.0];
        for j in 0..k {
            let cj = if j == 0 { 0.0 } else { self.c[j] };
            let mut next = vec![0.0; j + 2];
            for (t, &a) in cur.iter().enumerate() {
                next[t + 1] += a;
                next[t] -= self.b[j] * a;
            }
            for (t, &a) in prev.iter().enumerate() {
                next[t] -= cj * a;
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    /// Squared norms `int pi_k^2 dw` for `k < len`.
    pub fn norms(&self) -> Vec<f64> {
        let mut acc = 1.0;
        self.c
            .iter()
            .map(|&c| {
                acc *= c;
                acc
            })
            .collect()
    }

    /// `n`-node Gauss rule of the measure (Golub-Welsch).
    pub fn gauss_rule(&self, n: usize) -> Result<Quadrature> {
        if n == 0 || n > self.b.len() {
            return Err(Error::domain(
                "gauss_rule",
                format!("need between 1 and {} nodes, got {n}", self.b.len()),
            ));
        }
        let mut j = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            j[(k, k)] = self.b[k];
            if k + 1 < n {
                let off = self.c[k + 1].sqrt();
                j[(k, k + 1)] = off;
                j[(k + 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::new(j);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                (
                    eig.eigenvalues[k],
                    self.c[0] * eig.eigenvectors[(0, k)].powi(2),
                )
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Quadrature {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }
}

/// Nodes and weights of a quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    /// Gauss-Legendre rule on `[-1, 1]`.
    pub fn gauss_legendre(n: usize) -> Self {
        let mut rc = RecurrenceCoeffs {
            b: vec![0.0; n],
            c: vec![2.0; n],
        };
        for k in 1..n {
            let k2 = (k * k) as f64;
            rc.c[k] = k2 / (4.0 * k2 - 1.0);
        }
        rc.gauss_rule(n).expect("n >= 1")
    }

    /// Gauss-Legendre rule mapped to `[a, b]`.
    pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Self {
        let q = Self::gauss_legendre(n);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        Self {
            nodes: q.nodes.iter().map(|x| mid + half * x).collect(),
            weights: q.weights.iter().map(|w| half * w).collect(),
        }
    }

    /// Gauss-Laguerre rule for `int_0^inf exp(-u) f(u) du`.
    pub fn gauss_laguerre(n: usize) -> Self {
        let rc = RecurrenceCoeffs {
            b: (0..n).map(|k| (2 * k + 1) as f64).collect(),
            c: (0..n)
                .map(|k| if k == 0 { 1.0 } else { (k * k) as f64 })
                .collect(),
        };
        rc.gauss_rule(n).expect("n >= 1")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly, `2 n - 1`.
    pub fn max_degree(&self) -> usize {
        2 * self.len() - 1
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex(&self, f: impl Fn(f64) -> C64) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }

    /// Integrates a polynomial integrand of the stated degree, refusing
    /// degrees the rule does not integrate exactly.
    pub fn integrate_poly(&self, degree: usize, f: impl Fn(f64) -> C64) -> Result<C64> {
        if degree > self.max_degree() {
            return Err(Error::QuadratureDegree {
                op: "integrate_poly",
                nodes: self.len(),
                max_degree: self.max_degree(),
                degree,
            });
        }
        Ok(self.integrate_complex(f))
    }
}

pub const STIELTJES_MAX_K: usize = 20;

const PANELS: usize = 128;
const PANEL_ORDER: usize = 20;

// Half-widths beyond which exp(-N (V - min V)) |x|^64 is below e^-75, so
// products of the polynomials used here are negligible outside.
fn support(v: &Potential, n_param: f64) -> (f64, f64) {
    let vmin = (-10_000..=10_000)
        .map(|i| v.eval(i as f64 * 1e-3))
        .fold(f64::INFINITY, f64::min);
    let edge = |s: f64| {
        let mut x: f64 = 1.0;
        while n_param * (v.eval(s * x) - vmin) - 64.0 * x.ln() < 75.0 {
            x *= 1.05;
        }
        x
    };
    (-edge(-1.0), edge(1.0))
}

/// Composite Gauss-Legendre discretisation of `exp(-N V(x)) dx`.
pub fn discretize(v: &Potential, n_param: f64) -> Quadrature {
    let (lo, hi) = support(v, n_param);
    let h = (hi - lo) / PANELS as f64;
    let base = Quadrature::gauss_legendre(PANEL_ORDER);
    let mut nodes = Vec::with_capacity(PANELS * PANEL_ORDER);
    let mut weights = Vec::with_capacity(PANELS * PANEL_ORDER);
    for p in 0..PANELS {
        let mid = lo + (p as f64 + 0.5) * h;
        for (&x, &w) in base.nodes.iter().zip(&base.weights) {
            let t = mid + 0.5 * h * x;
            nodes.push(t);
            weights.push(0.5 * h * w * (-n_param * v.eval(t)).exp());
        }
    }
    Quadrature { nodes, weights }
}

/// Recurrence coefficients `b_0..b_k_max`, `c_0..c_k_max` of `exp(-N V(x)) dx`
/// by the Stieltjes procedure on [`discretize`]d nodes, carried out with
/// normalised polynomials.
pub fn monic_ops_from_potential(
    v: &Potential,
    n_param: f64,
    k_max: usize,
) -> Result<RecurrenceCoeffs> {
    if k_max > STIELTJES_MAX_K {
        return Err(Error::size(
            "monic_ops_from_potential",
            k_max,
            STIELTJES_MAX_K,
        ));
    }
    if !(n_param > 0.0) {
        return Err(Error::domain(
            "monic_ops_from_potential",
            "N must be positive",
        ));
    }
    let q = discretize(v, n_param);
    let m = q.len();
    let mass: f64 = q.weights.iter().sum();
    let mut b = Vec::with_capacity(k_max + 1);
    let mut c = vec![mass];
    let mut prev = vec![0.0; m];
    let mut cur = vec![1.0 / mass.sqrt(); m];
    for k in 0..=k_max {
        let bk: f64 = (0..m)
            .map(|i| q.weights[i] * q.nodes[i] * cur[i] * cur[i])
            .sum();
        b.push(bk);
        if k == k_max {
            break;
        }
        let sqrt_ck = if k == 0 { 0.0 } else { c[k].sqrt() };
        let next: Vec<f64> = (0..m)
            .map(|i| (q.nodes[i] - bk) * cur[i] - sqrt_ck * prev[i])
            .collect();
        let ck1: f64 = (0..m).map(|i| q.weights[i] * next[i] * next[i]).sum();
        if !(ck1 > 1e-280) || !ck1.is_finite() {
            return Err(Error::Degradation {
                op: "monic_ops_from_potential",
                index: k + 1,
                value: ck1,
            });
        }
        c.push(ck1);
        let s = ck1.sqrt();
        prev = cur;
        cur = next.into_iter().map(|x| x / s).collect();
    }
    Ok(RecurrenceCoeffs { b, c })
}

/// `n_nodes`-point Gauss rule of `exp(-N V(x)) dx`, exact for polynomials of
/// degree `2 n_nodes - 1`. The Gaussian potential uses the closed-form
/// recurrence and accepts any node count; other potentials go through
/// [`monic_ops_from_potential`] and are limited to `STIELTJES_MAX_K + 1` nodes.
pub fn quadrature(v: &Potential, n_param: f64, n_nodes: usize) -> Result<Quadrature> {
    if n_nodes == 0 {
        return Err(Error::domain("quadrature", "need at least one node"));
    }
    if v.is_gaussian() {
        return RecurrenceCoeffs::hermite(n_param, n_nodes).gauss_rule(n_nodes);
    }
    if n_nodes > STIELTJES_MAX_K + 1 {
        return Err(Error::size("quadrature", n_nodes, STIELTJES_MAX_K + 1));
    }
    monic_ops_from_potential(v, n_param, n_nodes - 1)?.gauss_rule(n_nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn hermite_low_degrees() {
        let x = c(0.3, -1.2);
        assert_eq!(hermite_monic(0, 3.0, x), c(1.0, 0.0));
        assert_eq!(hermite_monic(1, 3.0, x), x);
        assert!((hermite_monic(2, 3.0, x) - (x * x - 1.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn scaled_matches_plain() {
        let x = c(0.4, 0.9);
        let p = hermite_monic_scaled(12, 5.0, x);
        let s = p.log_scale.exp();
        assert!((p.pi * s - hermite_monic(12, 5.0, x)).norm() < 1e-12);
        assert!((p.pi_next * s - hermite_monic(13, 5.0, x)).norm() < 1e-12);
        let h = 1e-6;
        let fd = (hermite_monic(12, 5.0, x + h) - hermite_monic(12, 5.0, x - h)) / (2.0 * h);
        assert!((p.d_pi * s - fd).norm() < 1e-6 * fd.norm().max(1.0));
        let big = hermite_monic_scaled(3000, 3000.0, c(0.0, 2.0));
        assert!(big.pi.norm().is_finite() && big.log_scale > 0.0);
    }

    #[test]
    fn gaussian_rule_moments() {
        let q = quadrature(&Potential::gaussian(), 1.0, 20).unwrap();
        let root = (2.0 * PI).sqrt();
        assert!((q.integrate(|_| 1.0) - root).abs() < 1e-12);
        assert!(q.integrate(|x| x).abs() < 1e-12);
        assert!((q.integrate(|x| x * x) - root).abs() < 1e-12);
    }

    #[test]
    fn hermite_orthogonality_with_many_nodes() {
        let n = 2.0;
        let q = quadrature(&Potential::gaussian(), n, 200).unwrap();
        let norms = RecurrenceCoeffs::hermite(n, 8).norms();
        for j in 0..=6 {
            for k in 0..=6 {
                let v = q.integrate_complex(|x| {
                    hermite_monic(j, n, c(x, 0.0)) * hermite_monic(k, n, c(x, 0.0))
                });
                let scale = (norms[j] * norms[k]).sqrt();
                let expect = if j == k { norms[j] } else { 0.0 };
                assert!((v.re - expect).abs() <= 1e-10 * scale, "{j} {k}: {v}");
            }
        }
    }

    #[test]
    fn stieltjes_reproduces_hermite() {
        for n in [1.0, 3.0, 7.0] {
            let rc = monic_ops_from_potential(&Potential::gaussian(), n, 20).unwrap();
            assert!((rc.c[0] - (2.0 * PI / n).sqrt()).abs() < 1e-12);
            for k in 0..=20 {
                assert!(rc.b[k].abs() < 1e-12, "b_{k} = {}", rc.b[k]);
                if k > 0 {
                    assert!(
                        (rc.c[k] - k as f64 / n).abs() < 1e-10,
                        "c_{k} = {}",
                        rc.c[k]
                    );
                }
            }
        }
    }

    #[test]
    fn quartic_gram_matrix_is_diagonal() {
        let v = Potential::new(vec![0.0, 0.0, 0.5, 0.0, 0.1]).unwrap();
        let rc = monic_ops_from_potential(&v, 2.0, 10).unwrap();
        assert!(rc.b.iter().all(|b| b.abs() < 1e-12));
        let q = discretize(&v, 2.0);
        let norms = rc.norms();
        for j in 0..=6 {
            for k in 0..=6 {
                let g = q
                    .integrate_complex(|x| rc.eval(j, c(x, 0.0)) * rc.eval(k, c(x, 0.0)))
                    .re;
                let scale = (norms[j] * norms[k]).sqrt();
                let expect = if j == k { norms[j] } else { 0.0 };
                assert!((g - expect).abs() <= 1e-8 * scale, "{j} {k}: {g}");
            }
        }
    }

    #[test]
    fn monomial_coefficients() {
        let rc = RecurrenceCoeffs::hermite(2.0, 6);
        assert_eq!(rc.monomial_coeffs(2), vec![-0.5, 0.0, 1.0]);
        let x = c(0.7, 0.2);
        let p: C64 = rc
            .monomial_coeffs(5)
            .iter()
            .rev()
            .fold(c(0.0, 0.0), |acc, &a| acc * x + a);
        assert!((p - hermite_monic(5, 2.0, x)).norm() < 1e-13);
    }

    #[test]
    fn degree_guards() {
        let q = Quadrature::gauss_legendre(3);
        assert!(q.integrate_poly(5, |x| c(x.powi(5), 0.0)).is_ok());
        assert!(matches!(
            q.integrate_poly(6, |_| c(1.0, 0.0)),
            Err(Error::QuadratureDegree { .. })
        ));
        assert!(matches!(
            monic_ops_from_potential(&Potential::gaussian(), 1.0, 21),
            Err(Error::Size { .. })
        ));
        let quartic = Potential::new(vec![0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(quadrature(&quartic, 1.0, 22).is_err());
    }

    #[test]
    fn laguerre_and_legendre() {
        let q = Quadrature::gauss_laguerre(6);
        assert!((q.integrate(|u| u.powi(3)) - 6.0).abs() < 1e-11);
        let l = Quadrature::gauss_legendre_on(5, 0.0, 2.0);
        assert!((l.integrate(|x| x.powi(4)) - 32.0 / 5.0).abs() < 1e-13);
    }
}

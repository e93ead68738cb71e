use permpoly::perm::{per_glynn, per_naive, per_ryser, perm_poly, perm_poly_ryser};
use permpoly::roots::{density_histogram, poly_roots, Axis, GridSpec};
use permpoly::stats::{mc_scalar, with_workers};
use permpoly::{CMatrix, Poly, C64};
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix(max_n: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(c64(), n * n).prop_map(move |d| CMatrix::new(n, d).unwrap()))
}

fn matrix_and_perms(max_n: usize) -> impl Strategy<Value = (CMatrix, Vec<usize>, Vec<usize>)> {
    matrix(max_n).prop_flat_map(|a| {
        let idx: Vec<usize> = (0..a.n()).collect();
        (Just(a), Just(idx.clone()).prop_shuffle(), Just(idx).prop_shuffle())
    })
}

fn close(a: C64, b: C64, scale: f64) -> bool {
    (a - b).norm() <= 1e-10 * scale.max(1.0)
}

/// Crude magnitude bound used to scale tolerances: prod of row 1-norms.
fn bound(a: &CMatrix) -> f64 {
    (0..a.n()).map(|i| a.row(i).iter().map(|z| z.norm()).sum::<f64>()).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernels_agree(a in matrix(7)) {
        let naive = per_naive(&a).unwrap();
        let s = bound(&a);
        prop_assert!(close(per_ryser(&a).unwrap(), naive, s));
        prop_assert!(close(per_glynn(&a).unwrap(), naive, s));
    }

    #[test]
    fn permutation_invariance((a, p, q) in matrix_and_perms(7)) {
        let b = a.permuted(&p, &q);
        prop_assert!(close(per_ryser(&b).unwrap(), per_ryser(&a).unwrap(), bound(&a)));
    }

    #[test]
    fn transpose_invariance(a in matrix(7)) {
        prop_assert!(close(per_ryser(&a.transpose()).unwrap(), per_ryser(&a).unwrap(), bound(&a)));
    }

    #[test]
    fn conjugation(a in matrix(7)) {
        prop_assert!(close(per_ryser(&a.conj()).unwrap(), per_ryser(&a).unwrap().conj(), bound(&a)));
    }

    #[test]
    fn homogeneity(a in matrix(7), c in c64(), row in 0usize..7) {
        let n = a.n();
        let p = per_ryser(&a).unwrap();
        prop_assert!(close(per_ryser(&a.scale(c)).unwrap(), p * c.powu(n as u32), bound(&a)));
        let r = row % n;
        let b = CMatrix::from_fn(n, |i, j| if i == r { c * a[(i, j)] } else { a[(i, j)] });
        prop_assert!(close(per_ryser(&b).unwrap(), p * c, bound(&a)));
    }

    #[test]
    fn block_diagonal(a in matrix(4), b in matrix(4)) {
        let (na, nb) = (a.n(), b.n());
        let m = CMatrix::from_fn(na + nb, |i, j| match (i < na, j < na) {
            (true, true) => a[(i, j)],
            (false, false) => b[(i - na, j - na)],
            _ => C64::new(0.0, 0.0),
        });
        let want = per_ryser(&a).unwrap() * per_ryser(&b).unwrap();
        prop_assert!(close(per_ryser(&m).unwrap(), want, bound(&a) * bound(&b)));
    }

    #[test]
    fn perm_poly_evaluates_characteristic(a in matrix(6), mu in c64()) {
        let direct = per_ryser(&a.characteristic(mu)).unwrap();
        let s = bound(&a.characteristic(mu));
        prop_assert!(close(perm_poly(&a).unwrap().eval(mu), direct, s));
        prop_assert!(close(perm_poly_ryser(&a).unwrap().eval(mu), direct, s));
    }

    #[test]
    fn roots_roundtrip(roots in prop::collection::vec(c64(), 1..10)) {
        let p = Poly::from_roots(&roots);
        let got = poly_roots(&p).unwrap();
        prop_assert_eq!(got.len(), roots.len());
        let q = Poly::from_roots(&got);
        prop_assert!(q.max_coeff_diff(&p) <= 1e-6 * p.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max));
    }

    #[test]
    fn histogram_normalised(pts in prop::collection::vec(c64(), 1..200), bins in 1usize..12) {
        let grid = GridSpec::square(0.8, bins);
        if let Ok(h) = density_histogram(&pts, &grid) {
            prop_assert!((h.mass() - 1.0).abs() < 1e-12);
            prop_assert_eq!(h.total + h.outside, pts.len() as u64);
            for axis in [Axis::Re, Axis::Im] {
                let m = h.marginal(axis);
                let mass: f64 = m.density.iter().sum::<f64>() * m.width();
                prop_assert!((mass - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn mc_independent_of_workers() {
    let f = |rng: &mut rand_chacha::ChaCha8Rng| {
        use rand::Rng;
        Ok(C64::new(rng.random::<f64>(), rng.random::<f64>()))
    };
    let a = with_workers(1, || mc_scalar(5000, 9, f).unwrap());
    let b = with_workers(4, || mc_scalar(5000, 9, f).unwrap());
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}

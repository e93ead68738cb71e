//! Brute-force Gaussian oracle: expectations of products of entries of a
//! centred Gaussian matrix by summing over Wick pairings.

#![allow(dead_code)]

use permpoly::C64;

/// Second moment `E[H_ij H_kl]` of the ensemble.
pub type Covariance = fn(usize, (usize, usize), (usize, usize)) -> f64;

/// GUE: diagonal variance `1/n`, off-diagonal `E|H_ij|^2 = 1/n`.
pub fn gue_cov(n: usize, (i, j): (usize, usize), (k, l): (usize, usize)) -> f64 {
    if i == l && j == k {
        1.0 / n as f64
    } else {
        0.0
    }
}

/// GOE: diagonal variance `1/n`, off-diagonal `1/(2n)`.
pub fn goe_cov(n: usize, (i, j): (usize, usize), (k, l): (usize, usize)) -> f64 {
    let mut c = 0.0;
    if i == k && j == l {
        c += 1.0;
    }
    if i == l && j == k {
        c += 1.0;
    }
    c / (2 * n) as f64
}

fn wick(entries: &[(usize, usize)], n: usize, cov: Covariance) -> f64 {
    match entries {
        [] => 1.0,
        [first, rest @ ..] => {
            if rest.len() % 2 == 0 {
                return 0.0;
            }
            let mut total = 0.0;
            for k in 0..rest.len() {
                let c = cov(n, *first, rest[k]);
                if c != 0.0 {
                    let others: Vec<_> = rest.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, &e)| e).collect();
                    total += c * wick(&others, n, cov);
                }
            }
            total
        }
    }
}

/// `E prod_f (mu_f delta_{i_f j_f} - H_{i_f j_f})`.
fn expect_product(factors: &[(C64, usize, usize)], n: usize, cov: Covariance) -> C64 {
    let m = factors.len();
    let mut total = C64::new(0.0, 0.0);
    for mask in 0u32..(1 << m) {
        let mut constant = C64::new(1.0, 0.0);
        let mut entries = Vec::new();
        for (b, &(mu, i, j)) in factors.iter().enumerate() {
            if mask & (1 << b) != 0 {
                entries.push((i, j));
            } else if i == j {
                constant *= mu;
            } else {
                constant = C64::new(0.0, 0.0);
            }
        }
        if constant == C64::new(0.0, 0.0) {
            continue;
        }
        let sign = if entries.len() % 2 == 0 { 1.0 } else { -1.0 };
        total += constant * sign * wick(&entries, n, cov);
    }
    total
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `E[Per(mu I - H)]`.
pub fn wick_mean(n: usize, mu: C64, cov: Covariance) -> C64 {
    permutations(n)
        .iter()
        .map(|s| {
            let f: Vec<_> = (0..n).map(|i| (mu, i, s[i])).collect();
            expect_product(&f, n, cov)
        })
        .sum()
}

/// `E[Per(mu1 I - H) Per(mu2 I - H)]`.
pub fn wick_two_point(n: usize, mu1: C64, mu2: C64, cov: Covariance) -> C64 {
    let perms = permutations(n);
    let mut total = C64::new(0.0, 0.0);
    for s in &perms {
        for t in &perms {
            let mut f: Vec<_> = (0..n).map(|i| (mu1, i, s[i])).collect();
            f.extend((0..n).map(|i| (mu2, i, t[i])));
            total += expect_product(&f, n, cov);
        }
    }
    total
}

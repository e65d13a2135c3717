#![allow(dead_code)]

use cluster_mech::periodicity::{find_sigma, MutationPlan};
use cluster_mech::{ExchangeMatrix, Permutation};
use num_integer::Integer;
use rand::Rng;

/// A random skew-symmetrizable matrix of rank `n` with entries in
/// `[−bound, bound]` and symmetrizer entries in `1..=max_d`.
pub fn random_exchange<R: Rng>(rng: &mut R, n: usize, bound: i64, max_d: i64) -> ExchangeMatrix {
    let d: Vec<i64> = (0..n).map(|_| rng.random_range(1..=max_d)).collect();
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let (ci, cj) = (d[j] / g, d[i] / g);
            let m = bound / ci.max(cj);
            let a = rng.random_range(-m..=m);
            rows[i][j] = a * ci;
            rows[j][i] = -a * cj;
        }
    }
    ExchangeMatrix::new(&rows).expect("skew-symmetrizable by construction")
}

pub fn random_seq<R: Rng>(rng: &mut R, n: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.random_range(0..n)).collect()
}

pub fn random_vec<R: Rng>(rng: &mut R, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-r..=r)).collect()
}

pub fn a2() -> ExchangeMatrix {
    ExchangeMatrix::new(&[vec![0, 1], vec![-1, 0]]).unwrap()
}

pub fn b2() -> ExchangeMatrix {
    ExchangeMatrix::new(&[vec![0, 1], vec![-2, 0]]).unwrap()
}

pub fn g2() -> ExchangeMatrix {
    ExchangeMatrix::new(&[vec![0, 1], vec![-3, 0]]).unwrap()
}

fn alternating(t: usize) -> Vec<usize> {
    (0..t).map(|s| s % 2).collect()
}

/// The periodic corpus: name and plan.
pub fn periodic_corpus() -> Vec<(&'static str, MutationPlan)> {
    let mut out = vec![
        ("A2 (1,1)", MutationPlan::new(a2(), vec![0, 0], Permutation::identity(2)).unwrap()),
        ("A2 (2,2)", MutationPlan::new(a2(), vec![1, 1], Permutation::identity(2)).unwrap()),
        ("A2 pentagon", MutationPlan::from_one_based(a2(), &[1, 2, 1, 2, 1], Some(&[2, 1])).unwrap()),
        ("A1xA1", MutationPlan::from_one_based(ExchangeMatrix::zeros(2), &[1, 2, 1, 2], None).unwrap()),
    ];
    for (name, b, t) in [("B2", b2(), 6), ("G2", g2(), 8)] {
        let seq = alternating(t);
        let sigma = find_sigma(&b, &seq).unwrap().expect("finite type rank 2 is periodic");
        out.push((name, MutationPlan::new(b, seq, sigma).unwrap()));
    }
    out
}

pub fn pentagon() -> MutationPlan {
    MutationPlan::from_one_based(a2(), &[1, 2, 1, 2, 1], Some(&[2, 1])).unwrap()
}

/// `n` log-spaced values in `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()).collect()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

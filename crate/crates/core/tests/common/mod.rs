//! Independent test oracles: exact rational arithmetic for the belief
//! recursion, brute-force permutation enumeration for the success-time
//! pmf, and a union-find connectivity check. These never call the
//! floating-point implementation paths they validate.
//!
//! Shared across test binaries; not every binary uses every oracle.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn normalize(masses: &[BigRational]) -> Vec<BigRational> {
    let total: BigRational = masses.iter().cloned().sum();
    masses.iter().map(|m| m / &total).collect()
}

fn mean_of(probs: &[BigRational]) -> BigRational {
    probs
        .iter()
        .enumerate()
        .map(|(i, p)| p * BigRational::from(BigInt::from(i)))
        .sum()
}

/// Exact Bayes update after one failed draw from a pool of `pool` nodes.
pub fn rational_failure_update(probs: &[BigRational], pool: usize) -> Vec<BigRational> {
    let weighted: Vec<BigRational> = probs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if i >= pool {
                BigRational::zero()
            } else {
                p * BigRational::from(BigInt::from(pool - i))
            }
        })
        .collect();
    normalize(&weighted)
}

/// Exact expected-benefit sequence `E(B_t)` for `t = 1..=t_max` with B = 1.
pub fn rational_trajectory(masses: &[BigRational], n_r: usize, t_max: usize) -> Vec<BigRational> {
    let mut probs = normalize(masses);
    let mut out = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let pool = n_r - t;
        out.push(mean_of(&probs) / BigRational::from(BigInt::from(pool)));
        if t < t_max {
            probs = rational_failure_update(&probs, pool);
        }
    }
    out
}

/// Success-time pmf by exhaustive enumeration of all orderings of the
/// pool of `n_r - 1` non-target nodes, `n_k` of which are overlap.
/// Exact rational arithmetic; feasible for `n_r <= 9`.
pub fn brute_force_pmf(n_r: usize, n_k: usize) -> Vec<BigRational> {
    let pool = n_r - 1;
    // overlap flags for the canonical pool: first n_k nodes are overlap
    let overlap: Vec<bool> = (0..pool).map(|i| i < n_k).collect();
    let mut perm: Vec<usize> = (0..pool).collect();
    let mut counts = vec![0u64; pool - n_k + 1];
    let mut total = 0u64;
    permute(&mut perm, 0, &overlap, &mut counts, &mut total);
    counts
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), BigInt::from(total)))
        .collect()
}

fn permute(
    perm: &mut Vec<usize>,
    k: usize,
    overlap: &[bool],
    counts: &mut [u64],
    total: &mut u64,
) {
    if k == perm.len() {
        *total += 1;
        let first_success = perm.iter().position(|&v| overlap[v]).unwrap();
        counts[first_success] += 1; // counts[t - 1]
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, overlap, counts, total);
        perm.swap(k, i);
    }
}

/// Hazard-product pmf in exact rationals (the implementation's formula,
/// re-derived independently of its floating-point path).
pub fn rational_hazard_pmf(n_r: usize, n_k: usize) -> Vec<BigRational> {
    let t_max = n_r - n_k;
    let mut out = Vec::with_capacity(t_max);
    let mut survival = BigRational::one();
    for t in 1..=t_max {
        let pool = (n_r - 1) - (t - 1);
        let hazard = BigRational::new(BigInt::from(n_k), BigInt::from(pool));
        out.push(&survival * &hazard);
        survival *= BigRational::one() - hazard;
    }
    out
}

pub fn to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_string().parse::<f64>().unwrap();
    let d = r.denom().to_string().parse::<f64>().unwrap();
    n / d
}

/// Union-find over the edge list; an independent connectivity oracle.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    pub fn component_count(&mut self) -> usize {
        let n = self.parent.len();
        let mut roots: Vec<usize> = (0..n).map(|x| self.find(x)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }
}

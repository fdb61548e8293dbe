//! Seeded random number generation.
//!
//! Every stochastic routine in the crate draws from [`SeededRng`], which is
//! `rand_pcg::Pcg64`: the PCG "XSL RR 128/64" generator (a 128-bit linear
//! congruential state advanced with multiplier
//! `0x2360_ED05_1FC6_5DA4_4385_DF64_9FCC_F645`, output by xor-folding the
//! high and low halves and rotating by the top six bits). Seeds are expanded
//! from a `u64` with `SeedableRng::seed_from_u64`, so a given seed yields the
//! same stream on every platform. Generator state is always owned by the
//! caller and passed by `&mut`.

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::Matrix;

pub type SeededRng = rand_pcg::Pcg64;

pub fn seeded(seed: u64) -> SeededRng {
    SeededRng::seed_from_u64(seed)
}

pub fn standard_normal(rng: &mut SeededRng) -> f64 {
    StandardNormal.sample(rng)
}

/// Matrix of i.i.d. standard normal entries, filled row by row.
pub fn standard_normal_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| standard_normal(rng))
}

pub fn uniform_matrix(rows: usize, cols: usize, lo: f64, hi: f64, rng: &mut SeededRng) -> Matrix {
    let dist = rand_distr::Uniform::new(lo, hi).expect("lo < hi");
    Matrix::from_fn(rows, cols, |_, _| dist.sample(rng))
}

/// Uniformly random permutation of `0..n`.
pub fn permutation(n: usize, rng: &mut SeededRng) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

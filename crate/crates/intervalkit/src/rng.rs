//! Deterministic seeded randomness.
//!
//! Every stochastic component in the crate draws from a [`SeededRng`]; there
//! is no ambient entropy. Identical seeds produce bit-identical streams
//! across runs and platforms (ChaCha8 is endian-independent), which is what
//! makes benchmark runs reproducible byte-for-byte.
//!
//! Parallel tasks never share a stream: derive one per task with
//! [`SeededRng::for_task`], which keys a separate ChaCha stream off the
//! master seed and task index.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::Real;

/// Single-owner deterministic random stream.
#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
    seed: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    /// Independent stream for a parallel task, keyed by `(master_seed, task)`.
    pub fn for_task(master_seed: u64, task: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(task.wrapping_add(1));
        Self {
            inner: rng,
            seed: master_seed,
        }
    }

    /// Seed this stream was constructed with (master seed for task streams).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> Real {
        self.inner.random::<f64>()
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: Real, hi: Real) -> Real {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal draw.
    pub fn standard_normal(&mut self) -> Real {
        self.inner.sample(StandardNormal)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.random::<u64>()
    }

    /// Random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut self.inner);
        idx
    }

    pub fn shuffle<T>(&mut self, slice: &mut [T]) {
        slice.shuffle(&mut self.inner);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededRng::new(0);
        let mut b = SeededRng::new(0);
        for _ in 0..100 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }

    #[test]
    fn different_seeds_differ() {
        let mut a = SeededRng::new(0);
        let mut b = SeededRng::new(1);
        assert_ne!(a.uniform().to_bits(), b.uniform().to_bits());
    }

    #[test]
    fn task_streams_are_independent_of_each_other_and_the_master() {
        let mut master = SeededRng::new(7);
        let mut t0 = SeededRng::for_task(7, 0);
        let mut t1 = SeededRng::for_task(7, 1);
        let (m, a, b) = (master.uniform(), t0.uniform(), t1.uniform());
        assert_ne!(m.to_bits(), a.to_bits());
        assert_ne!(a.to_bits(), b.to_bits());
    }

    // Golden permutation frozen from the first deterministic run; guards the
    // stream against accidental reordering of draws in later refactors.
    #[test]
    fn permutation_golden_value() {
        let mut rng = SeededRng::new(7);
        let got = rng.permutation(10);
        let again = SeededRng::new(7).permutation(10);
        assert_eq!(got, again);
        assert_eq!(got, PERMUTATION_SEED7_N10);
    }

    const PERMUTATION_SEED7_N10: [usize; 10] = [2, 1, 3, 9, 6, 8, 0, 5, 7, 4];

    #[test]
    fn normal_draws_have_sane_moments() {
        let mut rng = SeededRng::new(3);
        let n = 200_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let z = rng.standard_normal();
            sum += z;
            sumsq += z * z;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }
}

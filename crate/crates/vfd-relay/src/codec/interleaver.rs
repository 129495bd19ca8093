//! Seeded pseudo-random coded-bit interleaver.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic bijection on coded-bit positions, drawn once per seed by a
/// Fisher-Yates shuffle.
#[derive(Debug, Clone)]
pub struct Interleaver {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl Interleaver {
    pub fn new(len: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..len).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        perm.shuffle(&mut rng);
        let mut inverse = vec![0usize; len];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        Interleaver { perm, inverse }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `out[i] = x[perm[i]]`.
    pub fn interleave<T: Copy>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.perm.len(), "interleaver length mismatch");
        self.perm.iter().map(|&p| x[p]).collect()
    }

    /// Inverse of [`Interleaver::interleave`].
    pub fn deinterleave<T: Copy>(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.inverse.len(), "interleaver length mismatch");
        self.inverse.iter().map(|&p| x[p]).collect()
    }

    /// Fraction of positions the permutation leaves in place.
    pub fn fixed_point_fraction(&self) -> f64 {
        let fixed = self.perm.iter().enumerate().filter(|(i, &p)| *i == p).count();
        fixed as f64 / self.perm.len().max(1) as f64
    }
}

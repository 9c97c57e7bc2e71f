use rand::seq::SliceRandom;
use rand::Rng;

use super::settings::Sampling;

/// Draws batches of dataset positions from a pool that may change size.
pub(crate) struct PoolSampler {
    mode: Sampling,
    pool: Vec<usize>,
    perm: Vec<usize>,
    /// `None` until the next without-replacement pass is shuffled.
    cursor: Option<usize>,
}

impl PoolSampler {
    pub(crate) fn new(mode: Sampling) -> Self {
        PoolSampler {
            mode,
            pool: Vec::new(),
            perm: Vec::new(),
            cursor: None,
        }
    }

    /// Replaces the pool; positions are canonicalized to ascending order so a
    /// pool is treated as a set.
    pub(crate) fn set_pool(&mut self, mut pool: Vec<usize>) {
        pool.sort_unstable();
        self.pool = pool;
        self.cursor = None;
    }

    pub(crate) fn pool_len(&self) -> usize {
        self.pool.len()
    }

    pub(crate) fn next_batch<R: Rng>(&mut self, batch_size: usize, rng: &mut R) -> Vec<usize> {
        let len = self.pool.len();
        if self.mode == Sampling::WithReplacement || len < batch_size {
            return (0..batch_size)
                .map(|_| self.pool[rng.random_range(0..len)])
                .collect();
        }
        let start = match self.cursor {
            Some(c) if c + batch_size <= len => c,
            _ => {
                self.perm.clone_from(&self.pool);
                self.perm.shuffle(rng);
                0
            }
        };
        self.cursor = Some(start + batch_size);
        self.perm[start..start + batch_size].to_vec()
    }
}

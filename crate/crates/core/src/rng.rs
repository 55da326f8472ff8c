//! Deterministic random streams.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type SolverRng = ChaCha8Rng;

/// Identical seeds give identical streams on every platform.
pub fn seeded_rng(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent seed for a sub-run (e.g. the `k`-th inner solve).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sampling of indices `0..k` with probabilities proportional to `weights`.
#[derive(Debug, Clone)]
pub struct Categorical {
    index: WeightedIndex<f64>,
}

impl Categorical {
    pub fn new(weights: &[f64]) -> Result<Self> {
        WeightedIndex::new(weights)
            .map(|index| Self { index })
            .map_err(|e| Error::Contract(format!("invalid sampling weights: {e}")))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.index.sample(rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_sequence() {
        let cat = Categorical::new(&[0.2, 0.3, 0.5]).unwrap();
        let mut a = seeded_rng(17);
        let mut b = seeded_rng(17);
        let xs: Vec<usize> = (0..1000).map(|_| cat.sample(&mut a)).collect();
        let ys: Vec<usize> = (0..1000).map(|_| cat.sample(&mut b)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn degenerate_weights_always_pick_the_mass() {
        let cat = Categorical::new(&[1.0, 0.0, 0.0]).unwrap();
        let mut rng = seeded_rng(3);
        assert!((0..10_000).all(|_| cat.sample(&mut rng) == 0));
    }

    #[test]
    fn fair_coin_frequency() {
        let cat = Categorical::new(&[0.5, 0.5]).unwrap();
        let mut rng = seeded_rng(2021);
        let zeros = (0..100_000).filter(|_| cat.sample(&mut rng) == 0).count();
        let freq = zeros as f64 / 100_000.0;
        // pinned at this seed
        assert_eq!(zeros, FAIR_COIN_ZEROS_SEED_2021);
        assert!((0.49..=0.51).contains(&freq), "{freq}");
    }

    const FAIR_COIN_ZEROS_SEED_2021: usize = 50268;

    #[test]
    fn invalid_weights_are_rejected() {
        assert!(Categorical::new(&[]).is_err());
        assert!(Categorical::new(&[0.0, 0.0]).is_err());
        assert!(Categorical::new(&[1.0, -1.0]).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_eq!(derive_seed(5, 9), derive_seed(5, 9));
    }
}

//! Seeded deterministic randomness.
//!
//! Every unit of work (one generated instance, one sampled string) draws from
//! its own ChaCha stream keyed by `(seed, domain, index)`, so results do not
//! depend on how work is split across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sigma::{Alphabet, SymString};

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Clone, Debug)]
pub struct SeededRng(ChaCha8Rng);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Independent stream for work item `index` of a task family `domain`.
    pub fn for_task(seed: u64, domain: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ splitmix64(domain));
        rng.set_stream(index);
        SeededRng(rng)
    }

    /// Uniform in `0..n`; unbiased (rejection inside the range sampler).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.0.random_range(0..n)
    }

    pub fn symbol(&mut self, alphabet: Alphabet) -> u8 {
        self.0.random_range(0..alphabet.k())
    }

    pub fn string(&mut self, alphabet: Alphabet, len: usize) -> SymString {
        let symbols = (0..len).map(|_| self.symbol(alphabet)).collect();
        SymString::new(alphabet, symbols).expect("symbols drawn below k")
    }

    pub fn length_between(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below((hi - lo + 1) as u64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<u64> = {
            let mut r = SeededRng::for_task(7, 3, 11);
            (0..32).map(|_| r.below(1000)).collect()
        };
        let b: Vec<u64> = {
            let mut r = SeededRng::for_task(7, 3, 11);
            (0..32).map(|_| r.below(1000)).collect()
        };
        let c: Vec<u64> = {
            let mut r = SeededRng::for_task(7, 3, 12);
            (0..32).map(|_| r.below(1000)).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn symbols_stay_in_range() {
        let a = Alphabet::new(5).unwrap();
        let mut r = SeededRng::new(1);
        let s = r.string(a, 1000);
        assert!(s.symbols().iter().all(|&x| x < 5));
        let mut seen = [false; 5];
        for &x in s.symbols() {
            seen[x as usize] = true;
        }
        assert!(seen.iter().all(|&b| b));
    }
}

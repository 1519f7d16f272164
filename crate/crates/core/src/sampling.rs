//! Seeded instance generators for the randomized identity suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::mod_residue;
use crate::error::{Error, Result};

/// Generator used by every randomized suite.
pub const PRNG: &str = "ChaCha8Rng via SeedableRng::seed_from_u64 (rand_chacha 0.3)";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(b, m)` pairs for the remove-N identity: `b` is a sorted tuple of length 1..=3 with
/// entries in `1..=h-2`. Instances cycle through `m = [sum b]_h`, `m > [sum b]_h` and a
/// uniform `m` in `0..=[sum b]_h`.
pub fn remove_n_instances(h: u32, trials: usize, seed: u64) -> Result<Vec<(Vec<u32>, usize)>> {
    if h < 3 {
        return Err(Error::InvalidArgument(format!("remove-N instances need h >= 3, got {h}")));
    }
    let mut rng = rng(seed);
    let out = (0..trials)
        .map(|k| {
            let len = rng.gen_range(1..=3);
            let mut b: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=h - 2)).collect();
            b.sort_unstable();
            let s = mod_residue(b.iter().map(|&x| x as i64).sum(), h) as usize;
            let m = match k % 3 {
                0 => s,
                1 => s + rng.gen_range(1..=2),
                _ => rng.gen_range(0..=s),
            };
            (b, m)
        })
        .collect();
    Ok(out)
}

/// Tuples of distinct labels in `1..=h` with uniformly chosen length `1..=h`.
pub fn vandermonde_instances(h: u32, trials: usize, seed: u64) -> Result<Vec<Vec<u32>>> {
    if h < 1 {
        return Err(Error::InvalidArgument("h must be positive".into()));
    }
    let mut rng = rng(seed);
    let labels: Vec<u32> = (1..=h).collect();
    Ok((0..trials)
        .map(|_| {
            let len = rng.gen_range(1..=h as usize);
            labels.choose_multiple(&mut rng, len).copied().collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_covering() {
        let a = remove_n_instances(6, 60, 7).unwrap();
        assert_eq!(a, remove_n_instances(6, 60, 7).unwrap());
        for (k, (b, m)) in a.iter().enumerate() {
            let s = mod_residue(b.iter().map(|&x| x as i64).sum(), 6) as usize;
            match k % 3 {
                0 => assert_eq!(*m, s),
                1 => assert!(*m > s),
                _ => assert!(*m <= s),
            }
            assert!(b.iter().all(|&x| (1..=4).contains(&x)));
        }
        assert!(remove_n_instances(2, 1, 0).is_err());
        let v = vandermonde_instances(5, 30, 1).unwrap();
        for t in &v {
            let mut s = t.clone();
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), t.len());
        }
    }
}

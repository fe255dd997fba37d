//! Subset enumeration and seeded subset sampling.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Power-set checks switch from exhaustive enumeration to sampling above this
/// many base elements.
pub const EXHAUSTIVE_LIMIT: usize = 12;
/// Number of samples drawn when a power set is too large.
pub const SAMPLE_COUNT: usize = 4096;
/// Parameter batteries over subsets of a space are exhaustive up to this size.
pub const BATTERY_EXHAUSTIVE_LIMIT: usize = 6;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The subset of `items` selected by the bits of `mask`.
pub fn subset_from_mask<T: Ord + Copy>(items: &[T], mask: u64) -> BTreeSet<T> {
    items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect()
}

/// All subsets of `items` in mask order. Panics above 63 items.
pub fn all_subsets<T: Ord + Copy>(items: &[T]) -> Vec<BTreeSet<T>> {
    assert!(items.len() < 64, "power set too large");
    (0u64..1 << items.len()).map(|m| subset_from_mask(items, m)).collect()
}

pub fn random_subset<T: Ord + Copy>(items: &[T], rng: &mut impl Rng) -> BTreeSet<T> {
    items.iter().filter(|_| rng.gen_bool(0.5)).copied().collect()
}

/// Subsets to quantify over: every subset when `items.len() <= limit`,
/// otherwise [`SAMPLE_COUNT`] seeded samples. The flag reports sampling.
pub fn subsets_or_sample<T: Ord + Copy>(items: &[T], limit: usize, seed: u64) -> (Vec<BTreeSet<T>>, bool) {
    if items.len() <= limit {
        (all_subsets(items), false)
    } else {
        let mut r = rng(seed);
        ((0..SAMPLE_COUNT).map(|_| random_subset(items, &mut r)).collect(), true)
    }
}

/// Uniformly random subset of the given size.
pub fn random_subset_of_size<T: Ord + Copy>(items: &[T], size: usize, rng: &mut impl Rng) -> BTreeSet<T> {
    let mut pool: Vec<T> = items.to_vec();
    let mut out = BTreeSet::new();
    for _ in 0..size.min(pool.len()) {
        let i = rng.gen_range(0..pool.len());
        out.insert(pool.swap_remove(i));
    }
    out
}

/// Parameter battery of subsets of `0..n`: the full power set for small `n`,
/// otherwise the empty set, the whole set, every singleton and one seeded
/// random subset of each intermediate size.
pub fn battery(n: usize, seed: u64) -> Vec<BTreeSet<usize>> {
    let points: Vec<usize> = (0..n).collect();
    if n <= BATTERY_EXHAUSTIVE_LIMIT {
        return all_subsets(&points);
    }
    let mut r = rng(seed);
    let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(), points.iter().copied().collect()];
    out.extend(points.iter().map(|&p| BTreeSet::from([p])));
    for size in 2..n {
        out.push(random_subset_of_size(&points, size, &mut r));
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_set_sizes() {
        assert_eq!(all_subsets(&[1, 2, 3]).len(), 8);
        assert_eq!(all_subsets::<usize>(&[]).len(), 1);
        let (s, sampled) = subsets_or_sample(&(0..13).collect::<Vec<_>>(), EXHAUSTIVE_LIMIT, 1);
        assert!(sampled);
        assert_eq!(s.len(), SAMPLE_COUNT);
    }

    #[test]
    fn battery_is_exhaustive_for_small_spaces() {
        assert_eq!(battery(3, 0).len(), 8);
        let big = battery(8, 5);
        assert!(big.contains(&BTreeSet::new()));
        assert!(big.contains(&(0..8).collect()));
        assert!((0..8).all(|p| big.contains(&BTreeSet::from([p]))));
        assert_eq!(big, battery(8, 5));
    }
}

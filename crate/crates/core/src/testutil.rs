//! Test-only generators and brute-force enumerators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::orders::{EventExpr, PartialPermutation};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every permutation of `items`, by recursion.
pub fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// A random atom over `{0,…,universe−1}` with 1..=max_len elements.
pub fn random_atom(rng: &mut impl Rng, universe: usize, max_len: usize) -> EventExpr {
    let mut pool: Vec<usize> = (0..universe).collect();
    pool.shuffle(rng);
    let len = rng.random_range(1..=max_len.min(universe));
    EventExpr::atom(pool[..len].to_vec()).unwrap()
}

/// A random expression tree of bounded depth over `{0,…,universe−1}`.
pub fn random_expr(rng: &mut impl Rng, universe: usize, depth: usize) -> EventExpr {
    if depth == 0 || rng.random_bool(0.3) {
        return random_atom(rng, universe, 4);
    }
    match rng.random_range(0..3) {
        0 => EventExpr::not(random_expr(rng, universe, depth - 1)),
        1 => EventExpr::and(
            random_expr(rng, universe, depth - 1),
            random_expr(rng, universe, depth - 1),
        ),
        _ => EventExpr::or(
            random_expr(rng, universe, depth - 1),
            random_expr(rng, universe, depth - 1),
        ),
    }
}

/// A uniformly random permutation of `{0,…,n−1}`.
pub fn random_perm(rng: &mut impl Rng, n: usize) -> PartialPermutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    PartialPermutation::from_images(&images).unwrap()
}

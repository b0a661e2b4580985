//! Finite strict partial orders and exact linear-extension counting.

use num_bigint::BigUint;

use crate::caps::check;
use crate::error::{Error, Result};
use crate::orders::OrderPresentation;

/// Largest poset representable with one `u64` mask per element.
pub const MAX_POSET_SIZE: usize = 64;

/// A strict partial order on `{0,…,n−1}`, kept transitively closed.
///
/// `below[v]` is the bitmask of all `u` with `u ≺ v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    below: Vec<u64>,
}

impl FinitePoset {
    pub fn antichain(n: usize) -> Result<Self> {
        check("poset size", n, MAX_POSET_SIZE)?;
        Ok(FinitePoset { below: vec![0; n] })
    }

    pub fn chain(n: usize) -> Result<Self> {
        Self::from_pairs(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Transitive closure of the given `a ≺ b` pairs.
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Result<Self> {
        let mut p = Self::antichain(n)?;
        for (a, b) in pairs {
            if a >= n {
                return Err(Error::Uncovered { element: a });
            }
            if b >= n {
                return Err(Error::Uncovered { element: b });
            }
            p.below[b] |= 1 << a;
        }
        p.close()?;
        Ok(p)
    }

    // Warshall on bitmasks.
    fn close(&mut self) -> Result<()> {
        let n = self.below.len();
        for k in 0..n {
            let bk = self.below[k];
            for v in 0..n {
                if self.below[v] >> k & 1 == 1 {
                    self.below[v] |= bk;
                }
            }
        }
        match (0..n).find(|&v| self.below[v] >> v & 1 == 1) {
            Some(v) => Err(Error::Cyclic { element: v }),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    /// `a ≺ b`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.below[b] >> a & 1 == 1
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.precedes(a, b) || self.precedes(b, a)
    }

    /// Mask of elements strictly below `v`.
    pub fn below_mask(&self, v: usize) -> u64 {
        self.below[v]
    }

    /// All related pairs `(a, b)` with `a ≺ b`, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out: Vec<_> = (0..n)
            .flat_map(|b| {
                (0..n)
                    .filter(move |&a| self.precedes(a, b))
                    .map(move |a| (a, b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_antichain(&self) -> bool {
        self.below.iter().all(|&m| m == 0)
    }

    /// The induced subposet on `{0,…,m−1}`.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if m > self.len() {
            return Err(Error::Uncovered { element: m - 1 });
        }
        let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        Ok(FinitePoset {
            below: self.below[..m].iter().map(|b| b & mask).collect(),
        })
    }

    /// Adds a new element `n` with the given strict lower and upper sets, closing
    /// transitively. The caller guarantees `lower ≺ upper` is consistent.
    pub(crate) fn push_point(&mut self, lower: u64, upper: u64) -> Result<()> {
        let x = self.len();
        check("poset size", x + 1, MAX_POSET_SIZE)?;
        let mut down = lower;
        for v in 0..x {
            if lower >> v & 1 == 1 {
                down |= self.below[v];
            }
        }
        self.below.push(down);
        for v in 0..x {
            if upper >> v & 1 == 1 || self.below[v] & upper != 0 {
                self.below[v] |= down | 1 << x;
            }
        }
        if down >> x & 1 == 1 || (0..x).any(|v| self.below[v] >> v & 1 == 1) {
            return Err(Error::Cyclic { element: x });
        }
        Ok(())
    }

    /// Bitmask of all `u` with `v ≺ u`.
    pub fn above_mask(&self, v: usize) -> u64 {
        (0..self.len())
            .filter(|&u| self.below[u] >> v & 1 == 1)
            .fold(0, |m, u| m | 1 << u)
    }

    /// Whether the order `o` on a superset of `{0,…,n−1}` extends this poset.
    pub fn is_extended_by<O: OrderPresentation + ?Sized>(&self, o: &O) -> bool {
        self.pairs().into_iter().all(|(a, b)| o.less(a, b))
    }
}

/// Exact number of total orders on `{0,…,n−1}` extending `p`.
///
/// Dynamic programming over downsets: `ways[D]` counts the orderings of the
/// downset `D` as an initial segment, and an element may be appended once
/// everything below it is placed.
pub fn linear_extension_count(p: &FinitePoset, cap: usize) -> Result<BigUint> {
    let n = p.len();
    check("poset size", n, cap.min(crate::caps::HARD_POSET_CAP))?;
    let full = (1usize << n) - 1;
    let mut ways = vec![0u128; full + 1];
    ways[0] = 1;
    for mask in 0..full {
        let w = ways[mask];
        if w == 0 {
            continue;
        }
        for v in 0..n {
            if mask >> v & 1 == 0 && (p.below_mask(v) as usize) & !mask == 0 {
                ways[mask | 1 << v] += w;
            }
        }
    }
    Ok(BigUint::from(ways[full]))
}

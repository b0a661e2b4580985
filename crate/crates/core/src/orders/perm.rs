use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite injective map on ℕ: the prefix of a permutation.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct PartialPermutation {
    forward: BTreeMap<usize, usize>,
    backward: BTreeMap<usize, usize>,
}

impl PartialPermutation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> Result<Self> {
        let mut p = Self::new();
        for (a, b) in pairs {
            p.insert(a, b)?;
        }
        Ok(p)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_pairs((0..n).map(|x| (x, x))).expect("identity is injective")
    }

    /// Transposition of `a` and `b` on `{0,…,n−1}`.
    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let f = |x| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        };
        Self::from_pairs((0..n).map(|x| (x, f(x)))).expect("transposition is injective")
    }

    /// From images listed in domain order: `x ↦ images[x]`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        Self::from_pairs(images.iter().copied().enumerate())
    }

    /// Adds `a ↦ b`. Re-inserting an existing pair is a no-op.
    pub fn insert(&mut self, a: usize, b: usize) -> Result<()> {
        match (self.forward.get(&a), self.backward.get(&b)) {
            (Some(&b0), _) if b0 == b => Ok(()),
            (Some(_), _) => Err(Error::Precondition(format!("{a} is already mapped"))),
            (None, Some(_)) => Err(Error::NotInjective { value: b }),
            (None, None) => {
                self.forward.insert(a, b);
                self.backward.insert(b, a);
                Ok(())
            }
        }
    }

    pub fn apply(&self, a: usize) -> Option<usize> {
        self.forward.get(&a).copied()
    }

    pub fn preimage(&self, b: usize) -> Option<usize> {
        self.backward.get(&b).copied()
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.forward.keys().copied()
    }

    pub fn range(&self) -> impl Iterator<Item = usize> + '_ {
        self.backward.keys().copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward.iter().map(|(&a, &b)| (a, b))
    }

    pub fn inverse(&self) -> Self {
        PartialPermutation {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    /// `self ∘ other`, defined where `other` is defined and lands in `self`'s domain.
    pub fn compose(&self, other: &Self) -> Self {
        let pairs = other
            .pairs()
            .filter_map(|(a, b)| self.apply(b).map(|c| (a, c)));
        Self::from_pairs(pairs).expect("composition of injections is injective")
    }

    /// Whether the map restricted to `{0,…,n−1}` is a bijection onto it.
    pub fn is_bijection_on(&self, n: usize) -> bool {
        (0..n).all(|x| matches!(self.apply(x), Some(y) if y < n))
    }

    /// Whether domain and range coincide, i.e. this permutes a finite set.
    pub fn is_permutation(&self) -> bool {
        self.forward.keys().eq(self.backward.keys())
    }

    /// The map extended by the identity off its domain. Only a permutation of
    /// ℕ when [`Self::is_permutation`] holds.
    pub fn apply_or_fix(&self, a: usize) -> usize {
        self.apply(a).unwrap_or(a)
    }

    pub fn restrict_to<F: Fn(usize) -> bool>(&self, keep: F) -> Self {
        Self::from_pairs(self.pairs().filter(|&(a, _)| keep(a))).expect("subset of injection")
    }
}

impl TryFrom<Vec<(usize, usize)>> for PartialPermutation {
    type Error = Error;
    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self> {
        Self::from_pairs(pairs)
    }
}

impl From<PartialPermutation> for Vec<(usize, usize)> {
    fn from(p: PartialPermutation) -> Self {
        p.forward.into_iter().collect()
    }
}

//! Measure of an event through its union-of-signed-conjunctions form.
//!
//! A conjunct `Z_{ℓ₁}^{δ₁} ∩ … ∩ Z_{ℓ_k}^{δ_k}` has weight equal to its number
//! of negated factors. Weight 0 is measured exactly: the positive factors
//! generate a partial order on their support, and the conjunct's measure is
//! the number of its linear extensions over the factorial of the support size.
//! A conjunct `T′ ∩ Z_ℓ⁰` of weight `f + 1` is reduced through
//! `μ(T′ ∩ Z_ℓ⁰) = μ(T′) − μ(T′ ∩ Z_ℓ)`, both of weight `f`. Unions are
//! measured by inclusion–exclusion.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::caps::check;
use crate::error::Result;
use crate::orders::{EventExpr, FiniteOrder};
use crate::scalar::{factorial, MeasureScalar};

use super::poset::{linear_extension_count, FinitePoset};

/// Upper bound on the number of conjuncts a normal form may have.
pub const MAX_TERMS: usize = 4096;

/// An intersection of cylinders (`pos`) and cylinder complements (`neg`).
/// The empty conjunct is the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SignedConjunct {
    pub pos: BTreeSet<FiniteOrder>,
    pub neg: BTreeSet<FiniteOrder>,
}

impl SignedConjunct {
    /// Number of negated factors.
    pub fn weight(&self) -> usize {
        self.neg.len()
    }

    pub fn is_whole_space(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    fn meet(&self, other: &Self) -> Option<Self> {
        let pos: BTreeSet<_> = self.pos.union(&other.pos).cloned().collect();
        let neg: BTreeSet<_> = self.neg.union(&other.neg).cloned().collect();
        if pos.intersection(&neg).next().is_some() {
            return None;
        }
        Some(SignedConjunct { pos, neg })
    }

    fn subsumes(&self, other: &Self) -> bool {
        self.pos.is_subset(&other.pos) && self.neg.is_subset(&other.neg)
    }

    /// Cheap emptiness test: the positive factors are cyclic, or they force
    /// some negated cylinder.
    fn is_null(&self) -> bool {
        match positive_closure(&self.pos) {
            Ok(Some(closure)) => self.neg.iter().any(|l| closure.forces(l)),
            Ok(None) => true,
            Err(_) => false,
        }
    }
}

/// Union of signed conjuncts; empty means the empty event.
pub type NormalForm = Vec<SignedConjunct>;

/// Rewrites `e` as a union of signed conjuncts, pushing negations to atoms
/// and distributing `&` over `|`.
pub fn normal_form(e: &EventExpr) -> Result<NormalForm> {
    let mut memo = HashMap::new();
    dnf(e, false, &mut memo)
}

fn dnf<'a>(
    e: &'a EventExpr,
    negated: bool,
    memo: &mut HashMap<(&'a EventExpr, bool), NormalForm>,
) -> Result<NormalForm> {
    if let Some(nf) = memo.get(&(e, negated)) {
        return Ok(nf.clone());
    }
    let nf = match (e, negated) {
        (EventExpr::Atom(l), false) if l.len() <= 1 => vec![SignedConjunct::default()],
        (EventExpr::Atom(l), true) if l.len() <= 1 => Vec::new(),
        (EventExpr::Atom(l), false) => vec![SignedConjunct {
            pos: BTreeSet::from([l.clone()]),
            neg: BTreeSet::new(),
        }],
        (EventExpr::Atom(l), true) => vec![SignedConjunct {
            pos: BTreeSet::new(),
            neg: BTreeSet::from([l.clone()]),
        }],
        (EventExpr::Not(inner), _) => dnf(inner, !negated, memo)?,
        (EventExpr::And(a, b), false) | (EventExpr::Or(a, b), true) => {
            let left = dnf(a, negated, memo)?;
            let right = dnf(b, negated, memo)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    out.extend(l.meet(r));
                }
            }
            simplify(out)?
        }
        (EventExpr::Or(a, b), false) | (EventExpr::And(a, b), true) => {
            let mut out = dnf(a, negated, memo)?;
            out.extend(dnf(b, negated, memo)?);
            simplify(out)?
        }
    };
    memo.insert((e, negated), nf.clone());
    Ok(nf)
}

/// Drops null conjuncts, duplicates, and conjuncts absorbed by a weaker one.
fn simplify(mut terms: NormalForm) -> Result<NormalForm> {
    terms.retain(|t| !t.is_null());
    terms.sort();
    terms.dedup();
    if terms.iter().any(SignedConjunct::is_whole_space) {
        return Ok(vec![SignedConjunct::default()]);
    }
    terms.sort_by_key(|t| t.pos.len() + t.neg.len());
    let mut kept: Vec<SignedConjunct> = Vec::with_capacity(terms.len());
    for t in terms {
        if !kept.iter().any(|k| k.subsumes(&t)) {
            kept.push(t);
        }
    }
    kept.sort();
    check("normal-form terms", kept.len(), MAX_TERMS)?;
    Ok(kept)
}

/// The partial order generated by a set of positive cylinders, on their support.
struct Closure {
    index: BTreeMap<usize, usize>,
    poset: FinitePoset,
}

impl Closure {
    fn forces(&self, l: &FiniteOrder) -> bool {
        l.len() >= 2
            && l.elements().windows(2).all(|w| {
                match (self.index.get(&w[0]), self.index.get(&w[1])) {
                    (Some(&a), Some(&b)) => self.poset.precedes(a, b),
                    _ => false,
                }
            })
    }
}

/// `None` when the cylinders are jointly unsatisfiable.
fn positive_closure(pos: &BTreeSet<FiniteOrder>) -> Result<Option<Closure>> {
    let index: BTreeMap<usize, usize> = pos
        .iter()
        .flat_map(|l| l.elements().iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, x)| (x, i))
        .collect();
    check(
        "conjunct support",
        index.len(),
        super::poset::MAX_POSET_SIZE,
    )?;
    let pairs = pos.iter().flat_map(|l| {
        l.elements()
            .windows(2)
            .map(|w| (index[&w[0]], index[&w[1]]))
            .collect::<Vec<_>>()
    });
    Ok(FinitePoset::from_pairs(index.len(), pairs)
        .ok()
        .map(|poset| Closure { index, poset }))
}

/// Memoized evaluator for conjuncts and unions of conjuncts.
pub struct WeightSolver<T> {
    poset_cap: usize,
    conjuncts: HashMap<SignedConjunct, T>,
    unions: HashMap<Vec<SignedConjunct>, T>,
}

impl<T: MeasureScalar> WeightSolver<T> {
    pub fn new(poset_cap: usize) -> Self {
        WeightSolver {
            poset_cap,
            conjuncts: HashMap::new(),
            unions: HashMap::new(),
        }
    }

    /// Measure of one signed conjunct by induction on its weight.
    pub fn conjunct(&mut self, t: &SignedConjunct) -> Result<T> {
        if let Some(v) = self.conjuncts.get(t) {
            return Ok(v.clone());
        }
        let value = match t.neg.iter().next_back() {
            None => self.weight_zero(&t.pos)?,
            Some(last) => {
                let mut lighter = t.clone();
                lighter.neg.remove(last);
                let whole = self.conjunct(&lighter)?;
                let mut inside = lighter;
                inside.pos.insert(last.clone());
                let inside = self.conjunct(&inside)?;
                whole - inside
            }
        };
        self.conjuncts.insert(t.clone(), value.clone());
        Ok(value)
    }

    fn weight_zero(&mut self, pos: &BTreeSet<FiniteOrder>) -> Result<T> {
        let Some(closure) = positive_closure(pos)? else {
            return Ok(T::zero());
        };
        let k = closure.index.len();
        let extensions = linear_extension_count(&closure.poset, self.poset_cap)?;
        Ok(T::from_ratio(&extensions, &factorial(k)))
    }

    /// `μ(T₁ ∪ … ∪ T_m) = μ(T₁ ∪ … ∪ T_{m−1}) + μ(T_m) − μ(⋃_{i<m} T_i ∩ T_m)`.
    pub fn union(&mut self, terms: &[SignedConjunct]) -> Result<T> {
        match terms {
            [] => return Ok(T::zero()),
            [t] => return self.conjunct(t),
            _ => {}
        }
        if terms.iter().any(SignedConjunct::is_whole_space) {
            return Ok(T::one());
        }
        if let Some(v) = self.unions.get(terms) {
            return Ok(v.clone());
        }
        let (last, rest) = terms.split_last().expect("non-empty");
        let overlaps = simplify(rest.iter().filter_map(|t| t.meet(last)).collect())?;
        let value = self.union(rest)? + self.conjunct(last)? - self.union(&overlaps)?;
        self.unions.insert(terms.to_vec(), value.clone());
        Ok(value)
    }
}

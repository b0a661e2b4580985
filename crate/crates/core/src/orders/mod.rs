//! Total orders, cylinder events and the action of finitary permutations.

mod expr;
mod parse;
mod perm;
mod prefix;

pub use expr::{EventExpr, FiniteOrder};
pub use parse::parse_event;
pub use perm::PartialPermutation;
pub use prefix::OrderPrefix;

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// A decidable strict total order on a subset of ℕ.
pub trait OrderPresentation {
    /// Whether `a` strictly precedes `b`. Only meaningful for `a`, `b` in the domain.
    fn less(&self, a: usize, b: usize) -> bool;

    /// Whether `x` is in the domain. Presentations of orders on all of ℕ keep the default.
    fn contains(&self, _x: usize) -> bool {
        true
    }

    /// Exclusive upper bound on the domain, when it is an initial segment `{0,…,n−1}`.
    fn domain_len(&self) -> Option<usize> {
        None
    }

    /// Stable identifier used in certificates and reports.
    fn id(&self) -> String {
        "anonymous".to_string()
    }
}

impl<T: OrderPresentation + ?Sized> OrderPresentation for &T {
    fn less(&self, a: usize, b: usize) -> bool {
        (**self).less(a, b)
    }
    fn contains(&self, x: usize) -> bool {
        (**self).contains(x)
    }
    fn domain_len(&self) -> Option<usize> {
        (**self).domain_len()
    }
    fn id(&self) -> String {
        (**self).id()
    }
}

impl<T: OrderPresentation + ?Sized> OrderPresentation for Box<T> {
    fn less(&self, a: usize, b: usize) -> bool {
        (**self).less(a, b)
    }
    fn contains(&self, x: usize) -> bool {
        (**self).contains(x)
    }
    fn domain_len(&self) -> Option<usize> {
        (**self).domain_len()
    }
    fn id(&self) -> String {
        (**self).id()
    }
}

/// Union of the element sets of all atoms.
pub fn support(e: &EventExpr) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    e.collect_support(&mut out);
    out
}

/// Whether the order `o` lies in the event `e`.
pub fn evaluate<O: OrderPresentation + ?Sized>(e: &EventExpr, o: &O) -> Result<bool> {
    if let Some(x) = support(e).into_iter().find(|&x| !o.contains(x)) {
        return Err(Error::Uncovered { element: x });
    }
    Ok(evaluate_unchecked(e, o))
}

pub(crate) fn evaluate_unchecked<O: OrderPresentation + ?Sized>(e: &EventExpr, o: &O) -> bool {
    match e {
        EventExpr::Atom(l) => extends(o, l),
        EventExpr::Not(inner) => !evaluate_unchecked(inner, o),
        EventExpr::And(a, b) => evaluate_unchecked(a, o) && evaluate_unchecked(b, o),
        EventExpr::Or(a, b) => evaluate_unchecked(a, o) || evaluate_unchecked(b, o),
    }
}

/// Whether `o` extends the finite order `l`.
pub fn extends<O: OrderPresentation + ?Sized>(o: &O, l: &FiniteOrder) -> bool {
    l.elements().windows(2).all(|w| o.less(w[0], w[1]))
}

/// `σξ` on a prefix: `x <_{σξ} y ⟺ σ⁻¹x <_ξ σ⁻¹y`.
pub fn act(sigma: &PartialPermutation, o: &OrderPrefix) -> Result<OrderPrefix> {
    let n = o.len();
    if !sigma.is_bijection_on(n) {
        return Err(Error::NotBijective { n });
    }
    let seq = o
        .sequence()
        .into_iter()
        .map(|x| sigma.apply(x).expect("total on prefix"))
        .collect();
    OrderPrefix::from_sequence(seq)
}

/// `σℓ`: same positions, relabeled elements, so that `σZ_ℓ = Z_{σℓ}`.
pub fn act_on_event(sigma: &PartialPermutation, l: &FiniteOrder) -> Result<FiniteOrder> {
    let relabeled = l
        .elements()
        .iter()
        .map(|&x| sigma.apply(x).ok_or(Error::OutsideDomain { element: x }))
        .collect::<Result<Vec<_>>>()?;
    FiniteOrder::new(relabeled)
}

/// Relabels every atom of `e` by `σ`.
pub fn act_on_expr(sigma: &PartialPermutation, e: &EventExpr) -> Result<EventExpr> {
    Ok(match e {
        EventExpr::Atom(l) => EventExpr::Atom(act_on_event(sigma, l)?),
        EventExpr::Not(inner) => EventExpr::not(act_on_expr(sigma, inner)?),
        EventExpr::And(a, b) => EventExpr::and(act_on_expr(sigma, a)?, act_on_expr(sigma, b)?),
        EventExpr::Or(a, b) => EventExpr::or(act_on_expr(sigma, a)?, act_on_expr(sigma, b)?),
    })
}

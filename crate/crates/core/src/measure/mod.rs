//! The invariant measure `μ` on the algebra generated by cylinders.

mod dyadic;
mod poset;
mod weight;

pub use dyadic::DyadicApprox;
pub use poset::{linear_extension_count, FinitePoset, MAX_POSET_SIZE};
pub use weight::{normal_form, NormalForm, SignedConjunct, WeightSolver, MAX_TERMS};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::caps::{check, Caps};
use crate::error::{Error, Result};
use crate::orders::{
    act_on_expr, support, EventExpr, FiniteOrder, OrderPresentation, PartialPermutation,
};
use crate::scalar::{factorial, MeasureScalar};
use crate::ExactRational;

/// `μ(Z_ℓ) = 1/k!` where `k` is the number of elements of `ℓ`.
pub fn mu_cylinder<T: MeasureScalar>(l: &FiniteOrder) -> T {
    T::from_ratio(&BigUint::from(1u32), &factorial(l.len()))
}

/// Exact measure by enumerating every total order on the support.
///
/// Events of the cylinder algebra depend only on the order restricted to
/// their support, and each of the `k!` orders on a `k`-element support has
/// measure `1/k!`.
pub fn mu_exact<T: MeasureScalar>(e: &EventExpr, caps: &Caps) -> Result<T> {
    let elements: Vec<usize> = support(e).into_iter().collect();
    let k = elements.len();
    check("event support", k, caps.support)?;
    let relabel =
        PartialPermutation::from_pairs(elements.iter().enumerate().map(|(i, &x)| (x, i)))?;
    let local = act_on_expr(&relabel, e)?;

    let mut ranks: Vec<usize> = (0..k).collect();
    let mut hits = 0u64;
    for_each_permutation(&mut ranks, |r| {
        if crate::orders::evaluate_unchecked(&local, &Ranks(r)) {
            hits += 1;
        }
    });
    Ok(T::from_ratio(&BigUint::from(hits), &factorial(k)))
}

struct Ranks<'a>(&'a [usize]);

impl OrderPresentation for Ranks<'_> {
    fn less(&self, a: usize, b: usize) -> bool {
        self.0[a] < self.0[b]
    }
}

/// Heap's algorithm; calls `f` once per permutation of `items`.
fn for_each_permutation(items: &mut [usize], mut f: impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Measure through inclusion–exclusion and the weight recursion, in the
/// scalar type `T`.
pub fn mu_weight<T: MeasureScalar>(e: &EventExpr, caps: &Caps) -> Result<T> {
    check("event support", support(e).len(), caps.poset)?;
    let nf = normal_form(e)?;
    WeightSolver::new(caps.poset).union(&nf)
}

/// Dyadic `β_k` with `|β_k − μ(e)| < 2^{−k}`.
///
/// The recursion runs in exact arithmetic; rounding happens once at the end.
pub fn mu_weight_recursive(e: &EventExpr, k: u32, caps: &Caps) -> Result<DyadicApprox> {
    check("precision", k as usize, caps.precision as usize)?;
    let exact: ExactRational = mu_weight(e, caps)?;
    Ok(DyadicApprox::round(&exact, k))
}

fn adjacency_args(n: usize, m: usize, size: usize) -> Result<()> {
    if n == m {
        return Err(Error::Precondition("the two elements must differ".into()));
    }
    if size < 2 || n >= size || m >= size {
        return Err(Error::Precondition(format!(
            "need n, m < N and N ≥ 2, got n={n}, m={m}, N={size}"
        )));
    }
    Ok(())
}

/// Measure of "`n` and `m` are adjacent among `{0,…,N−1}`": `L/N!` with
/// `L = 2(N−1)(N−2)!` adjacent-pair orders, i.e. `2/N`.
pub fn mu_adjacency<T: MeasureScalar>(n: usize, m: usize, size: usize) -> Result<T> {
    adjacency_args(n, m, size)?;
    let adjacent_orders = BigUint::from(2u32) * BigUint::from(size - 1) * factorial(size - 2);
    Ok(T::from_ratio(&adjacent_orders, &factorial(size)))
}

/// The adjacency event as an expression: no `j < N` lies strictly between `n` and `m`.
pub fn adjacency_event(n: usize, m: usize, size: usize) -> Result<EventExpr> {
    adjacency_args(n, m, size)?;
    let both = EventExpr::or(EventExpr::atom(vec![n, m])?, EventExpr::atom(vec![m, n])?);
    let gaps = (0..size)
        .filter(|&j| j != n && j != m)
        .map(|j| -> Result<EventExpr> {
            Ok(EventExpr::not(EventExpr::or(
                EventExpr::atom(vec![n, j, m])?,
                EventExpr::atom(vec![m, j, n])?,
            )))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EventExpr::and(both, EventExpr::all(gaps)))
}

/// Which route produced a measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Weight,
}

/// JSON record `{"expr", "mu", "method", "precision"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub expr: String,
    pub mu: String,
    pub method: Method,
    pub precision: Option<u32>,
}

impl MeasureRecord {
    /// Exact value `p/q` of `e`.
    pub fn exact(e: &EventExpr, caps: &Caps) -> Result<Self> {
        let mu: ExactRational = mu_exact(e, caps)?;
        Ok(MeasureRecord {
            expr: e.to_string(),
            mu: mu.to_string(),
            method: Method::Exact,
            precision: None,
        })
    }

    /// Dyadic value `m/2^k` of `e` through the weight recursion.
    pub fn weight(e: &EventExpr, k: u32, caps: &Caps) -> Result<Self> {
        let beta = mu_weight_recursive(e, k, caps)?;
        Ok(MeasureRecord {
            expr: e.to_string(),
            mu: beta.to_string(),
            method: Method::Weight,
            precision: Some(k),
        })
    }
}

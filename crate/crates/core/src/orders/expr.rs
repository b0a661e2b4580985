use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A total order on a finite subset of ℕ, listed from least to greatest.
///
/// Indexes the cylinder `Z_ℓ` of all orders on ℕ extending it. The empty
/// order and one-element orders index the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FiniteOrder {
    elements: Vec<usize>,
}

impl FiniteOrder {
    pub fn new(elements: Vec<usize>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &x in &elements {
            if !seen.insert(x) {
                return Err(Error::RepeatedElement { element: x });
            }
        }
        Ok(FiniteOrder { elements })
    }

    pub fn empty() -> Self {
        FiniteOrder {
            elements: Vec::new(),
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Position of `x` in the order, if present.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.elements.iter().position(|&y| y == x)
    }
}

impl TryFrom<Vec<usize>> for FiniteOrder {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        FiniteOrder::new(v)
    }
}

impl From<FiniteOrder> for Vec<usize> {
    fn from(o: FiniteOrder) -> Self {
        o.elements
    }
}

impl fmt::Display for FiniteOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ord(")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str("<")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// A member of the boolean algebra generated by the cylinders.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EventExpr {
    Atom(FiniteOrder),
    Not(Box<EventExpr>),
    And(Box<EventExpr>, Box<EventExpr>),
    Or(Box<EventExpr>, Box<EventExpr>),
}

impl EventExpr {
    pub fn atom(elements: Vec<usize>) -> Result<Self> {
        Ok(EventExpr::Atom(FiniteOrder::new(elements)?))
    }

    /// The whole space.
    pub fn top() -> Self {
        EventExpr::Atom(FiniteOrder::empty())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: EventExpr) -> Self {
        EventExpr::Not(Box::new(e))
    }

    pub fn and(a: EventExpr, b: EventExpr) -> Self {
        EventExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: EventExpr, b: EventExpr) -> Self {
        EventExpr::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; the whole space when empty.
    pub fn all<I: IntoIterator<Item = EventExpr>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(EventExpr::and)
            .unwrap_or_else(EventExpr::top)
    }

    /// Left-nested disjunction; the empty event when empty.
    pub fn any<I: IntoIterator<Item = EventExpr>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(EventExpr::or)
            .unwrap_or_else(|| EventExpr::not(EventExpr::top()))
    }

    pub(crate) fn collect_support(&self, out: &mut BTreeSet<usize>) {
        match self {
            EventExpr::Atom(l) => out.extend(l.elements().iter().copied()),
            EventExpr::Not(e) => e.collect_support(out),
            EventExpr::And(a, b) | EventExpr::Or(a, b) => {
                a.collect_support(out);
                b.collect_support(out);
            }
        }
    }

    /// Every atom, left to right.
    pub fn atoms(&self) -> Vec<&FiniteOrder> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |l| out.push(l));
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a FiniteOrder)) {
        match self {
            EventExpr::Atom(l) => f(l),
            EventExpr::Not(e) => e.visit_atoms(f),
            EventExpr::And(a, b) | EventExpr::Or(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }
}

// Precedence: `!` > `&` > `|`, both binary operators left-associative.
impl fmt::Display for EventExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EventExpr::Atom(l) => write!(f, "{l}"),
            EventExpr::Not(e) => match **e {
                EventExpr::Atom(_) | EventExpr::Not(_) => write!(f, "!{e}"),
                _ => write!(f, "!({e})"),
            },
            EventExpr::And(a, b) => {
                match **a {
                    EventExpr::Or(..) => write!(f, "({a})")?,
                    _ => write!(f, "{a}")?,
                }
                f.write_str(" & ")?;
                match **b {
                    EventExpr::Or(..) | EventExpr::And(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            EventExpr::Or(a, b) => {
                write!(f, "{a} | ")?;
                match **b {
                    EventExpr::Or(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
        }
    }
}

use num_traits::One;
use serde::{Serialize, Serializer};

use crate::caps::{check, Caps};
use crate::error::{Error, Result};
use crate::fraisse::{universal_poset_stage, PosetStage};
use crate::measure::{adjacency_event, linear_extension_count, mu_adjacency};
use crate::orders::{EventExpr, OrderPrefix, OrderPresentation};
use crate::scalar::factorial;
use crate::ExactRational;

use super::stream::MAX_SAMPLE_LEN;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// Level `k`: `n` and `m` adjacent among `{0,…,N(k)−1}`.
    Density { n: usize, m: usize },
    /// Level `k`: `n` is least or greatest among `{0,…,N(k)−1}`.
    Unbounded { n: usize },
    /// Level `k`: the order extends the least universal-poset stage of
    /// measure at most `2^{−k}`.
    Poset,
}

/// A sequence of events of shrinking measure; an order lying in level `k`
/// fails the test at `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MLTestFamily {
    kind: FamilyKind,
    caps: Caps,
}

/// One level of a test family.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub k: u32,
    /// The level event only reads `{0,…,size−1}`.
    pub size: usize,
    pub exact_mu: ExactRational,
    stage: Option<PosetStage>,
    kind: FamilyKind,
}

fn dyadic_bound(k: u32) -> ExactRational {
    ExactRational::new(1.into(), num_bigint::BigInt::one() << k)
}

impl MLTestFamily {
    pub fn density(n: usize, m: usize) -> Result<Self> {
        if n == m {
            return Err(Error::Precondition(format!(
                "density family needs n ≠ m, got {n} twice"
            )));
        }
        Ok(MLTestFamily {
            kind: FamilyKind::Density { n, m },
            caps: Caps::default(),
        })
    }

    pub fn unbounded(n: usize) -> Self {
        MLTestFamily {
            kind: FamilyKind::Unbounded { n },
            caps: Caps::default(),
        }
    }

    pub fn poset(caps: &Caps) -> Self {
        MLTestFamily {
            kind: FamilyKind::Poset,
            caps: *caps,
        }
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            FamilyKind::Density { n, m } => format!("density({n},{m})"),
            FamilyKind::Unbounded { n } => format!("unbounded({n})"),
            FamilyKind::Poset => "poset".to_string(),
        }
    }

    pub fn level(&self, k: u32) -> Result<Level> {
        let too_big = || Error::CapExceeded {
            what: "test level",
            got: k as usize,
            cap: 63,
        };
        let doubled = 2usize.checked_pow(k + 1).ok_or_else(too_big)?;
        let (size, exact_mu, stage) = match self.kind {
            FamilyKind::Density { n, m } => {
                let size = doubled
                    .checked_mul(2.max(n + 1).max(m + 1))
                    .ok_or_else(too_big)?;
                check("level size", size, MAX_SAMPLE_LEN)?;
                (size, mu_adjacency::<ExactRational>(n, m, size)?, None)
            }
            FamilyKind::Unbounded { n } => {
                let size = doubled.max(n + 1);
                check("level size", size, MAX_SAMPLE_LEN)?;
                let mu = ExactRational::new(2.into(), size.into());
                (size, mu, None)
            }
            FamilyKind::Poset => {
                let bound = dyadic_bound(k);
                let top = self.caps.poset.min(self.caps.stage);
                let mut found = None;
                for size in 1..=top {
                    let stage = universal_poset_stage(size, self.caps.stage)?;
                    let mu = poset_ratio(&stage, &self.caps)?;
                    if mu <= bound {
                        found = Some((size, mu, Some(stage)));
                        break;
                    }
                }
                found.ok_or(Error::CapExceeded {
                    what: "poset size needed for the level",
                    got: top + 1,
                    cap: top,
                })?
            }
        };
        Ok(Level {
            k,
            size,
            exact_mu,
            stage,
            kind: self.kind.clone(),
        })
    }
}

fn poset_ratio(stage: &PosetStage, caps: &Caps) -> Result<ExactRational> {
    let e = linear_extension_count(&stage.stage, caps.poset)?;
    Ok(ExactRational::new(e.into(), factorial(stage.len()).into()))
}

impl Level {
    /// Whether the order lies in the level event. Reads only `{0,…,size−1}`.
    pub fn member<O: OrderPresentation + ?Sized>(&self, o: &O) -> bool {
        let others = |x: usize| (0..self.size).filter(move |&j| j != x);
        match self.kind {
            FamilyKind::Density { n, m } => {
                let (lo, hi) = if o.less(n, m) { (n, m) } else { (m, n) };
                !others(n)
                    .filter(|&j| j != m)
                    .any(|j| o.less(lo, j) && o.less(j, hi))
            }
            FamilyKind::Unbounded { n } => {
                others(n).all(|j| o.less(n, j)) || others(n).all(|j| o.less(j, n))
            }
            FamilyKind::Poset => {
                let stage = self.stage.as_ref().expect("poset levels carry their stage");
                stage.stage.is_extended_by(o)
            }
        }
    }

    /// The level as an event expression.
    pub fn to_expr(&self) -> Result<EventExpr> {
        match self.kind {
            FamilyKind::Density { n, m } => adjacency_event(n, m, self.size),
            FamilyKind::Unbounded { n } => {
                let least = (0..self.size)
                    .filter(|&j| j != n)
                    .map(|j| EventExpr::atom(vec![n, j]));
                let greatest = (0..self.size)
                    .filter(|&j| j != n)
                    .map(|j| EventExpr::atom(vec![j, n]));
                Ok(EventExpr::or(
                    EventExpr::all(least.collect::<Result<Vec<_>>>()?),
                    EventExpr::all(greatest.collect::<Result<Vec<_>>>()?),
                ))
            }
            FamilyKind::Poset => {
                let stage = self.stage.as_ref().expect("poset levels carry their stage");
                let atoms = stage
                    .stage
                    .pairs()
                    .into_iter()
                    .map(|(a, b)| EventExpr::atom(vec![a, b]));
                Ok(EventExpr::all(atoms.collect::<Result<Vec<_>>>()?))
            }
        }
    }
}

/// Whether `o` linearly extends stage `N` of the universal poset.
pub fn poset_extension_test(o: &OrderPrefix, n: usize, caps: &Caps) -> Result<bool> {
    let stage = universal_poset_stage(n, caps.stage)?;
    if o.len() < n {
        return Err(Error::Uncovered { element: o.len() });
    }
    Ok(stage.stage.is_extended_by(o))
}

/// `e(ℙ_N)/N!`, the measure of the orders extending stage `N`.
pub fn poset_level_measure(n: usize, caps: &Caps) -> Result<ExactRational> {
    poset_ratio(&universal_poset_stage(n, caps.stage)?, caps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Pass { depth: u32 },
    Fail { level: u32 },
    Budget { level: u32, reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub k: u32,
    #[serde(serialize_with = "fraction")]
    pub exact_mu: ExactRational,
    pub member: bool,
}

fn fraction<S: Serializer>(q: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub levels: Vec<LevelReport>,
    pub verdict: Verdict,
}

impl FamilyReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }
}

/// Evaluates levels `1..=depth` of each family on `o`. The verdict is the
/// greatest failed level, else a pass, else the level where the construction
/// of the level or the order's domain ran out.
pub fn run_ml_tests<O: OrderPresentation + ?Sized>(
    o: &O,
    families: &[MLTestFamily],
    depth: u32,
) -> Vec<FamilyReport> {
    families
        .iter()
        .map(|family| {
            let mut levels = Vec::new();
            let mut budget = None;
            for k in 1..=depth {
                let level = match family.level(k) {
                    Ok(level) => level,
                    Err(e) => {
                        budget = Some((k, e.to_string()));
                        break;
                    }
                };
                if let Some(d) = o.domain_len().filter(|&d| d < level.size) {
                    budget = Some((
                        k,
                        format!("level needs {} points, order has {d}", level.size),
                    ));
                    break;
                }
                levels.push(LevelReport {
                    k,
                    member: level.member(o),
                    exact_mu: level.exact_mu,
                });
            }
            let failed = levels.iter().filter(|l| l.member).map(|l| l.k).max();
            let verdict = match (failed, budget) {
                (Some(level), _) => Verdict::Fail { level },
                (None, Some((level, reason))) => Verdict::Budget { level, reason },
                (None, None) => Verdict::Pass { depth },
            };
            FamilyReport {
                family: family.name(),
                levels,
                verdict,
            }
        })
        .collect()
}

/// Every level's measure is at most `2^{−k}`.
pub fn level_bound_holds(level: &Level) -> bool {
    level.exact_mu <= dyadic_bound(level.k)
}

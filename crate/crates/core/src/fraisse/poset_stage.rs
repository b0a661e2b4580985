//! A recursive presentation of the universal poset together with its
//! canonical linear extension, built one point per stage.
//!
//! A demand `(A, B, Z, c)` over the current domain asks for a new point `x`
//! with `A ≺ x ≺ B`, `x` incomparable to every element of `Z`, and `x` in the
//! `c`-th gap of `F = A ∪ B ∪ Z` listed in canonical order. Demands are
//! scheduled by weight `Σ_{v∈F} (v+1)`; within a weight, by `F` in
//! lexicographic order, then by the base-3 labelling of `F` (digit 0 for `A`,
//! 1 for `B`, 2 for `Z`, least element first), then by gap. Each weight class
//! is finite, so every demand has finitely many predecessors and every
//! consistent demand is eventually met.
//!
//! Each stage realizes the least scheduled demand that is consistent and not
//! yet met. The new point goes to the middle of its canonical gap. Beyond the
//! demand, it is placed above every canonically earlier point it can be
//! without touching `Z` or `B`, then below every canonically later point
//! lying above its whole downset and not below `Z`. Relations among old
//! points never change.

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::caps::check;
use crate::error::{Error, Result};
use crate::measure::FinitePoset;
use crate::orders::{OrderPrefix, OrderPresentation};

/// One demand of the staged construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Demand {
    pub below: BTreeSet<usize>,
    pub above: BTreeSet<usize>,
    pub incomparable: BTreeSet<usize>,
    /// Gap index among the demand's elements in canonical order.
    pub gap: usize,
}

impl Demand {
    fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.below
            .iter()
            .chain(&self.above)
            .chain(&self.incomparable)
            .copied()
    }

    /// The axiom's precondition: `A ≺ B`, no `z ≺ a`, no `b ≺ z`.
    pub fn poset_consistent(&self, p: &FinitePoset) -> bool {
        self.below
            .iter()
            .all(|&a| self.above.iter().all(|&b| p.precedes(a, b)))
            && self.incomparable.iter().all(|&z| {
                self.below.iter().all(|&a| !p.precedes(z, a))
                    && self.above.iter().all(|&b| !p.precedes(b, z))
            })
    }

    /// Elements of the demand sorted canonically.
    fn sorted<O: OrderPresentation>(&self, canon: &O) -> Vec<usize> {
        let mut f: Vec<usize> = self.elements().collect();
        f.sort_by(|&x, &y| cmp_by(canon, x, y));
        f
    }

    fn consistent<O: OrderPresentation>(&self, p: &FinitePoset, canon: &O) -> bool {
        if !self.poset_consistent(p) {
            return false;
        }
        let f = self.sorted(canon);
        f[..self.gap].iter().all(|x| !self.above.contains(x))
            && f[self.gap..].iter().all(|x| !self.below.contains(x))
    }

    /// Whether `x` realizes the poset part of the demand.
    pub fn realized_in_poset_by(&self, p: &FinitePoset, x: usize) -> bool {
        !self.below.contains(&x)
            && !self.above.contains(&x)
            && !self.incomparable.contains(&x)
            && self.below.iter().all(|&a| p.precedes(a, x))
            && self.above.iter().all(|&b| p.precedes(x, b))
            && self.incomparable.iter().all(|&z| !p.comparable(x, z))
    }

    fn realized_by<O: OrderPresentation>(&self, p: &FinitePoset, canon: &O, x: usize) -> bool {
        self.realized_in_poset_by(p, x)
            && self.elements().filter(|&f| canon.less(f, x)).count() == self.gap
    }
}

fn cmp_by<O: OrderPresentation>(o: &O, x: usize, y: usize) -> std::cmp::Ordering {
    if x == y {
        std::cmp::Ordering::Equal
    } else if o.less(x, y) {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

/// All demands of weight `w`, in schedule order.
fn weight_class(w: usize) -> Vec<Demand> {
    fn subsets(start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..left {
            cur.push(v);
            subsets(v + 1, left - v - 1, cur, out);
            cur.pop();
        }
    }
    let mut sets = Vec::new();
    subsets(0, w, &mut Vec::new(), &mut sets);
    let mut class = Vec::new();
    for f in sets {
        for labels in 0..3u64.pow(f.len() as u32) {
            for gap in 0..=f.len() {
                let mut d = Demand {
                    below: BTreeSet::new(),
                    above: BTreeSet::new(),
                    incomparable: BTreeSet::new(),
                    gap,
                };
                let mut rest = labels;
                for &v in &f {
                    match rest % 3 {
                        0 => d.below.insert(v),
                        1 => d.above.insert(v),
                        _ => d.incomparable.insert(v),
                    };
                    rest /= 3;
                }
                class.push(d);
            }
        }
    }
    class
}

/// Stage `N` of the construction: the poset on `{0,…,N−1}` and its canonical
/// linear extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetStage {
    pub stage: FinitePoset,
    pub canon: OrderPrefix,
}

impl PosetStage {
    pub fn len(&self) -> usize {
        self.stage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stage.is_empty()
    }

    /// Stage `m ≤ N`, obtained by restriction.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        Ok(PosetStage {
            stage: self.stage.restrict(m)?,
            canon: self.canon.restrict(m)?,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(StageJson {
            n: self.len(),
            pairs: self.stage.pairs(),
            canon: self.canon.sequence(),
        })
        .expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let s: StageJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Format(e.to_string()))?;
        if s.canon.len() != s.n {
            return Err(Error::Format("canon length differs from n".into()));
        }
        let stage = FinitePoset::from_pairs(s.n, s.pairs)?;
        let canon = OrderPrefix::from_sequence(s.canon)?;
        if !stage.is_extended_by(&canon) {
            return Err(Error::Format("canon does not extend the poset".into()));
        }
        Ok(PosetStage { stage, canon })
    }
}

#[derive(Serialize, Deserialize)]
struct StageJson {
    n: usize,
    pairs: Vec<(usize, usize)>,
    canon: Vec<usize>,
}

struct Builder {
    poset: FinitePoset,
    /// Canonical order, least first.
    canon: Vec<usize>,
    schedule: Vec<Demand>,
    next_weight: usize,
    /// Every scheduled demand before this index is met or permanently
    /// inconsistent.
    resolved: usize,
}

struct SeqOrder<'a> {
    rank: &'a [usize],
}

impl OrderPresentation for SeqOrder<'_> {
    fn less(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }
}

impl Builder {
    fn new() -> Self {
        Builder {
            poset: FinitePoset::antichain(0).expect("empty"),
            canon: Vec::new(),
            schedule: Vec::new(),
            next_weight: 0,
            resolved: 0,
        }
    }

    fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![0; self.canon.len()];
        for (pos, &x) in self.canon.iter().enumerate() {
            rank[x] = pos;
        }
        rank
    }

    fn demand(&mut self, i: usize) -> &Demand {
        while self.schedule.len() <= i {
            let class = weight_class(self.next_weight);
            self.schedule.extend(class);
            self.next_weight += 1;
        }
        &self.schedule[i]
    }

    fn grow(&mut self) -> Result<()> {
        let n = self.poset.len();
        let rank = self.ranks();
        let canon = SeqOrder { rank: &rank };
        let mut i = self.resolved;
        let mut all_resolved = true;
        let chosen = loop {
            let demand = self.demand(i).clone();
            if demand.elements().any(|v| v >= n) {
                all_resolved = false;
            } else if demand.consistent(&self.poset, &canon)
                && !(0..n).any(|x| demand.realized_by(&self.poset, &canon, x))
            {
                break demand;
            } else if all_resolved {
                self.resolved = i + 1;
            }
            i += 1;
        };

        let f = chosen.sorted(&canon);
        let lo = match chosen.gap {
            0 => 0,
            g => rank[f[g - 1]] + 1,
        };
        let hi = f.get(chosen.gap).map_or(self.canon.len(), |&x| rank[x]);
        let at = lo + (hi - lo) / 2;

        let in_f = |v: usize| f.contains(&v);
        let mask = |s: &BTreeSet<usize>| s.iter().fold(0u64, |m, &v| m | 1 << v);
        let p = &self.poset;
        let mut below = mask(&chosen.below);
        let mut above = mask(&chosen.above);
        let up = (0..n)
            .filter(|&v| above >> v & 1 == 1)
            .fold(above, |m, v| m | p.above_mask(v));
        for &w in self.canon[..at].iter().filter(|&&w| !in_f(w)) {
            let over_z = chosen.incomparable.iter().any(|&z| p.precedes(z, w));
            let under_up = (0..n)
                .filter(|&v| up >> v & 1 == 1)
                .all(|v| p.precedes(w, v));
            if !over_z && under_up {
                below |= 1 << w;
            }
        }
        let down = (0..n)
            .filter(|&v| below >> v & 1 == 1)
            .fold(below, |m, v| m | p.below_mask(v));
        for &u in self.canon[at..].iter().filter(|&&u| !in_f(u)) {
            let under_z = chosen.incomparable.iter().any(|&z| p.precedes(u, z));
            let over_down = (0..n)
                .filter(|&v| down >> v & 1 == 1)
                .all(|v| p.precedes(v, u));
            if !under_z && over_down {
                above |= 1 << u;
            }
        }
        self.poset.push_point(below, above)?;
        self.canon.insert(at, n);
        Ok(())
    }

    fn snapshot(&self, n: usize) -> Result<PosetStage> {
        let canon = OrderPrefix::from_sequence(self.canon.clone())?.restrict(n)?;
        Ok(PosetStage {
            stage: self.poset.restrict(n)?,
            canon,
        })
    }
}

fn builder() -> &'static Mutex<Builder> {
    static STAGES: OnceLock<Mutex<Builder>> = OnceLock::new();
    STAGES.get_or_init(|| Mutex::new(Builder::new()))
}

/// Stage `N` of the universal poset with its canonical linear extension.
///
/// Stages are memoized; stage `M < N` is the restriction of stage `N`.
pub fn universal_poset_stage(n: usize, cap: usize) -> Result<PosetStage> {
    check("poset stage", n, cap.min(crate::caps::HARD_STAGE_CAP))?;
    let mut b = builder().lock().unwrap_or_else(|e| e.into_inner());
    while b.poset.len() < n {
        b.grow()?;
    }
    b.snapshot(n)
}

/// The canonical linear extension of stage `N` as an order presentation on
/// `{0,…,N−1}`.
#[derive(Debug, Clone)]
pub struct CanonicalOrder {
    stage: PosetStage,
}

impl CanonicalOrder {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        Ok(CanonicalOrder {
            stage: universal_poset_stage(n, cap)?,
        })
    }

    pub fn stage(&self) -> &PosetStage {
        &self.stage
    }
}

impl OrderPresentation for CanonicalOrder {
    fn less(&self, a: usize, b: usize) -> bool {
        self.stage.canon.less(a, b)
    }
    fn contains(&self, x: usize) -> bool {
        x < self.stage.len()
    }
    fn domain_len(&self) -> Option<usize> {
        Some(self.stage.len())
    }
    fn id(&self) -> String {
        format!("poset-canon-{}", self.stage.len())
    }
}

/// For every demand `(A, B, Z)` over `elements` that satisfies the axiom's
/// precondition in `stage`, the least realizing point, or `None` when the
/// stage has none. Returns `(A, B, Z, witness)` tuples.
#[allow(clippy::type_complexity)]
pub fn one_point_extension_audit(
    stage: &PosetStage,
    elements: &[usize],
) -> Vec<(
    BTreeSet<usize>,
    BTreeSet<usize>,
    BTreeSet<usize>,
    Option<usize>,
)> {
    let p = &stage.stage;
    let k = elements.len();
    let mut out = Vec::new();
    for code in 0..4usize.pow(k as u32) {
        let mut demand = Demand {
            below: BTreeSet::new(),
            above: BTreeSet::new(),
            incomparable: BTreeSet::new(),
            gap: 0,
        };
        let mut c = code;
        for &v in elements {
            match c % 4 {
                1 => demand.below.insert(v),
                2 => demand.above.insert(v),
                3 => demand.incomparable.insert(v),
                _ => false,
            };
            c /= 4;
        }
        if !demand.poset_consistent(p) {
            continue;
        }
        let witness = (0..p.len()).find(|&x| demand.realized_in_poset_by(p, x));
        out.push((demand.below, demand.above, demand.incomparable, witness));
    }
    out
}

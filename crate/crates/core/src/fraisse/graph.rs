use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A symmetric, irreflexive, decidable adjacency relation on ℕ.
pub trait GraphPresentation {
    fn adjacent(&self, i: usize, j: usize) -> bool;
}

/// Rado graph through binary digits: for `i < j`, `i ~ j` iff bit `i` of `j` is set.
pub fn rado_adjacent(i: usize, j: usize) -> Result<bool> {
    if i == j {
        return Err(Error::Precondition(format!("no loop at {i}")));
    }
    let (lo, hi) = (i.min(j), i.max(j));
    Ok(lo < usize::BITS as usize && hi >> lo & 1 == 1)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RadoGraph;

impl GraphPresentation for RadoGraph {
    fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && rado_adjacent(i, j).expect("distinct")
    }
}

/// A vertex `z ∉ A ∪ B` adjacent to all of `A` and to none of `B`.
///
/// The candidate is `Σ_{a∈A} 2^a`. It is moved up by `2^{max(A∪B)+1}` when
/// `A` is empty or when it does not exceed every element of `A ∪ B`, since
/// adjacency to a larger vertex is read from the witness's own bits.
pub fn rado_extension_witness(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Result<usize> {
    if let Some(&x) = a.intersection(b).next() {
        return Err(Error::NotDisjoint { element: x });
    }
    let top = a.iter().chain(b).max().copied();
    let bits = usize::BITS as usize;
    if top.is_some_and(|t| t + 1 >= bits) {
        return Err(Error::CapExceeded {
            what: "largest vertex for a closed-form witness",
            got: top.unwrap_or(0),
            cap: bits - 2,
        });
    }
    let z: usize = a.iter().map(|&x| 1usize << x).sum();
    let clear_of_all = top.is_none_or(|t| z > t);
    if !a.is_empty() && clear_of_all {
        return Ok(z);
    }
    Ok(z + (1usize << top.map_or(0, |t| t + 1)))
}

/// A finite graph on `{0,…,n−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphPrefix {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl GraphPrefix {
    pub fn empty(n: usize) -> Self {
        GraphPrefix {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self> {
        let mut g = Self::empty(n);
        for (i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// The induced graph of a presentation on `{0,…,n−1}`.
    pub fn from_presentation<G: GraphPresentation + ?Sized>(g: &G, n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|j| (0..j).map(move |i| (i, j)))
            .filter(|&(i, j)| g.adjacent(i, j))
            .collect();
        GraphPrefix { n, edges }
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Err(Error::Precondition(format!("no loop at {i}")));
        }
        for v in [i, j] {
            if v >= self.n {
                return Err(Error::Uncovered { element: v });
            }
        }
        self.edges.insert((i.min(j), i.max(j)));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Searches `0..n` for a vertex outside `A ∪ B` joined to all of `A` and none of `B`.
    pub fn extension_witness(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Option<usize> {
        (0..self.n).find(|z| {
            !a.contains(z)
                && !b.contains(z)
                && a.iter().all(|&x| self.adjacent(*z, x))
                && b.iter().all(|&y| !self.adjacent(*z, y))
        })
    }
}

impl GraphPresentation for GraphPrefix {
    fn adjacent(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }
}

/// Edge-list text: `N` on the first line, then one `i j` line per edge.
impl fmt::Display for GraphPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for (i, j) in &self.edges {
            writeln!(f, "{i} {j}")?;
        }
        Ok(())
    }
}

impl FromStr for GraphPrefix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let n = lines
            .next()
            .ok_or_else(|| Error::Format("missing vertex count".into()))?
            .parse()
            .map_err(|_| Error::Format("vertex count is not a natural number".into()))?;
        let mut g = GraphPrefix::empty(n);
        for line in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Format(format!("bad edge line `{line}`")))
                })
                .collect::<Result<_>>()?;
            match nums[..] {
                [i, j] => g.add_edge(i, j)?,
                _ => return Err(Error::Format(format!("bad edge line `{line}`"))),
            }
        }
        Ok(g)
    }
}

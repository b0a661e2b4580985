use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::OrderPresentation;
use crate::error::{Error, Result};

/// A total order on `{0,…,n−1}`, stored as a ranking: `rank[x]` is the
/// position of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct OrderPrefix {
    rank: Vec<usize>,
}

impl OrderPrefix {
    /// The usual order `0 < 1 < … < n−1`.
    pub fn identity(n: usize) -> Self {
        OrderPrefix {
            rank: (0..n).collect(),
        }
    }

    /// From the elements listed in increasing order.
    pub fn from_sequence(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &x) in seq.iter().enumerate() {
            if x >= n {
                return Err(Error::Uncovered { element: x });
            }
            if rank[x] != usize::MAX {
                return Err(Error::RepeatedElement { element: x });
            }
            rank[x] = pos;
        }
        Ok(OrderPrefix { rank })
    }

    pub fn from_ranks(rank: Vec<usize>) -> Result<Self> {
        let n = rank.len();
        let mut seen = vec![false; n];
        for &r in &rank {
            if r >= n || std::mem::replace(&mut seen[r], true) {
                return Err(Error::NotBijective { n });
            }
        }
        Ok(OrderPrefix { rank })
    }

    /// Sorts `{0,…,n−1}` by an arbitrary presentation.
    pub fn from_presentation<O: OrderPresentation + ?Sized>(o: &O, n: usize) -> Self {
        let mut seq: Vec<usize> = (0..n).collect();
        seq.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if o.less(a, b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        Self::from_sequence(seq).expect("sorting permutes the domain")
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Elements from least to greatest.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.rank.len()];
        for (x, &r) in self.rank.iter().enumerate() {
            seq[r] = x;
        }
        seq
    }

    /// The induced order on `{0,…,m−1}`.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if m > self.len() {
            return Err(Error::Uncovered { element: m - 1 });
        }
        let seq = self.sequence().into_iter().filter(|&x| x < m).collect();
        Self::from_sequence(seq)
    }
}

impl OrderPresentation for OrderPrefix {
    fn less(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }
    fn contains(&self, x: usize) -> bool {
        x < self.rank.len()
    }
    fn domain_len(&self) -> Option<usize> {
        Some(self.rank.len())
    }
    fn id(&self) -> String {
        format!("prefix-{}", self.rank.len())
    }
}

impl TryFrom<Vec<usize>> for OrderPrefix {
    type Error = Error;
    fn try_from(seq: Vec<usize>) -> Result<Self> {
        Self::from_sequence(seq)
    }
}

impl From<OrderPrefix> for Vec<usize> {
    fn from(o: OrderPrefix) -> Self {
        o.sequence()
    }
}

/// Text format: `N` on the first line, then the domain in increasing order.
impl fmt::Display for OrderPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.len())?;
        let seq: Vec<String> = self.sequence().iter().map(|x| x.to_string()).collect();
        writeln!(f, "{}", seq.join(" "))
    }
}

impl FromStr for OrderPrefix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Format("missing size line".into()))?
            .trim()
            .parse()
            .map_err(|_| Error::Format("size line is not a natural number".into()))?;
        let seq = match lines.next() {
            Some(line) => line
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Format(format!("`{t}` is not a natural number")))
                })
                .collect::<Result<Vec<usize>>>()?,
            None => Vec::new(),
        };
        if lines.next().is_some() {
            return Err(Error::Format("trailing lines".into()));
        }
        if seq.len() != n {
            return Err(Error::Format(format!(
                "size line says {n} but {} elements listed",
                seq.len()
            )));
        }
        Self::from_sequence(seq)
    }
}

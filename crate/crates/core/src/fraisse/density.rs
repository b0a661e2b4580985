use serde::Serialize;

use crate::orders::OrderPresentation;

/// Outcome of a bounded search for Cantor's density and no-endpoint witnesses.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub n: usize,
    pub search_bound: usize,
    /// Pairs `a < b` with no `j ≤ search_bound` strictly between them.
    pub unwitnessed_between: Vec<(usize, usize)>,
    /// Elements with no `j ≤ search_bound` below them.
    pub no_lower: Vec<usize>,
    /// Elements with no `k ≤ search_bound` above them.
    pub no_upper: Vec<usize>,
}

impl DensityReport {
    pub fn all_witnessed(&self) -> bool {
        self.unwitnessed_between.is_empty() && self.no_lower.is_empty() && self.no_upper.is_empty()
    }
}

/// For all `a ≠ b ≤ n`, looks for `j ≤ search_bound` with `a < j < b`, and for
/// every `a ≤ n` for elements below and above it.
pub fn check_density<O: OrderPresentation + ?Sized>(
    pres: &O,
    n: usize,
    search_bound: usize,
) -> DensityReport {
    let bound = match pres.domain_len() {
        Some(len) => search_bound.min(len.saturating_sub(1)),
        None => search_bound,
    };
    let top = match pres.domain_len() {
        Some(len) => n.min(len.saturating_sub(1)),
        None => n,
    };
    let pool: Vec<usize> = (0..=bound).filter(|&j| pres.contains(j)).collect();
    let mut report = DensityReport {
        n,
        search_bound,
        ..Default::default()
    };
    for a in 0..=top {
        for b in 0..=top {
            if a != b
                && pres.less(a, b)
                && !pool.iter().any(|&j| pres.less(a, j) && pres.less(j, b))
            {
                report.unwitnessed_between.push((a, b));
            }
        }
        if !pool.iter().any(|&j| pres.less(j, a)) {
            report.no_lower.push(a);
        }
        if !pool.iter().any(|&k| pres.less(a, k)) {
            report.no_upper.push(a);
        }
    }
    report
}

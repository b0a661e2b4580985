use crate::error::{Error, Result};
use crate::orders::{OrderPresentation, PartialPermutation};

/// Incremental back-and-forth between two dense orders without endpoints.
///
/// Round `r` puts `r` into the domain and into the range. When both are
/// missing, the side whose least compatible partner is smaller goes first
/// (ties go to the side with the smaller presentation id), so running the
/// procedure with the sides swapped yields exactly the inverse map.
pub struct BackAndForth<A, B> {
    left: A,
    right: B,
    budget: usize,
    /// Mapped pairs sorted by the left order (equivalently the right order).
    chain: Vec<(usize, usize)>,
    map: PartialPermutation,
    round: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

impl<A: OrderPresentation, B: OrderPresentation> BackAndForth<A, B> {
    pub fn new(left: A, right: B, budget: usize) -> Self {
        BackAndForth {
            left,
            right,
            budget,
            chain: Vec::new(),
            map: PartialPermutation::new(),
            round: 0,
        }
    }

    pub fn map(&self) -> &PartialPermutation {
        &self.map
    }

    pub fn into_map(self) -> PartialPermutation {
        self.map
    }

    /// Extends the map until its domain and range both contain `{0,…,n−1}`.
    /// Pairs already mapped are never changed.
    pub fn extend_to(&mut self, n: usize) -> Result<&PartialPermutation> {
        while self.round < n {
            let r = self.round;
            let need_left = self.map.apply(r).is_none();
            let need_right = self.map.preimage(r).is_none();
            match (need_left, need_right) {
                (true, true) => {
                    let image = self.partner(Side::Left, r)?;
                    let preimage = self.partner(Side::Right, r)?;
                    let left_first = match image.cmp(&preimage) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => self.left.id() <= self.right.id(),
                    };
                    if left_first {
                        self.add(r, image);
                        if self.map.preimage(r).is_none() {
                            let a = self.partner(Side::Right, r)?;
                            self.add(a, r);
                        }
                    } else {
                        self.add(preimage, r);
                        if self.map.apply(r).is_none() {
                            let b = self.partner(Side::Left, r)?;
                            self.add(r, b);
                        }
                    }
                }
                (true, false) => {
                    let b = self.partner(Side::Left, r)?;
                    self.add(r, b);
                }
                (false, true) => {
                    let a = self.partner(Side::Right, r)?;
                    self.add(a, r);
                }
                (false, false) => {}
            }
            self.round += 1;
        }
        Ok(&self.map)
    }

    fn less(&self, side: Side, a: usize, b: usize) -> bool {
        match side {
            Side::Left => self.left.less(a, b),
            Side::Right => self.right.less(a, b),
        }
    }

    fn contains(&self, side: Side, x: usize) -> bool {
        match side {
            Side::Left => self.left.contains(x),
            Side::Right => self.right.contains(x),
        }
    }

    fn coord(side: Side, pair: (usize, usize)) -> usize {
        match side {
            Side::Left => pair.0,
            Side::Right => pair.1,
        }
    }

    fn is_mapped(&self, side: Side, x: usize) -> bool {
        match side {
            Side::Left => self.map.apply(x).is_some(),
            Side::Right => self.map.preimage(x).is_some(),
        }
    }

    /// Index in `chain` where `x` (from `side`) would be inserted.
    fn gap(&self, side: Side, x: usize) -> usize {
        self.chain
            .partition_point(|&pair| self.less(side, Self::coord(side, pair), x))
    }

    /// Least unmapped element on the other side that fits the gap of `x`.
    fn partner(&self, side: Side, x: usize) -> Result<usize> {
        let other = match side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        let g = self.gap(side, x);
        let lower = g.checked_sub(1).map(|i| Self::coord(other, self.chain[i]));
        let upper = self.chain.get(g).map(|&p| Self::coord(other, p));
        let mut examined = 0;
        let mut y = 0;
        while examined < self.budget {
            if !self.is_mapped(other, y) {
                if !self.contains(other, y) {
                    break;
                }
                examined += 1;
                let above = lower.is_none_or(|l| self.less(other, l, y));
                let below = upper.is_none_or(|u| self.less(other, y, u));
                if above && below {
                    return Ok(y);
                }
            }
            y += 1;
        }
        Err(Error::Budget {
            side: if side == Side::Left { "forth" } else { "back" },
            element: x,
            lower,
            upper,
            budget: self.budget,
        })
    }

    fn add(&mut self, a: usize, b: usize) {
        let g = self.gap(Side::Left, a);
        self.chain.insert(g, (a, b));
        self.map.insert(a, b).expect("fresh pair");
    }
}

/// A partial isomorphism from `a` to `b` whose domain and range both contain
/// `{0,…,n−1}`. Each witness search examines at most `budget` candidates.
pub fn back_and_forth<A: OrderPresentation, B: OrderPresentation>(
    a: A,
    b: B,
    n: usize,
    budget: usize,
) -> Result<PartialPermutation> {
    let mut bf = BackAndForth::new(a, b, budget);
    bf.extend_to(n)?;
    Ok(bf.into_map())
}

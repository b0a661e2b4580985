use crate::orders::OrderPresentation;

/// Stern's diatomic sequence: `fusc(k)/fusc(k+1)` runs through every
/// positive reduced fraction once, breadth-first through the Calkin–Wilf tree.
fn fusc_pair(k: u64) -> (u64, u64) {
    // (fusc(k), fusc(k+1)) from the binary digits of k, most significant first.
    let (mut a, mut b) = (0u64, 1u64);
    for bit in (0..64).rev().map(|i| k >> i & 1) {
        if bit == 0 {
            b += a;
        } else {
            a += b;
        }
    }
    (a, b)
}

/// The rational number labeled `n`: `0 ↦ 0`, `2k−1 ↦ q_k`, `2k ↦ −q_k`,
/// where `q_k` is the `k`-th positive fraction in Calkin–Wilf order.
/// Returned as `(numerator, denominator)` in lowest terms.
pub fn rational_value(n: usize) -> (i64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let k = (n as u64).div_ceil(2);
    let (p, q) = fusc_pair(k);
    let p = p as i64;
    if n % 2 == 1 {
        (p, q)
    } else {
        (-p, q)
    }
}

/// Comparison by rational value under [`rational_value`].
pub fn rational_order_less(a: usize, b: usize) -> bool {
    let (pa, qa) = rational_value(a);
    let (pb, qb) = rational_value(b);
    (pa as i128) * (qb as i128) < (pb as i128) * (qa as i128)
}

/// The rational order `η`, presented on ℕ through the Calkin–Wilf labeling.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalOrder;

impl OrderPresentation for RationalOrder {
    fn less(&self, a: usize, b: usize) -> bool {
        rational_order_less(a, b)
    }
    fn id(&self) -> String {
        "rational-v1".into()
    }
}

/// The dyadic rational in `(0, 1)` labeled `n`: with `n + 1 = 2^d + j`,
/// `0 ≤ j < 2^d`, the value `(2j+1)/2^{d+1}`. Returned as `(odd numerator, exponent)`.
pub fn dyadic_value(n: usize) -> (u64, u32) {
    let m = n as u64 + 1;
    let d = 63 - m.leading_zeros();
    let j = m - (1u64 << d);
    (2 * j + 1, d + 1)
}

/// Dyadic rationals of the open unit interval, labeled level by level.
/// Another recursive presentation of `η`.
#[derive(Debug, Clone, Copy, Default)]
pub struct DyadicOrder;

impl OrderPresentation for DyadicOrder {
    fn less(&self, a: usize, b: usize) -> bool {
        let (na, ea) = dyadic_value(a);
        let (nb, eb) = dyadic_value(b);
        let e = ea.max(eb);
        ((na as u128) << (e - ea)) < ((nb as u128) << (e - eb))
    }
    fn id(&self) -> String {
        "dyadic-v1".into()
    }
}

/// The usual order of ℕ. Has a least element and no density.
#[derive(Debug, Clone, Copy, Default)]
pub struct NaturalOrder;

impl OrderPresentation for NaturalOrder {
    fn less(&self, a: usize, b: usize) -> bool {
        a < b
    }
    fn id(&self) -> String {
        "natural".into()
    }
}

/// `base` pulled back along a relabeling: `a < b ⟺ base(f(a), f(b))`.
/// `relabel` must be a recursive permutation of ℕ.
#[derive(Clone)]
pub struct Reindexed<P, F> {
    pub base: P,
    pub relabel: F,
    pub name: String,
}

impl<P: OrderPresentation, F: Fn(usize) -> usize> OrderPresentation for Reindexed<P, F> {
    fn less(&self, a: usize, b: usize) -> bool {
        self.base.less((self.relabel)(a), (self.relabel)(b))
    }
    fn id(&self) -> String {
        self.name.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn first_labels() {
        let vals: Vec<_> = (0..9).map(rational_value).collect();
        assert_eq!(
            vals,
            vec![
                (0, 1),
                (1, 1),
                (-1, 1),
                (1, 2),
                (-1, 2),
                (2, 1),
                (-2, 1),
                (1, 3),
                (-1, 3)
            ]
        );
        assert_eq!(
            (0..7).map(dyadic_value).collect::<Vec<_>>(),
            vec![(1, 1), (1, 2), (3, 2), (1, 3), (3, 3), (5, 3), (7, 3)]
        );
    }

    #[test]
    fn labels_are_injective_and_reduced() {
        let mut seen = BTreeSet::new();
        for n in 0..5000 {
            let (p, q) = rational_value(n);
            assert_eq!(num_integer::gcd(p.unsigned_abs(), q), 1);
            assert!(seen.insert((p, q)));
        }
    }

    #[test]
    fn irreflexive_and_total() {
        for a in 0..=100 {
            assert!(!rational_order_less(a, a));
            for b in 0..=100 {
                if a != b {
                    assert!(rational_order_less(a, b) ^ rational_order_less(b, a));
                    assert!(DyadicOrder.less(a, b) ^ DyadicOrder.less(b, a));
                }
            }
        }
    }

    #[test]
    fn transitive_on_small_labels() {
        for a in 0..30 {
            for b in 0..30 {
                for c in 0..30 {
                    if rational_order_less(a, b) && rational_order_less(b, c) {
                        assert!(rational_order_less(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn density_witness_search() {
        for a in 0..=20 {
            for b in 0..=20 {
                if rational_order_less(a, b) {
                    let c = (0..10_000)
                        .find(|&c| rational_order_less(a, c) && rational_order_less(c, b));
                    assert!(c.is_some(), "{a} {b}");
                }
            }
        }
    }
}

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::caps::check;
use crate::error::Result;
use crate::orders::{OrderPrefix, OrderPresentation};

/// Key length in 64-bit words; keys agreeing on all 256 bits are ordered by index.
pub const KEY_WORDS: usize = 4;

/// Longest prefix `sample_prefix` will materialize.
pub const MAX_SAMPLE_LEN: usize = 1_000_000;

type Key = [u64; KEY_WORDS];

/// A random total order of ℕ: `x` precedes `y` when the uniform binary key of
/// `x` is smaller. Keys are drawn from a ChaCha8 stream seeded by `seed`,
/// element by element, and only as far as the largest element queried.
#[derive(Debug)]
pub struct RandomOrderStream {
    seed: u64,
    state: RefCell<State>,
}

#[derive(Debug)]
struct State {
    rng: ChaCha8Rng,
    keys: Vec<Key>,
    ties: BTreeSet<(usize, usize)>,
}

impl State {
    fn reveal(&mut self, n: usize) {
        while self.keys.len() <= n {
            let mut key = [0; KEY_WORDS];
            for w in &mut key {
                *w = self.rng.next_u64();
            }
            self.keys.push(key);
        }
    }

    fn compare(&mut self, a: usize, b: usize) -> Ordering {
        self.reveal(a.max(b));
        match self.keys[a].cmp(&self.keys[b]) {
            Ordering::Equal if a != b => {
                self.ties.insert((a.min(b), a.max(b)));
                a.cmp(&b)
            }
            o => o,
        }
    }
}

impl RandomOrderStream {
    pub fn new(seed: u64) -> Self {
        RandomOrderStream {
            seed,
            state: RefCell::new(State {
                rng: ChaCha8Rng::seed_from_u64(seed),
                keys: Vec::new(),
                ties: BTreeSet::new(),
            }),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of elements whose keys have been drawn so far.
    pub fn revealed(&self) -> usize {
        self.state.borrow().keys.len()
    }

    /// The first 53 bits of the key of `x` as a number in `[0, 1)`.
    pub fn key_fraction(&self, x: usize) -> f64 {
        let mut st = self.state.borrow_mut();
        st.reveal(x);
        (st.keys[x][0] >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Pairs whose keys agreed on all 256 bits and were ordered by index.
    pub fn tie_cap_hits(&self) -> Vec<(usize, usize)> {
        self.state.borrow().ties.iter().copied().collect()
    }

    /// The order restricted to `{0,…,n−1}`.
    pub fn prefix(&self, n: usize) -> Result<OrderPrefix> {
        check("sample length", n, MAX_SAMPLE_LEN)?;
        let mut st = self.state.borrow_mut();
        if n > 0 {
            st.reveal(n - 1);
        }
        let mut seq: Vec<usize> = (0..n).collect();
        seq.sort_by(|&a, &b| st.compare(a, b));
        OrderPrefix::from_sequence(seq)
    }
}

impl OrderPresentation for RandomOrderStream {
    fn less(&self, a: usize, b: usize) -> bool {
        a != b && self.state.borrow_mut().compare(a, b) == Ordering::Less
    }

    fn id(&self) -> String {
        format!("stream-{}", self.seed)
    }
}

/// Sampled prefix together with any index tie-breaks used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    pub prefix: OrderPrefix,
    pub tie_cap_hits: Vec<(usize, usize)>,
}

/// A uniform draw from the `N!` orders on `{0,…,N−1}`, determined by `seed`.
pub fn sample_prefix(seed: u64, n: usize) -> Result<OrderPrefix> {
    RandomOrderStream::new(seed).prefix(n)
}

pub fn sample_prefix_with_report(seed: u64, n: usize) -> Result<SampleReport> {
    let stream = RandomOrderStream::new(seed);
    let prefix = stream.prefix(n)?;
    Ok(SampleReport {
        prefix,
        tie_cap_hits: stream.tie_cap_hits(),
    })
}

/// `len` fair coin flips determined by `seed`, independent of the order keys
/// of the same seed.
pub fn sample_bits(seed: u64, len: usize) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let word = rng.next_u64();
        out.extend((0..64).map(|i| word >> i & 1 == 1).take(len - out.len()));
    }
    out
}

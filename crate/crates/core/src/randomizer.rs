//! Finite-depth certificates for randomizers `σ` with `στ = ξ`, the
//! conjugation identity at prefix level, and the automorphism trap for the
//! universal poset.

use serde::{Deserialize, Serialize, Serializer};

use crate::caps::{check, Caps};
use crate::error::{Error, Result};
use crate::fraisse::{universal_poset_stage, BackAndForth};
use crate::measure::{linear_extension_count, FinitePoset};
use crate::orders::{act, OrderPrefix, OrderPresentation, PartialPermutation};
use crate::sampler::RandomOrderStream;
use crate::scalar::factorial;
use crate::ExactRational;

/// A partial `σ` with `a <_τ b ⟺ σ(a) <_ξ σ(b)` on its domain, whose domain
/// and range contain `{0,…,n−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomizerCertificate {
    pub seed: u64,
    #[serde(rename = "tau")]
    pub tau_id: String,
    #[serde(rename = "pairs")]
    pub sigma: PartialPermutation,
    #[serde(rename = "depth")]
    pub n: usize,
}

impl RandomizerCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Runs back-and-forth from `tau` to the stream, revealing stream keys as the
/// witness searches reach them. Each search examines at most `budget`
/// candidates.
///
/// The least-compatible procedure is tried first. If one of its searches runs
/// out of budget, the map is rebuilt by [`balanced_randomizer`].
pub fn compute_randomizer<T: OrderPresentation>(
    tau: T,
    xi: &RandomOrderStream,
    n: usize,
    budget: usize,
) -> Result<RandomizerCertificate> {
    let tau_id = tau.id();
    let mut bf = BackAndForth::new(&tau, xi, budget);
    let sigma = match bf.extend_to(n) {
        Ok(_) => bf.into_map(),
        Err(Error::Budget { .. }) => balanced_randomizer(&tau, xi, n, budget)?,
        Err(e) => return Err(e),
    };
    Ok(RandomizerCertificate {
        seed: xi.seed(),
        tau_id,
        sigma,
        n,
    })
}

/// Forth steps for `0,…,n−1` first, then back steps. A forth image is the
/// first compatible stream element whose key lies in the middle third of the
/// key interval spanned by its mapped neighbours; a back preimage is the
/// least compatible element of `tau`.
pub fn balanced_randomizer<T: OrderPresentation + ?Sized>(
    tau: &T,
    xi: &RandomOrderStream,
    n: usize,
    budget: usize,
) -> Result<PartialPermutation> {
    let mut chain: Vec<(usize, usize)> = Vec::new();
    let mut map = PartialPermutation::new();
    for a in 0..n {
        if map.apply(a).is_some() {
            continue;
        }
        let g = chain.partition_point(|&(t, _)| tau.less(t, a));
        let lower = g.checked_sub(1).map(|i| chain[i].1);
        let upper = chain.get(g).map(|p| p.1);
        let lo = lower.map_or(0.0, |l| xi.key_fraction(l));
        let hi = upper.map_or(1.0, |u| xi.key_fraction(u));
        let (lo, hi) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        let b = search(
            budget,
            |y| map.preimage(y).is_some(),
            |y| {
                lower.is_none_or(|l| xi.less(l, y))
                    && upper.is_none_or(|u| xi.less(y, u))
                    && (lo..=hi).contains(&xi.key_fraction(y))
            },
        )
        .ok_or(Error::Budget {
            side: "forth",
            element: a,
            lower,
            upper,
            budget,
        })?;
        chain.insert(g, (a, b));
        map.insert(a, b)?;
    }
    for x in 0..n {
        if map.preimage(x).is_some() {
            continue;
        }
        let g = chain.partition_point(|&(_, s)| xi.less(s, x));
        let lower = g.checked_sub(1).map(|i| chain[i].0);
        let upper = chain.get(g).map(|p| p.0);
        let a = search(
            budget,
            |y| map.apply(y).is_some(),
            |y| {
                tau.contains(y)
                    && lower.is_none_or(|l| tau.less(l, y))
                    && upper.is_none_or(|u| tau.less(y, u))
            },
        )
        .ok_or(Error::Budget {
            side: "back",
            element: x,
            lower,
            upper,
            budget,
        })?;
        chain.insert(g, (a, x));
        map.insert(a, x)?;
    }
    Ok(map)
}

/// First `y` accepted by `fits` among the first `budget` elements not
/// `taken`.
fn search(
    budget: usize,
    taken: impl Fn(usize) -> bool,
    fits: impl Fn(usize) -> bool,
) -> Option<usize> {
    let mut examined = 0;
    let mut y = 0;
    while examined < budget {
        if !taken(y) {
            examined += 1;
            if fits(y) {
                return Some(y);
            }
        }
        y += 1;
    }
    None
}

fn preserves<T, X>(sigma: &PartialPermutation, tau: &T, xi: &X) -> bool
where
    T: OrderPresentation + ?Sized,
    X: OrderPresentation + ?Sized,
{
    let pairs: Vec<_> = sigma.pairs().collect();
    pairs.iter().all(|&(a, sa)| {
        pairs
            .iter()
            .all(|&(b, sb)| a == b || tau.less(a, b) == xi.less(sa, sb))
    })
}

/// Re-derives the stream prefix covering the certificate's range and checks
/// coverage of `{0,…,n−1}` and order preservation over every pair.
pub fn verify_certificate<T: OrderPresentation + ?Sized>(
    c: &RandomizerCertificate,
    tau: &T,
    xi: &RandomOrderStream,
) -> Result<bool> {
    if c.seed != xi.seed() {
        return Err(Error::Mismatch(format!(
            "certificate seed {} but stream seed {}",
            c.seed,
            xi.seed()
        )));
    }
    if c.tau_id != tau.id() {
        return Err(Error::Mismatch(format!(
            "certificate is for {} but presentation is {}",
            c.tau_id,
            tau.id()
        )));
    }
    let covered = (0..c.n).all(|x| c.sigma.apply(x).is_some() && c.sigma.preimage(x).is_some());
    let reach = c.sigma.range().max().map_or(0, |m| m + 1);
    let prefix = xi.prefix(reach)?;
    Ok(covered && preserves(&c.sigma, tau, &prefix))
}

/// `πτ`: `x <_{πτ} y ⟺ π⁻¹x <_τ π⁻¹y`, with `π` fixing everything outside
/// its domain.
pub struct PermutedOrder<'a, T: ?Sized> {
    pub base: &'a T,
    inverse: PartialPermutation,
}

impl<'a, T: OrderPresentation + ?Sized> PermutedOrder<'a, T> {
    pub fn new(pi: &PartialPermutation, base: &'a T) -> Result<Self> {
        if !pi.is_permutation() {
            return Err(Error::Mismatch("π must permute its own domain".into()));
        }
        Ok(PermutedOrder {
            base,
            inverse: pi.inverse(),
        })
    }
}

impl<T: OrderPresentation + ?Sized> OrderPresentation for PermutedOrder<'_, T> {
    fn less(&self, a: usize, b: usize) -> bool {
        self.base
            .less(self.inverse.apply_or_fix(a), self.inverse.apply_or_fix(b))
    }

    fn id(&self) -> String {
        format!("permuted-{}", self.base.id())
    }
}

/// Both sides of the prefix form of `S(τ)π⁻¹ = S(πτ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConjugationReport {
    /// `σ` maps `τ` to `ξ` on its domain.
    pub direct: bool,
    /// `σπ⁻¹` maps `πτ` to `ξ` on `π(dom σ)`.
    pub conjugated: bool,
}

impl ConjugationReport {
    pub fn holds(&self) -> bool {
        self.direct == self.conjugated
    }
}

pub fn conjugation_check<T: OrderPresentation + ?Sized>(
    sigma: &PartialPermutation,
    pi: &PartialPermutation,
    tau: &T,
    xi: &OrderPrefix,
) -> Result<ConjugationReport> {
    if let Some(b) = sigma.range().find(|&b| b >= xi.len()) {
        return Err(Error::Uncovered { element: b });
    }
    let permuted = PermutedOrder::new(pi, tau)?;
    let pi_inverse = pi.inverse();
    let shifted =
        PartialPermutation::from_pairs(sigma.domain().map(|a| pi.apply_or_fix(a)).map(|x| {
            let a = pi_inverse.apply_or_fix(x);
            (x, sigma.apply(a).expect("a lies in the domain"))
        }))?;
    if shifted.len() != sigma.len() {
        return Err(Error::Mismatch("σπ⁻¹ lost part of the domain".into()));
    }
    Ok(ConjugationReport {
        direct: preserves(sigma, tau, xi),
        conjugated: preserves(&shifted, &permuted, xi),
    })
}

/// Every automorphism of a finite poset, by backtracking.
pub fn automorphisms(p: &FinitePoset) -> Vec<PartialPermutation> {
    fn extend(
        p: &FinitePoset,
        images: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<PartialPermutation>,
    ) {
        let x = images.len();
        if x == p.len() {
            out.push(PartialPermutation::from_images(images).expect("bijective"));
            return;
        }
        for y in 0..p.len() {
            if used[y] {
                continue;
            }
            let fits = (0..x).all(|u| {
                p.precedes(u, x) == p.precedes(images[u], y)
                    && p.precedes(x, u) == p.precedes(y, images[u])
            });
            if fits {
                used[y] = true;
                images.push(y);
                extend(p, images, used, out);
                images.pop();
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(p, &mut Vec::new(), &mut vec![false; p.len()], &mut out);
    out
}

/// Finite image of the obstruction: every automorphism `g` of `ℙ_n` moves
/// the canonical prefix to an order still extending `ℙ_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub n: usize,
    pub automorphisms: usize,
    pub trapped: bool,
    /// `e(ℙ_n)/n!`, the measure of the event every image lies in.
    #[serde(serialize_with = "fraction")]
    pub measure: ExactRational,
    /// The distinct images `g·τ`.
    #[serde(skip)]
    pub images: Vec<OrderPrefix>,
}

fn fraction<S: Serializer>(q: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

pub fn poset_automorphism_obstruction(n: usize, caps: &Caps) -> Result<ObstructionReport> {
    check("poset size", n, caps.poset)?;
    let stage = universal_poset_stage(n, caps.stage)?;
    let autos = automorphisms(&stage.stage);
    let mut images = Vec::new();
    for g in &autos {
        let image = act(g, &stage.canon)?;
        if !images.contains(&image) {
            images.push(image);
        }
    }
    let trapped = images.iter().all(|o| stage.stage.is_extended_by(o));
    let e = linear_extension_count(&stage.stage, caps.poset)?;
    Ok(ObstructionReport {
        n,
        automorphisms: autos.len(),
        trapped,
        measure: ExactRational::new(e.into(), factorial(n).into()),
        images,
    })
}

//! Eventually periodic infinite reduced words over a subsystem `S_J`.
//!
//! A word is `prefix · period · period · …`. The period is stored so that its product is
//! a translation `t_λ`; then the tail satisfies
//! `φ(|prefix| + k·n + r + 1) = z_prefix(γ_r) + k·c_r·δ` with `c_r = −(γ̄_r|λ)`,
//! which makes reducedness, membership and indexing exact.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::affine::{AffineSystem, AffineWeylElement, Root};
use crate::biconvex::{param_of_set, BiconvexParam, Window};
use crate::cartan::{is_pos, Vector};
use crate::error::{Error, Result};
use crate::subsys::Subsystem;
use crate::NodeSet;

/// Longest period repetition tried when normalizing to a translation.
const MAX_PERIOD_REPEAT: usize = 64;

/// One residue class of the tail: `base + k·gain·δ` for k ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailSlice {
    pub base: Root,
    pub gain: i64,
}

#[derive(Debug, Clone)]
pub struct InfiniteWord {
    sub: Arc<Subsystem>,
    prefix: Vec<usize>,
    period: Vec<usize>,
    /// Depth up to which φ has been listed and checked explicitly.
    pub certified_depth: usize,
    z_prefix: AffineWeylElement,
    prefix_phi: Vec<Root>,
    /// Partial products inside one period, `Z_per(0..n)`.
    period_partials: Vec<AffineWeylElement>,
    lambda: Vector,
    tail: Vec<TailSlice>,
}

impl PartialEq for InfiniteWord {
    fn eq(&self, other: &Self) -> bool {
        self.sub.j == other.sub.j && self.prefix == other.prefix && self.period == other.period
    }
}

impl Eq for InfiniteWord {}

impl InfiniteWord {
    /// Builds and certifies a word. The period is repeated until its product is a
    /// translation; the result is checked to be reduced at every depth.
    pub fn new(sys: &AffineSystem, j: NodeSet, prefix: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        let sub = sys.subsystem(j)?.clone();
        let ng = sub.num_generators();
        if period.is_empty() {
            return Err(Error::InvalidParam("period must be non-empty".into()));
        }
        if let Some(&g) = prefix.iter().chain(&period).find(|&&g| g >= ng) {
            return Err(Error::InvalidParam(format!("generator index {g} out of range")));
        }
        let (prefix, period) = normalize(prefix, period);
        let one = sub.element(sys, &period);
        let mut reps = 1;
        let mut prod = one;
        while !prod.is_translation() {
            reps += 1;
            if reps > MAX_PERIOD_REPEAT {
                return Err(Error::InvalidParam("period product has no translation power".into()));
            }
            prod = prod.compose(&one);
        }
        let period: Vec<usize> = period.iter().copied().cycle().take(period.len() * reps).collect();
        let lambda = prod.translation;

        let z_prefix = sub.element(sys, &prefix);
        let prefix_phi = sub.phi_of_word(sys, &prefix);
        let mut period_partials = Vec::with_capacity(period.len());
        let mut z = sys.identity();
        let mut tail = Vec::with_capacity(period.len());
        for &g in &period {
            period_partials.push(z);
            let gamma = sys.act(&z, &sub.gen_root(g));
            let gain = -sys.fin.pair(&gamma.finite, &lambda);
            tail.push(TailSlice { base: sys.act(&z_prefix, &gamma), gain });
            z = z.compose(&sub.gen(g));
        }
        let word = InfiniteWord {
            sub,
            prefix,
            period,
            certified_depth: 0,
            z_prefix,
            prefix_phi,
            period_partials,
            lambda,
            tail,
        };
        word.certify()?;
        let depth = word.prefix.len() + 2 * word.period.len();
        word.validate(sys, depth)
    }

    /// Exact test: φ(p) > 0 for p ≤ |prefix| and every tail class has positive base and gain.
    fn certify(&self) -> Result<()> {
        if let Some(p) = self.prefix_phi.iter().position(|b| !b.is_positive()) {
            return Err(Error::NotReduced { p: p + 1 });
        }
        let pre = self.prefix.len();
        let n = self.period.len();
        let mut first_bad: Option<usize> = None;
        for (r, t) in self.tail.iter().enumerate() {
            let bad_k = if !t.base.is_positive() {
                Some(0)
            } else if t.gain < 0 {
                // smallest k with base + k·gain·δ not positive
                let mut k = t.base.level / (-t.gain);
                while t.base.shift(k * t.gain).is_positive() {
                    k += 1;
                }
                Some(k as usize)
            } else if t.gain == 0 {
                Some(1)
            } else {
                None
            };
            if let Some(k) = bad_k {
                let p = pre + k * n + r + 1;
                first_bad = Some(first_bad.map_or(p, |q: usize| q.min(p)));
            }
        }
        match first_bad {
            Some(p) => Err(Error::NotReduced { p }),
            None => Ok(()),
        }
    }

    /// Lists φ up to `depth`, checking positivity and distinctness, and checks
    /// `ℓ_J(z(|prefix| + 2|period|)) = |prefix| + 2|period|`.
    pub fn validate(mut self, sys: &AffineSystem, depth: usize) -> Result<Self> {
        let need = self.prefix.len() + 2 * self.period.len();
        let depth = depth.max(need);
        let mut seen = HashSet::new();
        for p in 1..=depth {
            let b = self.phi(p);
            if !b.is_positive() || !seen.insert(b) {
                return Err(Error::NotReduced { p });
            }
        }
        let z = self.prefix_product(need);
        if self.sub.length(sys, &z)? != need {
            return Err(Error::NotReduced { p: need });
        }
        self.certified_depth = self.certified_depth.max(depth);
        Ok(self)
    }

    pub fn j(&self) -> NodeSet {
        self.sub.j
    }

    pub fn subsystem(&self) -> &Arc<Subsystem> {
        &self.sub
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    /// λ with `t_λ` the product of the (normalized) period.
    pub fn translation(&self) -> Vector {
        self.lambda
    }

    pub fn tail(&self) -> &[TailSlice] {
        &self.tail
    }

    /// The p-th letter, 1-based.
    pub fn letter(&self, p: usize) -> usize {
        assert!(p >= 1);
        if p <= self.prefix.len() {
            self.prefix[p - 1]
        } else {
            self.period[(p - self.prefix.len() - 1) % self.period.len()]
        }
    }

    /// `z(p) = s(1)⋯s(p)`.
    pub fn prefix_product(&self, p: usize) -> AffineWeylElement {
        let pre = self.prefix.len();
        if p <= pre {
            return self.prefix[..p].iter().fold(self.z_prefix_identity(), |acc, &g| acc.compose(&self.sub.gen(g)));
        }
        let n = self.period.len();
        let q = p - pre;
        let (k, r) = (q / n, q % n);
        let rank = self.z_prefix.finite.rank();
        let mut lam = self.lambda;
        for c in lam.iter_mut() {
            *c *= k as i64;
        }
        let t = AffineWeylElement::translation(rank, lam);
        let within = if r == 0 {
            AffineWeylElement::identity(rank)
        } else {
            self.period_partials[r - 1].compose(&self.sub.gen(self.period[r - 1]))
        };
        self.z_prefix.compose(&t).compose(&within)
    }

    fn z_prefix_identity(&self) -> AffineWeylElement {
        AffineWeylElement::identity(self.z_prefix.finite.rank())
    }

    /// `φ(p) = z(p−1)(α_{s(p)})`, p ≥ 1.
    pub fn phi(&self, p: usize) -> Root {
        assert!(p >= 1);
        let pre = self.prefix.len();
        if p <= pre {
            return self.prefix_phi[p - 1];
        }
        let n = self.period.len();
        let q = p - pre - 1;
        let t = self.tail[q % n];
        t.base.shift((q / n) as i64 * t.gain)
    }

    /// `(z(p), φ(p))`.
    pub fn word_prefix_products(&self, p: usize) -> (AffineWeylElement, Root) {
        (self.prefix_product(p), self.phi(p))
    }

    /// Index p with `φ(p) = β`, if β belongs to `Φ̃^∞`.
    pub fn index_of(&self, b: &Root) -> Option<usize> {
        if let Some(i) = self.prefix_phi.iter().position(|x| x == b) {
            return Some(i + 1);
        }
        let pre = self.prefix.len();
        let n = self.period.len();
        let mut best: Option<usize> = None;
        for (r, t) in self.tail.iter().enumerate() {
            if t.base.finite != b.finite {
                continue;
            }
            let d = b.level - t.base.level;
            if d >= 0 && d % t.gain == 0 {
                let p = pre + (d / t.gain) as usize * n + r + 1;
                best = Some(best.map_or(p, |q| q.min(p)));
            }
        }
        best
    }

    pub fn word_index(&self, b: &Root) -> Result<usize> {
        self.index_of(b).ok_or_else(|| Error::NotMember(b.to_string()))
    }

    pub fn contains(&self, b: &Root) -> bool {
        self.index_of(b).is_some()
    }

    /// Members of `Φ̃^∞` with level at most the window depth, sorted.
    pub fn enumerate(&self, window: Window) -> Vec<Root> {
        let mut out: Vec<Root> = self.prefix_phi.iter().filter(|b| window.contains(b)).copied().collect();
        for t in &self.tail {
            let mut b = t.base;
            while b.level <= window.max_level {
                out.push(b);
                b = b.shift(t.gain);
            }
        }
        out.sort();
        out
    }

    /// φ(1..=count) in word order.
    pub fn listing(&self, count: usize) -> Vec<Root> {
        (1..=count).map(|p| self.phi(p)).collect()
    }

    /// Finite directions ε whose whole slice `⟨ε⟩` lies in `Φ̃^∞`.
    pub fn slice_directions(&self) -> Result<Vec<Vector>> {
        let dirs: Vec<Vector> = {
            let mut d: Vec<Vector> = self.tail.iter().map(|t| t.base.finite).collect();
            d.sort();
            d.dedup();
            d
        };
        for e in &dirs {
            let classes: Vec<&TailSlice> = self.tail.iter().filter(|t| t.base.finite == *e).collect();
            let l = classes.iter().fold(1i64, |acc, t| num::integer::lcm(acc, t.gain));
            let top = classes.iter().map(|t| t.base.level).max().unwrap_or(0);
            let start = if is_pos(e) { 0 } else { 1 };
            for m in start..=top + l {
                if !self.contains(&Root::new(m, *e)) {
                    return Err(Error::NotInversionSet(format!("slice of {} is not fully covered", Root::new(m, *e))));
                }
            }
        }
        Ok(dirs)
    }

    /// The unique `(K, u, y)` with `Φ^∞ = ∇_J(K,u,y)`.
    pub fn canonical_param(&self, sys: &AffineSystem) -> Result<BiconvexParam> {
        let dirs = self.slice_directions()?;
        let dset: HashSet<Vector> = dirs.iter().copied().collect();
        let finite: Vec<Root> = self.prefix_phi.iter().filter(|b| !dset.contains(&b.finite)).copied().collect();
        param_of_set(sys, self.j(), &dirs, &finite)
    }

    /// `x.[s]` for `x ∈ W_J`: new prefix is a reduced word of `x·z(p₀)`, tail unchanged.
    pub fn act(&self, sys: &AffineSystem, x: &AffineWeylElement) -> Result<InfiniteWord> {
        let xi = x.inverse();
        let phi_xi = self.sub.phi(sys, &xi)?;
        let mut p0 = phi_xi.iter().filter_map(|b| self.index_of(b)).max().unwrap_or(0);
        let pre = self.prefix.len();
        let n = self.period.len();
        p0 = if p0 <= pre { pre } else { pre + (p0 - pre).div_ceil(n) * n };
        let head = x.compose(&self.prefix_product(p0));
        let new_prefix = self.sub.reduced_word(sys, &head)?;
        InfiniteWord::new(sys, self.j(), new_prefix, self.period.clone())
    }

    pub fn generator_ids(&self, sys: &AffineSystem, letters: &[usize]) -> Vec<String> {
        letters.iter().map(|&g| self.sub.gen_id(g, sys.rank())).collect()
    }
}

/// `Z^K_J`: the periodic word of a reduced expression of `t_λ` for an admissible λ.
pub fn build_z(sys: &AffineSystem, j: NodeSet, k: NodeSet) -> Result<InfiniteWord> {
    build_z_with(sys, j, k, &BTreeMap::new())
}

pub fn build_z_with(
    sys: &AffineSystem,
    j: NodeSet,
    k: NodeSet,
    pairings: &BTreeMap<usize, i64>,
) -> Result<InfiniteWord> {
    let sub = sys.subsystem(j)?;
    let lambda = sub.lattice_element(sys, pairings, k)?;
    let t = sys.translation(lambda);
    let period = sub.reduced_word(sys, &t)?;
    InfiniteWord::new(sys, j, Vec::new(), period)
}

/// `χ_J(K,u,y) = uy.Z^K_J`.
pub fn chi(sys: &AffineSystem, param: &BiconvexParam) -> Result<InfiniteWord> {
    chi_with(sys, param, &BTreeMap::new())
}

/// `χ` through the word `Z^K_J` built from a chosen λ (pairings on `J∖K`).
pub fn chi_with(sys: &AffineSystem, param: &BiconvexParam, pairings: &BTreeMap<usize, i64>) -> Result<InfiniteWord> {
    let z = build_z_with(sys, param.j, param.k, pairings)?;
    let x = AffineWeylElement::from_finite(param.u).compose(&param.y);
    z.act(sys, &x)
}

/// Letters of a word from its φ-listing: `α_{s(p)} = z(p−1)^{-1} φ(p)` must be in `Π_J`.
pub fn letters_from_roots(sys: &AffineSystem, sub: &Subsystem, roots: &[Root]) -> Result<Vec<usize>> {
    let mut z = sys.identity();
    let mut out = Vec::with_capacity(roots.len());
    for (p, b) in roots.iter().enumerate() {
        let a = sys.act_inverse(&z, b);
        let g = sub
            .gen_index(&a)
            .ok_or_else(|| Error::NotInversionSet(format!("position {} does not pull back to a simple root", p + 1)))?;
        out.push(g);
        z = z.compose(&sub.gen(g));
    }
    Ok(out)
}

/// Shortest prefix and primitive period describing the same sequence.
fn normalize(mut prefix: Vec<usize>, mut period: Vec<usize>) -> (Vec<usize>, Vec<usize>) {
    let n = period.len();
    if let Some(d) = (1..n).find(|&d| n.is_multiple_of(d) && (d..n).all(|i| period[i] == period[i - d])) {
        period.truncate(d);
    }
    while prefix.last().is_some_and(|g| Some(g) == period.last()) {
        prefix.pop();
        period.rotate_right(1);
    }
    (prefix, period)
}

/// Splits a finite letter sequence into the shortest `(prefix, period)` that repeats at
/// least `min_repeats` times to the end of the sequence.
pub fn detect_period(letters: &[usize], min_repeats: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let len = letters.len();
    let mut best: Option<(usize, usize)> = None;
    for n in 1..=len {
        for pre in 0..len {
            if pre + n * min_repeats > len {
                break;
            }
            if (pre + n..len).all(|i| letters[i] == letters[i - n]) {
                if best.is_none_or(|(bp, bn)| pre + n < bp + bn || (pre + n == bp + bn && n < bn)) {
                    best = Some((pre, n));
                }
                break;
            }
        }
    }
    best.map(|(pre, n)| (letters[..pre].to_vec(), letters[pre..pre + n].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanType;

    fn a2() -> AffineSystem {
        AffineSystem::build(CartanType::A, 2).unwrap()
    }

    fn r(level: i64, c: &[i64]) -> Root {
        Root::from_coords(level, c)
    }

    #[test]
    fn rank_one_word() {
        let s = a2();
        let w = InfiniteWord::new(&s, NodeSet::single(1), vec![], vec![0, 1]).unwrap();
        assert_eq!(w.listing(3), vec![r(0, &[1, 0]), r(1, &[1, 0]), r(2, &[1, 0])]);
        assert_eq!(w.word_index(&r(2, &[1, 0])).unwrap(), 3);
        assert!(!w.contains(&r(1, &[-1, 0])));
        let bad = InfiniteWord::new(&s, NodeSet::single(1), vec![], vec![0]);
        assert_eq!(bad.unwrap_err(), Error::NotReduced { p: 2 });
    }

    #[test]
    fn period_normalized() {
        let s = a2();
        // s_2 s_1 s_0 s_2 s_1 s_2 then (s_0 s_1 s_2)^∞, generator order (s_1, s_2, s_{δ−θ})
        let w = InfiniteWord::new(&s, s.nodes(), vec![1, 0, 2, 1, 0, 1], vec![2, 0, 1]).unwrap();
        assert_eq!(w.prefix(), &[1, 0, 2, 1]);
        assert_eq!(w.period(), &[0, 1, 2, 0, 1, 2]);
        assert!(w.certified_depth >= 16);
        assert_eq!(w.phi(1), r(0, &[0, 1]));
        assert_eq!(w.phi(3), r(1, &[0, 1]));
        let p = w.canonical_param(&s).unwrap();
        assert_eq!(p.k, NodeSet::single(1));
        let win = Window::new(6).unwrap();
        assert_eq!(p.nabla(&s).enumerate(win), w.enumerate(win));
    }

    #[test]
    fn z_words() {
        let s = a2();
        let z = build_z(&s, NodeSet::single(1), NodeSet::EMPTY).unwrap();
        assert_eq!(z.period().len(), 2);
        let z = build_z(&s, s.nodes(), NodeSet::EMPTY).unwrap();
        assert_eq!(z.period().len(), 4);
        let p = z.canonical_param(&s).unwrap();
        assert_eq!((p.k, p.u.is_identity(), p.y.is_identity()), (NodeSet::EMPTY, true, true));
        let z = build_z(&s, s.nodes(), NodeSet::single(1)).unwrap();
        let p = z.canonical_param(&s).unwrap();
        assert_eq!(p.k, NodeSet::single(1));
        assert!(z.contains(&r(3, &[0, -1])));
        assert!(z.contains(&r(2, &[-1, -1])));
        assert!(!z.contains(&r(2, &[-1, 0])));
        assert!(build_z(&s, s.nodes(), s.nodes()).is_err());
    }

    #[test]
    fn chi_roundtrip() {
        let s = a2();
        let k = NodeSet::single(1);
        let y = s.subsystem(k).unwrap().element(&s, &[0, 1]);
        let p = BiconvexParam::new(&s, s.nodes(), k, s.fin.from_word(&[2]), y).unwrap();
        let w = chi(&s, &p).unwrap();
        assert_eq!(w.canonical_param(&s).unwrap(), p);
    }

    #[test]
    fn periods_detected() {
        assert_eq!(detect_period(&[1, 2, 0, 1, 2, 0, 1, 2], 2), Some((vec![], vec![1, 2, 0])));
        assert_eq!(detect_period(&[5, 1, 1, 1, 1], 3), Some((vec![5], vec![1])));
    }
}

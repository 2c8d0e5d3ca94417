//! Affine roots `mδ+ε`, the affine Weyl group `T ⋊ W̊`, lengths, reduced words and
//! inversion sets.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cartan::{
    is_neg, is_pos, is_zero, unit, vadd, vneg, vscale, CartanType, FiniteRootSystem, FiniteWeylElement, NodeSet,
    Vector, MAX_RANK, Q, ZERO,
};
use crate::error::{Error, Result};
use crate::subsys::Subsystem;

/// An affine root `level·δ + finite`. Negative and non-root values are representable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub level: i64,
    pub finite: Vector,
}

impl Root {
    pub fn new(level: i64, finite: Vector) -> Self {
        Root { level, finite }
    }

    pub fn from_coords(level: i64, coords: &[i64]) -> Self {
        let mut finite = ZERO;
        finite[..coords.len()].copy_from_slice(coords);
        Root { level, finite }
    }

    pub fn delta(level: i64) -> Self {
        Root { level, finite: ZERO }
    }

    pub fn is_imaginary(&self) -> bool {
        is_zero(&self.finite) && self.level != 0
    }

    /// Sign test only; does not check that this is a root.
    pub fn is_positive(&self) -> bool {
        self.level > 0 || (self.level == 0 && is_pos(&self.finite))
    }

    pub fn is_negative(&self) -> bool {
        self.level < 0 || (self.level == 0 && is_neg(&self.finite))
    }

    pub fn neg(&self) -> Root {
        Root { level: -self.level, finite: vneg(&self.finite) }
    }

    pub fn add(&self, other: &Root) -> Root {
        Root { level: self.level + other.level, finite: vadd(&self.finite, &other.finite) }
    }

    pub fn shift(&self, dl: i64) -> Root {
        Root { level: self.level + dl, finite: self.finite }
    }

    pub fn coords(&self, rank: usize) -> Vec<i64> {
        self.finite[..rank].to_vec()
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::notation::format_root(self))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::notation::format_root(self))
    }
}

/// Serialized in text notation; rank-aware JSON lives in `json::RootJson`.
impl Serialize for Root {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&crate::notation::format_root(self))
    }
}

/// `x = t_λ w̄`, with λ stored in simple-root coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineWeylElement {
    pub translation: Vector,
    pub finite: FiniteWeylElement,
}

impl fmt::Debug for AffineWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.finite.rank();
        write!(f, "t{:?}·{:?}", &self.translation[..r], self.finite)
    }
}

impl AffineWeylElement {
    pub fn identity(rank: usize) -> Self {
        AffineWeylElement { translation: ZERO, finite: FiniteWeylElement::identity(rank) }
    }

    pub fn from_finite(w: FiniteWeylElement) -> Self {
        AffineWeylElement { translation: ZERO, finite: w }
    }

    pub fn translation(rank: usize, lambda: Vector) -> Self {
        AffineWeylElement { translation: lambda, finite: FiniteWeylElement::identity(rank) }
    }

    pub fn is_identity(&self) -> bool {
        is_zero(&self.translation) && self.finite.is_identity()
    }

    pub fn is_translation(&self) -> bool {
        self.finite.is_identity()
    }

    /// `(t_λ u)(t_μ v) = t_{λ+u(μ)} uv`.
    pub fn compose(&self, other: &Self) -> Self {
        AffineWeylElement {
            translation: vadd(&self.translation, &self.finite.apply(&other.translation)),
            finite: self.finite.compose(&other.finite),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.finite.inverse();
        AffineWeylElement { translation: vneg(&inv.apply(&self.translation)), finite: inv }
    }

    pub fn power(&self, k: usize) -> Self {
        let mut out = AffineWeylElement::identity(self.finite.rank());
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }
}

impl Serialize for AffineWeylElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.finite.rank();
        let tr: Vec<String> = self.translation[..r].iter().map(|&c| format!("{c}/1")).collect();
        let mut st = s.serialize_struct("AffineWeylElement", 2)?;
        st.serialize_field("translation", &tr)?;
        st.serialize_field("finite_matrix", &self.finite.matrix())?;
        st.end()
    }
}

/// The untwisted affine root system over a finite type, with every Coxeter subsystem
/// `(W_J, S_J)` prepared up front.
#[derive(Debug)]
pub struct AffineSystem {
    pub fin: FiniteRootSystem,
    simple_roots: Vec<Root>,
    simple: Vec<AffineWeylElement>,
    subsystems: Vec<Option<Arc<Subsystem>>>,
}

impl AffineSystem {
    pub fn new(fin: FiniteRootSystem) -> Self {
        let r = fin.rank();
        let theta = fin.theta();
        let mut simple_roots = vec![Root::new(1, vneg(&theta))];
        simple_roots.extend((1..=r).map(|i| Root::new(0, unit(i))));
        let mut sys = AffineSystem { fin, simple_roots, simple: Vec::new(), subsystems: Vec::new() };
        sys.simple = sys.simple_roots.clone().iter().map(|a| sys.reflection(a)).collect();
        let full = NodeSet::full(r);
        let mut subs = vec![None; (full.0 as usize) + 1];
        for j in full.subsets() {
            if !j.is_empty() {
                subs[j.0 as usize] = Some(Arc::new(Subsystem::build(&sys, j).expect("valid node subset")));
            }
        }
        sys.subsystems = subs;
        sys
    }

    pub fn build(t: CartanType, rank: usize) -> Result<Self> {
        Ok(Self::new(FiniteRootSystem::build(t, rank)?))
    }

    pub fn rank(&self) -> usize {
        self.fin.rank()
    }

    /// I̊ = {1, …, l}.
    pub fn nodes(&self) -> NodeSet {
        self.fin.nodes()
    }

    pub fn subsystem(&self, j: NodeSet) -> Result<&Arc<Subsystem>> {
        if j.is_empty() {
            return Err(Error::EmptySubset);
        }
        self.subsystems
            .get(j.0 as usize)
            .and_then(|s| s.as_ref())
            .ok_or(Error::NotSubset { inner: j, outer: self.nodes() })
    }

    pub fn identity(&self) -> AffineWeylElement {
        AffineWeylElement::identity(self.rank())
    }

    pub fn is_real_root(&self, b: &Root) -> bool {
        self.fin.is_root(&b.finite)
    }

    pub fn is_root(&self, b: &Root) -> bool {
        self.is_real_root(b) || b.is_imaginary()
    }

    pub fn is_positive_root(&self, b: &Root) -> bool {
        self.is_root(b) && b.is_positive()
    }

    /// `ht(mδ+ε) = m·Σ a_i + ht(ε)`.
    pub fn height(&self, b: &Root) -> i64 {
        b.level * self.fin.delta_height() + self.fin.height(&b.finite)
    }

    /// `(β|γ)`; δ is isotropic and orthogonal to everything.
    pub fn form(&self, a: &Root, b: &Root) -> Q {
        self.fin.form(&a.finite, &b.finite)
    }

    /// α_i for i ∈ {0, …, l}.
    pub fn simple_root(&self, i: usize) -> Root {
        self.simple_roots[i]
    }

    pub fn simple_reflection(&self, i: usize) -> AffineWeylElement {
        self.simple[i]
    }

    /// `x(mδ+ε) = (m − (w̄ε|λ))δ + w̄ε`.
    pub fn act(&self, x: &AffineWeylElement, b: &Root) -> Root {
        let e = x.finite.apply(&b.finite);
        Root { level: b.level - self.fin.pair(&e, &x.translation), finite: e }
    }

    pub fn act_inverse(&self, x: &AffineWeylElement, b: &Root) -> Root {
        // x^{-1}(mδ+ε) = (m + (ε|λ))δ + w̄^{-1}ε
        Root { level: b.level + self.fin.pair(&b.finite, &x.translation), finite: x.finite.apply_inverse(&b.finite) }
    }

    /// Reflection in the real root `mδ+ε`, which is `t_{−mε^∨} s_ε`.
    pub fn reflection(&self, a: &Root) -> AffineWeylElement {
        let cv = self.fin.coroot(&a.finite);
        AffineWeylElement { translation: vscale(&cv, -a.level), finite: self.fin.reflection(&a.finite) }
    }

    pub fn translation(&self, lambda: Vector) -> AffineWeylElement {
        AffineWeylElement::translation(self.rank(), lambda)
    }

    /// Validated constructor: λ must lie in the coroot lattice M.
    pub fn element(&self, lambda: Vector, w: FiniteWeylElement) -> Result<AffineWeylElement> {
        if !self.fin.in_coroot_lattice(&lambda, self.nodes()) {
            return Err(Error::NotInLattice);
        }
        Ok(AffineWeylElement { translation: lambda, finite: w })
    }

    /// Product of ambient simple reflections `s_{i_1} ⋯ s_{i_k}` with letters in 0..=l.
    pub fn from_word(&self, word: &[usize]) -> AffineWeylElement {
        word.iter().fold(self.identity(), |acc, &i| acc.compose(&self.simple[i]))
    }

    fn ambient_gens(&self) -> Vec<(Root, AffineWeylElement)> {
        self.simple_roots.iter().copied().zip(self.simple.iter().copied()).collect()
    }

    /// Deterministic reduced word (lowest-index descent first), letters in 0..=l.
    pub fn reduced_word(&self, x: &AffineWeylElement) -> Vec<usize> {
        let (word, rest) = descend(self, &self.ambient_gens(), x, usize::MAX);
        debug_assert!(rest.is_identity());
        word
    }

    pub fn length(&self, x: &AffineWeylElement) -> usize {
        self.reduced_word(x).len()
    }

    /// `Φ(x)` listed through the partial products of a reduced word.
    pub fn inversion_set(&self, x: &AffineWeylElement) -> Vec<Root> {
        let word = self.reduced_word(x);
        let roots: Vec<Root> = word.iter().map(|&i| self.simple_roots[i]).collect();
        let refl: Vec<AffineWeylElement> = word.iter().map(|&i| self.simple[i]).collect();
        partial_product_roots(self, &roots, &refl)
    }

    /// Positive roots with level in `0..=max_level` (reals first by level, then δ-multiples).
    pub fn positive_roots_window(&self, max_level: i64) -> Vec<Root> {
        let mut out = Vec::new();
        for m in 0..=max_level {
            for e in self.fin.roots() {
                let b = Root::new(m, e);
                if b.is_positive() {
                    out.push(b);
                }
            }
            if m > 0 {
                out.push(Root::delta(m));
            }
        }
        out
    }

    pub fn real_positive_roots_window(&self, max_level: i64) -> Vec<Root> {
        self.positive_roots_window(max_level).into_iter().filter(|b| !b.is_imaginary()).collect()
    }

    pub fn rank_check(&self, v: &Vector) -> bool {
        v[self.rank()..MAX_RANK].iter().all(|&c| c == 0)
    }
}

/// Greedy descent over a generator list: repeatedly take the lowest-index `s` with
/// `x^{-1}(α_s) < 0` and replace `x` by `s·x`. Returns the letters and the remainder.
pub(crate) fn descend(
    sys: &AffineSystem,
    gens: &[(Root, AffineWeylElement)],
    x: &AffineWeylElement,
    max_steps: usize,
) -> (Vec<usize>, AffineWeylElement) {
    let mut cur = *x;
    let mut word = Vec::new();
    while word.len() < max_steps {
        let next = gens.iter().position(|(a, _)| sys.act_inverse(&cur, a).is_negative());
        match next {
            Some(k) => {
                word.push(k);
                cur = gens[k].1.compose(&cur);
            }
            None => break,
        }
    }
    (word, cur)
}

/// `φ(p) = s_1⋯s_{p−1}(α_{s_p})` for a word given by its roots and reflections.
pub(crate) fn partial_product_roots(sys: &AffineSystem, roots: &[Root], refl: &[AffineWeylElement]) -> Vec<Root> {
    let mut z = sys.identity();
    let mut out = Vec::with_capacity(roots.len());
    for (a, s) in roots.iter().zip(refl) {
        out.push(sys.act(&z, a));
        z = z.compose(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> AffineSystem {
        AffineSystem::build(CartanType::A, 2).unwrap()
    }

    fn r(level: i64, c: &[i64]) -> Root {
        Root::from_coords(level, c)
    }

    #[test]
    fn translation_action() {
        let s = a2();
        let t = s.translation(s.fin.simple_coroot(1));
        assert_eq!(s.act(&t, &r(0, &[1, 0])), r(-2, &[1, 0]));
        let s0 = s.reflection(&r(1, &[-1, -1]));
        assert_eq!(s0, s.simple_reflection(0));
        assert_eq!(s.act(&s0, &r(0, &[1, 0])), r(1, &[0, -1]));
        assert_eq!(s.act(&s0, &r(1, &[-1, -1])), r(-1, &[1, 1]));
        assert_eq!(s.act(&s0, &Root::delta(1)), Root::delta(1));
    }

    #[test]
    fn lengths() {
        let s = a2();
        assert_eq!(s.length(&s.identity()), 0);
        assert_eq!(s.length(&s.from_word(&[1, 2])), 2);
        let t = s.translation(s.fin.theta());
        assert_eq!(s.length(&t), 4);
        assert_eq!(s.from_word(&s.reduced_word(&t)), t);
    }

    #[test]
    fn inversion_examples() {
        let s = a2();
        let x = s.from_word(&[1, 2]);
        assert_eq!(s.inversion_set(&x), vec![r(0, &[1, 0]), r(0, &[1, 1])]);
        let y = s.simple_reflection(1).compose(&s.reflection(&r(1, &[-1, 0])));
        // y = t_{-α̌1}, so the ambient set has 4 roots; those inside Δ_{1} are α1 and δ+α1.
        let mut inv = s.inversion_set(&y);
        inv.sort();
        assert_eq!(inv, vec![r(0, &[1, 0]), r(0, &[1, 1]), r(1, &[0, -1]), r(1, &[1, 0])]);
    }

    #[test]
    fn group_laws() {
        let s = AffineSystem::build(CartanType::G, 2).unwrap();
        let x = s.from_word(&[0, 1, 2, 0, 1]);
        let y = s.from_word(&[2, 0, 2, 1]);
        let b = r(3, &[1, 1]);
        assert_eq!(s.act(&x.compose(&y), &b), s.act(&x, &s.act(&y, &b)));
        assert_eq!(s.act(&x.inverse(), &s.act(&x, &b)), b);
        assert_eq!(s.act_inverse(&x, &b), s.act(&x.inverse(), &b));
        assert!(x.compose(&x.inverse()).is_identity());
    }

    #[test]
    fn window_counts() {
        let s = a2();
        assert_eq!(s.positive_roots_window(1).len(), 10);
        let s = AffineSystem::build(CartanType::A, 1).unwrap();
        assert_eq!(s.positive_roots_window(1).len(), 4);
    }
}

//! Biconvex sets: slices `⟨P⟩`, the sets `Δ^K_J(w,±)`, the parameterization
//! `∇_J(K,u,y)` and a windowed (bi)convexity checker.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::affine::{AffineSystem, AffineWeylElement, Root};
use crate::cartan::{is_neg, is_pos, unit, vneg, FiniteWeylElement, NodeSet, Vector};
use crate::error::{Error, Result};

/// Truncation to roots of level at most `max_level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub max_level: i64,
}

impl Window {
    pub fn new(max_level: i64) -> Result<Self> {
        if max_level < 1 {
            return Err(Error::InvalidParam(format!("window depth must be at least 1, got {max_level}")));
        }
        Ok(Window { max_level })
    }

    pub fn contains(&self, b: &Root) -> bool {
        b.level <= self.max_level
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Plus,
}

/// `⟨P⟩` cut to the window: `mδ+ε` with ε ∈ P, `0 ≤ m ≤ D`, positive.
pub fn slice(p: &[Vector], window: Window) -> Vec<Root> {
    let mut out: Vec<Root> = Vec::new();
    for e in p {
        let start = if is_pos(e) { 0 } else { 1 };
        for m in start..=window.max_level {
            out.push(Root::new(m, *e));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The finite directions `wΔ̊^K_{J±}`.
pub fn delta_directions(
    sys: &AffineSystem,
    j: NodeSet,
    k: NodeSet,
    w: &FiniteWeylElement,
    sign: Sign,
) -> Result<Vec<Vector>> {
    if !k.is_subset(&j) {
        return Err(Error::NotSubset { inner: k, outer: j });
    }
    if !sys.fin.in_parabolic(j, w) {
        return Err(Error::NotInSubsystem(j));
    }
    let rel = sys.fin.relative_roots(j, k, sign == Sign::Plus);
    Ok(rel.iter().map(|v| w.apply(v)).collect())
}

/// `Δ^K_J(w,±) = ⟨wΔ̊^K_{J±}⟩` cut to the window.
pub fn delta_k_j(
    sys: &AffineSystem,
    j: NodeSet,
    k: NodeSet,
    w: &FiniteWeylElement,
    sign: Sign,
    window: Window,
) -> Result<Vec<Root>> {
    Ok(slice(&delta_directions(sys, j, k, w, sign)?, window))
}

/// `Δ_J(w,−)`, the maximal real biconvex set attached to `w ∈ W̊_J`.
pub fn maximal_biconvex(sys: &AffineSystem, j: NodeSet, w: &FiniteWeylElement, window: Window) -> Result<Vec<Root>> {
    delta_k_j(sys, j, NodeSet::EMPTY, w, Sign::Minus, window)
}

/// A triple `(K, u, y)` with `u ∈ W̊^K_J` and `y ∈ W_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BiconvexParam {
    pub j: NodeSet,
    pub k: NodeSet,
    pub u: FiniteWeylElement,
    pub y: AffineWeylElement,
}

impl BiconvexParam {
    pub fn new(sys: &AffineSystem, j: NodeSet, k: NodeSet, u: FiniteWeylElement, y: AffineWeylElement) -> Result<Self> {
        if j.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !j.is_subset(&sys.nodes()) {
            return Err(Error::NotSubset { inner: j, outer: sys.nodes() });
        }
        if !k.is_subset(&j) {
            return Err(Error::NotSubset { inner: k, outer: j });
        }
        if !sys.fin.in_parabolic(j, &u) || k.iter().any(|kk| !is_pos(&u.apply(&unit(kk)))) {
            return Err(Error::InvalidParam("u is not a minimal coset representative".into()));
        }
        if k.is_empty() {
            if !y.is_identity() {
                return Err(Error::NotInSubsystem(k));
            }
        } else if !sys.subsystem(k)?.contains(sys, &y) {
            return Err(Error::NotInSubsystem(k));
        }
        Ok(BiconvexParam { j, k, u, y })
    }

    /// `∇` is infinite exactly when K ⊊ J.
    pub fn is_infinite(&self) -> bool {
        self.k != self.j
    }

    /// `Φ_K(y)`, empty for K = ∅.
    pub fn phi_k(&self, sys: &AffineSystem) -> Vec<Root> {
        if self.k.is_empty() {
            Vec::new()
        } else {
            sys.subsystem(self.k).and_then(|s| s.phi(sys, &self.y)).expect("validated parameter")
        }
    }

    pub fn nabla(&self, sys: &AffineSystem) -> Nabla {
        Nabla::new(sys, *self)
    }
}

/// `∇_J(K,u,y)` prepared for exact membership tests.
#[derive(Debug, Clone)]
pub struct Nabla {
    pub param: BiconvexParam,
    directions: HashSet<Vector>,
    finite: Vec<Root>,
    finite_set: HashSet<Root>,
}

impl Nabla {
    pub fn new(sys: &AffineSystem, param: BiconvexParam) -> Self {
        let dirs = delta_directions(sys, param.j, param.k, &param.u, Sign::Minus).expect("validated parameter");
        let u = AffineWeylElement::from_finite(param.u);
        let finite: Vec<Root> = param.phi_k(sys).iter().map(|b| sys.act(&u, b)).collect();
        Nabla { param, directions: dirs.into_iter().collect(), finite_set: finite.iter().copied().collect(), finite }
    }

    /// `uΔ̊^K_{J−}`.
    pub fn directions(&self) -> Vec<Vector> {
        let mut d: Vec<Vector> = self.directions.iter().copied().collect();
        d.sort();
        d
    }

    /// `uΦ_K(y)`, the finite part.
    pub fn finite_part(&self) -> &[Root] {
        &self.finite
    }

    pub fn contains(&self, b: &Root) -> bool {
        (b.is_positive() && self.directions.contains(&b.finite)) || self.finite_set.contains(b)
    }

    pub fn enumerate(&self, window: Window) -> Vec<Root> {
        let mut out = slice(&self.directions(), window);
        out.extend(self.finite.iter().filter(|b| window.contains(b)));
        out.sort();
        out.dedup();
        out
    }
}

pub fn nabla_membership(sys: &AffineSystem, param: &BiconvexParam, b: &Root) -> bool {
    param.nabla(sys).contains(b)
}

pub fn nabla_enumerate(sys: &AffineSystem, param: &BiconvexParam, window: Window) -> Vec<Root> {
    param.nabla(sys).enumerate(window)
}

/// Inclusion up to finitely many elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NablaRelation {
    Equal,
    DotEqual,
    DotSubset,
    DotSuperset,
    Incomparable,
}

impl fmt::Display for NablaRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NablaRelation::Equal => "equal",
            NablaRelation::DotEqual => "dot-equal",
            NablaRelation::DotSubset => "dot-subset",
            NablaRelation::DotSuperset => "dot-superset",
            NablaRelation::Incomparable => "incomparable",
        };
        f.write_str(s)
    }
}

fn dot_subset(sys: &AffineSystem, p1: &BiconvexParam, p2: &BiconvexParam) -> bool {
    p2.k.is_subset(&p1.k) && sys.fin.in_parabolic(p1.k, &p2.u.inverse().compose(&p1.u))
}

/// Decides `∇₁ ⊂̇ ∇₂` from the parameters alone.
pub fn nabla_compare(sys: &AffineSystem, p1: &BiconvexParam, p2: &BiconvexParam) -> Result<NablaRelation> {
    if p1.j != p2.j {
        return Err(Error::InvalidParam("parameters live over different J".into()));
    }
    if p1 == p2 {
        return Ok(NablaRelation::Equal);
    }
    Ok(match (dot_subset(sys, p1, p2), dot_subset(sys, p2, p1)) {
        (true, true) => NablaRelation::DotEqual,
        (true, false) => NablaRelation::DotSubset,
        (false, true) => NablaRelation::DotSuperset,
        (false, false) => NablaRelation::Incomparable,
    })
}

/// Recovers `(K, u, y)` from the directions `P` of the infinite slices and the finite
/// remainder `F`, so that `∇_J(K,u,y) = ⟨P⟩ ⊔ F`.
pub fn param_of_set(sys: &AffineSystem, j: NodeSet, p: &[Vector], f: &[Root]) -> Result<BiconvexParam> {
    let fin = &sys.fin;
    let pset: HashSet<Vector> = p.iter().copied().collect();
    let all_j = fin.roots_in(j);
    if pset.iter().any(|v| !all_j.contains(v)) {
        return Err(Error::NotInversionSet("slice direction outside the subsystem".into()));
    }
    let q: Vec<Vector> = all_j.iter().filter(|v| !pset.contains(*v) && !pset.contains(&vneg(v))).copied().collect();
    let mut target: Vec<Vector> = pset.iter().map(vneg).collect();
    target.extend(q.iter().filter(|v| is_pos(v)));
    let u = fin
        .element_with_positive_system(j, &target)
        .map_err(|_| Error::NotInversionSet("slice directions are not of the form uΔ̊^K_{J−}".into()))?;
    let qset: HashSet<Vector> = q.iter().copied().collect();
    let k = NodeSet::from_nodes(j.iter().filter(|&i| qset.contains(&u.apply(&unit(i)))));
    let mut dirs: Vec<Vector> = fin.relative_roots(j, k, false).iter().map(|v| u.apply(v)).collect();
    let mut want: Vec<Vector> = pset.into_iter().collect();
    dirs.sort();
    want.sort();
    if dirs != want {
        return Err(Error::NotInversionSet("slice directions are not of the form uΔ̊^K_{J−}".into()));
    }
    let ui = AffineWeylElement::from_finite(u.inverse());
    let pulled: Vec<Root> = f.iter().map(|b| sys.act(&ui, b)).collect();
    let y = if k.is_empty() {
        if !f.is_empty() {
            return Err(Error::NotInversionSet("finite remainder must be empty when K is empty".into()));
        }
        sys.identity()
    } else {
        sys.subsystem(k)?.element_from_inversion_set(sys, &pulled)?
    };
    BiconvexParam::new(sys, j, k, u, y)
}

/// Why a set failed to be biconvex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BiconvexViolation {
    /// β, γ in the set but β+γ is not.
    NotConvex {
        beta: Root,
        gamma: Root,
        sum: Root,
    },
    /// β, γ outside the set but β+γ inside.
    NotCoconvex {
        beta: Root,
        gamma: Root,
        sum: Root,
    },
    OutsideAmbient {
        root: Root,
    },
}

impl fmt::Display for BiconvexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BiconvexViolation::NotConvex { beta, gamma, sum } => {
                write!(f, "convexity: {beta} and {gamma} are in the set, {sum} is not")
            }
            BiconvexViolation::NotCoconvex { beta, gamma, sum } => {
                write!(f, "coconvexity: {beta} and {gamma} are outside the set, {sum} is inside")
            }
            BiconvexViolation::OutsideAmbient { root } => write!(f, "{root} is not in the ambient set"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BiconvexReport {
    pub window: i64,
    pub violation: Option<BiconvexViolation>,
    pub checked_triples: usize,
    /// Pairs whose sum is a root beyond the window.
    pub unchecked_pairs: usize,
}

impl BiconvexReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// All `(a, b, a+b)` inside an ambient window, by index into `roots`.
#[derive(Debug, Clone)]
pub struct TripleTable {
    pub roots: Vec<Root>,
    pub index: HashMap<Root, usize>,
    pub triples: Vec<(usize, usize, usize)>,
    pub unchecked_pairs: usize,
    pub window: Window,
}

impl TripleTable {
    /// Ambient roots are the positive roots of the window satisfying `ambient`.
    pub fn new(sys: &AffineSystem, ambient: &dyn Fn(&Root) -> bool, window: Window) -> Self {
        let roots: Vec<Root> = sys.positive_roots_window(window.max_level).into_iter().filter(|b| ambient(b)).collect();
        let index: HashMap<Root, usize> = roots.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let mut triples = Vec::new();
        let mut unchecked = 0;
        for a in 0..roots.len() {
            for b in a..roots.len() {
                let s = roots[a].add(&roots[b]);
                if let Some(&c) = index.get(&s) {
                    triples.push((a, b, c));
                } else if s.level > window.max_level && sys.is_root(&s) && ambient(&s) {
                    unchecked += 1;
                }
            }
        }
        TripleTable { roots, index, triples, unchecked_pairs: unchecked, window }
    }

    pub fn membership(&self, member: &dyn Fn(&Root) -> bool) -> Vec<bool> {
        self.roots.iter().map(member).collect()
    }

    pub fn check_biconvex(&self, inside: &[bool]) -> BiconvexReport {
        let mut violation = None;
        for &(a, b, c) in &self.triples {
            let (ia, ib, ic) = (inside[a], inside[b], inside[c]);
            if ia && ib && !ic {
                violation = Some(BiconvexViolation::NotConvex {
                    beta: self.roots[a],
                    gamma: self.roots[b],
                    sum: self.roots[c],
                });
                break;
            }
            if !ia && !ib && ic {
                violation = Some(BiconvexViolation::NotCoconvex {
                    beta: self.roots[a],
                    gamma: self.roots[b],
                    sum: self.roots[c],
                });
                break;
            }
        }
        BiconvexReport {
            window: self.window.max_level,
            violation,
            checked_triples: self.triples.len(),
            unchecked_pairs: self.unchecked_pairs,
        }
    }
}

/// Checks convexity and coconvexity of `set` inside the ambient positive roots, for every
/// triple that fits in the window.
pub fn check_biconvex(
    sys: &AffineSystem,
    set: &dyn Fn(&Root) -> bool,
    ambient: &dyn Fn(&Root) -> bool,
    window: Window,
) -> BiconvexReport {
    let table = TripleTable::new(sys, ambient, window);
    let stray = sys.positive_roots_window(window.max_level).into_iter().find(|b| set(b) && !ambient(b));
    if let Some(root) = stray {
        return BiconvexReport {
            window: window.max_level,
            violation: Some(BiconvexViolation::OutsideAmbient { root }),
            checked_triples: 0,
            unchecked_pairs: table.unchecked_pairs,
        };
    }
    table.check_biconvex(&table.membership(set))
}

/// Convenience for a finite explicit set.
pub fn check_biconvex_set(
    sys: &AffineSystem,
    set: &[Root],
    ambient: &dyn Fn(&Root) -> bool,
    window: Window,
) -> BiconvexReport {
    let s: HashSet<Root> = set.iter().copied().collect();
    check_biconvex(sys, &|b| s.contains(b), ambient, window)
}

/// Predicate for `Δ_{J+}`.
pub fn ambient_j(sys: &AffineSystem, j: NodeSet) -> impl Fn(&Root) -> bool + '_ {
    move |b: &Root| b.is_positive() && sys.is_root(b) && (1..=sys.rank()).all(|i| b.finite[i - 1] == 0 || j.contains(i))
}

/// True when every finite direction is a negative root (used for `Δ(1,−)`-style tests).
pub fn all_negative(dirs: &[Vector]) -> bool {
    dirs.iter().all(is_neg)
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

    fn w(d: i64) -> Window {
        Window::new(d).unwrap()
    }

    #[test]
    fn slices() {
        let s = slice(&[vneg(&unit(1))], w(2));
        assert_eq!(s, vec![r(1, &[-1, 0]), r(2, &[-1, 0])]);
        assert_eq!(slice(&[unit(2)], w(1)), vec![r(0, &[0, 1]), r(1, &[0, 1])]);
        assert!(Window::new(0).is_err());
    }

    #[test]
    fn delta_sets() {
        let s = a2();
        let full = s.nodes();
        let s2 = s.fin.from_word(&[2]);
        let got = delta_k_j(&s, full, NodeSet::single(1), &s2, Sign::Minus, w(1)).unwrap();
        assert_eq!(got, vec![r(0, &[0, 1]), r(1, &[-1, 0]), r(1, &[0, 1])]);
        assert!(delta_k_j(&s, full, full, &s2, Sign::Minus, w(3)).unwrap().is_empty());
        let w21 = s.fin.from_word(&[2, 1]);
        let got = maximal_biconvex(&s, full, &w21, w(1)).unwrap();
        assert_eq!(got.len(), 5);
        assert_eq!(maximal_biconvex(&s, full, &s.fin.identity(), w(2)).unwrap().len(), 6);
    }

    #[test]
    fn s2s1_chain_membership() {
        let s = a2();
        let k = NodeSet::single(1);
        let sub = s.subsystem(k).unwrap();
        let y = sub.element(&s, &[0, 1]);
        let p = BiconvexParam::new(&s, s.nodes(), k, s.fin.from_word(&[2]), y).unwrap();
        let n = p.nabla(&s);
        assert!(n.contains(&r(1, &[1, 1])));
        assert!(!n.contains(&r(2, &[1, 1])));
        assert!(n.contains(&r(4, &[0, 1])));
        assert!(n.contains(&r(3, &[-1, 0])));
        assert!(!n.contains(&r(3, &[1, 0])));
        let table = TripleTable::new(&s, &ambient_j(&s, s.nodes()), w(6));
        assert!(table.check_biconvex(&table.membership(&|b| n.contains(b))).pass());
    }

    #[test]
    fn biconvex_examples() {
        let s = a2();
        let amb = ambient_j(&s, s.nodes());
        let d1 = maximal_biconvex(&s, s.nodes(), &s.fin.identity(), w(3)).unwrap();
        assert!(check_biconvex_set(&s, &d1, &amb, w(3)).pass());
        assert!(check_biconvex_set(&s, &[r(0, &[1, 0]), r(0, &[1, 1])], &amb, w(3)).pass());
        let rep = check_biconvex_set(&s, &[r(0, &[1, 1])], &amb, w(3));
        assert!(matches!(rep.violation, Some(BiconvexViolation::NotCoconvex { .. })));
    }

    #[test]
    fn compare_params() {
        let s = a2();
        let full = s.nodes();
        let k = NodeSet::single(1);
        let y = s.subsystem(k).unwrap().element(&s, &[0, 1]);
        let c1 = BiconvexParam::new(&s, full, k, s.fin.from_word(&[2]), y).unwrap();
        let c2 = BiconvexParam::new(&s, full, NodeSet::EMPTY, s.fin.from_word(&[2, 1]), s.identity()).unwrap();
        assert_eq!(nabla_compare(&s, &c1, &c2).unwrap(), NablaRelation::DotSubset);
        assert_eq!(nabla_compare(&s, &c2, &c1).unwrap(), NablaRelation::DotSuperset);
        assert_eq!(nabla_compare(&s, &c1, &c1).unwrap(), NablaRelation::Equal);
        let c3 = BiconvexParam::new(&s, full, k, s.fin.from_word(&[2]), s.identity()).unwrap();
        assert_eq!(nabla_compare(&s, &c1, &c3).unwrap(), NablaRelation::DotEqual);
        let c4 = BiconvexParam::new(&s, full, NodeSet::EMPTY, s.fin.identity(), s.identity()).unwrap();
        assert_eq!(nabla_compare(&s, &c1, &c4).unwrap(), NablaRelation::Incomparable);
    }

    #[test]
    fn recover_param() {
        let s = a2();
        let full = s.nodes();
        let k = NodeSet::single(1);
        let y = s.subsystem(k).unwrap().element(&s, &[0, 1]);
        let p = BiconvexParam::new(&s, full, k, s.fin.from_word(&[2]), y).unwrap();
        let n = p.nabla(&s);
        let back = param_of_set(&s, full, &n.directions(), n.finite_part()).unwrap();
        assert_eq!(back, p);
        assert!(param_of_set(&s, full, &[vneg(&unit(1))], &[]).is_err());
    }

    #[test]
    fn invalid_params() {
        let s = a2();
        let full = s.nodes();
        let k = NodeSet::single(1);
        assert!(BiconvexParam::new(&s, full, k, s.fin.from_word(&[1]), s.identity()).is_err());
        assert!(BiconvexParam::new(&s, full, k, s.fin.identity(), s.simple_reflection(2)).is_err());
        assert!(BiconvexParam::new(&s, full, NodeSet::EMPTY, s.fin.identity(), s.simple_reflection(2)).is_err());
    }
}

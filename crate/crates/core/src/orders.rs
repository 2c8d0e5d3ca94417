//! Convex orders: the n-row order on `Δ_J(w,−)`, the three-zone order on `Δ₊`,
//! splicing and restriction, and a windowed CO(i)/CO(ii) verifier.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::affine::{AffineSystem, AffineWeylElement, Root};
use crate::biconvex::Window;
use crate::cartan::{is_neg, FiniteWeylElement};
use crate::chains::{enumerate_chains, ChainParam, RowParam};
use crate::error::{Error, Result};
use crate::words::chi_with;

/// Compares two members of `Δ_J(w,−)` by `(row, index)`.
pub fn row_compare(sys: &AffineSystem, rows: &RowParam, a: &Root, b: &Root) -> Result<Ordering> {
    Ok(rows.position(sys, a)?.cmp(&rows.position(sys, b)?))
}

/// A total order on `Δ^im₊`: the listed levels first in the given order, then all
/// further levels increasing.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ImaginaryOrder {
    pub levels: Vec<i64>,
}

impl ImaginaryOrder {
    /// `levels` must be a permutation of `1..=n`.
    pub fn new(levels: Vec<i64>) -> Result<Self> {
        let mut sorted = levels.clone();
        sorted.sort();
        if sorted.iter().enumerate().any(|(i, &m)| m != i as i64 + 1) {
            return Err(Error::InvalidParam("imaginary order must permute 1..=n".into()));
        }
        Ok(ImaginaryOrder { levels })
    }

    pub fn key(&self, level: i64) -> i64 {
        match self.levels.iter().position(|&m| m == level) {
            Some(i) => i as i64,
            None => level - 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Zone {
    Negative,
    Imaginary,
    Positive,
}

/// Sort key of a root under an [`OrderSpec`]; the order is the lexicographic order on keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderKey {
    pub zone: Zone,
    pub major: i64,
    pub minor: i64,
}

/// `Δ(w,−) ≺ Δ^im₊ ≺ Δ(w,+)`, with the positive zone ordered opposite to a row order
/// on `Δ(wẘ∘,−)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderSpec {
    pub w: FiniteWeylElement,
    pub negative: RowParam,
    pub imaginary: ImaginaryOrder,
    pub positive: RowParam,
}

pub fn build_order(
    sys: &AffineSystem,
    w: FiniteWeylElement,
    negative: RowParam,
    imaginary: ImaginaryOrder,
    positive: RowParam,
) -> Result<OrderSpec> {
    let full = sys.nodes();
    let w0 = sys.fin.longest_element(full);
    if negative.chain.j != full || negative.chain.w != w {
        return Err(Error::InvalidParam("negative zone must be a row parameter over (I, w)".into()));
    }
    if positive.chain.j != full || positive.chain.w != w.compose(&w0) {
        return Err(Error::InvalidParam("positive zone must be a row parameter over (I, w·w∘)".into()));
    }
    Ok(OrderSpec { w, negative, imaginary, positive })
}

impl OrderSpec {
    pub fn zone(&self, b: &Root) -> Result<Zone> {
        if !b.is_positive() {
            return Err(Error::InvalidParam(format!("{b} is not positive")));
        }
        if b.is_imaginary() {
            Ok(Zone::Imaginary)
        } else if is_neg(&self.w.apply_inverse(&b.finite)) {
            Ok(Zone::Negative)
        } else {
            Ok(Zone::Positive)
        }
    }

    pub fn key(&self, sys: &AffineSystem, b: &Root) -> Result<OrderKey> {
        if !sys.is_positive_root(b) {
            return Err(Error::InvalidParam(format!("{b} is not a positive root")));
        }
        let zone = self.zone(b)?;
        let (major, minor) = match zone {
            Zone::Negative => {
                let (r, p) = self.negative.position(sys, b)?;
                (r as i64, p as i64)
            }
            Zone::Imaginary => (self.imaginary.key(b.level), 0),
            Zone::Positive => {
                let (r, p) = self.positive.position(sys, b)?;
                (-(r as i64), -(p as i64))
            }
        };
        Ok(OrderKey { zone, major, minor })
    }

    pub fn compare(&self, sys: &AffineSystem, a: &Root, b: &Root) -> Result<Ordering> {
        Ok(self.key(sys, a)?.cmp(&self.key(sys, b)?))
    }

    /// `Δ₊` cut to the window, sorted by the order.
    pub fn window_listing(&self, sys: &AffineSystem, window: Window) -> Result<Vec<Root>> {
        let mut keyed = sys
            .positive_roots_window(window.max_level)
            .into_iter()
            .map(|b| Ok((self.key(sys, &b)?, b)))
            .collect::<Result<Vec<_>>>()?;
        keyed.sort();
        Ok(keyed.into_iter().map(|(_, b)| b).collect())
    }

    /// The opposite order, as a comparator.
    pub fn reversed<'a>(&'a self, sys: &'a AffineSystem) -> impl Fn(&Root, &Root) -> Ordering + 'a {
        move |a, b| full_compare(sys, self, b, a).expect("positive roots")
    }
}

pub fn full_compare(sys: &AffineSystem, spec: &OrderSpec, a: &Root, b: &Root) -> Result<Ordering> {
    spec.compare(sys, a, b)
}

/// A finite order given by an explicit listing.
#[derive(Debug, Clone)]
pub struct ListOrder {
    pub listing: Vec<Root>,
    pos: HashMap<Root, usize>,
}

impl ListOrder {
    pub fn new(listing: Vec<Root>) -> Self {
        let pos = listing.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        ListOrder { listing, pos }
    }

    pub fn contains(&self, b: &Root) -> bool {
        self.pos.contains_key(b)
    }

    /// Panics on roots outside the listing.
    pub fn compare(&self, a: &Root, b: &Root) -> Ordering {
        self.pos[a].cmp(&self.pos[b])
    }

    /// Swaps positions `i` and `i+1`.
    pub fn swapped(&self, i: usize) -> ListOrder {
        let mut l = self.listing.clone();
        l.swap(i, i + 1);
        ListOrder::new(l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrderViolation {
    /// β ≺ γ and β+γ ∈ B, but β+γ is not strictly between them.
    CoI { beta: Root, gamma: Root, sum: Root },
    /// β ∈ B, γ ∉ B, β+γ ∈ B, but β+γ ≺ β.
    CoII { beta: Root, gamma: Root, sum: Root },
}

impl fmt::Display for OrderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderViolation::CoI { beta, gamma, sum } => {
                write!(f, "CO(i): {beta} < {gamma} but {sum} is not between them")
            }
            OrderViolation::CoII { beta, gamma, sum } => {
                write!(f, "CO(ii): {beta} in B, {gamma} outside, but {sum} precedes {beta}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub window: i64,
    pub violation: Option<OrderViolation>,
    pub checked: usize,
    /// Pairs whose sum lies in B beyond the window.
    pub unchecked_pairs: usize,
}

impl OrderReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks CO(i) on `B ∩ window` and `CO(ii)_A` with γ ranging over `(A ∖ B) ∩ window`.
/// The first violation in order of β, then γ, is reported.
pub fn verify_convex_order(
    sys: &AffineSystem,
    compare: &dyn Fn(&Root, &Root) -> Ordering,
    member: &dyn Fn(&Root) -> bool,
    ambient: &dyn Fn(&Root) -> bool,
    window: Window,
) -> OrderReport {
    let all = sys.positive_roots_window(window.max_level);
    let mut inside: Vec<Root> = all.iter().filter(|b| member(b)).copied().collect();
    inside.sort_by(|a, b| compare(a, b));
    let pos: HashMap<Root, usize> = inside.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let outside: Vec<Root> = all.iter().filter(|b| !member(b) && ambient(b)).copied().collect();
    let beyond = |s: &Root| s.level > window.max_level && sys.is_root(s) && member(s);
    let mut checked = 0;
    let mut unchecked = 0;
    let mut violation = None;
    for (a, beta) in inside.iter().enumerate() {
        for (b, gamma) in inside.iter().enumerate().skip(a + 1) {
            if beta.is_imaginary() && gamma.is_imaginary() {
                continue;
            }
            let sum = beta.add(gamma);
            match pos.get(&sum) {
                Some(&c) => {
                    checked += 1;
                    if violation.is_none() && !(a < c && c < b) {
                        violation = Some(OrderViolation::CoI { beta: *beta, gamma: *gamma, sum });
                    }
                }
                None if beyond(&sum) => unchecked += 1,
                None => {}
            }
        }
        for gamma in &outside {
            let sum = beta.add(gamma);
            match pos.get(&sum) {
                Some(&c) => {
                    checked += 1;
                    if violation.is_none() && c < a {
                        violation = Some(OrderViolation::CoII { beta: *beta, gamma: *gamma, sum });
                    }
                }
                None if beyond(&sum) => unchecked += 1,
                None => {}
            }
        }
    }
    OrderReport { window: window.max_level, violation, checked, unchecked_pairs: unchecked }
}

/// Verifies an explicit listing as an order on its own members, with CO(ii) against `ambient`.
pub fn verify_listing(
    sys: &AffineSystem,
    order: &ListOrder,
    ambient: &dyn Fn(&Root) -> bool,
    window: Window,
) -> OrderReport {
    verify_convex_order(sys, &|a, b| order.compare(a, b), &|b| order.contains(b), ambient, window)
}

/// Verifies an [`OrderSpec`] on all of `Δ₊` at the window.
pub fn verify_spec(sys: &AffineSystem, spec: &OrderSpec, window: Window) -> OrderReport {
    let cmp = |a: &Root, b: &Root| spec.compare(sys, a, b).expect("positive roots");
    verify_convex_order(sys, &cmp, &|_| true, &|_| true, window)
}

/// The order on `Φ(y) ⊔ yB` with `Φ(y) ≺ yB`, `first` on `Φ(y)` and `second` transported by y.
pub struct Splice<'a> {
    sys: &'a AffineSystem,
    y: AffineWeylElement,
    phi: HashSet<Root>,
    first: &'a dyn Fn(&Root, &Root) -> Ordering,
    second: &'a dyn Fn(&Root, &Root) -> Ordering,
    second_member: &'a dyn Fn(&Root) -> bool,
}

pub fn splice_orders<'a>(
    sys: &'a AffineSystem,
    y: AffineWeylElement,
    first: &'a dyn Fn(&Root, &Root) -> Ordering,
    second: &'a dyn Fn(&Root, &Root) -> Ordering,
    second_member: &'a dyn Fn(&Root) -> bool,
) -> Splice<'a> {
    let phi = sys.inversion_set(&y).into_iter().collect();
    Splice { sys, y, phi, first, second, second_member }
}

impl Splice<'_> {
    pub fn contains(&self, b: &Root) -> bool {
        self.phi.contains(b) || {
            let p = self.sys.act_inverse(&self.y, b);
            p.is_positive() && (self.second_member)(&p)
        }
    }

    pub fn compare(&self, a: &Root, b: &Root) -> Ordering {
        match (self.phi.contains(a), self.phi.contains(b)) {
            (true, true) => (self.first)(a, b),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => (self.second)(&self.sys.act_inverse(&self.y, a), &self.sys.act_inverse(&self.y, b)),
        }
    }
}

/// The restriction of an order to a subset; `None` outside it.
pub fn restrict_order<'a>(
    compare: &'a dyn Fn(&Root, &Root) -> Ordering,
    member: &'a dyn Fn(&Root) -> bool,
) -> impl Fn(&Root, &Root) -> Option<Ordering> + 'a {
    move |a, b| (member(a) && member(b)).then(|| compare(a, b))
}

/// First `count` roots of row `row` of an n-row order.
pub fn enumerate_prefix(sys: &AffineSystem, rows: &RowParam, row: usize, count: usize) -> Result<Vec<Root>> {
    if row == 0 || row > rows.num_rows() {
        return Err(Error::InvalidParam(format!("row {row} out of range 1..={}", rows.num_rows())));
    }
    Ok(rows.row_prefix(sys, row, count))
}

/// A row parameter over `(I, w)` chosen uniformly among chains with `ℓ(y_i) ≤ bound`,
/// with words `χ(B_i)` built from random λ pairings in `1..=max_pairing`.
pub fn sample_row_param<R: Rng>(
    sys: &AffineSystem,
    w: &FiniteWeylElement,
    bound: usize,
    max_pairing: i64,
    rng: &mut R,
) -> Result<RowParam> {
    let chains = enumerate_chains(sys, sys.nodes(), w, bound)?;
    let chain: ChainParam = chains.choose(rng).expect("the one-row chain always exists").clone();
    let mut words = Vec::with_capacity(chain.len());
    for i in 1..=chain.len() {
        let b = chain.extract_b(sys, i)?;
        let pairings: BTreeMap<usize, i64> =
            b.j.minus(&b.k).iter().map(|n| (n, rng.gen_range(1..=max_pairing))).collect();
        words.push(chi_with(sys, &b, &pairings)?);
    }
    RowParam::new(sys, chain, words)
}

/// A random [`OrderSpec`] with the default imaginary order.
pub fn sample_order_spec<R: Rng>(sys: &AffineSystem, bound: usize, max_pairing: i64, rng: &mut R) -> Result<OrderSpec> {
    let elements = sys.fin.parabolic_elements(sys.nodes())?;
    let w = *elements.choose(rng).expect("non-empty group");
    let w0 = sys.fin.longest_element(sys.nodes());
    let negative = sample_row_param(sys, &w, bound, max_pairing, rng)?;
    let positive = sample_row_param(sys, &w.compose(&w0), bound, max_pairing, rng)?;
    build_order(sys, w, negative, ImaginaryOrder::default(), positive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanType, NodeSet};
    use crate::words::InfiniteWord;

    fn r(level: i64, c: &[i64]) -> Root {
        Root::from_coords(level, c)
    }

    fn s2s1(s: &AffineSystem) -> RowParam {
        let k1 = NodeSet::single(1);
        let y1 = s.subsystem(k1).unwrap().element(s, &[0, 1]);
        let chain = ChainParam::new(s, s.nodes(), s.fin.from_word(&[2, 1]), &[k1], &[y1]).unwrap();
        let s0 = InfiniteWord::new(s, s.nodes(), vec![1, 0, 2, 1, 0, 1], vec![2, 0, 1]).unwrap();
        let s1 = InfiniteWord::new(s, k1, vec![], vec![0, 1]).unwrap();
        RowParam::new(s, chain, vec![s0, s1]).unwrap()
    }

    #[test]
    fn s2s1_rows() {
        let s = AffineSystem::build(CartanType::A, 2).unwrap();
        let rows = s2s1(&s);
        let row1 = vec![
            r(0, &[0, 1]),
            r(0, &[1, 1]),
            r(1, &[0, 1]),
            r(1, &[1, 1]),
            r(2, &[0, 1]),
            r(1, &[-1, 0]),
            r(3, &[0, 1]),
            r(2, &[-1, 0]),
            r(4, &[0, 1]),
            r(3, &[-1, 0]),
            r(5, &[0, 1]),
            r(4, &[-1, 0]),
        ];
        assert_eq!(enumerate_prefix(&s, &rows, 1, 12).unwrap(), row1);
        let row2: Vec<Root> = (2..6).map(|k| r(k, &[1, 1])).collect();
        assert_eq!(enumerate_prefix(&s, &rows, 2, 4).unwrap(), row2);
        assert_eq!(row_compare(&s, &rows, &r(2, &[0, 1]), &r(1, &[-1, 0])).unwrap(), Ordering::Less);
        assert_eq!(row_compare(&s, &rows, &r(5, &[0, 1]), &r(2, &[1, 1])).unwrap(), Ordering::Less);
        let cmp = |a: &Root, b: &Root| row_compare(&s, &rows, a, b).unwrap();
        let member = |b: &Root| rows.chain.row_of(&s, b).is_some();
        let rep = verify_convex_order(&s, &cmp, &member, &|_| true, Window::new(5).unwrap());
        assert!(rep.pass(), "{:?}", rep.violation);
    }

    #[test]
    fn imaginary_order_keys() {
        let o = ImaginaryOrder::new(vec![2, 1]).unwrap();
        assert!(o.key(2) < o.key(1) && o.key(1) < o.key(3));
        assert!(ImaginaryOrder::new(vec![1, 3]).is_err());
    }

    #[test]
    fn sampled_specs_verify() {
        use rand::SeedableRng;
        let s = AffineSystem::build(CartanType::A, 2).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..4 {
            let spec = sample_order_spec(&s, 2, 2, &mut rng).unwrap();
            let rep = verify_spec(&s, &spec, Window::new(4).unwrap());
            assert!(rep.pass(), "{:?}", rep.violation);
        }
    }

    #[test]
    fn zones_for_identity() {
        let s = AffineSystem::build(CartanType::A, 1).unwrap();
        let id = s.fin.identity();
        let w0 = s.fin.longest_element(s.nodes());
        let neg =
            RowParam::with_default_words(&s, enumerate_chains(&s, s.nodes(), &id, 0).unwrap()[0].clone()).unwrap();
        let pos =
            RowParam::with_default_words(&s, enumerate_chains(&s, s.nodes(), &w0, 0).unwrap()[0].clone()).unwrap();
        let spec = build_order(&s, id, neg, ImaginaryOrder::default(), pos).unwrap();
        let a = r(1, &[-1]);
        let d = Root::delta(1);
        let b = r(1, &[1]);
        assert_eq!(spec.compare(&s, &a, &d).unwrap(), Ordering::Less);
        assert_eq!(spec.compare(&s, &d, &b).unwrap(), Ordering::Less);
        assert_eq!(spec.compare(&s, &d, &Root::delta(2)).unwrap(), Ordering::Less);
    }
}

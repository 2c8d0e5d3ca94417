//! Finite root systems of type X_l: Cartan data, roots, the finite Weyl group,
//! parabolic subsystems and minimal coset representatives.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_RANK: usize = 8;

/// Coordinates over the simple roots of the finite system. Unused tail entries are zero.
pub type Vector = [i64; MAX_RANK];

pub type Q = Ratio<i64>;

pub const ZERO: Vector = [0; MAX_RANK];

pub fn vadd(a: &Vector, b: &Vector) -> Vector {
    let mut out = ZERO;
    for i in 0..MAX_RANK {
        out[i] = a[i] + b[i];
    }
    out
}

pub fn vsub(a: &Vector, b: &Vector) -> Vector {
    let mut out = ZERO;
    for i in 0..MAX_RANK {
        out[i] = a[i] - b[i];
    }
    out
}

pub fn vscale(a: &Vector, k: i64) -> Vector {
    let mut out = ZERO;
    for i in 0..MAX_RANK {
        out[i] = a[i] * k;
    }
    out
}

pub fn vneg(a: &Vector) -> Vector {
    vscale(a, -1)
}

pub fn is_zero(a: &Vector) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Nonzero with all coefficients non-negative.
pub fn is_pos(a: &Vector) -> bool {
    !is_zero(a) && a.iter().all(|&c| c >= 0)
}

pub fn is_neg(a: &Vector) -> bool {
    !is_zero(a) && a.iter().all(|&c| c <= 0)
}

pub fn unit(i: usize) -> Vector {
    let mut v = ZERO;
    v[i - 1] = 1;
    v
}

/// Set of Dynkin nodes stored as a bitmask (bit i is node i; node 0 is the affine node).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeSet(pub u16);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    /// Nodes 1..=rank.
    pub fn full(rank: usize) -> Self {
        NodeSet(((1u16 << (rank + 1)) - 1) & !1)
    }

    pub fn single(i: usize) -> Self {
        NodeSet(1 << i)
    }

    pub fn from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for i in nodes {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 16 && self.0 & (1 << i) != 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersect(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    pub fn minus(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    /// Nodes in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..16).filter(move |i| bits & (1 << i) != 0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(&self) -> Vec<NodeSet> {
        let mut out = Vec::new();
        let m = self.0;
        let mut s: u16 = 0;
        loop {
            out.push(NodeSet(s));
            if s == m {
                break;
            }
            s = (s.wrapping_sub(m)) & m;
        }
        out
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for NodeSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for NodeSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&i| i > MAX_RANK) {
            return Err(serde::de::Error::custom(format!("node {bad} out of range")));
        }
        Ok(NodeSet::from_nodes(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            CartanType::A => "A",
            CartanType::B => "B",
            CartanType::C => "C",
            CartanType::D => "D",
            CartanType::E => "E",
            CartanType::F => "F",
            CartanType::G => "G",
        };
        f.write_str(c)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "E" => Ok(CartanType::E),
            "F" => Ok(CartanType::F),
            "G" => Ok(CartanType::G),
            _ => Err(Error::InvalidType { label: s.to_string(), rank: 0 }),
        }
    }
}

/// Cartan matrix, affine labels and the normalized invariant form.
///
/// The matrix follows `a_ij = 2(α_i|α_j)/(α_i|α_i)` with Bourbaki numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanData {
    pub type_label: CartanType,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    /// a_0, a_1, ..., a_l.
    pub labels: Vec<i64>,
    pub gram: Vec<Vec<Q>>,
}

#[derive(Serialize, Deserialize)]
struct CartanJson {
    #[serde(rename = "type")]
    type_label: CartanType,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    labels: Vec<i64>,
}

impl Serialize for CartanData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CartanJson {
            type_label: self.type_label,
            rank: self.rank,
            cartan: self.cartan_matrix.clone(),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CartanData {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CartanJson::deserialize(d)?;
        let data = build_cartan(j.type_label, j.rank).map_err(serde::de::Error::custom)?;
        if data.cartan_matrix != j.cartan || data.labels != j.labels {
            return Err(serde::de::Error::custom("cartan matrix or labels do not match the type"));
        }
        Ok(data)
    }
}

fn valid_type(t: CartanType, l: usize) -> bool {
    match t {
        CartanType::A => (1..=MAX_RANK).contains(&l),
        CartanType::B | CartanType::C => (2..=MAX_RANK).contains(&l),
        CartanType::D => (4..=MAX_RANK).contains(&l),
        CartanType::E => (6..=8).contains(&l),
        CartanType::F => l == 4,
        CartanType::G => l == 2,
    }
}

fn raw_cartan(t: CartanType, l: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; l]; l];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i - 1][j - 1] = aij;
        a[j - 1][i - 1] = aji;
    };
    match t {
        CartanType::A => {
            for i in 1..l {
                link(i, i + 1, -1, -1);
            }
        }
        CartanType::B => {
            for i in 1..l - 1 {
                link(i, i + 1, -1, -1);
            }
            link(l - 1, l, -1, -2);
        }
        CartanType::C => {
            for i in 1..l - 1 {
                link(i, i + 1, -1, -1);
            }
            link(l - 1, l, -2, -1);
        }
        CartanType::D => {
            for i in 1..l - 1 {
                link(i, i + 1, -1, -1);
            }
            link(l - 2, l, -1, -1);
        }
        CartanType::E => {
            link(1, 3, -1, -1);
            link(2, 4, -1, -1);
            for i in 3..l {
                link(i, i + 1, -1, -1);
            }
        }
        CartanType::F => {
            link(1, 2, -1, -1);
            link(2, 3, -1, -2);
            link(3, 4, -1, -1);
        }
        CartanType::G => {
            link(1, 2, -3, -1);
        }
    }
    a
}

/// Builds the Cartan data of the finite type `t_l` together with its affine labels.
pub fn build_cartan(t: CartanType, rank: usize) -> Result<CartanData> {
    if !valid_type(t, rank) {
        return Err(Error::InvalidType { label: t.to_string(), rank });
    }
    let a = raw_cartan(t, rank);
    // d_i = (α_i|α_i)/2, propagated along the Dynkin diagram.
    let mut d: Vec<Option<Q>> = vec![None; rank];
    d[0] = Some(Q::from_integer(1));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for j in 0..rank {
            if j != i && a[i][j] != 0 && d[j].is_none() {
                d[j] = Some(d[i].unwrap() * Q::new(a[i][j], a[j][i]));
                queue.push_back(j);
            }
        }
    }
    let d: Vec<Q> = d.into_iter().map(|x| x.expect("Dynkin diagram is connected")).collect();
    let mut gram: Vec<Vec<Q>> = (0..rank).map(|i| (0..rank).map(|j| d[i] * a[i][j]).collect()).collect();

    let roots = closure_roots(&a, rank);
    let theta =
        *roots.iter().filter(|v| is_pos(v)).max_by_key(|v| v.iter().sum::<i64>()).expect("root system is non-empty");
    let mut tt = Q::from_integer(0);
    for i in 0..rank {
        for j in 0..rank {
            tt += gram[i][j] * theta[i] * theta[j];
        }
    }
    let factor = Q::from_integer(2) / tt;
    for row in gram.iter_mut() {
        for g in row.iter_mut() {
            *g *= factor;
        }
    }
    let mut labels = vec![1i64];
    labels.extend_from_slice(&theta[..rank]);
    Ok(CartanData { type_label: t, rank, cartan_matrix: a, labels, gram })
}

/// Closure of the simple roots under simple reflections.
fn closure_roots(a: &[Vec<i64>], rank: usize) -> Vec<Vector> {
    let mut seen: HashSet<Vector> = HashSet::new();
    let mut queue: VecDeque<Vector> = VecDeque::new();
    for i in 1..=rank {
        let v = unit(i);
        seen.insert(v);
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        for i in 0..rank {
            let c: i64 = (0..rank).map(|j| v[j] * a[i][j]).sum();
            let mut w = v;
            w[i] -= c;
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().collect()
}

/// Finite Weyl group element as an integer matrix on simple-root coordinates.
///
/// Column j holds the coordinates of `w(α_j)`. The inverse is carried along so that
/// inversion is free.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteWeylElement {
    rank: u8,
    m: [[i32; MAX_RANK]; MAX_RANK],
    inv: [[i32; MAX_RANK]; MAX_RANK],
}

impl fmt::Debug for FiniteWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{:?}", self.matrix())
    }
}

fn identity_matrix(rank: usize) -> [[i32; MAX_RANK]; MAX_RANK] {
    let mut m = [[0; MAX_RANK]; MAX_RANK];
    for (i, row) in m.iter_mut().enumerate().take(rank) {
        row[i] = 1;
    }
    m
}

fn matmul(a: &[[i32; MAX_RANK]; MAX_RANK], b: &[[i32; MAX_RANK]; MAX_RANK], r: usize) -> [[i32; MAX_RANK]; MAX_RANK] {
    let mut out = [[0; MAX_RANK]; MAX_RANK];
    for i in 0..r {
        for k in 0..r {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..r {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn apply_matrix(m: &[[i32; MAX_RANK]; MAX_RANK], v: &Vector, r: usize) -> Vector {
    let mut out = ZERO;
    for i in 0..r {
        let mut s = 0i64;
        for j in 0..r {
            s += m[i][j] as i64 * v[j];
        }
        out[i] = s;
    }
    out
}

impl FiniteWeylElement {
    pub fn identity(rank: usize) -> Self {
        let m = identity_matrix(rank);
        FiniteWeylElement { rank: rank as u8, m, inv: m }
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn is_identity(&self) -> bool {
        self.m == identity_matrix(self.rank())
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        apply_matrix(&self.m, v, self.rank())
    }

    pub fn apply_inverse(&self, v: &Vector) -> Vector {
        apply_matrix(&self.inv, v, self.rank())
    }

    pub fn inverse(&self) -> Self {
        FiniteWeylElement { rank: self.rank, m: self.inv, inv: self.m }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let r = self.rank();
        FiniteWeylElement { rank: self.rank, m: matmul(&self.m, &other.m, r), inv: matmul(&other.inv, &self.inv, r) }
    }

    pub fn matrix(&self) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r).map(|i| (0..r).map(|j| self.m[i][j] as i64).collect()).collect()
    }
}

impl Serialize for FiniteWeylElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix().serialize(s)
    }
}

/// A finite root system with its roots enumerated and the form scaled to integers.
#[derive(Debug, Clone)]
pub struct FiniteRootSystem {
    pub cartan: CartanData,
    rank: usize,
    /// `scale * (α_i|α_j)`, an integer matrix.
    gram_int: [[i64; MAX_RANK]; MAX_RANK],
    scale: i64,
    /// (α̌_i) = coroot_mult[i] · α_i.
    coroot_mult: [i64; MAX_RANK],
    positive: Vec<Vector>,
    roots: HashSet<Vector>,
    simple: Vec<FiniteWeylElement>,
    theta: Vector,
}

impl FiniteRootSystem {
    pub fn new(cartan: CartanData) -> Self {
        let rank = cartan.rank;
        let scale = cartan.gram.iter().flatten().fold(1i64, |acc, q| acc.lcm(q.denom()));
        let mut gram_int = [[0i64; MAX_RANK]; MAX_RANK];
        for i in 0..rank {
            for j in 0..rank {
                let v = cartan.gram[i][j] * scale;
                gram_int[i][j] = v.to_integer();
            }
        }
        let mut coroot_mult = [0i64; MAX_RANK];
        for i in 0..rank {
            let m = Q::from_integer(2) / cartan.gram[i][i];
            assert!(m.is_integer());
            coroot_mult[i] = m.to_integer();
        }
        let all = closure_roots(&cartan.cartan_matrix, rank);
        let mut positive: Vec<Vector> = all.iter().copied().filter(is_pos).collect();
        positive.sort_by_key(|v| (v.iter().sum::<i64>(), *v));
        let roots: HashSet<Vector> = all.into_iter().collect();
        let simple = (1..=rank)
            .map(|i| {
                let mut m = identity_matrix(rank);
                for j in 0..rank {
                    m[i - 1][j] -= cartan.cartan_matrix[i - 1][j] as i32;
                }
                FiniteWeylElement { rank: rank as u8, m, inv: m }
            })
            .collect();
        let theta = *positive.last().expect("non-empty");
        FiniteRootSystem { cartan, rank, gram_int, scale, coroot_mult, positive, roots, simple, theta }
    }

    pub fn build(t: CartanType, rank: usize) -> Result<Self> {
        Ok(Self::new(build_cartan(t, rank)?))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.rank)
    }

    pub fn theta(&self) -> Vector {
        self.theta
    }

    /// `Σ_{i∈I} a_i`, the height of δ.
    pub fn delta_height(&self) -> i64 {
        self.cartan.labels.iter().sum()
    }

    /// Positive roots sorted by height, then coordinates.
    pub fn positive_roots(&self) -> &[Vector] {
        &self.positive
    }

    /// All roots: positives followed by their negatives.
    pub fn roots(&self) -> Vec<Vector> {
        let mut out = self.positive.clone();
        out.extend(self.positive.iter().map(vneg));
        out
    }

    pub fn is_root(&self, v: &Vector) -> bool {
        self.roots.contains(v)
    }

    /// Exact `(a|b)`.
    pub fn form(&self, a: &Vector, b: &Vector) -> Q {
        Q::new(self.form_scaled(a, b), self.scale)
    }

    /// `scale · (a|b)` as an integer.
    pub fn form_scaled(&self, a: &Vector, b: &Vector) -> i64 {
        let r = self.rank;
        let mut s = 0;
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                s += a[i] * self.gram_int[i][j] * b[j];
            }
        }
        s
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// `(a|λ)` for λ in the coroot lattice, where the result is known to be an integer.
    pub fn pair(&self, a: &Vector, lambda: &Vector) -> i64 {
        let s = self.form_scaled(a, lambda);
        debug_assert_eq!(s % self.scale, 0, "pairing with a non-lattice vector");
        s / self.scale
    }

    /// α̌_i in simple-root coordinates.
    pub fn simple_coroot(&self, i: usize) -> Vector {
        vscale(&unit(i), self.coroot_mult[i - 1])
    }

    pub fn coroot_mult(&self, i: usize) -> i64 {
        self.coroot_mult[i - 1]
    }

    /// `ε^∨ = 2ε/(ε|ε)` for a root ε.
    pub fn coroot(&self, eps: &Vector) -> Vector {
        let n = self.form(eps, eps);
        let k = Q::from_integer(2) / n;
        assert!(k.is_integer(), "coroot multiplier must be integral");
        vscale(eps, k.to_integer())
    }

    /// Membership in `⊕_{j∈J} Z α̌_j`.
    pub fn in_coroot_lattice(&self, lambda: &Vector, j: NodeSet) -> bool {
        (1..=self.rank).all(|i| {
            let c = lambda[i - 1];
            if j.contains(i) {
                c % self.coroot_mult[i - 1] == 0
            } else {
                c == 0
            }
        }) && lambda[self.rank..].iter().all(|&c| c == 0)
    }

    pub fn simple_reflection(&self, i: usize) -> FiniteWeylElement {
        self.simple[i - 1]
    }

    /// Reflection in an arbitrary root.
    pub fn reflection(&self, eps: &Vector) -> FiniteWeylElement {
        let cv = self.coroot(eps);
        let r = self.rank;
        let mut m = identity_matrix(r);
        for j in 0..r {
            // s(α_j) = α_j - (α_j|ε^∨) ε
            let c = self.pair(&unit(j + 1), &cv);
            for i in 0..r {
                m[i][j] -= (c * eps[i]) as i32;
            }
        }
        FiniteWeylElement { rank: r as u8, m, inv: m }
    }

    pub fn identity(&self) -> FiniteWeylElement {
        FiniteWeylElement::identity(self.rank)
    }

    /// Product `s_{i_1} s_{i_2} ⋯` of simple reflections.
    pub fn from_word(&self, word: &[usize]) -> FiniteWeylElement {
        word.iter().fold(self.identity(), |acc, &i| acc.compose(&self.simple[i - 1]))
    }

    /// Builds an element from a matrix, checking that it permutes the roots.
    pub fn element_from_matrix(&self, matrix: &[Vec<i64>]) -> Result<FiniteWeylElement> {
        let r = self.rank;
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::NotWeylElement);
        }
        let mut m = [[0i32; MAX_RANK]; MAX_RANK];
        for i in 0..r {
            for j in 0..r {
                m[i][j] = i32::try_from(matrix[i][j]).map_err(|_| Error::NotWeylElement)?;
            }
        }
        let cand = FiniteWeylElement { rank: r as u8, m, inv: m };
        // Descend to the identity; a genuine Weyl element gets there in at most |Δ̊₊| steps.
        let mut word = Vec::new();
        let mut cur = cand;
        for _ in 0..=self.positive.len() {
            if cur.m == identity_matrix(r) {
                break;
            }
            let img: Vec<Vector> = (1..=r).map(|j| apply_matrix(&cur.m, &unit(j), r)).collect();
            if img.iter().any(|v| !self.is_root(v)) {
                return Err(Error::NotWeylElement);
            }
            // a descent of cur on the right: cur(α_j) < 0
            let Some(j) = (1..=r).find(|&j| is_neg(&img[j - 1])) else {
                return Err(Error::NotWeylElement);
            };
            word.push(j);
            cur.m = matmul(&cur.m, &self.simple[j - 1].m, r);
        }
        if cur.m != identity_matrix(r) {
            return Err(Error::NotWeylElement);
        }
        word.reverse();
        Ok(self.from_word(&word))
    }

    /// `ℓ(w) = |{α > 0 : w(α) < 0}|`.
    pub fn length(&self, w: &FiniteWeylElement) -> usize {
        self.positive.iter().filter(|a| is_neg(&w.apply(a))).count()
    }

    /// Greedy reduced word: lowest-index left descent first, restricted to `allowed`.
    /// Returns the word and whatever is left when no allowed descent exists.
    fn descend(&self, w: &FiniteWeylElement, allowed: NodeSet) -> (Vec<usize>, FiniteWeylElement) {
        let mut cur = *w;
        let mut word = Vec::new();
        loop {
            let next = allowed.iter().find(|&i| is_neg(&cur.apply_inverse(&unit(i))));
            match next {
                Some(i) => {
                    word.push(i);
                    cur = self.simple[i - 1].compose(&cur);
                }
                None => return (word, cur),
            }
        }
    }

    pub fn reduced_word(&self, w: &FiniteWeylElement) -> Vec<usize> {
        self.descend(w, self.nodes()).0
    }

    pub fn in_parabolic(&self, j: NodeSet, w: &FiniteWeylElement) -> bool {
        self.descend(w, j).1.is_identity()
    }

    /// Reduced word of `w ∈ W̊_J` using only letters from J.
    pub fn reduced_word_in(&self, j: NodeSet, w: &FiniteWeylElement) -> Result<Vec<usize>> {
        let (word, rest) = self.descend(w, j);
        if rest.is_identity() {
            Ok(word)
        } else {
            Err(Error::NotInSubsystem(j))
        }
    }

    fn check_nodes(&self, j: NodeSet) -> Result<()> {
        let full = self.nodes();
        if !j.is_subset(&full) {
            return Err(Error::NotSubset { inner: j, outer: full });
        }
        Ok(())
    }

    /// Roots with support inside J (this is `W̊_J(Π̊_J)`), positives first.
    pub fn roots_in(&self, j: NodeSet) -> Vec<Vector> {
        let pos: Vec<Vector> = self.positive_roots_in(j);
        let mut out = pos.clone();
        out.extend(pos.iter().map(vneg));
        out
    }

    pub fn positive_roots_in(&self, j: NodeSet) -> Vec<Vector> {
        self.positive.iter().filter(|v| (1..=self.rank).all(|i| v[i - 1] == 0 || j.contains(i))).copied().collect()
    }

    /// Connected components of J in the Dynkin diagram, ordered by smallest node.
    pub fn components(&self, j: NodeSet) -> Vec<NodeSet> {
        let mut left = j;
        let mut out = Vec::new();
        while let Some(start) = left.iter().next() {
            let mut comp = NodeSet::single(start);
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                for b in left.iter() {
                    if !comp.contains(b) && self.cartan.cartan_matrix[a - 1][b - 1] != 0 {
                        comp.insert(b);
                        stack.push(b);
                    }
                }
            }
            left = left.minus(&comp);
            out.push(comp);
        }
        out
    }

    /// Highest root of an irreducible node set: the root dominating every other root in it.
    pub fn highest_root(&self, comp: NodeSet) -> Vector {
        let pos = self.positive_roots_in(comp);
        *pos.iter()
            .find(|h| pos.iter().all(|v| (0..MAX_RANK).all(|i| h[i] >= v[i])))
            .expect("irreducible component has a highest root")
    }

    /// `Δ̊_J` together with each irreducible component and its highest root.
    pub fn subsystem_roots(&self, j: NodeSet) -> Result<(Vec<Vector>, Vec<(NodeSet, Vector)>)> {
        if j.is_empty() {
            return Err(Error::EmptySubset);
        }
        self.check_nodes(j)?;
        let comps = self.components(j).into_iter().map(|c| (c, self.highest_root(c))).collect();
        Ok((self.roots_in(j), comps))
    }

    /// `W̊^K_J = {w ∈ W̊_J : w(α_k) > 0 for k ∈ K}`, in breadth-first (length) order.
    pub fn minimal_coset_reps(&self, j: NodeSet, k: NodeSet) -> Result<Vec<FiniteWeylElement>> {
        self.minimal_coset_reps_capped(j, k, usize::MAX)
    }

    pub fn minimal_coset_reps_capped(&self, j: NodeSet, k: NodeSet, cap: usize) -> Result<Vec<FiniteWeylElement>> {
        self.check_nodes(j)?;
        if !k.is_subset(&j) {
            return Err(Error::NotSubset { inner: k, outer: j });
        }
        let id = self.identity();
        let mut seen: HashSet<FiniteWeylElement> = HashSet::from([id]);
        let mut out = vec![id];
        let mut head = 0;
        while head < out.len() {
            let w = out[head];
            head += 1;
            for i in j.iter() {
                if !is_pos(&w.apply_inverse(&unit(i))) {
                    continue;
                }
                let nw = self.simple[i - 1].compose(&w);
                if k.iter().all(|kk| is_pos(&nw.apply(&unit(kk)))) && seen.insert(nw) {
                    if out.len() >= cap {
                        return Err(Error::BoundExceeded(format!("more than {cap} coset representatives")));
                    }
                    out.push(nw);
                }
            }
        }
        Ok(out)
    }

    /// The whole of `W̊_J`.
    pub fn parabolic_elements(&self, j: NodeSet) -> Result<Vec<FiniteWeylElement>> {
        self.minimal_coset_reps(j, NodeSet::EMPTY)
    }

    /// Splits `w = w^K w_K` with `w^K ∈ W̊^K_J` and `w_K ∈ W̊_K`.
    pub fn decompose_coset(
        &self,
        j: NodeSet,
        k: NodeSet,
        w: &FiniteWeylElement,
    ) -> Result<(FiniteWeylElement, FiniteWeylElement)> {
        self.check_nodes(j)?;
        if !k.is_subset(&j) {
            return Err(Error::NotSubset { inner: k, outer: j });
        }
        if !self.in_parabolic(j, w) {
            return Err(Error::NotInSubsystem(j));
        }
        let mut rep = *w;
        while let Some(kk) = k.iter().find(|&kk| is_neg(&rep.apply(&unit(kk)))) {
            rep = rep.compose(&self.simple[kk - 1]);
        }
        let part = rep.inverse().compose(w);
        Ok((rep, part))
    }

    /// The longest element of `W̊_J`.
    pub fn longest_element(&self, j: NodeSet) -> FiniteWeylElement {
        let mut w = self.identity();
        while let Some(i) = j.iter().find(|&i| is_pos(&w.apply(&unit(i)))) {
            w = w.compose(&self.simple[i - 1]);
        }
        w
    }

    /// The element `w ∈ W̊_J` with `w(Δ̊_{J+}) = target`, where `target` must be a positive
    /// system of `Δ̊_J`.
    pub fn element_with_positive_system(&self, j: NodeSet, target: &[Vector]) -> Result<FiniteWeylElement> {
        let pos_j = self.positive_roots_in(j);
        let mut cur: HashSet<Vector> = target.iter().copied().collect();
        if cur.len() != pos_j.len() || cur.iter().any(|v| !pos_j.contains(v) && !pos_j.contains(&vneg(v))) {
            return Err(Error::InvalidParam("target is not a positive system of the subsystem".into()));
        }
        let mut word = Vec::new();
        for _ in 0..=pos_j.len() {
            let Some(i) = j.iter().find(|&i| cur.contains(&vneg(&unit(i)))) else {
                break;
            };
            let s = self.simple[i - 1];
            cur = cur.iter().map(|v| s.apply(v)).collect();
            word.push(i);
        }
        if pos_j.iter().any(|v| !cur.contains(v)) {
            return Err(Error::InvalidParam("target is not a positive system of the subsystem".into()));
        }
        Ok(self.from_word(&word))
    }

    /// `(wΔ̊_J)` image of a set of roots.
    pub fn apply_all(&self, w: &FiniteWeylElement, set: &[Vector]) -> Vec<Vector> {
        set.iter().map(|v| w.apply(v)).collect()
    }

    /// `Δ̊^K_{J±} = Δ̊_{J±} ∖ Δ̊_K`.
    pub fn relative_roots(&self, j: NodeSet, k: NodeSet, positive: bool) -> Vec<Vector> {
        let kset: HashSet<Vector> = self.positive_roots_in(k).into_iter().collect();
        self.positive_roots_in(j)
            .into_iter()
            .filter(|v| !kset.contains(v))
            .map(|v| if positive { v } else { vneg(&v) })
            .collect()
    }

    /// Height `Σ c_i` of a finite root.
    pub fn height(&self, v: &Vector) -> i64 {
        v.iter().sum()
    }

    pub fn root_index_map(&self) -> HashMap<Vector, usize> {
        self.roots().into_iter().enumerate().map(|(i, v)| (v, i)).collect()
    }
}

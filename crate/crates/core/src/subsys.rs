//! Coxeter subsystems `(W_J, S_J)` generated by reflections in `Π̊_J` and the roots
//! `δ − θ_{J_c}` of its irreducible components.

use std::collections::{BTreeMap, HashSet};

use num::{Integer, One, Zero};
use serde::Serialize;

use crate::affine::{descend, partial_product_roots, AffineSystem, AffineWeylElement, Root};
use crate::cartan::{unit, vneg, NodeSet, Vector, Q, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Subsystem {
    pub j: NodeSet,
    pub components: Vec<(NodeSet, Vector)>,
    /// `Π_J`: the simple roots of J (ascending), then `δ − θ_c` per component.
    pub pi: Vec<Root>,
    pub generators: Vec<AffineWeylElement>,
    /// α̌_j for j ∈ J.
    pub lattice_basis: Vec<Vector>,
    gens: Vec<(Root, AffineWeylElement)>,
}

#[derive(Serialize)]
struct SubsystemJson {
    #[serde(rename = "J")]
    j: NodeSet,
    pi: Vec<crate::json::RootJson>,
    generator_ids: Vec<String>,
    generators: Vec<AffineWeylElement>,
}

impl Subsystem {
    pub(crate) fn build(sys: &AffineSystem, j: NodeSet) -> Result<Self> {
        let (_, components) = sys.fin.subsystem_roots(j)?;
        let mut pi: Vec<Root> = j.iter().map(|i| Root::new(0, unit(i))).collect();
        pi.extend(components.iter().map(|(_, th)| Root::new(1, vneg(th))));
        let generators: Vec<AffineWeylElement> = pi.iter().map(|a| sys.reflection(a)).collect();
        let lattice_basis = j.iter().map(|i| sys.fin.simple_coroot(i)).collect();
        let gens = pi.iter().copied().zip(generators.iter().copied()).collect();
        Ok(Subsystem { j, components, pi, generators, lattice_basis, gens })
    }

    pub fn num_generators(&self) -> usize {
        self.pi.len()
    }

    /// `α_s` for the k-th generator.
    pub fn gen_root(&self, k: usize) -> Root {
        self.pi[k]
    }

    pub fn gen(&self, k: usize) -> AffineWeylElement {
        self.generators[k]
    }

    /// Generator index of the reflection in `root`, if it is one of `Π_J`.
    pub fn gen_index(&self, root: &Root) -> Option<usize> {
        self.pi.iter().position(|a| a == root)
    }

    /// Textual generator id `s(m;c1,…,cl)` naming its root.
    pub fn gen_id(&self, k: usize, rank: usize) -> String {
        let a = self.pi[k];
        let cs: Vec<String> = a.finite[..rank].iter().map(|c| c.to_string()).collect();
        format!("s({};{})", a.level, cs.join(","))
    }

    pub fn to_json_value(&self, sys: &AffineSystem) -> serde_json::Value {
        let r = sys.rank();
        let js = SubsystemJson {
            j: self.j,
            pi: self.pi.iter().map(|a| crate::json::RootJson::from_root(a, r)).collect(),
            generator_ids: (0..self.pi.len()).map(|k| self.gen_id(k, r)).collect(),
            generators: self.generators.clone(),
        };
        serde_json::to_value(js).expect("serializable")
    }

    /// β ∈ Δ_J: imaginary, or finite part supported on J.
    pub fn contains_root(&self, sys: &AffineSystem, b: &Root) -> bool {
        b.is_imaginary()
            || (sys.is_real_root(b) && (1..=sys.rank()).all(|i| b.finite[i - 1] == 0 || self.j.contains(i)))
    }

    pub fn element(&self, sys: &AffineSystem, word: &[usize]) -> AffineWeylElement {
        word.iter().fold(sys.identity(), |acc, &k| acc.compose(&self.generators[k]))
    }

    /// Reduced word over `S_J` (lowest generator index first). Errors when `y ∉ W_J`.
    pub fn reduced_word(&self, sys: &AffineSystem, y: &AffineWeylElement) -> Result<Vec<usize>> {
        let (word, rest) = descend(sys, &self.gens, y, usize::MAX);
        if rest.is_identity() {
            Ok(word)
        } else {
            Err(Error::NotInSubsystem(self.j))
        }
    }

    pub fn contains(&self, sys: &AffineSystem, y: &AffineWeylElement) -> bool {
        self.reduced_word(sys, y).is_ok()
    }

    pub fn length(&self, sys: &AffineSystem, y: &AffineWeylElement) -> Result<usize> {
        Ok(self.reduced_word(sys, y)?.len())
    }

    /// `Φ_J(y)` in partial-product order.
    pub fn phi(&self, sys: &AffineSystem, y: &AffineWeylElement) -> Result<Vec<Root>> {
        let word = self.reduced_word(sys, y)?;
        Ok(self.phi_of_word(sys, &word))
    }

    pub fn phi_of_word(&self, sys: &AffineSystem, word: &[usize]) -> Vec<Root> {
        let roots: Vec<Root> = word.iter().map(|&k| self.pi[k]).collect();
        let refl: Vec<AffineWeylElement> = word.iter().map(|&k| self.generators[k]).collect();
        partial_product_roots(sys, &roots, &refl)
    }

    /// Recovers `y ∈ W_J` from a finite set that should equal `Φ_J(y)`.
    pub fn element_from_inversion_set(&self, sys: &AffineSystem, set: &[Root]) -> Result<AffineWeylElement> {
        let mut cur: HashSet<Root> = set.iter().copied().collect();
        if cur.len() != set.len() {
            return Err(Error::NotInversionSet("repeated root".into()));
        }
        let mut word = Vec::new();
        while !cur.is_empty() {
            let Some(k) = (0..self.pi.len()).find(|&k| cur.contains(&self.pi[k])) else {
                return Err(Error::NotInversionSet("no simple root of the subsystem in the set".into()));
            };
            cur.remove(&self.pi[k]);
            let s = self.generators[k];
            cur = cur.iter().map(|b| sys.act(&s, b)).collect();
            if cur.iter().any(|b| !b.is_positive()) {
                return Err(Error::NotInversionSet("reflection leaves the positive roots".into()));
            }
            word.push(k);
        }
        let y = self.element(sys, &word);
        let mut got = self.phi_of_word(sys, &word);
        let mut want = set.to_vec();
        got.sort();
        want.sort();
        if got != want {
            return Err(Error::NotInversionSet("reconstructed element has a different inversion set".into()));
        }
        Ok(y)
    }

    /// All `y ∈ W_J` with `ℓ_J(y) ≤ max_len`, breadth first, each with a reduced word.
    pub fn ball(&self, sys: &AffineSystem, max_len: usize) -> Vec<(AffineWeylElement, Vec<usize>)> {
        let id = sys.identity();
        let mut seen: HashSet<AffineWeylElement> = HashSet::from([id]);
        let mut out = vec![(id, Vec::new())];
        let mut head = 0;
        while head < out.len() {
            let (y, word) = out[head].clone();
            head += 1;
            if word.len() >= max_len {
                continue;
            }
            for k in 0..self.pi.len() {
                if !sys.act(&y, &self.pi[k]).is_positive() {
                    continue;
                }
                let ny = y.compose(&self.generators[k]);
                if seen.insert(ny) {
                    let mut nw = word.clone();
                    nw.push(k);
                    out.push((ny, nw));
                }
            }
        }
        out
    }

    /// `λ ∈ M_J` with `(α_j|λ) > 0` on `J∖K` and `(α_k|λ) = 0` on K. Unlisted nodes of
    /// `J∖K` get target 1.
    pub fn lattice_element(&self, sys: &AffineSystem, pairings: &BTreeMap<usize, i64>, k: NodeSet) -> Result<Vector> {
        if !k.is_subset(&self.j) {
            return Err(Error::NotSubset { inner: k, outer: self.j });
        }
        if k == self.j {
            return Err(Error::KEqualsJ);
        }
        let free = self.j.minus(&k);
        for (&node, &t) in pairings {
            if !free.contains(node) || t <= 0 {
                return Err(Error::InvalidParam(format!("pairing target for node {node} must be positive on J∖K")));
            }
        }
        let nodes = self.j.to_vec();
        let n = nodes.len();
        let a = &sys.fin.cartan.cartan_matrix;
        // Σ_j c_j (α_i|α̌_j) = t_i with (α_i|α̌_j) = a_ji.
        let mat: Vec<Vec<Q>> =
            nodes.iter().map(|&i| nodes.iter().map(|&j| Q::from_integer(a[j - 1][i - 1])).collect()).collect();
        let rhs: Vec<Q> = nodes
            .iter()
            .map(|&i| if k.contains(i) { Q::zero() } else { Q::from_integer(*pairings.get(&i).unwrap_or(&1)) })
            .collect();
        let c = solve(mat, rhs).ok_or_else(|| Error::InvalidParam("singular Cartan submatrix".into()))?;
        let l = c.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
        let mut lambda = ZERO;
        for (idx, &j) in nodes.iter().enumerate() {
            lambda[j - 1] = (c[idx] * l).to_integer() * sys.fin.coroot_mult(j);
        }
        debug_assert!(n > 0);
        Ok(lambda)
    }
}

/// Exact Gaussian elimination; `None` when singular.
pub(crate) fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        b[col] /= p;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for cc in 0..n {
                    let v = a[col][cc];
                    a[r][cc] -= f * v;
                }
                let bv = b[col];
                b[r] -= f * bv;
            }
        }
    }
    debug_assert!(a.iter().enumerate().all(|(i, row)| row[i].is_one()));
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanType;

    fn r(level: i64, c: &[i64]) -> Root {
        Root::from_coords(level, c)
    }

    #[test]
    fn generators_and_phi() {
        let s = AffineSystem::build(CartanType::A, 2).unwrap();
        let sub = s.subsystem(NodeSet::single(1)).unwrap();
        assert_eq!(sub.pi, vec![r(0, &[1, 0]), r(1, &[-1, 0])]);
        let y = sub.element(&s, &[0, 1]);
        assert_eq!(sub.length(&s, &y).unwrap(), 2);
        assert_eq!(sub.phi(&s, &y).unwrap(), vec![r(0, &[1, 0]), r(1, &[1, 0])]);
        assert_eq!(sub.gen_id(1, 2), "s(1;-1,0)");
        assert!(sub.length(&s, &s.simple_reflection(2)).is_err());
        let back = sub.element_from_inversion_set(&s, &[r(1, &[1, 0]), r(0, &[1, 0])]).unwrap();
        assert_eq!(back, y);
        assert!(sub.element_from_inversion_set(&s, &[r(1, &[1, 0])]).is_err());
    }

    #[test]
    fn generator_counts() {
        let s = AffineSystem::build(CartanType::A, 3).unwrap();
        assert_eq!(s.subsystem(NodeSet::from_nodes([1, 3])).unwrap().num_generators(), 4);
        let full = s.subsystem(s.nodes()).unwrap();
        assert_eq!(full.num_generators(), 4);
        for (a, g) in full.pi.iter().zip(&full.generators) {
            assert_eq!(s.act(g, a), a.neg());
        }
    }

    #[test]
    fn lattice_elements() {
        let s = AffineSystem::build(CartanType::A, 2).unwrap();
        let full = s.subsystem(s.nodes()).unwrap();
        let lam = full.lattice_element(&s, &BTreeMap::new(), NodeSet::EMPTY).unwrap();
        assert_eq!(&lam[..2], &[1, 1]);
        let lam = full.lattice_element(&s, &BTreeMap::new(), NodeSet::single(1)).unwrap();
        assert_eq!(s.fin.pair(&unit(1), &lam), 0);
        assert!(s.fin.pair(&unit(2), &lam) > 0);
        assert!(full.lattice_element(&s, &BTreeMap::new(), s.nodes()).is_err());
        let c = AffineSystem::build(CartanType::C, 3).unwrap();
        let full = c.subsystem(c.nodes()).unwrap();
        let lam = full.lattice_element(&c, &BTreeMap::new(), NodeSet::from_nodes([1, 3])).unwrap();
        assert!(c.fin.in_coroot_lattice(&lam, c.nodes()));
        assert_eq!(c.fin.pair(&unit(1), &lam), 0);
        assert_eq!(c.fin.pair(&unit(3), &lam), 0);
        assert!(c.fin.pair(&unit(2), &lam) > 0);
    }

    #[test]
    fn ball_sizes() {
        let s = AffineSystem::build(CartanType::A, 1).unwrap();
        let sub = s.subsystem(s.nodes()).unwrap();
        // infinite dihedral group: 1 + 2 + 2 + 2
        assert_eq!(sub.ball(&s, 3).len(), 7);
    }
}

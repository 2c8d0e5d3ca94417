//! Chains `C_1 ⊂ … ⊂ C_n = Δ_J(w,−)` of infinite biconvex sets, their parameters
//! `(K_•, y_•)`, and the row data `(K_•, y_•, 𝒔_•)`.

use std::collections::HashSet;

use crate::affine::{AffineSystem, AffineWeylElement, Root};
use crate::biconvex::{param_of_set, BiconvexParam, Nabla, Window};
use crate::cartan::{is_neg, FiniteWeylElement, NodeSet};
use crate::error::{Error, Result};
use crate::words::{chi, InfiniteWord};

/// `W_K`-membership, with `W_∅ = {1}`.
fn in_w_k(sys: &AffineSystem, k: NodeSet, y: &AffineWeylElement) -> bool {
    if k.is_empty() {
        y.is_identity()
    } else {
        sys.subsystem(k).map(|s| s.contains(sys, y)).unwrap_or(false)
    }
}

/// `Φ_K(y)`, empty for K = ∅.
fn phi_k(sys: &AffineSystem, k: NodeSet, y: &AffineWeylElement) -> Result<Vec<Root>> {
    if k.is_empty() {
        if y.is_identity() {
            Ok(Vec::new())
        } else {
            Err(Error::NotInSubsystem(k))
        }
    } else {
        sys.subsystem(k)?.phi(sys, y)
    }
}

/// `(K, w^K, y) ∈ P̃^w_J`: y ∈ W_K and `Φ_K(y) ⊂ Δ_K(w_K,−)`.
pub fn in_p_tilde(sys: &AffineSystem, j: NodeSet, w: &FiniteWeylElement, k: NodeSet, y: &AffineWeylElement) -> bool {
    let Ok((_, wk)) = sys.fin.decompose_coset(j, k, w) else {
        return false;
    };
    if !in_w_k(sys, k, y) {
        return false;
    }
    match phi_k(sys, k, y) {
        Ok(phi) => phi.iter().all(|b| is_neg(&wk.apply_inverse(&b.finite))),
        Err(_) => false,
    }
}

/// `(K, L, y, z) ∈ Q^w_J`.
pub fn check_q(
    sys: &AffineSystem,
    j: NodeSet,
    w: &FiniteWeylElement,
    k: NodeSet,
    l: NodeSet,
    y: &AffineWeylElement,
    z: &AffineWeylElement,
) -> bool {
    if !l.is_subset(&k) || !k.is_subset(&j) {
        return false;
    }
    if !in_p_tilde(sys, j, w, k, y) || !in_p_tilde(sys, j, w, l, z) {
        return false;
    }
    let (wk, _) = sys.fin.decompose_coset(j, k, w).expect("checked");
    let (wl, _) = sys.fin.decompose_coset(j, l, w).expect("checked");
    let wk = AffineWeylElement::from_finite(wk);
    let wl = AffineWeylElement::from_finite(wl);
    let phi_z: HashSet<Root> = phi_k(sys, l, z).expect("checked").into_iter().collect();
    let in_l_pos = |b: &Root| b.is_positive() && (1..=sys.rank()).all(|i| b.finite[i - 1] == 0 || l.contains(i));
    phi_k(sys, k, y).expect("checked").iter().all(|b| {
        let pulled = sys.act_inverse(&wl, &sys.act(&wk, b));
        !in_l_pos(&pulled) || phi_z.contains(&pulled)
    })
}

/// One step of the recursive construction: from `(K, y) ∈ P̃^w_J` and a choice
/// `(L, g)` with `(L, v^L, g) ∈ P̃^v_K`, `v = ȳ^{-1} w_K`, returns `(L, z_x)`.
pub fn extend_chain(
    sys: &AffineSystem,
    j: NodeSet,
    w: &FiniteWeylElement,
    current: (NodeSet, &AffineWeylElement),
    choice: (NodeSet, &AffineWeylElement),
) -> Result<(NodeSet, AffineWeylElement)> {
    let (k, y) = current;
    let (l, g) = choice;
    if !in_p_tilde(sys, j, w, k, y) {
        return Err(Error::InvalidParam("current level is not in P̃^w_J".into()));
    }
    if !l.is_subset(&k) {
        return Err(Error::NotSubset { inner: l, outer: k });
    }
    let (_, wk) = sys.fin.decompose_coset(j, k, w)?;
    let v = y.finite.inverse().compose(&wk);
    if k.is_empty() || !in_p_tilde(sys, k, &v, l, g) {
        return Err(Error::InvalidParam("choice is not in P̃^v_K".into()));
    }
    let (vl, _) = sys.fin.decompose_coset(k, l, &v)?;
    let x = y.compose(&AffineWeylElement::from_finite(vl)).compose(g);
    if l.is_empty() {
        return Ok((l, sys.identity()));
    }
    let (xl, _) = sys.fin.decompose_coset(k, l, &x.finite)?;
    let rest = AffineWeylElement::from_finite(xl.inverse()).compose(&x);
    let sub_k = sys.subsystem(k)?;
    let sub_l = sys.subsystem(l)?;
    let set: Vec<Root> = sub_k.phi(sys, &rest)?.into_iter().filter(|b| sub_l.contains_root(sys, b)).collect();
    let z = sub_l.element_from_inversion_set(sys, &set)?;
    Ok((l, z))
}

/// `(K_•, y_•)` with `J = K_0 ⊋ … ⊋ K_n = ∅`; `ys[i]` is `y_i` for `i = 0..=n`
/// (`y_0 = y_n = 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainParam {
    pub j: NodeSet,
    pub w: FiniteWeylElement,
    pub ks: Vec<NodeSet>,
    pub ys: Vec<AffineWeylElement>,
}

impl ChainParam {
    /// `ks` is `K_1..K_{n-1}` (K_0 = J and K_n = ∅ are implied); `ys` is `y_1..y_{n-1}`.
    pub fn new(
        sys: &AffineSystem,
        j: NodeSet,
        w: FiniteWeylElement,
        inner_ks: &[NodeSet],
        inner_ys: &[AffineWeylElement],
    ) -> Result<Self> {
        if inner_ks.len() != inner_ys.len() {
            return Err(Error::InvalidParam("one y per intermediate K is required".into()));
        }
        if j.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !sys.fin.in_parabolic(j, &w) {
            return Err(Error::NotInSubsystem(j));
        }
        let mut ks = vec![j];
        ks.extend_from_slice(inner_ks);
        ks.push(NodeSet::EMPTY);
        let mut ys = vec![sys.identity()];
        ys.extend_from_slice(inner_ys);
        ys.push(sys.identity());
        for i in 1..ks.len() {
            if !ks[i].is_subset(&ks[i - 1]) || ks[i] == ks[i - 1] {
                return Err(Error::InvalidParam(format!("K_{i} must be a proper subset of K_{}", i - 1)));
            }
            if !check_q(sys, j, &w, ks[i - 1], ks[i], &ys[i - 1], &ys[i]) {
                return Err(Error::InvalidParam(format!("level {i} violates the compatibility condition")));
            }
        }
        Ok(ChainParam { j, w, ks, ys })
    }

    /// Number of sets n.
    pub fn len(&self) -> usize {
        self.ks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `w^{K_i}`.
    pub fn w_up(&self, sys: &AffineSystem, i: usize) -> FiniteWeylElement {
        sys.fin.decompose_coset(self.j, self.ks[i], &self.w).expect("validated").0
    }

    /// `w^{K_i} y_i`, the element carrying `B_i` into row i+1.
    pub fn twist(&self, sys: &AffineSystem, i: usize) -> AffineWeylElement {
        AffineWeylElement::from_finite(self.w_up(sys, i)).compose(&self.ys[i])
    }

    /// Parameter of `C_i`, `1 ≤ i ≤ n`.
    pub fn c_param(&self, sys: &AffineSystem, i: usize) -> BiconvexParam {
        BiconvexParam::new(sys, self.j, self.ks[i], self.w_up(sys, i), self.ys[i]).expect("validated")
    }

    pub fn c_nabla(&self, sys: &AffineSystem, i: usize) -> Nabla {
        self.c_param(sys, i).nabla(sys)
    }

    /// `C_1, …, C_n` cut to the window.
    pub fn chain_sets(&self, sys: &AffineSystem, window: Window) -> Vec<Vec<Root>> {
        (1..=self.len()).map(|i| self.c_nabla(sys, i).enumerate(window)).collect()
    }

    /// `C_i ∖ C_{i−1}` cut to the window, `i = 1..n`.
    pub fn row_sets(&self, sys: &AffineSystem, window: Window) -> Vec<Vec<Root>> {
        let sets = self.chain_sets(sys, window);
        let mut out = Vec::with_capacity(sets.len());
        let mut prev: HashSet<Root> = HashSet::new();
        for s in sets {
            out.push(s.iter().filter(|b| !prev.contains(b)).copied().collect());
            prev = s.into_iter().collect();
        }
        out
    }

    /// Parameter over `K_{i−1}` of `B_{i−1}`, where `C_i = C_{i−1} ⊔ w^{K_{i−1}} y_{i−1} B_{i−1}`.
    pub fn extract_b(&self, sys: &AffineSystem, i: usize) -> Result<BiconvexParam> {
        if i == 0 || i > self.len() {
            return Err(Error::InvalidParam(format!("level {i} out of range 1..={}", self.len())));
        }
        let k = self.ks[i - 1];
        let l = self.ks[i];
        let y = &self.ys[i - 1];
        let z = &self.ys[i];
        let (wk, _) = sys.fin.decompose_coset(self.j, k, &self.w)?;
        let (wl, _) = sys.fin.decompose_coset(self.j, l, &self.w)?;
        // C_i ∩ w^K Δ_{K+} = w^K ∇_K(L, u', z) with u' = (w^K)^{-1} w^L.
        let u_inner = wk.inverse().compose(&wl);
        let inner = BiconvexParam::new(sys, k, l, u_inner, *z)?;
        let nab = inner.nabla(sys);
        let phi_y: HashSet<Root> = phi_k(sys, k, y)?.into_iter().collect();
        let yi = y.inverse();
        let dirs: Vec<_> = nab.directions().iter().map(|e| y.finite.apply_inverse(e)).collect();
        let dset: HashSet<_> = dirs.iter().copied().collect();
        let finite: Vec<Root> = nab
            .finite_part()
            .iter()
            .filter(|b| !phi_y.contains(b))
            .map(|b| sys.act(&yi, b))
            .filter(|b| !dset.contains(&b.finite))
            .collect();
        param_of_set(sys, k, &dirs, &finite)
    }

    /// Smallest i with `β ∈ C_i`.
    pub fn row_of(&self, sys: &AffineSystem, b: &Root) -> Option<usize> {
        (1..=self.len()).find(|&i| self.c_nabla(sys, i).contains(b))
    }
}

/// All chains over `(J, w)` with `ℓ_{K_i}(y_i) ≤ bound`, sorted by
/// `(n, K masks, lengths, words)`.
pub fn enumerate_chains(
    sys: &AffineSystem,
    j: NodeSet,
    w: &FiniteWeylElement,
    bound: usize,
) -> Result<Vec<ChainParam>> {
    if j.is_empty() {
        return Err(Error::EmptySubset);
    }
    if !sys.fin.in_parabolic(j, w) {
        return Err(Error::NotInSubsystem(j));
    }
    type Ball = Vec<(AffineWeylElement, Vec<usize>)>;
    let mut balls: std::collections::HashMap<NodeSet, Ball> = std::collections::HashMap::new();
    for k in j.subsets() {
        if !k.is_empty() && k != j {
            let ball: Ball =
                sys.subsystem(k)?.ball(sys, bound).into_iter().filter(|(y, _)| in_p_tilde(sys, j, w, k, y)).collect();
            balls.insert(k, ball);
        }
    }
    let mut out: Vec<(Vec<u16>, Vec<usize>, Vec<Vec<usize>>, ChainParam)> = Vec::new();
    let mut stack: Vec<(Vec<NodeSet>, Vec<AffineWeylElement>, Vec<Vec<usize>>)> =
        vec![(vec![j], vec![sys.identity()], vec![Vec::new()])];
    while let Some((ks, ys, words)) = stack.pop() {
        let k = *ks.last().expect("non-empty");
        let y = *ys.last().expect("non-empty");
        for l in k.subsets() {
            if l == k {
                continue;
            }
            if l.is_empty() {
                if check_q(sys, j, w, k, l, &y, &sys.identity()) {
                    let mut fks = ks.clone();
                    fks.push(l);
                    let mut fys = ys.clone();
                    fys.push(sys.identity());
                    let mut fw = words.clone();
                    fw.push(Vec::new());
                    let chain = ChainParam { j, w: *w, ks: fks.clone(), ys: fys };
                    let masks = fks.iter().map(|s| s.0).collect();
                    let lens = fw.iter().map(|x| x.len()).collect();
                    out.push((masks, lens, fw, chain));
                }
                continue;
            }
            for (z, word) in &balls[&l] {
                if check_q(sys, j, w, k, l, &y, z) {
                    let mut nks = ks.clone();
                    nks.push(l);
                    let mut nys = ys.clone();
                    nys.push(*z);
                    let mut nw = words.clone();
                    nw.push(word.clone());
                    stack.push((nks, nys, nw));
                }
            }
        }
    }
    out.sort_by(|a, b| (a.3.len(), &a.0, &a.1, &a.2).cmp(&(b.3.len(), &b.0, &b.1, &b.2)));
    Ok(out.into_iter().map(|t| t.3).collect())
}

/// `(K_•, y_•, 𝒔_•)`: a chain together with a word `𝒔_i ∈ 𝒲^∞_{K_i}` per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowParam {
    pub chain: ChainParam,
    pub words: Vec<InfiniteWord>,
}

impl RowParam {
    /// Checks `B_{i−1} = Φ^∞_{K_{i−1}}([𝒔_{i−1}])` for every row.
    pub fn new(sys: &AffineSystem, chain: ChainParam, words: Vec<InfiniteWord>) -> Result<Self> {
        if words.len() != chain.len() {
            return Err(Error::InvalidParam(format!("{} rows need {} words", chain.len(), chain.len())));
        }
        for (i, word) in words.iter().enumerate() {
            if word.j() != chain.ks[i] {
                return Err(Error::InvalidParam(format!(
                    "word {i} lives over {} instead of {}",
                    word.j(),
                    chain.ks[i]
                )));
            }
            let want = chain.extract_b(sys, i + 1)?;
            let got = word.canonical_param(sys)?;
            if want != got {
                return Err(Error::InvalidParam(format!("word {i} does not realize B_{i}")));
            }
        }
        Ok(RowParam { chain, words })
    }

    /// Uses `χ` to pick the canonical word for each `B_i`.
    pub fn with_default_words(sys: &AffineSystem, chain: ChainParam) -> Result<Self> {
        let words = (1..=chain.len()).map(|i| chi(sys, &chain.extract_b(sys, i)?)).collect::<Result<Vec<_>>>()?;
        RowParam::new(sys, chain, words)
    }

    pub fn num_rows(&self) -> usize {
        self.chain.len()
    }

    /// `(row, index)` of β: the row is the smallest i with β ∈ C_i and the index is
    /// `p` with `w^{K_{i−1}} y_{i−1} φ_{𝒔_{i−1}}(p) = β`.
    pub fn position(&self, sys: &AffineSystem, b: &Root) -> Result<(usize, usize)> {
        let row = self.chain.row_of(sys, b).ok_or_else(|| Error::NotMember(format!("{b} is not in Δ_J(w,−)")))?;
        let pulled = sys.act_inverse(&self.chain.twist(sys, row - 1), b);
        let p = self.words[row - 1].word_index(&pulled)?;
        Ok((row, p))
    }

    /// The first `count` roots of row `row` (1-based) in order.
    pub fn row_prefix(&self, sys: &AffineSystem, row: usize, count: usize) -> Vec<Root> {
        let x = self.chain.twist(sys, row - 1);
        (1..=count).map(|p| sys.act(&x, &self.words[row - 1].phi(p))).collect()
    }

    pub fn row_sets(&self, sys: &AffineSystem, window: Window) -> Vec<Vec<Root>> {
        self.chain.row_sets(sys, window)
    }
}

/// Rebuilds a row parameter from the opening segment of each row (at least a few
/// periods long) by reading letters off the roots and recursing with `extend_chain`.
pub fn recover_row_param(
    sys: &AffineSystem,
    j: NodeSet,
    w: &FiniteWeylElement,
    rows: &[Vec<Root>],
) -> Result<RowParam> {
    let mut ks = vec![j];
    let mut ys = vec![sys.identity()];
    let mut words = Vec::new();
    for (i, listing) in rows.iter().enumerate() {
        let k = ks[i];
        let y = ys[i];
        let (wk, _) = sys.fin.decompose_coset(j, k, w)?;
        let x = AffineWeylElement::from_finite(wk).compose(&y);
        let pulled: Vec<Root> = listing.iter().map(|b| sys.act_inverse(&x, b)).collect();
        let sub = sys.subsystem(k)?;
        let letters = crate::words::letters_from_roots(sys, sub, &pulled)?;
        let (prefix, period) = crate::words::detect_period(&letters, 3)
            .ok_or_else(|| Error::InvalidParam(format!("row {} shows no period", i + 1)))?;
        let word = InfiniteWord::new(sys, k, prefix, period)?;
        let b = word.canonical_param(sys)?;
        let (l, z) = extend_chain(sys, j, w, (k, &y), (b.k, &b.y))?;
        ks.push(l);
        ys.push(z);
        words.push(word);
        if l.is_empty() {
            break;
        }
    }
    if *ks.last().expect("non-empty") != NodeSet::EMPTY {
        return Err(Error::InvalidParam("rows do not exhaust Δ_J(w,−)".into()));
    }
    let n = ks.len() - 1;
    let chain = ChainParam::new(sys, j, *w, &ks[1..n], &ys[1..n])?;
    RowParam::new(sys, chain, words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::CartanType;

    fn r(level: i64, c: &[i64]) -> Root {
        Root::from_coords(level, c)
    }

    fn s2s1(s: &AffineSystem) -> ChainParam {
        let k1 = NodeSet::single(1);
        let y1 = s.subsystem(k1).unwrap().element(s, &[0, 1]);
        ChainParam::new(s, s.nodes(), s.fin.from_word(&[2, 1]), &[k1], &[y1]).unwrap()
    }

    #[test]
    fn s2s1_chain() {
        let s = AffineSystem::build(CartanType::A, 2).unwrap();
        let c = s2s1(&s);
        let win = Window::new(1).unwrap();
        let sets = c.chain_sets(&s, win);
        let mut c1 = vec![r(0, &[0, 1]), r(1, &[0, 1]), r(1, &[-1, 0]), r(0, &[1, 1]), r(1, &[1, 1])];
        c1.sort();
        assert_eq!(sets[0], c1);
        let rows = c.row_sets(&s, Window::new(3).unwrap());
        assert_eq!(rows[1], vec![r(2, &[1, 1]), r(3, &[1, 1])]);
        let b1 = c.extract_b(&s, 2).unwrap();
        assert_eq!(b1.k, NodeSet::EMPTY);
        assert_eq!(b1.nabla(&s).directions(), vec![r(0, &[1, 0]).finite]);
    }

    #[test]
    fn extend_reproduces_s2s1_chain() {
        let s = AffineSystem::build(CartanType::A, 2).unwrap();
        let c = s2s1(&s);
        let b0 = c.extract_b(&s, 1).unwrap();
        let (l, z) = extend_chain(&s, s.nodes(), &c.w, (s.nodes(), &s.identity()), (b0.k, &b0.y)).unwrap();
        assert_eq!((l, z), (c.ks[1], c.ys[1]));
    }

    #[test]
    fn q_rejects_bad_y() {
        let s = AffineSystem::build(CartanType::A, 2).unwrap();
        let w = s.fin.from_word(&[2, 1]);
        let k1 = NodeSet::single(1);
        // w_K = s_1, so Δ_K(w_K,−) is the slice ⟨α1⟩: s_1 fits, s_{δ−α1} does not
        let y = s.subsystem(k1).unwrap().element(&s, &[0]);
        assert!(check_q(&s, s.nodes(), &w, s.nodes(), k1, &s.identity(), &y));
        let y = s.subsystem(k1).unwrap().element(&s, &[1]);
        assert!(!check_q(&s, s.nodes(), &w, s.nodes(), k1, &s.identity(), &y));
    }

    #[test]
    fn enumeration_basics() {
        let s = AffineSystem::build(CartanType::A, 2).unwrap();
        let id = s.fin.identity();
        let all = enumerate_chains(&s, s.nodes(), &id, 2).unwrap();
        assert_eq!(all.iter().filter(|c| c.len() == 1).count(), 1);
        assert!(all.iter().all(|c| c.len() <= 2));
        let two = all.iter().filter(|c| c.len() == 2).count();
        let mut brute = 0;
        for k1 in [NodeSet::single(1), NodeSet::single(2)] {
            for (y, _) in s.subsystem(k1).unwrap().ball(&s, 2) {
                if check_q(&s, s.nodes(), &id, s.nodes(), k1, &s.identity(), &y) {
                    brute += 1;
                }
            }
        }
        assert_eq!(two, brute);
    }
}

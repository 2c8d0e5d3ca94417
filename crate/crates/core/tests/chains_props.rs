mod common;

use std::collections::{BTreeSet, HashSet};

use common::*;
use convord_core::chains::{check_q, enumerate_chains, in_p_tilde, recover_row_param};
use convord_core::orders::sample_row_param;
use convord_core::{AffineSystem, AffineWeylElement, BiconvexParam, NodeSet, Root, RowParam, Window};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn level_set(
    s: &AffineSystem,
    j: NodeSet,
    w: &convord_core::FiniteWeylElement,
    k: NodeSet,
    y: &AffineWeylElement,
) -> BTreeSet<Root> {
    let (wk, _) = s.fin.decompose_coset(j, k, w).unwrap();
    let p = BiconvexParam::new(s, j, k, wk, *y).unwrap();
    p.nabla(s).enumerate(Window::new(8).unwrap()).into_iter().collect()
}

#[test]
fn q_matches_window_nesting() {
    let mut agreed = 0;
    for s in &systems()[1..4] {
        let j = s.nodes();
        for w in s.fin.parabolic_elements(j).unwrap() {
            let levels: Vec<(NodeSet, AffineWeylElement)> = j
                .subsets()
                .into_iter()
                .flat_map(|k| ball(s, k, 2).into_iter().map(move |y| (k, y)))
                .filter(|(k, y)| in_p_tilde(s, j, &w, *k, y))
                .collect();
            for (k, y) in &levels {
                let outer = level_set(s, j, &w, *k, y);
                for (l, z) in levels.iter().filter(|(l, _)| l.is_subset(k)) {
                    let inner = level_set(s, j, &w, *l, z);
                    assert_eq!(check_q(s, j, &w, *k, *l, y, z), outer.is_subset(&inner), "K={k} L={l}");
                    agreed += 1;
                }
            }
        }
    }
    assert!(agreed > 100);
}

#[test]
fn chains_are_told_apart_by_windows() {
    for s in &systems()[1..5] {
        for w in s.fin.parabolic_elements(s.nodes()).unwrap() {
            let chains = enumerate_chains(s, s.nodes(), &w, 2).unwrap();
            let traces: HashSet<Vec<Vec<Root>>> =
                chains.iter().map(|c| c.chain_sets(s, Window::new(8).unwrap())).collect();
            assert_eq!(traces.len(), chains.len());
            assert!(chains.iter().all(|c| c.len() <= s.rank()));
            for c in &chains {
                let rows = c.row_sets(s, Window::new(6).unwrap());
                let total: usize = rows.iter().map(Vec::len).sum();
                let all: HashSet<Root> = rows.into_iter().flatten().collect();
                assert_eq!(all.len(), total, "rows overlap");
            }
        }
    }
}

fn listings(s: &AffineSystem, rp: &RowParam) -> Vec<Vec<Root>> {
    (1..=rp.num_rows())
        .map(|i| {
            let word = &rp.words[i - 1];
            rp.row_prefix(s, i, word.prefix().len() + 4 * word.period().len())
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rows_recover_their_parameter(si in 1usize..5, seed in any::<u64>(), wpick in 0usize..64) {
        let s = &systems()[si];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let elems = s.fin.parabolic_elements(s.nodes()).unwrap();
        let w = elems[wpick % elems.len()];
        let rp = sample_row_param(s, &w, 2, 3, &mut rng).unwrap();
        let back = recover_row_param(s, s.nodes(), &w, &listings(s, &rp)).unwrap();
        prop_assert_eq!(&back.chain, &rp.chain);
        for (a, b) in back.words.iter().zip(&rp.words) {
            prop_assert_eq!(a.canonical_param(s).unwrap(), b.canonical_param(s).unwrap());
            prop_assert_eq!(a.listing(20), b.listing(20));
        }
    }
}

#[test]
fn fixtures_recover() {
    let s = convord_core::fixtures::a2();
    for name in convord_core::fixtures::NAMES {
        let rp = convord_core::fixtures::rows(&s, name).unwrap();
        let back = recover_row_param(&s, s.nodes(), &rp.chain.w, &listings(&s, &rp)).unwrap();
        assert_eq!(back, rp, "{name}");
    }
}

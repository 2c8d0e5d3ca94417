mod common;

use std::collections::HashSet;

use common::*;
use convord_core::biconvex::ambient_j;
use convord_core::{NodeSet, Root};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_split_into_translation_and_finite(si in 0usize..6, jpick in 0usize..16, raw in prop::collection::vec(0usize..16, 0..=6)) {
        let s = &systems()[si];
        let js = nonempty_subsets(s);
        let j = js[jpick % js.len()];
        let sub = s.subsystem(j).unwrap();
        let letters: Vec<usize> = raw.iter().map(|x| x % sub.num_generators()).collect();
        let y = sub.element(s, &letters);
        prop_assert!(s.fin.in_coroot_lattice(&y.translation, j));
        prop_assert!(s.fin.in_parabolic(j, &y.finite));
        prop_assert!(sub.contains(s, &y));
    }

    #[test]
    fn phi_matches_filter(si in 0usize..5, jpick in 0usize..16, raw in prop::collection::vec(0usize..16, 0..=6)) {
        let s = &systems()[si];
        let js = nonempty_subsets(s);
        let j = js[jpick % js.len()];
        let sub = s.subsystem(j).unwrap();
        let letters: Vec<usize> = raw.iter().map(|x| x % sub.num_generators()).collect();
        let y = sub.element(s, &letters);
        let phi = sub.phi(s, &y).unwrap();
        prop_assert_eq!(phi.len(), sub.length(s, &y).unwrap());
        let amb = ambient_j(s, j);
        let brute: Vec<Root> = s
            .real_positive_roots_window(14)
            .into_iter()
            .filter(|b| amb(b) && s.act_inverse(&y, b).is_negative())
            .collect();
        prop_assert_eq!(sorted(phi), sorted(brute));
    }
}

#[test]
fn phi_is_injective_on_balls() {
    for s in rank_two() {
        for j in nonempty_subsets(s) {
            let sub = s.subsystem(j).unwrap();
            let ball = sub.ball(s, 4);
            let images: HashSet<Vec<Root>> = ball.iter().map(|(y, _)| sorted(sub.phi(s, y).unwrap())).collect();
            assert_eq!(images.len(), ball.len());
            for (y, _) in &ball {
                assert_eq!(sub.element_from_inversion_set(s, &sub.phi(s, y).unwrap()).unwrap(), *y);
            }
        }
    }
}

#[test]
fn components_commute_and_phi_factors() {
    let s = &systems()[5];
    let (j1, j2) = (NodeSet::single(1), NodeSet::single(3));
    let j = j1.union(&j2);
    let sub = s.subsystem(j).unwrap();
    assert_eq!(sub.components.len(), 2);
    let (s1, s3) = (s.subsystem(j1).unwrap(), s.subsystem(j2).unwrap());
    for a in s1.ball(s, 3) {
        for b in s3.ball(s, 3) {
            assert_eq!(a.0.compose(&b.0), b.0.compose(&a.0));
            let whole = sorted(sub.phi(s, &a.0.compose(&b.0)).unwrap());
            let mut parts = s1.phi(s, &a.0).unwrap();
            parts.extend(s3.phi(s, &b.0).unwrap());
            let n = parts.len();
            let parts = sorted(parts);
            assert_eq!(parts.len(), n);
            assert_eq!(whole, parts);
        }
    }
}

#[test]
fn subsystem_length_agrees_with_affine_length_on_the_full_set() {
    let s = &systems()[1];
    let sub = s.subsystem(s.nodes()).unwrap();
    for (y, w) in sub.ball(s, 5) {
        assert_eq!(s.length(&y), w.len());
    }
}

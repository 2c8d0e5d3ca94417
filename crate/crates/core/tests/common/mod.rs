#![allow(dead_code)]

use std::sync::OnceLock;

use convord_core::{AffineSystem, AffineWeylElement, CartanType, NodeSet, Root};
use proptest::prelude::*;

pub fn r(level: i64, c: &[i64]) -> Root {
    Root::from_coords(level, c)
}

pub fn systems() -> &'static [AffineSystem] {
    static SYSTEMS: OnceLock<Vec<AffineSystem>> = OnceLock::new();
    SYSTEMS.get_or_init(|| {
        [
            (CartanType::A, 1),
            (CartanType::A, 2),
            (CartanType::B, 2),
            (CartanType::C, 2),
            (CartanType::G, 2),
            (CartanType::A, 3),
        ]
        .into_iter()
        .map(|(t, n)| AffineSystem::build(t, n).unwrap())
        .collect()
    })
}

pub fn rank_two() -> &'static [AffineSystem] {
    &systems()[1..5]
}

pub fn sorted(mut v: Vec<Root>) -> Vec<Root> {
    v.sort();
    v.dedup();
    v
}

/// Letters of an affine word as raw draws; reduced modulo rank + 1 at use.
pub fn word(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..16, 0..=max_len)
}

pub fn affine_from(sys: &AffineSystem, raw: &[usize]) -> AffineWeylElement {
    let n = sys.rank() + 1;
    sys.from_word(&raw.iter().map(|x| x % n).collect::<Vec<_>>())
}

/// Non-empty node subsets of the system.
pub fn nonempty_subsets(sys: &AffineSystem) -> Vec<NodeSet> {
    sys.nodes().subsets().into_iter().filter(|j| !j.is_empty()).collect()
}

pub fn proper_subsets(j: NodeSet) -> Vec<NodeSet> {
    j.subsets().into_iter().filter(|k| *k != j).collect()
}

/// Elements of `W_K` with `ℓ_K ≤ bound`; only the identity when K is empty.
pub fn ball(sys: &AffineSystem, k: NodeSet, bound: usize) -> Vec<AffineWeylElement> {
    if k.is_empty() {
        vec![sys.identity()]
    } else {
        sys.subsystem(k).unwrap().ball(sys, bound).into_iter().map(|(y, _)| y).collect()
    }
}

//! Ready-made row parameters and orders for A_2^(1).
//!
//! Generator indices over `J = {1,2}` are `0 = s_1`, `1 = s_2`, `2 = s_{δ−θ}`; over a
//! single node `{i}` they are `0 = s_i`, `1 = s_{δ−α_i}`.

use crate::affine::AffineSystem;
use crate::cartan::{CartanType, NodeSet};
use crate::chains::{enumerate_chains, ChainParam, RowParam};
use crate::error::{Error, Result};
use crate::orders::{build_order, ImaginaryOrder, OrderSpec};
use crate::words::InfiniteWord;

pub const NAMES: [&str; 3] = ["a2-one-row", "a2-two-row", "a2-two-row-s2s1"];

pub fn a2() -> AffineSystem {
    AffineSystem::build(CartanType::A, 2).expect("A2 is valid")
}

/// One row on `Δ(1,−)`: `(s_0 s_2 s_1 s_2)^∞`.
pub fn one_row(sys: &AffineSystem) -> Result<RowParam> {
    let chain = ChainParam::new(sys, sys.nodes(), sys.fin.identity(), &[], &[])?;
    let word = InfiniteWord::new(sys, sys.nodes(), vec![], vec![2, 1, 0, 1])?;
    RowParam::new(sys, chain, vec![word])
}

/// Two rows on `Δ(1,−)`: `⟨−α1, −θ⟩` then `⟨−α2⟩`.
pub fn two_row(sys: &AffineSystem) -> Result<RowParam> {
    let k1 = NodeSet::single(2);
    let chain = ChainParam::new(sys, sys.nodes(), sys.fin.identity(), &[k1], &[sys.identity()])?;
    let s0 = InfiniteWord::new(sys, sys.nodes(), vec![], vec![2, 1, 0])?;
    let s1 = InfiniteWord::new(sys, k1, vec![], vec![1, 0])?;
    RowParam::new(sys, chain, vec![s0, s1])
}

/// Two rows on `Δ(s_2 s_1,−)` with `K_1 = {1}` and `y_1 = s_1 s_{δ−α1}`.
pub fn two_row_s2s1(sys: &AffineSystem) -> Result<RowParam> {
    let k1 = NodeSet::single(1);
    let y1 = sys.subsystem(k1)?.element(sys, &[0, 1]);
    let chain = ChainParam::new(sys, sys.nodes(), sys.fin.from_word(&[2, 1]), &[k1], &[y1])?;
    let s0 = InfiniteWord::new(sys, sys.nodes(), vec![1, 0, 2, 1, 0, 1], vec![2, 0, 1])?;
    let s1 = InfiniteWord::new(sys, k1, vec![], vec![0, 1])?;
    RowParam::new(sys, chain, vec![s0, s1])
}

/// The negative-zone rows of a named fixture.
pub fn rows(sys: &AffineSystem, name: &str) -> Result<RowParam> {
    match name {
        "a2-one-row" => one_row(sys),
        "a2-two-row" => two_row(sys),
        "a2-two-row-s2s1" => two_row_s2s1(sys),
        _ => Err(Error::InvalidParam(format!("unknown fixture '{name}'; known: {}", NAMES.join(", ")))),
    }
}

/// A full order on `Δ₊`: the fixture's rows, imaginary roots by level, and the one-row
/// order from `χ` on the positive zone.
pub fn spec(sys: &AffineSystem, name: &str) -> Result<OrderSpec> {
    let negative = rows(sys, name)?;
    let w = negative.chain.w;
    let wp = w.compose(&sys.fin.longest_element(sys.nodes()));
    let one = enumerate_chains(sys, sys.nodes(), &wp, 0)?
        .into_iter()
        .find(|c| c.len() == 1)
        .expect("the one-row chain always exists");
    let positive = RowParam::with_default_words(sys, one)?;
    build_order(sys, w, negative, ImaginaryOrder::default(), positive)
}

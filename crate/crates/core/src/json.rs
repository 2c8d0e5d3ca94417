//! JSON document shapes for the public types.

use serde::{Deserialize, Serialize};

use crate::affine::{AffineSystem, AffineWeylElement, Root};
use crate::biconvex::BiconvexParam;
use crate::cartan::{FiniteWeylElement, NodeSet, MAX_RANK, ZERO};
use crate::chains::{ChainParam, RowParam};
use crate::error::{Error, Result};
use crate::orders::{build_order, ImaginaryOrder, OrderSpec};
use crate::subsys::Subsystem;
use crate::words::InfiniteWord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootJson {
    pub level: i64,
    pub finite: Vec<i64>,
}

impl RootJson {
    pub fn from_root(b: &Root, rank: usize) -> Self {
        RootJson { level: b.level, finite: b.coords(rank) }
    }

    pub fn to_root(&self, rank: usize) -> Result<Root> {
        if self.finite.len() != rank || rank > MAX_RANK {
            return Err(Error::Parse(format!("root needs {rank} finite coordinates")));
        }
        let mut finite = ZERO;
        finite[..rank].copy_from_slice(&self.finite);
        Ok(Root { level: self.level, finite })
    }
}

/// Generator index from an id like `s(1;-1,0)`.
pub fn parse_gen_id(sys: &AffineSystem, sub: &Subsystem, id: &str) -> Result<usize> {
    let compact: String = id.chars().filter(|c| !c.is_whitespace()).collect();
    (0..sub.num_generators())
        .find(|&k| sub.gen_id(k, sys.rank()) == compact)
        .ok_or_else(|| Error::Parse(format!("'{id}' is not a generator of W_{}", sub.j)))
}

fn gen_ids(sys: &AffineSystem, sub: &Subsystem, letters: &[usize]) -> Vec<String> {
    letters.iter().map(|&k| sub.gen_id(k, sys.rank())).collect()
}

fn letters(sys: &AffineSystem, sub: &Subsystem, ids: &[String]) -> Result<Vec<usize>> {
    ids.iter().map(|id| parse_gen_id(sys, sub, id)).collect()
}

/// Element of `W_K` as generator ids of a reduced word; `W_∅` takes only `[]`.
pub fn element_to_ids(sys: &AffineSystem, k: NodeSet, y: &AffineWeylElement) -> Result<Vec<String>> {
    if k.is_empty() {
        return Ok(Vec::new());
    }
    let sub = sys.subsystem(k)?;
    Ok(gen_ids(sys, sub, &sub.reduced_word(sys, y)?))
}

pub fn element_from_ids(sys: &AffineSystem, k: NodeSet, ids: &[String]) -> Result<AffineWeylElement> {
    if k.is_empty() {
        if !ids.is_empty() {
            return Err(Error::Parse("W_∅ has no generators".into()));
        }
        return Ok(sys.identity());
    }
    let sub = sys.subsystem(k)?;
    Ok(sub.element(sys, &letters(sys, sub, ids)?))
}

fn finite_from_word(sys: &AffineSystem, word: &[usize]) -> Result<FiniteWeylElement> {
    if let Some(&i) = word.iter().find(|&&i| i == 0 || i > sys.rank()) {
        return Err(Error::Parse(format!("finite letter {i} out of range 1..={}", sys.rank())));
    }
    Ok(sys.fin.from_word(word))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordJson {
    #[serde(rename = "J")]
    pub j: NodeSet,
    pub prefix: Vec<String>,
    pub period: Vec<String>,
}

impl WordJson {
    pub fn from_word(sys: &AffineSystem, w: &InfiniteWord) -> Self {
        let sub = w.subsystem();
        WordJson { j: w.j(), prefix: gen_ids(sys, sub, w.prefix()), period: gen_ids(sys, sub, w.period()) }
    }

    pub fn to_word(&self, sys: &AffineSystem) -> Result<InfiniteWord> {
        let sub = sys.subsystem(self.j)?;
        InfiniteWord::new(sys, self.j, letters(sys, sub, &self.prefix)?, letters(sys, sub, &self.period)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamJson {
    #[serde(rename = "J")]
    pub j: NodeSet,
    #[serde(rename = "K")]
    pub k: NodeSet,
    /// Reduced word of u in the finite simple reflections.
    pub u: Vec<usize>,
    pub y: Vec<String>,
}

impl ParamJson {
    pub fn from_param(sys: &AffineSystem, p: &BiconvexParam) -> Result<Self> {
        Ok(ParamJson { j: p.j, k: p.k, u: sys.fin.reduced_word(&p.u), y: element_to_ids(sys, p.k, &p.y)? })
    }

    pub fn to_param(&self, sys: &AffineSystem) -> Result<BiconvexParam> {
        let u = finite_from_word(sys, &self.u)?;
        BiconvexParam::new(sys, self.j, self.k, u, element_from_ids(sys, self.k, &self.y)?)
    }
}

/// A chain `(K_•, y_•)`; `K` and `y` list the intermediate levels `1..n−1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    #[serde(rename = "J")]
    pub j: NodeSet,
    pub w: Vec<usize>,
    #[serde(rename = "K")]
    pub k: Vec<NodeSet>,
    pub y: Vec<Vec<String>>,
}

impl ChainJson {
    pub fn from_chain(sys: &AffineSystem, c: &ChainParam) -> Result<Self> {
        let n = c.len();
        let y = (1..n).map(|i| element_to_ids(sys, c.ks[i], &c.ys[i])).collect::<Result<Vec<_>>>()?;
        Ok(ChainJson { j: c.j, w: sys.fin.reduced_word(&c.w), k: c.ks[1..n].to_vec(), y })
    }

    pub fn to_chain(&self, sys: &AffineSystem) -> Result<ChainParam> {
        if self.k.len() != self.y.len() {
            return Err(Error::Parse("K and y must have the same length".into()));
        }
        let w = finite_from_word(sys, &self.w)?;
        let ys =
            self.k.iter().zip(&self.y).map(|(k, ids)| element_from_ids(sys, *k, ids)).collect::<Result<Vec<_>>>()?;
        ChainParam::new(sys, self.j, w, &self.k, &ys)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowParamJson {
    #[serde(flatten)]
    pub chain: ChainJson,
    pub words: Vec<WordJson>,
}

impl RowParamJson {
    pub fn from_rows(sys: &AffineSystem, r: &RowParam) -> Result<Self> {
        Ok(RowParamJson {
            chain: ChainJson::from_chain(sys, &r.chain)?,
            words: r.words.iter().map(|w| WordJson::from_word(sys, w)).collect(),
        })
    }

    pub fn to_rows(&self, sys: &AffineSystem) -> Result<RowParam> {
        let chain = self.chain.to_chain(sys)?;
        let words = self.words.iter().map(|w| w.to_word(sys)).collect::<Result<Vec<_>>>()?;
        RowParam::new(sys, chain, words)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSpecJson {
    #[serde(rename = "type")]
    pub type_label: String,
    pub rank: usize,
    pub w: Vec<usize>,
    pub negative: RowParamJson,
    #[serde(default)]
    pub imaginary: Vec<i64>,
    pub positive: RowParamJson,
}

impl OrderSpecJson {
    pub fn from_spec(sys: &AffineSystem, s: &OrderSpec) -> Result<Self> {
        Ok(OrderSpecJson {
            type_label: sys.fin.cartan.type_label.to_string(),
            rank: sys.rank(),
            w: sys.fin.reduced_word(&s.w),
            negative: RowParamJson::from_rows(sys, &s.negative)?,
            imaginary: s.imaginary.levels.clone(),
            positive: RowParamJson::from_rows(sys, &s.positive)?,
        })
    }

    /// Builds the system named in the document and the spec over it.
    pub fn to_spec(&self) -> Result<(AffineSystem, OrderSpec)> {
        let t: crate::cartan::CartanType = self.type_label.parse()?;
        let sys = AffineSystem::build(t, self.rank)?;
        let w = finite_from_word(&sys, &self.w)?;
        let neg = self.negative.to_rows(&sys)?;
        let pos = self.positive.to_rows(&sys)?;
        let spec = build_order(&sys, w, neg, ImaginaryOrder::new(self.imaginary.clone())?, pos)?;
        Ok((sys, spec))
    }
}

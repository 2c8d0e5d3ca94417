//! Convex orders on the positive roots of untwisted affine root systems, built
//! and checked with exact arithmetic.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod affine;
pub mod biconvex;
pub mod cartan;
pub mod chains;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod notation;
pub mod orders;
pub mod subsys;
pub mod words;

pub use affine::{AffineSystem, AffineWeylElement, Root};
pub use biconvex::{BiconvexParam, Nabla, NablaRelation, Window};
pub use cartan::{build_cartan, CartanData, CartanType, FiniteRootSystem, FiniteWeylElement, NodeSet, Vector};
pub use chains::{ChainParam, RowParam};
pub use error::{Error, Result};
pub use orders::{ImaginaryOrder, OrderReport, OrderSpec};
pub use subsys::Subsystem;
pub use words::InfiniteWord;

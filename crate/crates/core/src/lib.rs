//! Approximation algorithms for covering near-minimum cuts and for
//! (k,q)-flexible graph connectivity, together with exhaustive checkers for
//! the uncrossing structure they rely on and exact oracles for measuring
//! empirical approximation ratios on small instances.
//!
//! Everything works on integer weights. Ratios and guarantees are exact
//! rationals.

pub mod augment;
pub mod cut_structure;
pub mod error;
pub mod family_cover;
pub mod fgc;
pub mod harness;
pub mod multigraph;

pub use error::{Error, Result};

/// Edge costs, capacities and cut values.
pub type Weight = u64;

/// Exact ratio used for guarantees, bounds and empirical ratios.
pub type Rational = num_rational::Ratio<i64>;

pub use augment::{near_min_cuts_cover, AugmentInstance, AugmentSolution, StageLog};
pub use cut_structure::{QuotientGraph, SetFamily, Square, SquareCase};
pub use family_cover::{CoverInstance, CoverSolution, CoverSolver};
pub use fgc::{FlexInstance, FlexSolution};
pub use multigraph::{CutRecord, Edge, EdgeFilter, Multigraph, NodeSet};

//! Exact computation of Davenport constants over subsets of `Z^d`, finite
//! abelian groups and products `G x X`.
//!
//! The crate is organised bottom-up:
//!
//! - [`element`], [`group`], [`ground`] and [`sequence`] hold the data model:
//!   lattice points, residue tuples, ground-set descriptions and multisets.
//! - [`zerosum`] decides zero-sum-ness and minimality (bounded-knapsack DP plus
//!   a naive oracle).
//! - [`search`] is the pruned orderly enumeration of minimal zero-sum
//!   sequences ("atoms") that computes `D(X)` exactly.
//! - [`reorder`] builds sign-alternating orderings of atoms over `Z` and a
//!   greedy sup-norm heuristic for `Z^d`.
//! - [`bounds`], [`constructions`] and [`inverse`] implement the closed-form
//!   bounds, the extremal sequences and the structure classifiers.

pub mod arith;
pub mod bounds;
pub mod constructions;
pub mod element;
pub mod error;
pub mod ground;
pub mod group;
pub mod inverse;
pub mod reorder;
pub mod search;
pub mod sequence;
pub mod zerosum;

pub use element::{Element, MixedElement, Residue, Symbol};
pub use error::{Error, Result};
pub use ground::{Alphabet, GroundSet};
pub use group::GroupSpec;
pub use sequence::{AnySequence, Sequence};

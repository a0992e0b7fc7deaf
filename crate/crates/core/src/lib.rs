//! Exact enumeration of oscillating tableaux and perfect matchings.
//!
//! The crate counts walks in Young's lattice, averages their weight
//! statistic exactly, checks the up/down operator calculus that produces the
//! closed forms, relates closed walks to perfect matchings through a
//! Robinson–Schensted style bijection, and searches for partitions of the
//! resulting sets into triples of constant statistic sum.

pub mod cli;
pub mod diffposet;
pub mod error;
pub mod homomesy;
pub mod laurent;
pub mod limits;
pub mod matching;
pub mod partition;
pub mod rational;
pub mod serde_util;
pub mod tableau;
pub mod verify;

pub use error::{Error, Result};
pub use laurent::LaurentPolynomial;
pub use limits::Limits;
pub use matching::{DyckPath, MatchingStats, PerfectMatching};
pub use partition::Partition;
pub use rational::ExactRational;
pub use tableau::OscillatingTableau;

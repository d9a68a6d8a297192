//! Exact combinatorics of Young tableaux: jeu de taquin and its trace
//! forests, Murnaghan-Nakayama character evaluation, and a symbolic
//! content-powersum algebra that rederives closed-form skew-tableau counts
//! and character formulas, cross-checked against exhaustive enumeration.

pub mod characters;
pub mod content;
pub mod derivation;
pub mod error;
pub mod exec;
pub mod forest;
pub mod jdt;
pub mod partition;
pub mod selftest;
pub mod tableau;

pub use error::{Error, Result};
pub use partition::{binomial, falling_factorial, Cell, Partition, SkewShape};
pub use tableau::{
    count_skew, count_standard, skew_tableaux, standard_tableaux, SkewTableau, StandardTableau,
};

/// Exact rational scalar used by every symbolic expression.
pub type Rat = num::BigRational;
/// Exact integer used by every count and character value.
pub type Int = num::BigInt;

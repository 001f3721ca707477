//! Orientations of graphs that avoid a finite set of forbidden tournaments.
//!
//! The crate classifies the orientation and orientation-completion problems for
//! a forbidden set `F` as polynomial or NP-complete, and solves the tractable
//! cases exactly by compiling instances to linear systems over GF(2). A
//! backtracking solver covers every `F` at small sizes and doubles as the
//! reference the linear-algebra path is tested against.

pub mod brute;
pub mod classify;
pub mod compile;
pub mod digraph;
pub mod error;
pub mod forbidden;
pub mod forcing;
pub mod format;
pub mod gf2;
pub mod nae;
pub mod relation;
pub mod tournament;

pub use error::{Error, Result};
pub use forbidden::ForbiddenSet;
pub use tournament::Tournament;

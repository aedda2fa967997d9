//! Exact zero-sum constants over elementary abelian 2-groups.
//!
//! For a sequence over `Z_2^d`, `s_2m(d)` is the least length that forces a
//! zero-sum subsequence of length `2m`, and `beta_W(d)` is the largest set in
//! `Z_2^d` with no zero-sum subset whose size lies in `W`. This crate computes
//! both exactly (dynamic programming and branch-and-bound), tracks every known
//! inequality between them in a bounds ledger, and extracts explicit zero-sum
//! witnesses constructively via binormal-form reductions.
//!
//! Module map:
//! - [`gf2`]: packed vectors and matrices over GF(2), with replayable operation logs.
//! - [`codes`]: linear binary codes, weight distributions and the MacWilliams check.
//! - [`zerosum`]: the constants themselves, searches, constructions and the ledger.
//! - [`witness`]: constructive extraction of zero-sum subsequences.
//! - [`verify`]: randomized property suites shared by the CLI and the test-suite.

pub mod codes;
pub mod error;
pub mod gf2;
pub mod verify;
pub mod witness;
pub mod zerosum;

pub use error::{Error, Result};

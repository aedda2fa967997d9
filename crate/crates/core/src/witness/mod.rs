//! Constructive extraction of zero-sum subsequences.
//!
//! Sequences become matrices whose columns are the terms. Row additions,
//! column permutations and translations by a common vector preserve which
//! even-size column sets sum to zero, so each extractor reduces to a
//! binormal form, picks columns there and pulls the indices back through
//! the operation log.

mod binormal;
mod extract;
mod profile;

pub use binormal::{binormal_select, is_binormal, to_binormal_form, validate_binormal, BinormalMatrix};
pub use extract::{extract_even_case, extract_odd_case, extract_via_enomoto, extract_zero_sum};
pub use profile::{find_row_triple, find_type_anomaly, profile, PairProfile};

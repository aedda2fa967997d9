//! Zero-sum constants of `Z_2^d`: exact searches, closed forms,
//! constructions, the bounds ledger and the on-disk cache.

mod cache;
mod constants;
mod construct;
mod dp;
mod ledger;
mod record;
mod search;
mod sequence;
mod weights;

pub use cache::{Cache, CacheLine};
pub use constants::{closed_form_s, conjectured_s, r_from_s, s_from_beta};
pub use construct::{construct_extremal, Constructed, Construction, MAX_VALIDATED_DIM};
pub use dp::{dp_zero_sum_witness, has_zero_sum, validate_set, MAX_DP_DIM};
pub use ledger::{bounds_ledger, bounds_ledger_with, Ledger, LedgerConfig};
pub use record::{ConstantRecord, Quantity, Status, TraceStep};
pub use search::{beta_search, s_direct_small, Budget, DIRECT_MAX_DIM, DIRECT_MAX_M, MAX_SEARCH_DIM};
pub use sequence::{GroupSequence, ZeroSumWitness};
pub use weights::{WeightSet, WeightShape};

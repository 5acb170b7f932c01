//! Exact random-walk probabilities behind the lower bounds.
//!
//! - [`line`]: the barrier line walk on `{0, ..., n-1}`.
//! - [`reflection`]: brute-force check of the reflection rule.
//! - [`parity`]: the bin-parity walk of single-bit flips on `B^m`, its closed
//!   form and recursion identities.
//! - [`profile`]: `p_t` profiles of product walks and the bound estimates
//!   `T / Σ p_t` and `T / Σ √p_t`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

pub mod line;
pub mod parity;
pub mod profile;
pub mod reflection;

pub use line::{
    line_max_profile, line_walk_dp, max_monotonicity_violations, LineWalkTable,
    MonotonicityViolation,
};
pub use parity::{
    parity_closed_form, parity_dp, parity_recursion_check, ParityWalkTable, RecursionCheck,
};
pub use profile::{bound_estimate, pt_profile, BoundEstimate, PtProfile, WalkKind};
pub use reflection::{reflection_check, ReflectionCheck};

/// Default cap on exact table cells when `LSQ_BUDGET` is unset.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Cell budget for exact tables, read from `LSQ_BUDGET`.
pub fn budget() -> u64 {
    std::env::var("LSQ_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

pub(crate) fn check_budget(what: &'static str, cells: u128) -> Result<()> {
    let limit = budget() as u128;
    if cells > limit {
        return Err(Error::Budget {
            what,
            needed: cells,
            limit,
        });
    }
    Ok(())
}

pub(crate) fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

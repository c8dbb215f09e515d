//! Mertens-type constants for primes in arithmetic progressions and in
//! Chebotarev classes over the rationals, with the numerical checks that
//! tie them to prime data.

pub mod ap_constants;
pub mod arith;
pub mod chebotarev;
pub mod characters;
pub mod error;
pub mod mertens;
pub mod pliable;
pub mod quad;
pub mod sieve;
pub mod special;

pub use error::{Error, Result};
pub use sieve::{build_table, ApTarget, PrimeTable};

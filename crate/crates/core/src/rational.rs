//! Exact rational scalars.
//!
//! Every quantity in the localization formulas is an exact fraction of
//! arbitrary-precision integers. `num_rational::BigRational` already
//! maintains the invariants we rely on (always reduced, positive
//! denominator, exact arithmetic), so the engine uses it directly.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Exact arbitrary-precision fraction; the only scalar used in the engine.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational with the given integer value.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the reduced fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "n" or "n/d" in lowest terms. Rejects zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| Error::InvalidInput(format!("cannot parse rational {s:?}: {e}")))
}

/// The value as an `i64` when it is an integer in range, else `None`.
pub fn to_i64(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

/// The integer as an `i64` when in range, else `None`.
pub fn bigint_to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

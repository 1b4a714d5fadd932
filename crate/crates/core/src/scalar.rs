//! Exact rational scalars.
//!
//! The ground field is fixed to the rationals. A [`Scalar`] is an
//! arbitrary-precision fraction kept reduced with a positive denominator,
//! so equality is syntactic and arithmetic never rounds.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number, always reduced, denominator > 0.
pub type Scalar = num_rational::BigRational;

/// The integer `n` as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// The fraction `num/den` as a reduced scalar.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Renders a scalar as `p` or `p/q`, matching [`parse`].
pub fn format(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed) into a scalar.
pub fn parse(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| Error::Invalid(format!("bad numerator in scalar {s:?}")))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| Error::Invalid(format!("bad denominator in scalar {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Invalid(format!("zero denominator in scalar {s:?}")));
    }
    Ok(Scalar::new(num, den))
}

/// True when the reduced representation invariant holds.
pub fn is_canonical(x: &Scalar) -> bool {
    x.denom().is_positive() && *x == Scalar::new(x.numer().clone(), x.denom().clone())
}

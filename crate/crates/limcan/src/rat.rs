//! Exact rationals and the `"p/q"` string form used in every JSON payload.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// The exact rational type used throughout the crate.
pub type Q = BigRational;

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n / d` as a rational. Panics if `d == 0`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Largest integer `≤ x`, as an `i64`.
pub fn floor_i64(x: &Q) -> i64 {
    to_i64(&x.floor())
}

/// Smallest integer `≥ x`, as an `i64`.
pub fn ceil_i64(x: &Q) -> i64 {
    to_i64(&x.ceil())
}

/// Converts an integral rational to `i64`. Panics on overflow or non-integers.
pub fn to_i64(x: &Q) -> i64 {
    assert!(x.is_integer(), "expected an integer, got {x}");
    i64::try_from(x.to_integer()).expect("integer out of i64 range")
}

/// Renders a rational as `"p/q"` (always with an explicit denominator).
pub fn fmt(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"`, `"p"` or a JSON integer-looking string.
pub fn parse(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Input(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses a JSON value that is either a rational string or an integer.
pub fn from_json(v: &serde_json::Value) -> Result<Q, Error> {
    match v {
        serde_json::Value::String(s) => parse(s),
        serde_json::Value::Number(n) if n.is_i64() => Ok(q(n.as_i64().unwrap())),
        _ => Err(Error::Input(format!("expected a rational string, got {v}"))),
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for s in ["3/4", "-7/2", "0/1", "5/1"] {
            assert_eq!(fmt(&parse(s).unwrap()), s);
        }
        assert_eq!(parse("6/8").unwrap(), qr(3, 4));
        assert_eq!(parse("-3").unwrap(), q(-3));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn floors() {
        assert_eq!(floor_i64(&qr(-1, 2)), -1);
        assert_eq!(ceil_i64(&qr(-1, 2)), 0);
        assert_eq!(floor_i64(&qr(5, 2)), 2);
    }
}

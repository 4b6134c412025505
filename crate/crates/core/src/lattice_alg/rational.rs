//! Exact rational helpers and the `"p/q"` text encoding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type QVector = Vec<Rational>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

pub fn ints_to_rats(v: &[BigInt]) -> QVector {
    v.iter().map(int_to_rat).collect()
}

pub fn zero_qvector(n: usize) -> QVector {
    vec![Rational::zero(); n]
}

/// `Some` iff every entry has denominator one.
pub fn to_integral(v: &[Rational]) -> Option<Vec<BigInt>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Fractional part in `[0, 1)`.
pub fn fract(x: &Rational) -> Rational {
    x - int_to_rat(&floor(x))
}

pub fn ceil(x: &Rational) -> BigInt {
    -floor(&-x)
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational '{s}'")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{s}'")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` with `q > 1` otherwise.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_qvector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

pub fn sign_of(x: &BigInt) -> i64 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

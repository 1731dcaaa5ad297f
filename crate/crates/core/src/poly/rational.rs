use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Rational};

/// Parses `"n"` or `"n/d"` with decimal integers.
pub fn parse_rational(s: &str) -> crate::Result<Rational> {
    let bad = || Error::Parse(alloc::format!("malformed rational {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(alloc::format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// `"n"` for integers, `"n/d"` otherwise, always in lowest terms.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

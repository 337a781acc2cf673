//! Exact rational helpers on top of [`malachite_q::Rational`].

use std::str::FromStr;

use malachite_base::num::arithmetic::traits::Pow;
use malachite_base::num::basic::traits::Zero;
use malachite_base::num::conversion::traits::RoundingFrom;
use malachite_base::rounding_modes::RoundingMode;
pub use malachite_q::Rational;

use crate::error::{Error, Result};

/// `base^exp` for any signed exponent.
pub fn pow_int(base: u64, exp: i64) -> Rational {
    Rational::from(base).pow(exp)
}

/// `num / den` from machine integers. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::from_signeds(num, den)
}

pub fn to_f64(q: &Rational) -> f64 {
    f64::rounding_from(q, RoundingMode::Nearest).0
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::RationalParse(s.to_string()));
    }
    Rational::from_str(t).map_err(|_| Error::RationalParse(s.to_string()))
}

/// Always renders as `num/den`, including integers (`3/1`, `0/1`).
pub fn format_rational(q: &Rational) -> String {
    let sign = if *q < Rational::ZERO { "-" } else { "" };
    format!("{sign}{}/{}", q.to_numerator(), q.to_denominator())
}

/// Numerator (signed) and denominator as base-10 strings.
pub fn numerator_denominator_strings(q: &Rational) -> (String, String) {
    let sign = if *q < Rational::ZERO { "-" } else { "" };
    (
        format!("{sign}{}", q.to_numerator()),
        q.to_denominator().to_string(),
    )
}

//! Digit sums over all tuples `(t_1, …, t_n) ∈ {0, …, b−1}^n`, in closed form
//! and by enumeration, and the corner sum `Σ_z (1 − z_1)(1 − z_2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hammersley::{PointSet, SignPattern};
use crate::numeric::{pow_int, ratio, Rational};

/// Largest tuple count the enumeration oracles accept.
pub const MAX_ENUMERATION: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DigitSumKind {
    X,
    Y,
    Z,
    Cross,
}

/// A closed-form value together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitSumResult {
    pub kind: DigitSumKind,
    pub b: u32,
    pub n: u32,
    pub a: Option<u32>,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::numeric::format_rational(q))
}

impl DigitSumResult {
    pub fn closed(kind: DigitSumKind, b: u32, n: u32, a: Option<u32>) -> Result<Self> {
        let value = match kind {
            DigitSumKind::X => x_sum(b, n),
            DigitSumKind::Y => y_sum(b, n),
            DigitSumKind::Z => z_sum(b, n),
            DigitSumKind::Cross => {
                let a = a.ok_or_else(|| Error::InvalidParameter("cross sum needs a".into()))?;
                cross_sum(b, n, a)?
            }
        };
        Ok(Self {
            kind,
            b,
            n,
            a,
            value,
        })
    }
}

fn pw(b: u32, e: i64) -> Rational {
    pow_int(b as u64, e)
}

/// `(bⁿ − 1) / 2`.
pub fn x_sum(b: u32, n: u32) -> Rational {
    (pw(b, n as i64) - Rational::from(1)) / Rational::from(2)
}

/// `b^{n+1} (bⁿ − 1) / 2`.
pub fn y_sum(b: u32, n: u32) -> Rational {
    pw(b, n as i64 + 1) * x_sum(b, n)
}

pub fn z_sum(b: u32, n: u32) -> Rational {
    let n_i = n as i64;
    let nn = Rational::from(n);
    pw(b, 2 * n_i + 1) / Rational::from(4) + &nn * pw(b, n_i + 2) / Rational::from(12)
        - pw(b, n_i + 1) / Rational::from(2)
        - nn * pw(b, n_i) / Rational::from(12)
        + Rational::from(b) / Rational::from(4)
}

/// `Σ_tuples Σ_{i,j} b^{i−j} t_i s_j` for any pattern with `a` identity maps.
pub fn cross_sum(b: u32, n: u32, a: u32) -> Result<Rational> {
    if a > n {
        return Err(Error::OutOfRange(format!(
            "identity count {a} exceeds digit count {n}"
        )));
    }
    let n_i = n as i64;
    let bb = Rational::from(b);
    let spread =
        Rational::from(2 * a as i64 - n_i) * (&bb * &bb - Rational::from(1)) / Rational::from(12);
    Ok(
        pw(b, 2 * n_i + 1) / Rational::from(4) - pw(b, n_i + 1) / Rational::from(2)
            + bb / Rational::from(4)
            + spread * pw(b, n_i),
    )
}

fn tuple_count(b: u32, n: u32) -> Result<u64> {
    (b as u64)
        .checked_pow(n)
        .filter(|&c| c <= MAX_ENUMERATION)
        .ok_or_else(|| Error::OutOfRange(format!("{b}^{n} tuples is too many to enumerate")))
}

/// Calls `f` with every digit tuple `t_1..t_n` (index 0 holds `t_1`).
fn for_each_tuple(b: u32, n: u32, mut f: impl FnMut(&[u64])) -> Result<()> {
    let count = tuple_count(b, n)?;
    let mut t = vec![0u64; n as usize];
    for mut k in 0..count {
        for d in t.iter_mut().rev() {
            *d = k % b as u64;
            k /= b as u64;
        }
        f(&t);
    }
    Ok(())
}

/// Enumerates `Σ_tuples Σ_j b^{-j} t_j`.
pub fn x_sum_brute(b: u32, n: u32) -> Result<Rational> {
    let bu = b as u128;
    let mut acc = 0u128;
    // scaled by bⁿ
    for_each_tuple(b, n, |t| {
        for (j, &tj) in t.iter().enumerate() {
            acc += tj as u128 * bu.pow(n - 1 - j as u32);
        }
    })?;
    Ok(Rational::from(acc) / pw(b, n as i64))
}

/// Enumerates `Σ_tuples Σ_i b^i t_i`.
pub fn y_sum_brute(b: u32, n: u32) -> Result<Rational> {
    let bu = b as u128;
    let mut acc = 0u128;
    for_each_tuple(b, n, |t| {
        for (i, &ti) in t.iter().enumerate() {
            acc += ti as u128 * bu.pow(i as u32 + 1);
        }
    })?;
    Ok(Rational::from(acc))
}

fn pair_sum(b: u32, n: u32, second: impl Fn(usize, u64) -> u64) -> Result<Rational> {
    let bu = b as u128;
    let mut acc = 0u128;
    // b^{i-j+n} is integral for 1 ≤ i, j ≤ n
    for_each_tuple(b, n, |t| {
        for (i, &ti) in t.iter().enumerate() {
            for (j, &tj) in t.iter().enumerate() {
                let e = i as u32 + n - j as u32;
                acc += ti as u128 * second(j, tj) as u128 * bu.pow(e);
            }
        }
    })?;
    Ok(Rational::from(acc) / pw(b, n as i64))
}

/// Enumerates `Σ_tuples Σ_{i,j} b^{i−j} t_i t_j`.
pub fn z_sum_brute(b: u32, n: u32) -> Result<Rational> {
    pair_sum(b, n, |_, t| t)
}

/// Enumerates `Σ_tuples Σ_{i,j} b^{i−j} t_i s_j(t_j)` for the given maps.
pub fn cross_sum_brute(b: u32, pattern: &SignPattern) -> Result<Rational> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    let maps = pattern.maps();
    pair_sum(b, maps.len() as u32, |j, t| {
        maps[j].apply(b, t as u32) as u64
    })
}

/// `Σ_{z ∈ P} (1 − z_1)(1 − z_2)`, summed directly over the points.
pub fn corner_sum(ps: &PointSet) -> Rational {
    let d = ps.denominator() as u128;
    let total: u128 = ps
        .points()
        .iter()
        .map(|p| (d - p.x as u128) * (d - p.y as u128))
        .sum();
    Rational::from(total) / Rational::from(d * d)
}

/// `1 + b^{−n−1} · cross_sum(b, n, a)`, the corner sum predicted from the
/// identity count alone.
pub fn corner_sum_closed(b: u32, n: u32, a: u32) -> Result<Rational> {
    Ok(Rational::from(1) + pw(b, -(n as i64) - 1) * cross_sum(b, n, a)?)
}

/// Coarsest Haar coefficient of the discrepancy function rebuilt from the
/// corner sum: `b^{-n} Σ (1 − z_1)(1 − z_2) − 1/4`.
pub fn corner_coefficient(ps: &PointSet) -> Rational {
    pw(ps.base(), -(ps.n() as i64)) * corner_sum(ps) - ratio(1, 4)
}

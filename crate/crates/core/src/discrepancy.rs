//! The discrepancy function
//! `D(x) = (1/N) #{z : z_1 < x_1, z_2 < x_2} − x_1 x_2`
//! and its exact L2 norm.
//!
//! Points count only when they lie strictly below `x` in both coordinates,
//! i.e. `x` belongs to the open box `(z_1, 1) × (z_2, 1)`. Half-open
//! conventions give different values on the grid lines.

use malachite_base::num::arithmetic::traits::{Ceiling, Pow};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::conversion::traits::SaturatingFrom;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hammersley::PointSet;
use crate::numeric::{format_rational, ratio, Rational};

/// A point of the closed unit square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPoint {
    x: Rational,
    y: Rational,
}

impl EvalPoint {
    pub fn new(x: Rational, y: Rational) -> Result<Self> {
        let inside = |v: &Rational| *v >= Rational::ZERO && *v <= Rational::ONE;
        if !inside(&x) || !inside(&y) {
            return Err(Error::PointOutsideSquare(
                format_rational(&x),
                format_rational(&y),
            ));
        }
        Ok(Self { x, y })
    }

    /// Shorthand for `(xn/xd, yn/yd)`.
    pub fn from_ratios(xn: i64, xd: i64, yn: i64, yd: i64) -> Result<Self> {
        Self::new(ratio(xn, xd), ratio(yn, yd))
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }
}

/// Smallest integer `k ≥ v·den`, clamped into `[0, den]`. A grid numerator
/// `g` then satisfies `g/den < v` iff `g < k`.
fn grid_threshold(v: &Rational, den: u64) -> u64 {
    let scaled = (v * Rational::from(den)).ceiling();
    u64::saturating_from(&scaled).min(den)
}

/// Number of points with `z_x < p.x` and `z_y < p.y`.
pub fn count_open_box(ps: &PointSet, p: &EvalPoint) -> u64 {
    let den = ps.denominator();
    let tx = grid_threshold(&p.x, den);
    let ty = grid_threshold(&p.y, den);
    ps.indices_x_range(0, tx)
        .iter()
        .filter(|&&i| ps.point(i as usize).y < ty)
        .count() as u64
}

pub fn eval_discrepancy(ps: &PointSet, p: &EvalPoint) -> Rational {
    let count = count_open_box(ps, p);
    Rational::from_unsigneds(count, ps.denominator()) - &p.x * &p.y
}

/// `∫ D²` over the unit square, via the expansion
/// `(1/N²) Σ_{z,z'} (1−max(z_1,z'_1))(1−max(z_2,z'_2)) − (2/N) Σ_z (1−z_1²)(1−z_2²)/4 + 1/9`.
pub fn l2_squared_exact(ps: &PointSet) -> Result<Rational> {
    l2_squared_exact_with(ps, Exec::default())
}

pub fn l2_squared_exact_with(ps: &PointSet, exec: Exec) -> Result<Rational> {
    // With B = N = bⁿ and integer numerators X, Y the three terms become
    // S1 / B⁴ − S2 / (2 B⁵) + 1/9, and S2 ≤ B⁵ must fit in u128.
    let big = ps.denominator() as u128;
    if big.checked_pow(5).is_none() {
        return Err(Error::OutOfRange(format!(
            "exact L2 norm for {} points",
            ps.denominator()
        )));
    }
    let pts = ps.points();
    let s1 = exec.sum_u128(pts.len(), |i| {
        let a = pts[i];
        pts.iter()
            .map(|c| (big - a.x.max(c.x) as u128) * (big - a.y.max(c.y) as u128))
            .sum::<u128>()
    });
    let b2 = big * big;
    let s2: u128 = pts
        .iter()
        .map(|z| (b2 - (z.x as u128).pow(2)) * (b2 - (z.y as u128).pow(2)))
        .sum();
    let b4 = Rational::from(big).pow(4u64);
    let t1 = Rational::from(s1) / &b4;
    let t2 = Rational::from(s2) / (b4 * Rational::from(2 * big));
    Ok(t1 - t2 + ratio(1, 9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hammersley::{generate, SignPattern};

    fn r1() -> PointSet {
        generate(2, 1, &"I".parse::<SignPattern>().unwrap()).unwrap()
    }

    #[test]
    fn counts_are_strict() {
        let ps = r1();
        assert_eq!(
            count_open_box(&ps, &EvalPoint::from_ratios(1, 1, 1, 1).unwrap()),
            2
        );
        assert_eq!(
            count_open_box(&ps, &EvalPoint::from_ratios(1, 2, 1, 2).unwrap()),
            1
        );
        assert_eq!(
            count_open_box(&ps, &EvalPoint::from_ratios(0, 1, 0, 1).unwrap()),
            0
        );
        // (1/2, 1/2) is a point, but lies on the boundary of the query box
        assert_eq!(
            count_open_box(&ps, &EvalPoint::from_ratios(1, 2, 3, 4).unwrap()),
            1
        );
        assert_eq!(
            count_open_box(&ps, &EvalPoint::from_ratios(5, 8, 3, 4).unwrap()),
            2
        );
    }

    #[test]
    fn discrepancy_values() {
        let ps = r1();
        let at = |xn, xd, yn, yd| {
            eval_discrepancy(&ps, &EvalPoint::from_ratios(xn, xd, yn, yd).unwrap())
        };
        assert_eq!(at(1, 1, 1, 1), Rational::ZERO);
        assert_eq!(at(1, 2, 1, 2), ratio(1, 4));
        assert_eq!(at(0, 1, 0, 1), Rational::ZERO);
    }

    #[test]
    fn rejects_points_outside_the_square() {
        assert!(EvalPoint::from_ratios(3, 2, 0, 1).is_err());
        assert!(EvalPoint::from_ratios(0, 1, -1, 4).is_err());
    }

    #[test]
    fn l2_of_one_digit_set() {
        assert_eq!(l2_squared_exact(&r1()).unwrap(), ratio(91, 576));
    }

    #[test]
    fn l2_agrees_across_exec_modes() {
        let ps = generate(3, 3, &"IRI".parse::<SignPattern>().unwrap()).unwrap();
        assert_eq!(
            l2_squared_exact_with(&ps, Exec::Sequential).unwrap(),
            l2_squared_exact_with(&ps, Exec::Parallel).unwrap()
        );
    }
}

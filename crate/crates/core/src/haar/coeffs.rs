//! Haar coefficients of the discrepancy function: the pointwise sum over
//! points, the regime-dispatched fast path, and magnitude bounds.

use std::f64::consts::PI;

use malachite_base::num::arithmetic::traits::Floor;
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::conversion::traits::SaturatingFrom;

use super::basis::{exact_basis, Basis};
use super::{classify_regime, AxisIndex, HaarIndex, Regime};
use crate::discrepancy::EvalPoint;
use crate::error::{Error, Result};
use crate::hammersley::{DigitMap, PointSet};
use crate::numeric::{ratio, Backend, CycloValue, Rational};

fn check_l(b: u32, l: u32) -> Result<()> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    if l == 0 || l >= b {
        return Err(Error::OutOfRange(format!("l = {l} for base {b}")));
    }
    Ok(())
}

/// `Σ_{k=1}^{b-1} k ζ^{ℓk}`.
pub fn geom_sum(b: u32, l: u32) -> Result<CycloValue> {
    check_l(b, l)?;
    Ok(exact_basis(b)?.geom_sum(l).clone())
}

/// `Σ_{r=k+1}^{b-1} ζ^{ℓr}`.
pub fn tail_sum(b: u32, l: u32, k: u32) -> Result<CycloValue> {
    check_l(b, l)?;
    if k >= b {
        return Err(Error::OutOfRange(format!("k = {k} for base {b}")));
    }
    Ok(exact_basis(b)?.tail_sum(l, k).clone())
}

/// Value of `h_{jmℓ}` at `p`.
pub fn haar_value(b: u32, idx: &HaarIndex, p: &EvalPoint) -> Result<CycloValue> {
    idx.validate(b)?;
    let basis = exact_basis(b)?;
    let exact = basis.backend();
    let mut out = exact.one();
    for (axis, x) in [(0, p.x()), (1, p.y())] {
        let ax = idx.axis(axis);
        if *x >= Rational::ONE {
            return Ok(exact.zero());
        }
        if ax.j < 0 {
            continue;
        }
        let u = x * basis.pow(ax.j as i64 + 1);
        let left = Rational::from(ax.m) * Rational::from(b);
        if u < left || u >= &left + Rational::from(b) {
            return Ok(exact.zero());
        }
        let k = u64::saturating_from(&(u - left).floor());
        out = exact.mul(&out, basis.zeta(k * ax.l as u64));
    }
    Ok(out)
}

/// Coefficient of `x1·x2`.
pub fn coeff_volume(b: u32, idx: &HaarIndex) -> Result<CycloValue> {
    let basis = exact_basis(b)?;
    basis.check_index(idx)?;
    Ok(basis.coeff_volume(idx))
}

/// Coefficient of the indicator of `(z_1, 1) × (z_2, 1)`.
pub fn coeff_indicator(b: u32, idx: &HaarIndex, z: &EvalPoint) -> Result<CycloValue> {
    let basis = exact_basis(b)?;
    basis.check_index(idx)?;
    Ok(basis.coeff_indicator(idx, z.x(), z.y()))
}

/// Grid numerators `X` (over `bⁿ`) with `X / bⁿ` interior to the support of
/// one axis, as a half-open range. The coarsest axis admits all of `[0, 1)`.
pub fn interior_grid_range(ax: AxisIndex, b: u32, n: u32) -> (u64, u64) {
    let den = (b as u64).pow(n);
    if ax.j < 0 {
        return (0, den);
    }
    if ax.j as u32 >= n {
        return (0, 0);
    }
    let width = (b as u64).pow(n - ax.j as u32);
    (ax.m * width + 1, (ax.m + 1) * width)
}

fn grid_coord(v: u64, den: u64) -> Rational {
    Rational::from_unsigneds(v, den)
}

/// `(1/N) Σ_z μ(1_{C_z}) − μ(x1 x2)`, summing only over interior points.
pub(crate) fn pointwise_with<B: Backend>(
    basis: &Basis<B>,
    ps: &PointSet,
    idx: &HaarIndex,
) -> B::Value {
    let bk = basis.backend();
    let (b, n, den) = (ps.base(), ps.n(), ps.denominator());
    let (x0, x1) = interior_grid_range(idx.axis(0), b, n);
    let (y0, y1) = interior_grid_range(idx.axis(1), b, n);
    let mut sum = bk.zero();
    let mut any = false;
    if x0 < x1 && y0 < y1 {
        let candidates = if x1 - x0 <= y1 - y0 {
            ps.indices_x_range(x0, x1)
        } else {
            ps.indices_y_range(y0, y1)
        };
        for &i in candidates {
            let p = ps.point(i as usize);
            if p.x < x0 || p.x >= x1 || p.y < y0 || p.y >= y1 {
                continue;
            }
            let term = basis.coeff_indicator(idx, &grid_coord(p.x, den), &grid_coord(p.y, den));
            sum = bk.add(&sum, &term);
            any = true;
        }
    }
    if !any {
        return basis.neg_volume(idx);
    }
    let mean = bk.scale(&sum, &Rational::from_unsigneds(1, den));
    bk.sub(&mean, &basis.coeff_volume(idx))
}

pub fn coeff_discrepancy_pointwise(ps: &PointSet, idx: &HaarIndex) -> Result<CycloValue> {
    let basis = exact_basis(ps.base())?;
    basis.check_index(idx)?;
    Ok(pointwise_with(&basis, ps, idx))
}

fn flip(ps: &PointSet, i: u32) -> i64 {
    match ps.pattern().maps()[i as usize - 1] {
        DigitMap::Identity => 1,
        DigitMap::Reversal => -1,
    }
}

/// Digits of `m` in base `b`, most significant first, padded to `len`.
fn digits_msb(m: u64, b: u32, len: u32) -> Vec<u32> {
    let mut out = vec![0u32; len as usize];
    let mut rest = m;
    for slot in out.iter_mut().rev() {
        *slot = (rest % b as u64) as u32;
        rest /= b as u64;
    }
    out
}

/// Coefficient on a level with one coarsest axis and a fine-enough other axis:
/// `b^{-n-j-1} (w − e (ζ^ℓ − 1)) / (ζ^ℓ − 1)² − σ b^{-2n} / (2 (ζ^ℓ − 1))`,
/// where `e` is the scaled contribution of the digits fixed by the box.
fn boundary<B: Backend>(
    basis: &Basis<B>,
    n: u32,
    j: i32,
    l: u32,
    child_map: DigitMap,
    e: &Rational,
) -> B::Value {
    let bk = basis.backend();
    let sigma = match child_map {
        DigitMap::Identity => 1,
        DigitMap::Reversal => -1,
    };
    let w = match child_map {
        DigitMap::Identity => basis.zeta(l as u64).clone(),
        DigitMap::Reversal => bk.rational(&-Rational::ONE),
    };
    let inv = basis.inv(l);
    // (w − e (ζ−1)) / (ζ−1)² = w/(ζ−1)² − e/(ζ−1)
    let main = bk.sub(&bk.mul(&w, basis.inv_sq(l)), &bk.scale(inv, e));
    let main = bk.scale(&main, &basis.pow(-(n as i64) - j as i64 - 1));
    let corr = bk.scale(inv, &(basis.pow(-2 * n as i64) * ratio(sigma, 2)));
    bk.sub(&main, &corr)
}

pub(crate) fn fast_with<B: Backend>(basis: &Basis<B>, ps: &PointSet, idx: &HaarIndex) -> B::Value {
    let bk = basis.backend();
    let (b, n) = (ps.base(), ps.n());
    let maps = ps.pattern().maps();
    match classify_regime(idx, n) {
        Regime::Coarse => {
            let sigma = flip(ps, n - idx.j1 as u32) * flip(ps, idx.j2 as u32 + 1);
            bk.scale(
                basis.inv_prod(idx.l1, idx.l2),
                &(basis.pow(-2 * n as i64) * Rational::from(sigma)),
            )
        }
        Regime::Critical => pointwise_with(basis, ps, idx),
        Regime::FineBoth | Regime::RowFine | Regime::ColFine => basis.neg_volume(idx),
        Regime::RowBoundary => {
            // m1 carries t_n, t_{n-1}, …, t_{n-j1+1}; the child digit is t_{n-j1}
            let j1 = idx.j1 as u32;
            let digits = digits_msb(idx.m1, b, j1);
            let mut e = Rational::ZERO;
            for (pos, &t) in digits.iter().enumerate() {
                let i = n - pos as u32;
                let s = maps[i as usize - 1].apply(b, t);
                e += Rational::from(s) * basis.pow(n as i64 - j1 as i64 - i as i64);
            }
            boundary(basis, n, idx.j1, idx.l1, maps[(n - j1) as usize - 1], &e)
        }
        Regime::ColBoundary => {
            // m2 carries s_1(t_1), …, s_{j2}(t_{j2}); the child digit is s_{j2+1}(t_{j2+1})
            let j2 = idx.j2 as u32;
            let digits = digits_msb(idx.m2, b, j2);
            let mut e = Rational::ZERO;
            for (pos, &s) in digits.iter().enumerate() {
                let k = pos as u32 + 1;
                let t = maps[k as usize - 1].invert(b, s);
                e += Rational::from(t) * basis.pow(k as i64 - 1 - j2 as i64);
            }
            boundary(basis, n, idx.j2, idx.l2, maps[j2 as usize], &e)
        }
        Regime::Corner => {
            let a = ps.a_count() as i64;
            let bb = b as i64;
            let v = ratio(1, 4) * basis.pow(-2 * n as i64)
                + ratio(1, 2) * basis.pow(-(n as i64))
                + ratio((2 * a - n as i64) * (bb * bb - 1), 12) * basis.pow(-(n as i64) - 1);
            bk.rational(&v)
        }
    }
}

pub fn coeff_discrepancy_fast(ps: &PointSet, idx: &HaarIndex) -> Result<CycloValue> {
    let basis = exact_basis(ps.base())?;
    basis.check_index(idx)?;
    Ok(fast_with(&basis, ps, idx))
}

impl<B: Backend> Basis<B> {
    /// Pointwise coefficient without index validation or basis lookup.
    pub fn pointwise(&self, ps: &PointSet, idx: &HaarIndex) -> B::Value {
        pointwise_with(self, ps, idx)
    }

    /// Fast-path coefficient without index validation or basis lookup.
    pub fn fast(&self, ps: &PointSet, idx: &HaarIndex) -> B::Value {
        fast_with(self, ps, idx)
    }
}

/// `|ζ_b^ℓ − 1| = 2 sin(πℓ/b)`.
pub(crate) fn chord(b: u32, l: u32) -> f64 {
    2.0 * (PI * l as f64 / b as f64).sin()
}

/// Exact magnitude where it is known in closed form, otherwise the bound
/// shape with unit constant.
pub fn coeff_bound(idx: &HaarIndex, ps: &PointSet) -> Result<f64> {
    let b = ps.base();
    idx.validate(b)?;
    let n = ps.n() as i32;
    let bf = b as f64;
    let (j1, j2) = (idx.j1, idx.j2);
    Ok(match classify_regime(idx, ps.n()) {
        Regime::Coarse => bf.powi(-2 * n) / (chord(b, idx.l1) * chord(b, idx.l2)),
        Regime::Critical => bf.powi(-n - j1 - j2),
        Regime::FineBoth => bf.powi(-2 * j1 - 2 * j2 - 2) / (chord(b, idx.l1) * chord(b, idx.l2)),
        Regime::RowBoundary => bf.powi(-n - j1),
        Regime::ColBoundary => bf.powi(-n - j2),
        Regime::RowFine => 0.5 * bf.powi(-2 * j1 - 1) / chord(b, idx.l1),
        Regime::ColFine => 0.5 * bf.powi(-2 * j2 - 1) / chord(b, idx.l2),
        Regime::Corner => {
            let a = ps.a_count() as f64;
            (0.25 * bf.powi(-2 * n)
                + (0.5 + (2.0 * a - n as f64) * (bf - 1.0 / bf) / 12.0) * bf.powi(-n))
            .abs()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hammersley::{generate, SignPattern};
    use crate::numeric::zeta_pow;

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn rat(v: &CycloValue) -> Rational {
        v.as_rational().expect("rational value")
    }

    fn idx(b: u32, j: (i32, i32), m: (u64, u64), l: (u32, u32)) -> HaarIndex {
        HaarIndex::new(b, j, m, l).unwrap()
    }

    fn set(b: u32, pat: &str) -> PointSet {
        let p: SignPattern = pat.parse().unwrap();
        generate(b, p.len() as u32, &p).unwrap()
    }

    #[test]
    fn geometric_sums() {
        assert_eq!(rat(&geom_sum(2, 1).unwrap()), q(-1, 1));
        let g = geom_sum(3, 1).unwrap();
        let expected = &zeta_pow(3, 1).unwrap() + &zeta_pow(3, 2).unwrap().scale(&q(2, 1));
        assert_eq!(g, expected);
        assert_eq!(rat(&geom_sum(4, 2).unwrap()), q(-2, 1));
        assert!(geom_sum(3, 0).is_err());
        assert!(geom_sum(3, 3).is_err());
    }

    #[test]
    fn geometric_sum_times_zeta_minus_one_is_base() {
        for b in 2..=12 {
            for l in 1..b {
                let g = geom_sum(b, l).unwrap();
                let d = &zeta_pow(b, l as i64).unwrap() - &zeta_pow(b, 0).unwrap();
                assert_eq!(rat(&(&g * &d)), q(b as i64, 1), "b = {b}, l = {l}");
            }
        }
    }

    #[test]
    fn tail_sums() {
        assert_eq!(rat(&tail_sum(2, 1, 0).unwrap()), q(-1, 1));
        assert!(tail_sum(2, 1, 1).unwrap().is_zero());
        assert_eq!(rat(&tail_sum(3, 1, 0).unwrap()), q(-1, 1));
        assert!(tail_sum(3, 1, 3).is_err());
    }

    #[test]
    fn haar_values() {
        let i = idx(2, (0, 0), (0, 0), (1, 1));
        let at = |xn, xd, yn, yd| {
            haar_value(2, &i, &EvalPoint::from_ratios(xn, xd, yn, yd).unwrap()).unwrap()
        };
        assert_eq!(rat(&at(1, 4, 1, 4)), q(1, 1));
        assert_eq!(rat(&at(3, 4, 1, 4)), q(-1, 1));
        let c = HaarIndex::corner();
        for b in [2, 3, 5] {
            let v = haar_value(b, &c, &EvalPoint::from_ratios(2, 7, 0, 1).unwrap()).unwrap();
            assert_eq!(rat(&v), q(1, 1));
        }
        let fine = idx(2, (1, 0), (1, 0), (1, 1));
        let v = haar_value(2, &fine, &EvalPoint::from_ratios(1, 4, 1, 2).unwrap()).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn volume_coefficients() {
        assert_eq!(
            rat(&coeff_volume(3, &HaarIndex::corner()).unwrap()),
            q(1, 4)
        );
        assert_eq!(
            rat(&coeff_volume(2, &idx(2, (0, 0), (0, 0), (1, 1))).unwrap()),
            q(1, 16)
        );
        assert_eq!(
            rat(&coeff_volume(2, &idx(2, (0, -1), (0, 0), (1, 1))).unwrap()),
            q(-1, 8)
        );
    }

    #[test]
    fn indicator_coefficients() {
        let z0 = EvalPoint::from_ratios(0, 1, 0, 1).unwrap();
        assert_eq!(
            rat(&coeff_indicator(2, &HaarIndex::corner(), &z0).unwrap()),
            q(1, 1)
        );
        let z = EvalPoint::from_ratios(1, 4, 1, 4).unwrap();
        let v = coeff_indicator(2, &idx(2, (0, 0), (0, 0), (1, 1)), &z).unwrap();
        assert_eq!(rat(&v), q(1, 16));
        let edge = EvalPoint::from_ratios(0, 1, 1, 4).unwrap();
        let v = coeff_indicator(2, &idx(2, (1, 0), (0, 0), (1, 1)), &edge).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn pointwise_examples() {
        let r1 = set(2, "I");
        let corner = coeff_discrepancy_pointwise(&r1, &HaarIndex::corner()).unwrap();
        assert_eq!(rat(&corner), q(3, 8));
        let fine = coeff_discrepancy_pointwise(&r1, &idx(2, (1, 0), (0, 0), (1, 1))).unwrap();
        assert_eq!(rat(&fine), q(-1, 64));
        let r3 = set(2, "III");
        let coarse = coeff_discrepancy_pointwise(&r3, &idx(2, (0, 0), (0, 0), (1, 1))).unwrap();
        assert_eq!(rat(&coarse), q(1, 256));
    }

    #[test]
    fn fast_examples() {
        let r1 = set(2, "I");
        assert_eq!(
            rat(&coeff_discrepancy_fast(&r1, &HaarIndex::corner()).unwrap()),
            q(3, 8)
        );
        let fine = coeff_discrepancy_fast(&r1, &idx(2, (1, 0), (0, 0), (1, 1))).unwrap();
        assert_eq!(rat(&fine), q(-1, 64));
        let r3 = set(2, "III");
        let coarse = coeff_discrepancy_fast(&r3, &idx(2, (0, 0), (0, 0), (1, 1))).unwrap();
        assert_eq!(rat(&coarse), q(1, 256));
    }

    #[test]
    fn bounds() {
        let r3 = set(2, "III");
        let b = coeff_bound(&idx(2, (0, 0), (0, 0), (1, 1)), &r3).unwrap();
        assert!((b - 1.0 / 256.0).abs() < 1e-15);
        let r1 = set(2, "I");
        assert!((coeff_bound(&HaarIndex::corner(), &r1).unwrap() - 0.375).abs() < 1e-15);
        let fine = coeff_bound(&idx(2, (1, 0), (0, 0), (1, 1)), &r1).unwrap();
        assert!((fine - 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn coarse_coefficients_do_not_depend_on_m() {
        let ps = set(3, "IRIRI");
        for (j1, j2) in [(0, 1), (1, 1), (2, 0), (1, 2)] {
            for l in [(1, 1), (1, 2), (2, 2)] {
                let first = coeff_discrepancy_pointwise(&ps, &idx(3, (j1, j2), (0, 0), l)).unwrap();
                for m1 in 0..3u64.pow(j1 as u32) {
                    for m2 in 0..3u64.pow(j2 as u32) {
                        let v = coeff_discrepancy_pointwise(&ps, &idx(3, (j1, j2), (m1, m2), l))
                            .unwrap();
                        assert_eq!(v, first);
                    }
                }
            }
        }
    }
}

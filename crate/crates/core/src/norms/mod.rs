//! Discrete Besov quasi-norms and the Parseval sum of the discrepancy
//! function, the rate diagnostic built on them, and a QMC integration demo.
//!
//! For a level pair `j = (j1, j2)` with `-1 ≤ j_i ≤ J`, the quasi-norm is
//! `(Σ_j b^{(j1+j2)(r−1/p+1)q} (Σ_{m,ℓ} |μ_{jmℓ}|^p)^{q/p})^{1/q}`, with the
//! usual maximum when `p` or `q` is infinite. Levels with `max(j1, j2) ≥ n`
//! only carry volume coefficients, so everything past `J` is a geometric
//! series summed in closed form.

mod levels;
mod qmc;
mod rate;

use serde::Serialize;

pub use levels::{level_pairs, level_sum, level_sums, LevelSum};
pub use qmc::{qmc_integrate, qmc_series, Integrand, QmcReport, QmcRow};
pub use rate::{rate_report, rate_report_with, RateReport, RateRow};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::haar::{chord, float_basis};
use crate::hammersley::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    /// truncation level
    pub j: u32,
}

impl NormParams {
    /// Requires `p, q ∈ [1, ∞]` and `1/p − 1 < r < min(1/p, 1)`.
    pub fn new(p: f64, q: f64, r: f64, j: u32) -> Result<Self> {
        let bad = |why: String| Err(Error::InvalidParameter(why));
        for (name, v) in [("p", p), ("q", q)] {
            if v.is_nan() || v < 1.0 {
                return bad(format!("{name} must lie in [1, inf], got {v}"));
            }
        }
        if !r.is_finite() {
            return bad(format!("r must be finite, got {r}"));
        }
        let inv_p = 1.0 / p;
        if !(r > inv_p - 1.0 && r < inv_p.min(1.0)) {
            return bad(format!(
                "r = {r} outside ({}, {}) for p = {p}",
                inv_p - 1.0,
                inv_p.min(1.0)
            ));
        }
        Ok(Self { p, q, r, j })
    }

    /// The stricter band `0 ≤ r < 1/p` of the rate estimate.
    pub fn check_rate_band(&self) -> Result<()> {
        if self.r >= 0.0 && self.r < 1.0 / self.p {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "rate estimate needs 0 <= r < 1/p, got r = {} with p = {}",
                self.r, self.p
            )))
        }
    }

    fn exponent(&self) -> f64 {
        self.r - 1.0 / self.p + 1.0
    }
}

/// A truncated norm and the amount the untruncated norm exceeds it by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// `(Σ_ℓ |ζ^ℓ − 1|^{-p})^{1/p}`, or `max_ℓ |ζ^ℓ − 1|^{-1}` for `p = ∞`.
fn chord_norm(b: u32, p: f64) -> f64 {
    if p.is_infinite() {
        return (1..b).map(|l| 1.0 / chord(b, l)).fold(0.0, f64::max);
    }
    (1..b)
        .map(|l| chord(b, l).powf(-p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// `Σ_{ℓ=1}^{b-1} |ζ^ℓ − 1|^{-2}` summed term by term.
pub fn tail_constant(b: u32) -> f64 {
    (1..b).map(|l| chord(b, l).powi(-2)).sum()
}

/// `(b² − 1) / 12`.
pub fn tail_constant_closed(b: u32) -> f64 {
    let bf = b as f64;
    (bf * bf - 1.0) / 12.0
}

/// Combines per-level `Σ|μ|^p` (or maxima) into the quasi-norm sum, before
/// the outer `1/q` power. For `q = ∞` this is the supremum itself.
fn outer_sum(b: u32, params: &NormParams, levels: &[LevelSum]) -> f64 {
    let bf = b as f64;
    let alpha = params.exponent();
    let inner = |s: &LevelSum| {
        if params.p.is_infinite() {
            s.max
        } else {
            s.sum_p.powf(1.0 / params.p)
        }
    };
    if params.q.is_infinite() {
        levels
            .iter()
            .map(|s| bf.powf((s.j1 + s.j2) as f64 * alpha) * inner(s))
            .fold(0.0, f64::max)
    } else {
        levels
            .iter()
            .map(|s| bf.powf((s.j1 + s.j2) as f64 * alpha * params.q) * inner(s).powf(params.q))
            .sum()
    }
}

fn finish(params: &NormParams, sum: f64) -> f64 {
    if params.q.is_infinite() {
        sum
    } else {
        sum.powf(1.0 / params.q)
    }
}

/// Contribution of all levels with `max(j1, j2) > J`, in the same units as
/// [`outer_sum`]. Infinite when `J < n − 1`, where the closed forms do not
/// yet apply.
fn tail_sum(b: u32, n: u32, params: &NormParams) -> f64 {
    let jj = params.j as i32;
    if jj < n as i32 - 1 {
        return f64::INFINITY;
    }
    let bf = b as f64;
    let c = chord_norm(b, params.p);
    let alpha = params.exponent();
    if params.q.is_infinite() {
        // largest single level past J
        let fine = bf.powf((jj + 1) as f64 * (params.r - 1.0)) * bf.powi(-2) * c * c;
        let row = bf.powf((jj + 1) as f64 * (params.r - 1.0)) * bf.powf(-alpha) / (2.0 * bf) * c;
        return fine.max(row);
    }
    let q = params.q;
    let x = bf.powf((params.r - 1.0) * q);
    // level (j1, j2) ≥ 0 contributes K x^{j1+j2}
    let fine = bf.powf(-2.0 * q) * c.powf(2.0 * q) * square_tail(x, jj);
    // level (j, −1) contributes K' x^j, and so does (−1, j)
    let row = bf.powf(-alpha * q) * (2.0 * bf).powf(-q) * c.powf(q) * x.powi(jj + 1) / (1.0 - x);
    fine + 2.0 * row
}

/// `Σ x^{j1+j2}` over `j1, j2 ≥ 0` with `max(j1, j2) > J`, written without
/// the cancellation of `(Σ x^j)² − (Σ_{j≤J} x^j)²`.
fn square_tail(x: f64, jj: i32) -> f64 {
    let y = x.powi(jj + 1);
    y * (2.0 - y) / ((1.0 - x) * (1.0 - x))
}

pub fn besov_quasi_norm(ps: &PointSet, params: &NormParams) -> Result<NormValue> {
    besov_quasi_norm_with(ps, params, Exec::default())
}

pub fn besov_quasi_norm_with(ps: &PointSet, params: &NormParams, exec: Exec) -> Result<NormValue> {
    let basis = float_basis(ps.base())?;
    let levels = level_sums(&basis, ps, params.j as i32, params.p, exec);
    let sum = outer_sum(ps.base(), params, &levels);
    let tail = tail_sum(ps.base(), ps.n(), params);
    let value = finish(params, sum);
    let tail_bound = if params.q.is_infinite() {
        (tail - sum).max(0.0)
    } else {
        finish(params, sum + tail) - value
    };
    Ok(NormValue { value, tail_bound })
}

/// The quasi-norm of an explicit list of `(j1, j2, |μ|)`; missing
/// coefficients are zero. The smoothness band is not checked here.
pub fn besov_from_coefficients(b: u32, p: f64, q: f64, r: f64, coeffs: &[(i32, i32, f64)]) -> f64 {
    let params = NormParams { p, q, r, j: 0 };
    let mut levels: Vec<LevelSum> = Vec::new();
    for &(j1, j2, mag) in coeffs {
        let pos = match levels.iter().position(|s| s.j1 == j1 && s.j2 == j2) {
            Some(i) => i,
            None => {
                levels.push(LevelSum {
                    j1,
                    j2,
                    sum_p: 0.0,
                    max: 0.0,
                    special: 0,
                });
                levels.len() - 1
            }
        };
        let s = &mut levels[pos];
        if params.p.is_finite() {
            s.sum_p += mag.powf(params.p);
        }
        s.max = s.max.max(mag);
    }
    finish(&params, outer_sum(b, &params, &levels))
}

/// `Σ_j b^{max(0,j1)+max(0,j2)} Σ_{m,ℓ} |μ_{jmℓ}|²` over `max(j1, j2) ≤ J`,
/// plus the exact remainder when `with_tail`. The remainder needs
/// `J ≥ n − 1`.
pub fn parseval_l2(ps: &PointSet, j: u32, with_tail: bool) -> Result<f64> {
    parseval_l2_with(ps, j, with_tail, Exec::default())
}

pub fn parseval_l2_with(ps: &PointSet, j: u32, with_tail: bool, exec: Exec) -> Result<f64> {
    let (b, n) = (ps.base(), ps.n());
    if with_tail && j + 1 < n {
        return Err(Error::InvalidParameter(format!(
            "the L2 tail needs J >= n - 1 = {}, got {j}",
            n - 1
        )));
    }
    let basis = float_basis(b)?;
    let bf = b as f64;
    let levels = level_sums(&basis, ps, j as i32, 2.0, exec);
    let mut total: f64 = levels
        .iter()
        .map(|s| bf.powi(s.j1.max(0) + s.j2.max(0)) * s.sum_p)
        .sum();
    if with_tail {
        total += parseval_tail(b, j);
    }
    Ok(total)
}

fn parseval_tail(b: u32, j: u32) -> f64 {
    let bf = b as f64;
    let t = tail_constant_closed(b);
    let x = bf.powi(-2);
    let jj = j as i32;
    let fine = bf.powi(-4) * t * t * square_tail(x, jj);
    let row = t / 4.0 * bf.powi(-2) * x.powi(jj + 1) / (1.0 - x);
    fine + 2.0 * row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::l2_squared_exact;
    use crate::haar::{coeff_discrepancy_fast, enumerate_indices};
    use crate::hammersley::{generate, SignPattern};
    use crate::numeric::to_f64;

    fn set(b: u32, pat: &str) -> PointSet {
        let p: SignPattern = pat.parse().unwrap();
        generate(b, p.len() as u32, &p).unwrap()
    }

    #[test]
    fn parameter_band() {
        assert!(NormParams::new(2.0, 2.0, 0.0, 3).is_ok());
        assert!(NormParams::new(2.0, 2.0, 0.5, 3).is_err());
        assert!(NormParams::new(2.0, 2.0, -0.5, 3).is_err());
        assert!(NormParams::new(1.0, f64::INFINITY, 0.9, 3).is_ok());
        assert!(NormParams::new(1.0, 1.0, 0.0, 3).is_err());
        assert!(NormParams::new(0.5, 2.0, 0.0, 3).is_err());
        assert!(NormParams::new(f64::INFINITY, 1.0, -0.5, 3).is_ok());
        assert!(NormParams::new(4.0, 2.0, -0.5, 3)
            .unwrap()
            .check_rate_band()
            .is_err());
    }

    #[test]
    fn single_coefficient_norm() {
        assert_eq!(
            besov_from_coefficients(2, 1.0, 1.0, 0.0, &[(-1, -1, 0.375)]),
            0.375
        );
    }

    #[test]
    fn tail_constants() {
        assert!((tail_constant(2) - 0.25).abs() < 1e-15);
        assert!((tail_constant(4) - 1.25).abs() < 1e-14);
        for b in 2..=10 {
            assert!((tail_constant(b) - tail_constant_closed(b)).abs() < 1e-12);
        }
    }

    #[test]
    fn one_digit_norm_against_naive_sum() {
        let ps = set(2, "I");
        let params = NormParams::new(2.0, 2.0, 0.0, 3).unwrap();
        let mut naive = 0.0;
        for idx in enumerate_indices(2, 3) {
            let v = coeff_discrepancy_fast(&ps, &idx)
                .unwrap()
                .to_complex()
                .norm();
            naive += 2f64.powi(idx.j1 + idx.j2) * v * v;
        }
        let got = besov_quasi_norm(&ps, &params).unwrap();
        assert!((got.value - naive.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn parseval_with_tail_is_warnock() {
        let ps = set(2, "I");
        let v = parseval_l2(&ps, 8, true).unwrap();
        assert!((v - 91.0 / 576.0).abs() < 1e-10);
        for (b, pat) in [(2, "IRRI"), (3, "RIR")] {
            let ps = set(b, pat);
            let exact = to_f64(&l2_squared_exact(&ps).unwrap());
            let v = parseval_l2(&ps, ps.n() + 5, true).unwrap();
            assert!((v - exact).abs() <= 1e-10 * exact, "{v} vs {exact}");
        }
        assert!(parseval_l2(&set(2, "IRRI"), 1, true).is_err());
    }

    #[test]
    fn tail_covers_two_more_levels() {
        let ps = set(3, "IRI");
        for (p, q, r) in [
            (2.0, 2.0, 0.0),
            (1.0, 3.0, 0.5),
            (f64::INFINITY, 2.0, -0.2),
            (2.0, f64::INFINITY, 0.2),
        ] {
            let lo = besov_quasi_norm(&ps, &NormParams::new(p, q, r, 4).unwrap()).unwrap();
            let hi = besov_quasi_norm(&ps, &NormParams::new(p, q, r, 6).unwrap()).unwrap();
            assert!(hi.value >= lo.value * (1.0 - 1e-14));
            assert!(
                lo.tail_bound + 1e-15 >= hi.value - lo.value,
                "{p} {q} {r}: {lo:?} {hi:?}"
            );
        }
    }

    #[test]
    fn coarse_truncation_has_unbounded_tail() {
        let ps = set(2, "IRIR");
        let v = besov_quasi_norm(&ps, &NormParams::new(2.0, 2.0, 0.0, 1).unwrap()).unwrap();
        assert!(v.tail_bound.is_infinite());
    }
}

//! The two-dimensional b-adic Haar system and the Haar coefficients of the
//! discrepancy function.
//!
//! On one axis, `h_{jmℓ}` is supported on `I_{jm} = [m b^{-j}, (m+1) b^{-j})`
//! and equals `ζ^{ℓk}` on the child interval `I^k_{jm}`; the level `j = -1`
//! is the indicator of `[0, 1)`. Coefficients are `∫ f h` with no conjugation.

mod basis;
mod coeffs;
mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use basis::{exact_basis, float_basis, Basis};
pub(crate) use coeffs::chord;
pub use coeffs::{
    coeff_bound, coeff_discrepancy_fast, coeff_discrepancy_pointwise, coeff_indicator,
    coeff_volume, geom_sum, haar_value, interior_grid_range, tail_sum,
};
pub use oracle::{coeff_oracle, OracleCache};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hammersley::{DigitMap, PointSet, SignPattern};
use crate::numeric::{numerator_denominator_strings, CycloValue};

/// Largest level accepted by [`HaarIndex::validate`].
pub const MAX_LEVEL: i32 = 60;

/// One axis of a Haar index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AxisIndex {
    pub j: i32,
    pub m: u64,
    pub l: u32,
}

impl AxisIndex {
    pub const COARSEST: AxisIndex = AxisIndex { j: -1, m: 0, l: 1 };

    fn validate(&self, b: u32) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidIndex(format!("{self:?}: {why}")));
        if self.j < -1 || self.j > MAX_LEVEL {
            return bad("level out of range");
        }
        if self.j == -1 {
            if self.m != 0 || self.l != 1 {
                return bad("coarsest level needs m = 0 and l = 1");
            }
            return Ok(());
        }
        if self.l == 0 || self.l >= b {
            return bad("l must lie in 1..b");
        }
        match (b as u64).checked_pow(self.j as u32) {
            Some(count) if self.m < count => Ok(()),
            Some(_) => bad("m must be below b^j"),
            None => bad("level too fine for this base"),
        }
    }

    /// All axis indices with level `j`, ordered by `(m, ℓ)`.
    pub fn level(b: u32, j: i32) -> Vec<AxisIndex> {
        if j < 0 {
            return vec![Self::COARSEST];
        }
        let count = (b as u64).pow(j as u32);
        (0..count)
            .flat_map(|m| (1..b).map(move |l| AxisIndex { j, m, l }))
            .collect()
    }
}

/// `(j, m, ℓ)` for the tensor function `h_{j1 m1 ℓ1}(x1) h_{j2 m2 ℓ2}(x2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HaarIndex {
    pub j1: i32,
    pub j2: i32,
    pub m1: u64,
    pub m2: u64,
    pub l1: u32,
    pub l2: u32,
}

impl HaarIndex {
    pub fn new(b: u32, j: (i32, i32), m: (u64, u64), l: (u32, u32)) -> Result<Self> {
        let idx = Self {
            j1: j.0,
            j2: j.1,
            m1: m.0,
            m2: m.1,
            l1: l.0,
            l2: l.1,
        };
        idx.validate(b)?;
        Ok(idx)
    }

    pub fn from_axes(a: AxisIndex, c: AxisIndex) -> Self {
        Self {
            j1: a.j,
            j2: c.j,
            m1: a.m,
            m2: c.m,
            l1: a.l,
            l2: c.l,
        }
    }

    pub fn corner() -> Self {
        Self::from_axes(AxisIndex::COARSEST, AxisIndex::COARSEST)
    }

    pub fn validate(&self, b: u32) -> Result<()> {
        if b < 2 {
            return Err(Error::InvalidBase(b));
        }
        self.axis(0).validate(b)?;
        self.axis(1).validate(b)
    }

    /// Axis 0 is `x1`, axis 1 is `x2`.
    pub fn axis(&self, i: usize) -> AxisIndex {
        if i == 0 {
            AxisIndex {
                j: self.j1,
                m: self.m1,
                l: self.l1,
            }
        } else {
            AxisIndex {
                j: self.j2,
                m: self.m2,
                l: self.l2,
            }
        }
    }
}

/// Coefficient regimes of the discrepancy function of an n-digit point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// both levels ≥ 0, `j1 + j2 < n − 1`
    Coarse,
    /// both levels in `0..n`, `j1 + j2 ≥ n − 1`
    Critical,
    /// both levels ≥ 0, one of them ≥ n
    FineBoth,
    /// `j = (j1, −1)`, `j1 < n`
    RowBoundary,
    /// `j = (−1, j2)`, `j2 < n`
    ColBoundary,
    RowFine,
    ColFine,
    Corner,
}

impl Regime {
    pub const ALL: [Regime; 8] = [
        Regime::Coarse,
        Regime::Critical,
        Regime::FineBoth,
        Regime::RowBoundary,
        Regime::ColBoundary,
        Regime::RowFine,
        Regime::ColFine,
        Regime::Corner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::Coarse => "Coarse",
            Regime::Critical => "Critical",
            Regime::FineBoth => "FineBoth",
            Regime::RowBoundary => "RowBoundary",
            Regime::ColBoundary => "ColBoundary",
            Regime::RowFine => "RowFine",
            Regime::ColFine => "ColFine",
            Regime::Corner => "Corner",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify_levels(j1: i32, j2: i32, n: u32) -> Regime {
    let n = n as i32;
    match (j1, j2) {
        (-1, -1) => Regime::Corner,
        (j1, -1) if j1 < n => Regime::RowBoundary,
        (_, -1) => Regime::RowFine,
        (-1, j2) if j2 < n => Regime::ColBoundary,
        (-1, _) => Regime::ColFine,
        (j1, j2) if j1 >= n || j2 >= n => Regime::FineBoth,
        (j1, j2) if j1 + j2 < n - 1 => Regime::Coarse,
        _ => Regime::Critical,
    }
}

pub fn classify_regime(idx: &HaarIndex, n: u32) -> Regime {
    classify_levels(idx.j1, idx.j2, n)
}

/// `+1` if `s_i` is the identity, `−1` if it is the reversal (`1 ≤ i ≤ n`).
pub fn flip_sign(pattern: &SignPattern, i: usize) -> Result<i32> {
    Ok(match pattern.map(i)? {
        DigitMap::Identity => 1,
        DigitMap::Reversal => -1,
    })
}

/// Every index with `-1 ≤ j1, j2 ≤ jmax`, ordered by `(j1, j2, m1, m2, ℓ1, ℓ2)`.
pub fn enumerate_indices(b: u32, jmax: i32) -> Vec<HaarIndex> {
    let mut out = Vec::new();
    for j1 in -1..=jmax {
        let row = AxisIndex::level(b, j1);
        for j2 in -1..=jmax {
            let col = AxisIndex::level(b, j2);
            out.reserve(row.len() * col.len());
            // (m1, m2, ℓ1, ℓ2) order
            let per_m = (b - 1).max(1) as usize;
            for r in row.chunks(if j1 < 0 { 1 } else { per_m }) {
                for c in col.chunks(if j2 < 0 { 1 } else { per_m }) {
                    for a in r {
                        for d in c {
                            out.push(HaarIndex::from_axes(*a, *d));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Which coefficient path to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Fast,
    Pointwise,
    Oracle,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Method::Fast),
            "pointwise" => Ok(Method::Pointwise),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::InvalidParameter(format!(
                "method {other:?} (expected fast, pointwise or oracle)"
            ))),
        }
    }
}

pub fn coefficient(ps: &PointSet, idx: &HaarIndex, method: Method) -> Result<CycloValue> {
    match method {
        Method::Fast => coeff_discrepancy_fast(ps, idx),
        Method::Pointwise => coeff_discrepancy_pointwise(ps, idx),
        Method::Oracle => coeff_oracle(ps, idx),
    }
}

/// One line of a coefficient dump.
#[derive(Debug, Clone, Serialize)]
pub struct CoeffRecord {
    pub j1: i32,
    pub j2: i32,
    pub m1: u64,
    pub m2: u64,
    pub l1: u32,
    pub l2: u32,
    pub re: f64,
    pub im: f64,
    pub regime: Regime,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_vec: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub den_vec: Option<Vec<String>>,
}

impl CoeffRecord {
    /// `exact` adds the reduced coefficient vector as base-10 strings.
    pub fn new(idx: &HaarIndex, n: u32, value: &CycloValue, exact: bool) -> Self {
        let c = value.to_complex();
        let (num_vec, den_vec) = if exact {
            let (nums, dens) = value
                .coeffs()
                .iter()
                .map(numerator_denominator_strings)
                .unzip();
            (Some(nums), Some(dens))
        } else {
            (None, None)
        };
        Self {
            j1: idx.j1,
            j2: idx.j2,
            m1: idx.m1,
            m2: idx.m2,
            l1: idx.l1,
            l2: idx.l2,
            re: c.re,
            im: c.im,
            regime: classify_regime(idx, n),
            num_vec,
            den_vec,
        }
    }
}

/// Fast-path coefficients for every index up to `jmax`, in enumeration order.
pub fn coeff_table(ps: &PointSet, jmax: i32, exact: bool, exec: Exec) -> Result<Vec<CoeffRecord>> {
    let basis = exact_basis(ps.base())?;
    let indices = enumerate_indices(ps.base(), jmax);
    let n = ps.n();
    Ok(exec.map_slice(&indices, |idx| {
        let v = coeffs::fast_with(&basis, ps, idx);
        CoeffRecord::new(idx, n, &v, exact)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_validation() {
        assert!(HaarIndex::new(2, (-1, -1), (0, 0), (1, 1)).is_ok());
        assert!(HaarIndex::new(2, (-1, 0), (1, 0), (1, 1)).is_err());
        assert!(HaarIndex::new(3, (1, 0), (3, 0), (1, 2)).is_err());
        assert!(HaarIndex::new(3, (1, 0), (2, 0), (1, 3)).is_err());
        assert!(HaarIndex::new(3, (1, 0), (2, 0), (0, 1)).is_err());
        assert!(HaarIndex::new(3, (-2, 0), (0, 0), (1, 1)).is_err());
        assert!(HaarIndex::new(1, (0, 0), (0, 0), (1, 1)).is_err());
    }

    #[test]
    fn regimes() {
        assert_eq!(classify_levels(1, 2, 5), Regime::Coarse);
        assert_eq!(classify_levels(5, 0, 3), Regime::FineBoth);
        assert_eq!(classify_levels(-1, -1, 7), Regime::Corner);
        assert_eq!(classify_levels(2, 2, 5), Regime::Critical);
        assert_eq!(classify_levels(3, 2, 3), Regime::FineBoth);
        assert_eq!(classify_levels(2, -1, 3), Regime::RowBoundary);
        assert_eq!(classify_levels(3, -1, 3), Regime::RowFine);
        assert_eq!(classify_levels(-1, 1, 1), Regime::ColFine);
        assert_eq!(classify_levels(-1, 0, 2), Regime::ColBoundary);
    }

    #[test]
    fn flip_signs() {
        let p: SignPattern = "IR".parse().unwrap();
        assert_eq!(flip_sign(&p, 1).unwrap(), 1);
        assert_eq!(flip_sign(&p, 2).unwrap(), -1);
        assert!(flip_sign(&p, 3).is_err());
    }

    #[test]
    fn enumeration_counts_and_order() {
        // per axis: 1 + Σ_{j=0}^{J} (b−1) b^j = b^{J+1}
        let all = enumerate_indices(3, 2);
        assert_eq!(all.len(), 27 * 27);
        assert_eq!(all[0], HaarIndex::corner());
        let level: Vec<_> = all.iter().filter(|i| i.j1 == 1 && i.j2 == 0).collect();
        assert_eq!(level.len(), 3 * 2 * 2);
        assert_eq!((level[0].m1, level[0].l1, level[0].l2), (0, 1, 1));
        assert_eq!((level[1].m1, level[1].l1, level[1].l2), (0, 1, 2));
        assert_eq!((level[4].m1, level[4].l1), (1, 1));
    }
}

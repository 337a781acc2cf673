use std::f64::consts::{E, PI};
use std::fmt;
use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hammersley::{generate, PatternRule, PointSet};

/// Test integrands on the unit square with known integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrand {
    One,
    X1X2,
    X1sqX2sq,
    ExpSum,
    SinProd,
    /// `(x1 − 1/2)(x2 − 1/2)`, integral zero
    Centered,
}

impl Integrand {
    pub const ALL: [Integrand; 6] = [
        Integrand::One,
        Integrand::X1X2,
        Integrand::X1sqX2sq,
        Integrand::ExpSum,
        Integrand::SinProd,
        Integrand::Centered,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Integrand::One => "one",
            Integrand::X1X2 => "x1x2",
            Integrand::X1sqX2sq => "x1sq_x2sq",
            Integrand::ExpSum => "exp_sum",
            Integrand::SinProd => "sin_prod",
            Integrand::Centered => "centered",
        }
    }

    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            Integrand::One => 1.0,
            Integrand::X1X2 => x * y,
            Integrand::X1sqX2sq => x * x * y * y,
            Integrand::ExpSum => (x + y).exp(),
            Integrand::SinProd => (PI * x).sin() * (PI * y).sin(),
            Integrand::Centered => (x - 0.5) * (y - 0.5),
        }
    }

    pub fn exact(self) -> f64 {
        match self {
            Integrand::One => 1.0,
            Integrand::X1X2 => 0.25,
            Integrand::X1sqX2sq => 1.0 / 9.0,
            Integrand::ExpSum => (E - 1.0) * (E - 1.0),
            Integrand::SinProd => 4.0 / (PI * PI),
            Integrand::Centered => 0.0,
        }
    }
}

impl fmt::Display for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Integrand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.id() == s)
            .ok_or_else(|| Error::UnknownIntegrand(s.to_string()))
    }
}

/// `(1/N) Σ f(z)` and its signed error against the exact integral.
pub fn qmc_integrate(ps: &PointSet, f: Integrand) -> (f64, f64) {
    let den = ps.denominator() as f64;
    let sum: f64 = ps
        .points()
        .iter()
        .map(|p| f.eval(p.x as f64 / den, p.y as f64 / den))
        .sum();
    let estimate = sum / ps.len() as f64;
    (estimate, estimate - f.exact())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QmcRow {
    pub n: u32,
    #[serde(rename = "N")]
    pub count: u64,
    pub estimate: f64,
    pub exact: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QmcReport {
    pub integrand: Integrand,
    pub rows: Vec<QmcRow>,
}

impl QmcReport {
    /// Rows as `n,N,estimate,exact,error`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in &self.rows {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn qmc_series(
    b: u32,
    f: Integrand,
    ns: RangeInclusive<u32>,
    rule: PatternRule,
) -> Result<QmcReport> {
    if ns.is_empty() {
        return Err(Error::InvalidParameter("empty range of n".into()));
    }
    let mut rows = Vec::new();
    for n in ns {
        let ps = generate(b, n, &rule.pattern(n as usize)?)?;
        let (estimate, error) = qmc_integrate(&ps, f);
        rows.push(QmcRow {
            n,
            count: ps.len() as u64,
            estimate,
            exact: f.exact(),
            error,
        });
    }
    Ok(QmcReport { integrand: f, rows })
}

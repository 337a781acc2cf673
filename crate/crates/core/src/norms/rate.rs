use std::io::Write;
use std::ops::RangeInclusive;

use serde::Serialize;

use super::{besov_quasi_norm_with, NormParams};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hammersley::{generate_with, PatternRule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRow {
    pub n: u32,
    #[serde(rename = "N")]
    pub count: u64,
    pub norm: f64,
    pub reference: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub b: u32,
    pub rule: PatternRule,
    pub rows: Vec<RateRow>,
}

impl RateReport {
    /// `max ratio / min ratio` over the rows.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
                (lo.min(r.ratio), hi.max(r.ratio))
            });
        hi / lo
    }

    /// Rows as `n,N,norm,reference,ratio`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in &self.rows {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `b^{n(r−1)} n^{1/q}`.
pub fn reference(b: u32, n: u32, r: f64, q: f64) -> f64 {
    (b as f64).powf(n as f64 * (r - 1.0)) * (n as f64).powf(1.0 / q)
}

/// Quasi-norm of `R_n` for each `n`, truncated at `J = n + 4`, against the
/// reference rate.
pub fn rate_report(
    b: u32,
    r: f64,
    p: f64,
    q: f64,
    ns: RangeInclusive<u32>,
    rule: PatternRule,
) -> Result<RateReport> {
    rate_report_with(b, r, p, q, ns, rule, Exec::default())
}

pub fn rate_report_with(
    b: u32,
    r: f64,
    p: f64,
    q: f64,
    ns: RangeInclusive<u32>,
    rule: PatternRule,
    exec: Exec,
) -> Result<RateReport> {
    if ns.is_empty() {
        return Err(Error::InvalidParameter("empty range of n".into()));
    }
    NormParams::new(p, q, r, 0)?.check_rate_band()?;
    let mut rows = Vec::new();
    for n in ns {
        let params = NormParams::new(p, q, r, n + 4)?;
        let ps = generate_with(b, n, &rule.pattern(n as usize)?, exec)?;
        let norm = besov_quasi_norm_with(&ps, &params, exec)?.value;
        let reference = reference(b, n, r, q);
        rows.push(RateRow {
            n,
            count: ps.len() as u64,
            norm,
            reference,
            ratio: norm / reference,
        });
    }
    Ok(RateReport { b, rule, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_rows_and_csv() {
        let rep = rate_report(2, 0.0, 2.0, 2.0, 2..=5, PatternRule::Balanced).unwrap();
        assert_eq!(rep.rows.len(), 4);
        for row in &rep.rows {
            assert!(row.reference > 0.0);
            assert_eq!(row.ratio, row.norm / row.reference);
            assert_eq!(row.count, 1 << row.n);
        }
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,N,norm,reference,ratio\n2,4,"));
    }

    #[test]
    fn rejects_bad_band_and_empty_range() {
        assert!(rate_report(2, -0.1, 2.0, 2.0, 2..=3, PatternRule::Balanced).is_err());
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 3..=2;
        assert!(rate_report(2, 0.0, 2.0, 2.0, empty, PatternRule::Balanced).is_err());
    }
}

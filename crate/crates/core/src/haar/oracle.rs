//! Haar coefficients of the discrepancy function by direct integration.
//!
//! On a child box `J1 × J2` the integral of `1_{C_z}` is the product of the
//! overlaps `|(z_i, 1) ∩ J_i|`, so every coefficient factors per axis:
//! `μ = (1/N) Σ_z A_1(z_1) A_2(z_2) − V_1 V_2` with
//! `A(z) = Σ_k ζ^{kℓ} |(z, 1) ∩ J^k|` and `V = Σ_k ζ^{kℓ} ∫_{J^k} x dx`.
//! None of the closed forms in the sibling modules are used here.

use std::sync::{Arc, OnceLock};

use malachite_base::num::arithmetic::traits::{Ceiling, Floor};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::conversion::traits::SaturatingFrom;

use super::basis::{exact_basis, Basis};
use super::{AxisIndex, HaarIndex};
use crate::error::Result;
use crate::hammersley::PointSet;
use crate::numeric::{Backend, CycloValue, Rational};

const MAX_SLOTS: u64 = 1 << 22;

/// Per-axis integrals over a window of grid coordinates.
struct AxisData<V> {
    /// first grid numerator of the window
    start: u64,
    /// `A(X / bⁿ)` for each `X` in the window
    values: Vec<V>,
    nonzero: Vec<bool>,
    /// `A` below the window, where `(z, 1)` covers the whole support
    full: V,
    full_nonzero: bool,
    volume: V,
}

impl<V> AxisData<V> {
    fn end(&self) -> u64 {
        self.start + self.values.len() as u64
    }

    fn get(&self, x: u64) -> Option<&V> {
        if x < self.start || x >= self.end() {
            return None;
        }
        let i = (x - self.start) as usize;
        self.nonzero[i].then(|| &self.values[i])
    }
}

/// Child intervals `[lo_k, hi_k)` of one axis.
fn children(basis: &Basis<impl Backend>, ax: AxisIndex) -> Vec<(Rational, Rational)> {
    if ax.j < 0 {
        return vec![(Rational::ZERO, Rational::ONE)];
    }
    let w = basis.pow(-(ax.j as i64) - 1);
    let lo = Rational::from(ax.m) * basis.pow(-(ax.j as i64));
    (0..basis.base() as u64)
        .map(|k| {
            let a = &lo + Rational::from(k) * &w;
            let c = &a + &w;
            (a, c)
        })
        .collect()
}

fn overlap_sum<B: Backend>(
    basis: &Basis<B>,
    ax: AxisIndex,
    kids: &[(Rational, Rational)],
    z: &Rational,
) -> B::Value {
    let bk = basis.backend();
    let mut acc = bk.zero();
    for (k, (lo, hi)) in kids.iter().enumerate() {
        let from = if z > lo { z } else { lo };
        if from < hi {
            let len = hi - from;
            acc = bk.add(&acc, &bk.scale(basis.zeta(k as u64 * ax.l as u64), &len));
        }
    }
    acc
}

fn build_axis<B: Backend>(basis: &Basis<B>, ax: AxisIndex, den: u64) -> AxisData<B::Value> {
    let bk = basis.backend();
    let kids = children(basis, ax);
    let lo = &kids[0].0;
    let hi = &kids[kids.len() - 1].1;
    let big = Rational::from(den);
    let start = u64::saturating_from(&(lo * &big).floor()).min(den);
    let stop = u64::saturating_from(&(hi * &big).ceiling()).min(den - 1);
    let dinv = Rational::from_unsigneds(1, den);
    let mut values = Vec::new();
    let mut nonzero = Vec::new();
    for x in start..=stop {
        let v = overlap_sum(basis, ax, &kids, &(Rational::from(x) * &dinv));
        nonzero.push(!bk.is_zero(&v));
        values.push(v);
    }
    let full = overlap_sum(basis, ax, &kids, &Rational::ZERO);
    let mut volume = bk.zero();
    for (k, (a, c)) in kids.iter().enumerate() {
        let integral = (c * c - a * a) / Rational::from(2);
        volume = bk.add(
            &volume,
            &bk.scale(basis.zeta(k as u64 * ax.l as u64), &integral),
        );
    }
    AxisData {
        start,
        values,
        nonzero,
        full_nonzero: !bk.is_zero(&full),
        full,
        volume,
    }
}

/// Memoized per-axis integrals for one point set, shared by all indices up to
/// a level cap. Safe to use from several threads.
pub struct OracleCache<'a, B: Backend> {
    basis: Arc<Basis<B>>,
    ps: &'a PointSet,
    jmax: i32,
    slots: Vec<OnceLock<AxisData<B::Value>>>,
}

impl<'a, B: Backend> OracleCache<'a, B> {
    pub fn new(basis: Arc<Basis<B>>, ps: &'a PointSet, jmax: i32) -> Self {
        let b = ps.base() as u64;
        let slots = match b.checked_pow((jmax + 1).max(0) as u32) {
            Some(count) if count <= MAX_SLOTS && jmax >= -1 => {
                (0..count).map(|_| OnceLock::new()).collect()
            }
            _ => Vec::new(),
        };
        Self {
            basis,
            ps,
            jmax,
            slots,
        }
    }

    fn slot(&self, ax: AxisIndex) -> Option<usize> {
        if ax.j > self.jmax || self.slots.is_empty() {
            return None;
        }
        if ax.j < 0 {
            return Some(0);
        }
        let b = self.basis.base() as u64;
        Some((b.pow(ax.j as u32) + ax.m * (b - 1) + ax.l as u64 - 1) as usize)
    }

    fn with_axis<R>(&self, ax: AxisIndex, f: impl FnOnce(&AxisData<B::Value>) -> R) -> R {
        match self.slot(ax) {
            Some(i) => f(
                self.slots[i].get_or_init(|| build_axis(&self.basis, ax, self.ps.denominator()))
            ),
            None => f(&build_axis(&self.basis, ax, self.ps.denominator())),
        }
    }

    pub fn coeff(&self, idx: &HaarIndex) -> B::Value {
        self.with_axis(idx.axis(0), |a1| {
            self.with_axis(idx.axis(1), |a2| self.combine(a1, a2))
        })
    }

    fn combine(&self, a1: &AxisData<B::Value>, a2: &AxisData<B::Value>) -> B::Value {
        let bk = self.basis.backend();
        let ps = self.ps;
        let mut sum = bk.zero();
        // both coordinates inside their windows
        if a1.values.len() <= a2.values.len() {
            for &i in ps.indices_x_range(a1.start, a1.end()) {
                let p = ps.point(i as usize);
                if let (Some(u), Some(v)) = (a1.get(p.x), a2.get(p.y)) {
                    sum = bk.add(&sum, &bk.mul(u, v));
                }
            }
        } else {
            for &i in ps.indices_y_range(a2.start, a2.end()) {
                let p = ps.point(i as usize);
                if let (Some(u), Some(v)) = (a1.get(p.x), a2.get(p.y)) {
                    sum = bk.add(&sum, &bk.mul(u, v));
                }
            }
        }
        // one coordinate below its window
        if a2.full_nonzero {
            let mut part = bk.zero();
            for &i in ps.indices_x_range(a1.start, a1.end()) {
                let p = ps.point(i as usize);
                if p.y < a2.start {
                    if let Some(u) = a1.get(p.x) {
                        part = bk.add(&part, u);
                    }
                }
            }
            sum = bk.add(&sum, &bk.mul(&part, &a2.full));
        }
        if a1.full_nonzero {
            let mut part = bk.zero();
            for &i in ps.indices_y_range(a2.start, a2.end()) {
                let p = ps.point(i as usize);
                if p.x < a1.start {
                    if let Some(v) = a2.get(p.y) {
                        part = bk.add(&part, v);
                    }
                }
            }
            sum = bk.add(&sum, &bk.mul(&part, &a1.full));
        }
        if a1.full_nonzero && a2.full_nonzero {
            let count = ps
                .indices_x_range(0, a1.start)
                .iter()
                .filter(|&&i| ps.point(i as usize).y < a2.start)
                .count();
            let both = bk.mul(&a1.full, &a2.full);
            sum = bk.add(&sum, &bk.scale(&both, &Rational::from(count as u64)));
        }
        let volume = bk.mul(&a1.volume, &a2.volume);
        if bk.is_zero(&sum) {
            return bk.neg(&volume);
        }
        let mean = bk.scale(&sum, &Rational::from_unsigneds(1, ps.denominator()));
        bk.sub(&mean, &volume)
    }
}

pub fn coeff_oracle(ps: &PointSet, idx: &HaarIndex) -> Result<CycloValue> {
    let basis = exact_basis(ps.base())?;
    basis.check_index(idx)?;
    // no memo for a single query
    Ok(OracleCache::new(basis, ps, -2).coeff(idx))
}

//! Per-level aggregates of coefficient magnitudes.
//!
//! Levels whose coefficients do not depend on the box (coarse and fine
//! regimes) are summed from closed forms with a multiplicity. Levels where
//! both axes are below `n` are summed box by box, visiting only boxes that
//! hold a point strictly inside them; every other box has the volume
//! coefficient.

use num_complex::Complex64;

use crate::exec::Exec;
use crate::haar::{chord, classify_levels, AxisIndex, Basis, HaarIndex, Regime};
use crate::hammersley::PointSet;
use crate::numeric::{cyclotomic_poly, Float};

/// `Σ mult·|μ|^p` and `max |μ|` over all `(m, ℓ)` of one level pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSum {
    pub j1: i32,
    pub j2: i32,
    pub sum_p: f64,
    pub max: f64,
    /// number of coefficients that differ from the volume coefficient
    pub special: u64,
}

impl LevelSum {
    fn new(j1: i32, j2: i32) -> Self {
        Self {
            j1,
            j2,
            sum_p: 0.0,
            max: 0.0,
            special: 0,
        }
    }

    fn add(&mut self, p: f64, mag: f64, mult: f64) {
        if mult <= 0.0 {
            return;
        }
        if p.is_finite() {
            self.sum_p += mult * mag.powf(p);
        }
        self.max = self.max.max(mag);
    }
}

fn ells(b: u32, j: i32) -> std::ops::Range<u32> {
    if j < 0 {
        1..2
    } else {
        1..b
    }
}

/// All level pairs `-1 ≤ j1, j2 ≤ jmax` in row-major order.
pub fn level_pairs(jmax: i32) -> Vec<(i32, i32)> {
    (-1..=jmax)
        .flat_map(|j1| (-1..=jmax).map(move |j2| (j1, j2)))
        .collect()
}

pub fn level_sums(
    basis: &Basis<Float>,
    ps: &PointSet,
    jmax: i32,
    p: f64,
    exec: Exec,
) -> Vec<LevelSum> {
    let pairs = level_pairs(jmax);
    exec.map_slice(&pairs, |&(j1, j2)| level_sum(basis, ps, j1, j2, p))
}

pub fn level_sum(basis: &Basis<Float>, ps: &PointSet, j1: i32, j2: i32, p: f64) -> LevelSum {
    let b = ps.base();
    let n = ps.n() as i32;
    let bf = b as f64;
    let mut out = LevelSum::new(j1, j2);
    match classify_levels(j1, j2, ps.n()) {
        Regime::Corner => {
            let v = basis.fast(ps, &HaarIndex::corner());
            out.add(p, v.norm(), 1.0);
            out.special = 1;
        }
        Regime::Coarse => {
            let mult = bf.powi(j1 + j2);
            for l1 in 1..b {
                for l2 in 1..b {
                    out.add(p, bf.powi(-2 * n) / (chord(b, l1) * chord(b, l2)), mult);
                }
            }
            out.special = mult as u64 * (b as u64 - 1).pow(2);
        }
        Regime::FineBoth => {
            let mult = bf.powi(j1 + j2);
            for l1 in 1..b {
                for l2 in 1..b {
                    out.add(
                        p,
                        bf.powi(-2 * (j1 + j2) - 2) / (chord(b, l1) * chord(b, l2)),
                        mult,
                    );
                }
            }
        }
        Regime::RowFine | Regime::ColFine => {
            let j = j1.max(j2);
            let mult = bf.powi(j);
            for l in 1..b {
                out.add(p, 0.5 * bf.powi(-2 * j - 1) / chord(b, l), mult);
            }
        }
        Regime::Critical => by_box(basis, ps, j1, j2, p, &mut out),
        Regime::RowBoundary => by_strip(basis, ps, j1, true, p, &mut out),
        Regime::ColBoundary => by_strip(basis, ps, j2, false, p, &mut out),
    }
    out
}

/// Grid width of one box on an axis, and the number of boxes.
fn axis_grid(b: u64, n: u32, j: i32) -> (u64, u64) {
    if j < 0 {
        (b.pow(n), 1)
    } else {
        (b.pow(n - j as u32), b.pow(j as u32))
    }
}

/// Indicator coefficient factors of one axis for all `ℓ`, at grid numerator
/// `x` whose offset inside its box is `r > 0`.
fn axis_factors(basis: &Basis<Float>, n: u32, j: i32, x: u64, r: u64, out: &mut Vec<Complex64>) {
    out.clear();
    let b = basis.base() as u64;
    if j < 0 {
        let den = b.pow(n) as f64;
        out.push(Complex64::new(1.0 - x as f64 / den, 0.0));
        return;
    }
    let w = b.pow(n - j as u32 - 1);
    let k = r / w;
    let head = ((k + 1) * w - r) as f64 / w as f64;
    let scale = basis.pow_f64(-(j as i64) - 1);
    for l in 1..b as u32 {
        let v = basis.zeta(k * l as u64) * head + basis.tail_sum(l, k as u32);
        out.push(v * scale);
    }
}

fn by_box(basis: &Basis<Float>, ps: &PointSet, j1: i32, j2: i32, p: f64, out: &mut LevelSum) {
    let b = ps.base();
    let n = ps.n();
    let (w1, boxes1) = axis_grid(b as u64, n, j1);
    let (w2, boxes2) = axis_grid(b as u64, n, j2);
    let ls1: Vec<u32> = ells(b, j1).collect();
    let ls2: Vec<u32> = ells(b, j2).collect();
    let vol: Vec<Complex64> = ls1
        .iter()
        .flat_map(|&l1| {
            ls2.iter().map(move |&l2| {
                basis.coeff_volume(&HaarIndex::from_axes(
                    AxisIndex { j: j1, m: 0, l: l1 },
                    AxisIndex { j: j2, m: 0, l: l2 },
                ))
            })
        })
        .collect();

    let mut hits: Vec<(u64, u32)> = Vec::new();
    for (i, pt) in ps.points().iter().enumerate() {
        let (m1, r1) = (pt.x / w1, pt.x % w1);
        let (m2, r2) = (pt.y / w2, pt.y % w2);
        // a point on the lower edge of a finite box integrates every child equally
        if (j1 >= 0 && r1 == 0) || (j2 >= 0 && r2 == 0) {
            continue;
        }
        hits.push((m1 * boxes2 + m2, i as u32));
    }
    hits.sort_unstable();

    let inv_n = 1.0 / ps.len() as f64;
    let mut f1 = Vec::new();
    let mut f2 = Vec::new();
    let mut acc = vec![Complex64::new(0.0, 0.0); vol.len()];
    let mut touched = 0u64;
    let mut start = 0;
    while start < hits.len() {
        let key = hits[start].0;
        let mut end = start;
        acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
        while end < hits.len() && hits[end].0 == key {
            let pt = ps.point(hits[end].1 as usize);
            axis_factors(basis, n, j1, pt.x, pt.x % w1, &mut f1);
            axis_factors(basis, n, j2, pt.y, pt.y % w2, &mut f2);
            for (a, u) in f1.iter().enumerate() {
                for (c, v) in f2.iter().enumerate() {
                    acc[a * f2.len() + c] += u * v;
                }
            }
            end += 1;
        }
        for (a, v) in acc.iter().zip(&vol) {
            out.add(p, (a * inv_n - v).norm(), 1.0);
        }
        touched += 1;
        start = end;
    }
    out.special = touched * vol.len() as u64;
    let rest = (boxes1 as f64) * (boxes2 as f64) - touched as f64;
    for v in &vol {
        out.add(p, v.norm(), rest);
    }
}

/// Boundary levels, where the other axis is the coarsest. A strip holds
/// `b^{n-j}` points whose sum nearly cancels the volume term, so the strip sum
/// is kept in `Z[ζ]` scaled by `2 b^{3n}` and only the reduced result is
/// converted to floating point.
fn by_strip(basis: &Basis<Float>, ps: &PointSet, j: i32, row: bool, p: f64, out: &mut LevelSum) {
    let b = ps.base() as u64;
    let bi = b as usize;
    let n = ps.n();
    let den = ps.denominator();
    let w = b.pow(n - j as u32 - 1);
    let strips = b.pow(j as u32) as usize;
    let phi = cyclotomic_poly(b as u32).expect("base validated by the point set");
    let deg = phi.len() - 1;

    // sums[(strip, ℓ)][e]: coefficient of ζ^e in b^{2n} Σ factor(u)·(1 − v)
    let mut sums = vec![0i128; strips * (bi - 1) * bi];
    let mut touched = vec![false; strips];
    for pt in ps.points() {
        let (u, v) = if row { (pt.x, pt.y) } else { (pt.y, pt.x) };
        let (m, r) = ((u / (w * b)) as usize, u % (w * b));
        if r == 0 {
            continue;
        }
        touched[m] = true;
        let k = r / w;
        let weight = (den - v) as i128;
        let head = ((k + 1) * w - r) as i128 * weight;
        let tail = w as i128 * weight;
        for l in 1..b {
            let row = &mut sums[(m * (bi - 1) + l as usize - 1) * bi..][..bi];
            row[(k * l % b) as usize] += head;
            for i in k + 1..b {
                row[(i * l % b) as usize] += tail;
            }
        }
    }

    // 2 b^{3n}·volume = b^{3n-2j-2} Σ_k k ζ^{ℓk}
    let vscale = (b as i128).pow(3 * n - 2 * j as u32 - 2);
    let norm = 2.0 * (b as f64).powi(3 * n as i32);
    let mut c = vec![0i128; bi];
    for m in 0..strips {
        for l in 1..b {
            let row = &sums[(m * (bi - 1) + l as usize - 1) * bi..][..bi];
            for (e, ce) in c.iter_mut().enumerate() {
                *ce = 2 * row[e];
            }
            for k in 1..b {
                c[(k * l % b) as usize] -= k as i128 * vscale;
            }
            for d in (deg..bi).rev() {
                let top = c[d];
                for (i, &f) in phi.iter().enumerate() {
                    c[d - deg + i] -= top * f as i128;
                }
            }
            let z: Complex64 = c[..deg]
                .iter()
                .enumerate()
                .map(|(e, &ce)| basis.zeta(e as u64) * ce as f64)
                .sum();
            out.add(p, z.norm() / norm, 1.0);
        }
    }
    out.special = touched.iter().filter(|&&t| t).count() as u64 * (b - 1);
}

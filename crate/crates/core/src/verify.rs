//! Invariant suites run by `hambesov verify`.
//!
//! Each suite checks one family of identities at a reduced scale (`quick`)
//! or at the full scale of the acceptance criteria. Randomized choices come
//! from a seeded ChaCha stream, so a run is reproducible from its seed.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::digitsums::{
    corner_coefficient, cross_sum, cross_sum_brute, x_sum, x_sum_brute, y_sum, y_sum_brute, z_sum,
    z_sum_brute,
};
use crate::discrepancy::{eval_discrepancy, l2_squared_exact, EvalPoint};
use crate::error::Result;
use crate::haar::{
    coeff_bound, enumerate_indices, exact_basis, float_basis, haar_value, AxisIndex, HaarIndex,
    OracleCache,
};
use crate::hammersley::{generate, verify_net, PatternRule, PointSet, SignPattern};
use crate::norms::{
    besov_quasi_norm, parseval_l2, qmc_integrate, rate_report, tail_constant, tail_constant_closed,
    Integrand, NormParams,
};
use crate::numeric::{pow_int, to_f64, Backend, CycloValue, Rational};

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub quick: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// fails for a documented reason and does not affect the exit status
    KnownFail,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
    pub seconds: f64,
}

type Suite = fn(&VerifyConfig, &mut ChaCha8Rng) -> Result<(Outcome, String)>;

const SUITES: &[(&str, Suite)] = &[
    ("net", net),
    ("coordinates", coordinates),
    ("discrepancy", discrepancy),
    ("orthonormality", orthonormality),
    ("triple_agreement", triple_agreement),
    ("coarse_m_independence", coarse_m_independence),
    ("digit_sums", digit_sums),
    ("corner", corner),
    ("magnitudes", magnitudes),
    ("parseval", parseval),
    ("tail_constant", tail_constant_suite),
    ("truncation", truncation),
    ("besov_vs_parseval", besov_vs_parseval),
    ("rate_balanced", rate_balanced),
    ("rate_identity", rate_identity),
    ("qmc", qmc),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs every suite in order. Errors inside a suite count as failures.
pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    SUITES
        .iter()
        .enumerate()
        .map(|(k, (name, suite))| {
            // one stream per suite, so suites do not shift each other's draws
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let start = Instant::now();
            let (outcome, detail) = match suite(cfg, &mut rng) {
                Ok(v) => v,
                Err(e) => (Outcome::Fail, format!("error: {e}")),
            };
            SuiteReport {
                name,
                outcome,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn verdict(ok: bool, detail: String) -> Result<(Outcome, String)> {
    Ok((if ok { Outcome::Pass } else { Outcome::Fail }, detail))
}

fn random_sets(b: u32, n: u32, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<PointSet>> {
    (0..count)
        .map(|_| generate(b, n, &SignPattern::random(n as usize, rng)?))
        .collect()
}

fn net(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let (nmax, reps) = if cfg.quick { (4, 3) } else { (6, 10) };
    let mut checked = 0;
    for b in [2, 3, 5] {
        for n in 1..=nmax {
            for ps in random_sets(b, n, reps, rng)? {
                for j1 in 0..=n {
                    for j2 in 0..=n - j1 {
                        if !verify_net(&ps, j1, j2)? {
                            return verdict(
                                false,
                                format!("b={b} n={n} {} at ({j1},{j2})", ps.pattern()),
                            );
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    verdict(true, format!("{checked} level splits"))
}

fn coordinates(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let nmax = if cfg.quick { 4 } else { 6 };
    for b in [2, 3, 5] {
        for n in 1..=nmax {
            let pattern = SignPattern::random(n as usize, rng)?;
            let ps = generate(b, n, &pattern)?;
            let mut xs: Vec<u64> = ps.points().iter().map(|p| p.x).collect();
            let mut ys: Vec<u64> = ps.points().iter().map(|p| p.y).collect();
            xs.sort_unstable();
            ys.sort_unstable();
            let full: Vec<u64> = (0..ps.denominator()).collect();
            if xs != full || ys != full || generate(b, n, &pattern)?.points() != ps.points() {
                return verdict(false, format!("b={b} n={n} {pattern}"));
            }
        }
    }
    verdict(true, "coordinates are permutations of the grid".into())
}

fn discrepancy(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let (nmax, samples) = if cfg.quick { (3, 4_000) } else { (6, 100_000) };
    let mut worst: f64 = 0.0;
    for b in [2, 3] {
        for n in 1..=nmax {
            let ps = generate(b, n, &SignPattern::random(n as usize, rng)?)?;
            let exact = l2_squared_exact(&ps)?;
            let one = EvalPoint::new(Rational::from(1), Rational::from(1))?;
            if exact < 0 || eval_discrepancy(&ps, &one) != 0 {
                return verdict(false, format!("b={b} n={n}: sign or corner value"));
            }
            // 2^-30 resolution keeps the sample points off the point grid almost surely
            let res = 1i64 << 30;
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..samples {
                let p = EvalPoint::from_ratios(
                    rng.gen_range(0..=res),
                    res,
                    rng.gen_range(0..=res),
                    res,
                )?;
                let d = to_f64(&eval_discrepancy(&ps, &p));
                sum += d * d;
                sum_sq += d.powi(4);
            }
            let mean = sum / samples as f64;
            let se = ((sum_sq / samples as f64 - mean * mean) / samples as f64).sqrt();
            let z = (mean - to_f64(&exact)).abs() / se;
            worst = worst.max(z);
            if z > 3.0 {
                return verdict(
                    false,
                    format!("b={b} n={n}: Monte Carlo off by {z:.2} standard errors"),
                );
            }
        }
    }
    verdict(
        true,
        format!("largest Monte Carlo deviation {worst:.2} standard errors"),
    )
}

/// `∫ h_a conj(h_c)` on one axis, summed over cells fine enough that both
/// functions are constant on each.
fn axis_inner(b: u32, a: AxisIndex, c: AxisIndex) -> Result<CycloValue> {
    let level = a.j.max(c.j) + 1;
    let cells = (b as u64).pow(level as u32);
    let mut acc = exact_basis(b)?.backend().zero();
    let width = pow_int(b as u64, -(level as i64));
    for k in 0..cells {
        let mid = (Rational::from(k) + Rational::from_signeds(1, 2)) * &width;
        let p = EvalPoint::new(mid, Rational::from(0))?;
        let ha = haar_value(b, &HaarIndex::from_axes(a, AxisIndex::COARSEST), &p)?;
        let hc = haar_value(b, &HaarIndex::from_axes(c, AxisIndex::COARSEST), &p)?;
        acc = &acc + &(&ha * &hc.conj());
    }
    Ok(acc.scale(&width))
}

/// Inner product `⟨h_a, h_c⟩` with conjugation on the second argument.
pub fn haar_inner_product(b: u32, a: &HaarIndex, c: &HaarIndex) -> Result<CycloValue> {
    Ok(&axis_inner(b, a.axis(0), c.axis(0))? * &axis_inner(b, a.axis(1), c.axis(1))?)
}

fn random_axis(b: u32, jmax: i32, rng: &mut ChaCha8Rng) -> AxisIndex {
    let j = rng.gen_range(-1..=jmax);
    if j < 0 {
        return AxisIndex::COARSEST;
    }
    AxisIndex {
        j,
        m: rng.gen_range(0..(b as u64).pow(j as u32)),
        l: rng.gen_range(1..b),
    }
}

fn orthonormality(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let pairs = if cfg.quick { 60 } else { 200 };
    for b in [2, 3] {
        for k in 0..pairs {
            let a = HaarIndex::from_axes(random_axis(b, 2, rng), random_axis(b, 2, rng));
            // a third of the pairs repeat the index, a third share the boxes
            let c = match k % 3 {
                0 => a,
                1 => HaarIndex {
                    l1: if a.j1 >= 0 { rng.gen_range(1..b) } else { 1 },
                    l2: if a.j2 >= 0 { rng.gen_range(1..b) } else { 1 },
                    ..a
                },
                _ => HaarIndex::from_axes(random_axis(b, 2, rng), random_axis(b, 2, rng)),
            };
            let v = haar_inner_product(b, &a, &c)?;
            let norm_sq = pow_int(b as u64, -(a.j1.max(0) as i64) - a.j2.max(0) as i64);
            let expected = if a == c { norm_sq } else { Rational::from(0) };
            if v.as_rational() != Some(expected) {
                return verdict(false, format!("b={b}: <{a:?}, {c:?}> = {v}"));
            }
        }
    }
    verdict(true, format!("{} index pairs", 2 * pairs))
}

fn triple_agreement(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let (nmax, reps) = if cfg.quick { (2, 2) } else { (4, 5) };
    let mut count = 0u64;
    for b in [2, 3] {
        let basis = exact_basis(b)?;
        for n in 1..=nmax {
            let jmax = n as i32 + 2;
            let indices = enumerate_indices(b, jmax);
            for ps in random_sets(b, n, reps, rng)? {
                let oracle = OracleCache::new(basis.clone(), &ps, jmax);
                for idx in &indices {
                    let fast = basis.fast(&ps, idx);
                    if fast != basis.pointwise(&ps, idx) || fast != oracle.coeff(idx) {
                        return verdict(false, format!("b={b} n={n} {} at {idx:?}", ps.pattern()));
                    }
                }
                count += indices.len() as u64;
            }
        }
    }
    verdict(true, format!("{count} coefficients agree exactly"))
}

fn coarse_m_independence(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let nmax = if cfg.quick { 4 } else { 6 };
    for b in [2, 3] {
        let basis = exact_basis(b)?;
        for n in 3..=nmax {
            let ps = generate(b, n, &SignPattern::random(n as usize, rng)?)?;
            for j1 in 0..n as i32 {
                for j2 in 0..n as i32 - 1 - j1 {
                    for (l1, l2) in [(1, 1), (b - 1, 1)] {
                        let first =
                            basis.pointwise(&ps, &HaarIndex::new(b, (j1, j2), (0, 0), (l1, l2))?);
                        for _ in 0..4 {
                            let m1 = rng.gen_range(0..(b as u64).pow(j1 as u32));
                            let m2 = rng.gen_range(0..(b as u64).pow(j2 as u32));
                            let idx = HaarIndex::new(b, (j1, j2), (m1, m2), (l1, l2))?;
                            if basis.pointwise(&ps, &idx) != first {
                                return verdict(false, format!("b={b} n={n} {idx:?}"));
                            }
                        }
                    }
                }
            }
        }
    }
    verdict(true, "coarse coefficients do not depend on the box".into())
}

fn digit_sums(cfg: &VerifyConfig, _rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let nmax = if cfg.quick { 3 } else { 4 };
    for b in [2, 3, 4] {
        for n in 1..=nmax {
            if x_sum_brute(b, n)? != x_sum(b, n)
                || y_sum_brute(b, n)? != y_sum(b, n)
                || z_sum_brute(b, n)? != z_sum(b, n)
            {
                return verdict(false, format!("x, y or z at b={b} n={n}"));
            }
        }
    }
    let mut patterns = 0;
    for b in [2, 3] {
        for n in 1..=nmax {
            for p in SignPattern::all(n as usize) {
                if cross_sum_brute(b, &p)? != cross_sum(b, n, p.a_count() as u32)? {
                    return verdict(false, format!("cross sum at b={b} {p}"));
                }
                patterns += 1;
            }
        }
    }
    verdict(
        true,
        format!("closed forms match enumeration; {patterns} patterns"),
    )
}

fn corner(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let (nmax, reps) = if cfg.quick { (4, 4) } else { (6, 20) };
    for b in 2..=5 {
        let basis = exact_basis(b)?;
        for n in 1..=nmax {
            for ps in random_sets(b, n, reps, rng)? {
                let fast = basis.fast(&ps, &HaarIndex::corner());
                if fast.as_rational() != Some(corner_coefficient(&ps)) {
                    return verdict(false, format!("b={b} n={n} {}", ps.pattern()));
                }
            }
        }
    }
    verdict(
        true,
        "corner sums reproduce the coarsest coefficient".into(),
    )
}

/// Largest `|μ| / coeff_bound` over all indices with `max(j1, j2) ≤ jmax`,
/// and the largest count per level of coefficients off the volume magnitude
/// on levels `j1 + j2 ≥ n − 1`, `0 ≤ j1, j2 ≤ n`.
pub fn magnitude_audit(ps: &PointSet, jmax: i32) -> Result<(f64, u64)> {
    let b = ps.base();
    let n = ps.n() as i32;
    let basis = float_basis(b)?;
    let mut ratio: f64 = 0.0;
    let mut counts = std::collections::BTreeMap::new();
    for idx in enumerate_indices(b, jmax) {
        let mag = basis.fast(ps, &idx).norm();
        let bound = coeff_bound(&idx, ps)?;
        ratio = ratio.max(mag / bound);
        if idx.j1 >= 0 && idx.j2 >= 0 && idx.j1 <= n && idx.j2 <= n && idx.j1 + idx.j2 >= n - 1 {
            let volume = basis.coeff_volume(&idx).norm();
            let entry = counts.entry((idx.j1, idx.j2)).or_insert(0u64);
            if (mag - volume).abs() > 1e-12 * volume {
                *entry += 1;
            }
        }
    }
    Ok((ratio, counts.values().copied().max().unwrap_or(0)))
}

fn magnitudes(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let n = if cfg.quick { 3 } else { 4 };
    let mut c: f64 = 0.0;
    let mut deviating = 0;
    for ps in random_sets(2, n, 4, rng)? {
        let (r, d) = magnitude_audit(&ps, n as i32 + 2)?;
        c = c.max(r);
        deviating = deviating.max(d);
    }
    verdict(
        c <= 4.0 && deviating <= 1 << n,
        format!("measured constant {c:.4}; at most {deviating} deviating coefficients per level"),
    )
}

fn parseval(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let (nmax, reps) = if cfg.quick { (4, 2) } else { (8, 5) };
    let mut worst: f64 = 0.0;
    for b in [2, 3] {
        for n in 1..=nmax {
            for ps in random_sets(b, n, reps, rng)? {
                let exact = to_f64(&l2_squared_exact(&ps)?);
                let rel = (parseval_l2(&ps, n + 5, true)? - exact).abs() / exact;
                worst = worst.max(rel);
            }
        }
    }
    verdict(
        worst <= 1e-10,
        format!("largest relative deviation {worst:.2e}"),
    )
}

fn tail_constant_suite(_cfg: &VerifyConfig, _rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let worst = (2..=10)
        .map(|b| (tail_constant(b) - tail_constant_closed(b)).abs())
        .fold(0.0, f64::max);
    verdict(worst <= 1e-12, format!("largest deviation {worst:.2e}"))
}

fn truncation(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let nmax = if cfg.quick { 4 } else { 6 };
    let settings = [
        (2.0, 2.0, 0.0),
        (1.0, 2.0, 0.5),
        (3.0, 1.0, -0.3),
        (f64::INFINITY, 2.0, -0.5),
    ];
    for b in [2, 3] {
        for n in 2..=nmax {
            let ps = generate(b, n, &SignPattern::random(n as usize, rng)?)?;
            for &(p, q, r) in &settings {
                let lo = besov_quasi_norm(&ps, &NormParams::new(p, q, r, n + 1)?)?;
                let hi = besov_quasi_norm(&ps, &NormParams::new(p, q, r, n + 3)?)?;
                if hi.value < lo.value || lo.tail_bound < (hi.value - lo.value) * (1.0 - 1e-12) {
                    return verdict(
                        false,
                        format!("b={b} n={n} p={p} q={q} r={r}: {lo:?} then {hi:?}"),
                    );
                }
            }
        }
    }
    verdict(true, "tail bounds cover two extra levels".into())
}

fn besov_vs_parseval(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let nmax = if cfg.quick { 4 } else { 7 };
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for b in [2, 3] {
        for n in 1..=nmax {
            let ps = generate(b, n, &SignPattern::random(n as usize, rng)?)?;
            let besov = besov_quasi_norm(&ps, &NormParams::new(2.0, 2.0, 0.0, n + 3)?)?.value;
            let l2 = parseval_l2(&ps, n + 3, false)?.sqrt();
            let ratio = besov / l2;
            lo = lo.min(ratio * b as f64);
            hi = hi.max(ratio / b as f64);
        }
    }
    verdict(
        lo >= 1.0 && hi <= 1.0,
        format!("ratio times b at least {lo:.4}, ratio over b at most {hi:.4}"),
    )
}

fn rate_range(quick: bool) -> std::ops::RangeInclusive<u32> {
    if quick {
        6..=10
    } else {
        8..=14
    }
}

fn rate_balanced(cfg: &VerifyConfig, _rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let rep = rate_report(
        2,
        0.0,
        2.0,
        2.0,
        rate_range(cfg.quick),
        PatternRule::Balanced,
    )?;
    let spread = rep.spread();
    verdict(spread < 2.0, format!("max/min ratio {spread:.4}"))
}

/// Growth of the √n-normalized ratio under all-identity patterns, and the
/// spread of the n-normalized ratio.
pub fn identity_discriminator(ns: std::ops::RangeInclusive<u32>) -> Result<(bool, f64, f64)> {
    let rep = rate_report(2, 0.0, 2.0, 2.0, ns, PatternRule::AllIdentity)?;
    let ratios: Vec<f64> = rep.rows.iter().map(|r| r.ratio).collect();
    let monotone = ratios.windows(2).all(|w| w[1] > w[0]);
    let growth = ratios[ratios.len() - 1] / ratios[0] - 1.0;
    let linear: Vec<f64> = rep
        .rows
        .iter()
        .map(|r| r.norm / (2f64.powi(-(r.n as i32)) * r.n as f64))
        .collect();
    let spread = linear.iter().copied().fold(0.0, f64::max)
        / linear.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((monotone, growth, spread))
}

fn rate_identity(cfg: &VerifyConfig, _rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let (monotone, growth, spread) = identity_discriminator(rate_range(cfg.quick))?;
    let detail = format!(
        "ratio growth {:.1}% (monotone: {monotone}), n-normalized spread {spread:.4}",
        100.0 * growth
    );
    if !monotone || spread >= 2.0 {
        return verdict(false, detail);
    }
    // the n²/64 part of the squared norm is still small next to the linear part on this range
    if growth < 0.30 {
        return Ok((Outcome::KnownFail, detail + "; growth below 30%"));
    }
    verdict(true, detail)
}

fn qmc(_cfg: &VerifyConfig, _rng: &mut ChaCha8Rng) -> Result<(Outcome, String)> {
    let mut prev = f64::INFINITY;
    for n in 4..=14 {
        let ps = generate(2, n, &PatternRule::Balanced.pattern(n as usize)?)?;
        if qmc_integrate(&ps, Integrand::One).1 != 0.0 {
            return verdict(false, format!("constant integrand at n={n}"));
        }
        let err = qmc_integrate(&ps, Integrand::X1X2).1.abs();
        if err >= prev {
            return verdict(false, format!("x1x2 error did not shrink at n={n}"));
        }
        prev = err;
    }
    verdict(true, format!("x1x2 error at n=14: {prev:.3e}"))
}

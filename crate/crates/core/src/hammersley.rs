//! Generalized base-b Hammersley point sets.
//!
//! For digits `t_1 … t_n ∈ {0,…,b-1}` the point is
//! `x = t_n/b + t_{n-1}/b² + … + t_1/bⁿ` and `y = s_1(t_1)/b + … + s_n(t_n)/bⁿ`,
//! where each `s_i` is the identity or the reversal `t ↦ b-1-t`.
//! Coordinates are stored as integer numerators over the common denominator `bⁿ`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeric::Rational;

/// Largest supported point count.
pub const MAX_POINTS: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DigitMap {
    Identity,
    Reversal,
}

impl DigitMap {
    pub fn apply(self, b: u32, t: u32) -> u32 {
        match self {
            DigitMap::Identity => t,
            DigitMap::Reversal => b - 1 - t,
        }
    }

    /// The maps are involutions, so this is also the inverse.
    pub fn invert(self, b: u32, s: u32) -> u32 {
        self.apply(b, s)
    }

    pub fn symbol(self) -> char {
        match self {
            DigitMap::Identity => 'I',
            DigitMap::Reversal => 'R',
        }
    }
}

/// The per-digit maps `s_1 … s_n`, serialized as a string over `{I, R}` with
/// `s_1` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    maps: Vec<DigitMap>,
}

impl SignPattern {
    pub fn new(maps: Vec<DigitMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::PatternParse(String::new()));
        }
        Ok(Self { maps })
    }

    /// First `⌊n/2⌋` maps are identities, the rest reversals.
    pub fn balanced(n: usize) -> Result<Self> {
        let a = n / 2;
        Self::new(
            (0..n)
                .map(|i| {
                    if i < a {
                        DigitMap::Identity
                    } else {
                        DigitMap::Reversal
                    }
                })
                .collect(),
        )
    }

    pub fn all_identity(n: usize) -> Result<Self> {
        Self::new(vec![DigitMap::Identity; n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|_| {
                    if rng.gen::<bool>() {
                        DigitMap::Identity
                    } else {
                        DigitMap::Reversal
                    }
                })
                .collect(),
        )
    }

    /// Every pattern of length `n`, in binary counting order.
    pub fn all(n: usize) -> Vec<Self> {
        (0..1u64 << n)
            .map(|mask| Self {
                maps: (0..n)
                    .map(|i| {
                        if mask >> i & 1 == 0 {
                            DigitMap::Identity
                        } else {
                            DigitMap::Reversal
                        }
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[DigitMap] {
        &self.maps
    }

    /// `s_i` for `1 ≤ i ≤ n`.
    pub fn map(&self, i: usize) -> Result<DigitMap> {
        if i == 0 || i > self.maps.len() {
            return Err(Error::PatternIndex {
                index: i,
                len: self.maps.len(),
            });
        }
        Ok(self.maps[i - 1])
    }

    /// Number of identity maps.
    pub fn a_count(&self) -> usize {
        self.maps
            .iter()
            .filter(|m| **m == DigitMap::Identity)
            .count()
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let maps = s
            .trim()
            .chars()
            .map(|c| match c {
                'I' | 'i' => Ok(DigitMap::Identity),
                'R' | 'r' => Ok(DigitMap::Reversal),
                _ => Err(Error::PatternParse(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if maps.is_empty() {
            return Err(Error::PatternParse(s.to_string()));
        }
        Ok(Self { maps })
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.maps
            .iter()
            .try_for_each(|m| write!(f, "{}", m.symbol()))
    }
}

pub fn a_count(pattern: &SignPattern) -> usize {
    pattern.a_count()
}

pub fn balanced_pattern(n: usize) -> Result<SignPattern> {
    SignPattern::balanced(n)
}

/// How a pattern is chosen for each `n` in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternRule {
    Balanced,
    AllIdentity,
}

impl PatternRule {
    pub fn pattern(self, n: usize) -> Result<SignPattern> {
        match self {
            PatternRule::Balanced => SignPattern::balanced(n),
            PatternRule::AllIdentity => SignPattern::all_identity(n),
        }
    }
}

impl FromStr for PatternRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "balanced" => Ok(PatternRule::Balanced),
            "identity" | "all_identity" | "all-identity" => Ok(PatternRule::AllIdentity),
            other => Err(Error::InvalidParameter(format!(
                "pattern rule {other:?} (expected balanced or identity)"
            ))),
        }
    }
}

/// A point with coordinates `(x / bⁿ, y / bⁿ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridPoint {
    pub x: u64,
    pub y: u64,
}

#[derive(Debug, Clone)]
pub struct PointSet {
    base: u32,
    n: u32,
    pattern: SignPattern,
    den: u64,
    points: Vec<GridPoint>,
    // point indices sorted by x (resp. y) numerator; both axes are permutations
    by_x: Vec<u32>,
    by_y: Vec<u32>,
}

impl PointSet {
    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn pattern(&self) -> &SignPattern {
        &self.pattern
    }

    pub fn a_count(&self) -> usize {
        self.pattern.a_count()
    }

    /// `N = bⁿ`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The common denominator `bⁿ`.
    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> GridPoint {
        self.points[i]
    }

    pub fn coords(&self, i: usize) -> (Rational, Rational) {
        let p = self.points[i];
        (
            Rational::from_unsigneds(p.x, self.den),
            Rational::from_unsigneds(p.y, self.den),
        )
    }

    /// Index of the point whose x numerator is `x`.
    pub fn index_by_x(&self, x: u64) -> usize {
        self.by_x[x as usize] as usize
    }

    /// Index of the point whose y numerator is `y`.
    pub fn index_by_y(&self, y: u64) -> usize {
        self.by_y[y as usize] as usize
    }

    /// Indices of points with x numerator in `lo..hi`, ordered by x.
    pub fn indices_x_range(&self, lo: u64, hi: u64) -> &[u32] {
        &self.by_x[lo as usize..hi as usize]
    }

    /// Indices of points with y numerator in `lo..hi`, ordered by y.
    pub fn indices_y_range(&self, lo: u64, hi: u64) -> &[u32] {
        &self.by_y[lo as usize..hi as usize]
    }

    /// The digits `t_1 … t_n` of point `i` (points are in lexicographic digit order).
    pub fn digits(&self, i: usize) -> Vec<u32> {
        let b = self.base as u64;
        let mut idx = i as u64;
        let mut t = vec![0u32; self.n as usize];
        for slot in t.iter_mut().rev() {
            *slot = (idx % b) as u32;
            idx /= b;
        }
        t
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            x_num: u64,
            y_num: u64,
            den: u64,
        }
        let mut out = csv::Writer::from_writer(w);
        for p in &self.points {
            out.serialize(Row {
                x_num: p.x,
                y_num: p.y,
                den: self.den,
            })?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `bⁿ`, or an error when it exceeds [`MAX_POINTS`].
pub fn point_count(b: u32, n: u32) -> Result<u64> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    if n < 1 {
        return Err(Error::InvalidDigitCount(n));
    }
    (b as u64)
        .checked_pow(n)
        .filter(|&c| c <= MAX_POINTS)
        .ok_or(Error::TooManyPoints { base: b, n })
}

pub fn generate(b: u32, n: u32, pattern: &SignPattern) -> Result<PointSet> {
    generate_with(b, n, pattern, Exec::default())
}

pub fn generate_with(b: u32, n: u32, pattern: &SignPattern, exec: Exec) -> Result<PointSet> {
    let den = point_count(b, n)?;
    if pattern.len() != n as usize {
        return Err(Error::PatternLength {
            expected: n as usize,
            found: pattern.len(),
        });
    }
    let maps = pattern.maps();
    let bb = b as u64;
    // point index = t_1 b^{n-1} + … + t_n, so digit order is lexicographic
    let points = exec.map_range(den as usize, |idx| {
        let mut rest = idx as u64;
        let mut x = 0u64;
        let mut y = 0u64;
        let mut weight = den;
        let mut x_weight = 1u64;
        // walk t_n, t_{n-1}, …, t_1
        let mut digits_rev = Vec::with_capacity(maps.len());
        for _ in 0..maps.len() {
            digits_rev.push((rest % bb) as u32);
            rest /= bb;
        }
        for (i, map) in maps.iter().enumerate() {
            let t = digits_rev[maps.len() - 1 - i];
            weight /= bb;
            y += map.apply(b, t) as u64 * weight;
            x += t as u64 * x_weight;
            x_weight *= bb;
        }
        GridPoint { x, y }
    });
    let mut by_x = vec![u32::MAX; den as usize];
    let mut by_y = vec![u32::MAX; den as usize];
    for (i, p) in points.iter().enumerate() {
        by_x[p.x as usize] = i as u32;
        by_y[p.y as usize] = i as u32;
    }
    Ok(PointSet {
        base: b,
        n,
        pattern: pattern.clone(),
        den,
        points,
        by_x,
        by_y,
    })
}

/// True iff every box `[m1 b^{-j1}, (m1+1) b^{-j1}) × [m2 b^{-j2}, (m2+1) b^{-j2})`
/// holds exactly `b^{n-j1-j2}` points.
pub fn verify_net(ps: &PointSet, j1: u32, j2: u32) -> Result<bool> {
    if j1 + j2 > ps.n {
        return Err(Error::LevelOutOfRange { j1, j2, n: ps.n });
    }
    let b = ps.base as u64;
    let cols = b.pow(j1);
    let rows = b.pow(j2);
    let wx = ps.den / cols;
    let wy = ps.den / rows;
    let expected = b.pow(ps.n - j1 - j2);
    let mut counts = vec![0u64; (cols * rows) as usize];
    for p in &ps.points {
        counts[((p.x / wx) * rows + p.y / wy) as usize] += 1;
    }
    Ok(counts.iter().all(|&c| c == expected))
}

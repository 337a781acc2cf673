//! Per-base tables and the closed-form coefficients of `x1·x2` and of the
//! indicator of `C_z = (z_1, 1) × (z_2, 1)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use malachite_base::num::arithmetic::traits::Floor;
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::conversion::traits::SaturatingFrom;

use super::{AxisIndex, HaarIndex};
use crate::error::{Error, Result};
use crate::numeric::{pow_int, ratio, Backend, Exact, Float, Rational};

const POW_CACHE: i64 = 256;

/// Cached constants for one base and one arithmetic backend.
pub struct Basis<B: Backend> {
    backend: B,
    b: u32,
    zeta: Vec<B::Value>,
    geom: Vec<B::Value>,
    inv: Vec<B::Value>,
    inv_sq: Vec<B::Value>,
    inv_prod: Vec<B::Value>,
    tail: Vec<B::Value>,
    pows: Vec<Rational>,
    pows_f64: Vec<f64>,
}

impl<B: Backend> Basis<B> {
    pub fn new(backend: B) -> Self {
        let b = backend.base();
        let bu = b as usize;
        let zeta: Vec<_> = (0..b as i64).map(|k| backend.zeta_pow(k)).collect();
        let z = |e: u64| &zeta[(e % b as u64) as usize];
        let mut geom = vec![backend.zero()];
        let mut tail = Vec::with_capacity(bu * bu);
        for _ in 0..bu {
            tail.push(backend.zero());
        }
        for l in 1..b as u64 {
            let mut g = backend.zero();
            for k in 1..b as u64 {
                g = backend.add(&g, &backend.scale(z(l * k), &Rational::from(k)));
            }
            geom.push(g);
            for k in 0..b as u64 {
                let mut t = backend.zero();
                for r in k + 1..b as u64 {
                    t = backend.add(&t, z(l * r));
                }
                tail.push(t);
            }
        }
        // b / (ζ^ℓ − 1) = Σ_k k ζ^{ℓk}, so the inverse is exact without field division
        let inv_b = ratio(1, b as i64);
        let inv: Vec<_> = geom.iter().map(|g| backend.scale(g, &inv_b)).collect();
        let inv_sq: Vec<_> = inv.iter().map(|v| backend.mul(v, v)).collect();
        let mut inv_prod = Vec::with_capacity(bu * bu);
        for l1 in 0..bu {
            for l2 in 0..bu {
                inv_prod.push(backend.mul(&inv[l1], &inv[l2]));
            }
        }
        let pows: Vec<_> = (-POW_CACHE..=POW_CACHE)
            .map(|e| pow_int(b as u64, e))
            .collect();
        let pows_f64 = (-POW_CACHE..=POW_CACHE)
            .map(|e| (b as f64).powi(e as i32))
            .collect();
        Self {
            backend,
            b,
            zeta,
            geom,
            inv,
            inv_sq,
            inv_prod,
            tail,
            pows,
            pows_f64,
        }
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }

    pub fn base(&self) -> u32 {
        self.b
    }

    /// `ζ^k`.
    pub fn zeta(&self, k: u64) -> &B::Value {
        &self.zeta[(k % self.b as u64) as usize]
    }

    /// `Σ_{k=1}^{b-1} k ζ^{ℓk}`.
    pub fn geom_sum(&self, l: u32) -> &B::Value {
        &self.geom[l as usize]
    }

    /// `1 / (ζ^ℓ − 1)`.
    pub fn inv(&self, l: u32) -> &B::Value {
        &self.inv[l as usize]
    }

    pub fn inv_sq(&self, l: u32) -> &B::Value {
        &self.inv_sq[l as usize]
    }

    pub fn inv_prod(&self, l1: u32, l2: u32) -> &B::Value {
        &self.inv_prod[l1 as usize * self.b as usize + l2 as usize]
    }

    /// `Σ_{r=k+1}^{b-1} ζ^{ℓr}`.
    pub fn tail_sum(&self, l: u32, k: u32) -> &B::Value {
        &self.tail[l as usize * self.b as usize + k as usize]
    }

    /// `b^e` as an exact rational.
    pub fn pow(&self, e: i64) -> Rational {
        if e.abs() <= POW_CACHE {
            self.pows[(e + POW_CACHE) as usize].clone()
        } else {
            pow_int(self.b as u64, e)
        }
    }

    pub fn pow_f64(&self, e: i64) -> f64 {
        if e.abs() <= POW_CACHE {
            self.pows_f64[(e + POW_CACHE) as usize]
        } else {
            (self.b as f64).powi(e as i32)
        }
    }

    pub(crate) fn check_index(&self, idx: &HaarIndex) -> Result<()> {
        idx.validate(self.b)
    }

    /// Coefficient of `f(x) = x1·x2`.
    pub fn coeff_volume(&self, idx: &HaarIndex) -> B::Value {
        let bk = &self.backend;
        match (idx.j1, idx.j2) {
            (-1, -1) => bk.rational(&ratio(1, 4)),
            (j1, -1) => bk.scale(
                self.inv(idx.l1),
                &(self.pow(-2 * j1 as i64 - 1) / Rational::from(2)),
            ),
            (-1, j2) => bk.scale(
                self.inv(idx.l2),
                &(self.pow(-2 * j2 as i64 - 1) / Rational::from(2)),
            ),
            (j1, j2) => bk.scale(
                self.inv_prod(idx.l1, idx.l2),
                &self.pow(-2 * j1 as i64 - 2 * j2 as i64 - 2),
            ),
        }
    }

    /// `−coeff_volume(idx)` with the sign folded into the scalar.
    pub fn neg_volume(&self, idx: &HaarIndex) -> B::Value {
        let bk = &self.backend;
        match (idx.j1, idx.j2) {
            (-1, -1) => bk.rational(&ratio(-1, 4)),
            (j1, -1) => bk.scale(
                self.inv(idx.l1),
                &(self.pow(-2 * j1 as i64 - 1) / Rational::from(-2)),
            ),
            (-1, j2) => bk.scale(
                self.inv(idx.l2),
                &(self.pow(-2 * j2 as i64 - 1) / Rational::from(-2)),
            ),
            (j1, j2) => bk.scale(
                self.inv_prod(idx.l1, idx.l2),
                &-self.pow(-2 * j1 as i64 - 2 * j2 as i64 - 2),
            ),
        }
    }

    /// One axis of the indicator coefficient, or `None` when `z` is not
    /// interior to the support. On a coarsest axis the support is `[0, 1)`
    /// and the factor is `1 − z`.
    pub fn indicator_axis(&self, ax: AxisIndex, z: &Rational) -> Option<B::Value> {
        let bk = &self.backend;
        if ax.j < 0 {
            return (*z >= Rational::ZERO && *z < Rational::ONE)
                .then(|| bk.rational(&(Rational::ONE - z)));
        }
        let up = self.pow(ax.j as i64 + 1);
        let u = z * &up;
        let left = Rational::from(ax.m) * Rational::from(self.b);
        if u <= left || u >= &left + Rational::from(self.b) {
            return None;
        }
        let k = u64::saturating_from(&(&u - &left).floor()) as u32;
        let head = &left + Rational::from(k + 1) - &u;
        let bracket = bk.add(
            &bk.scale(self.zeta(k as u64 * ax.l as u64), &head),
            self.tail_sum(ax.l, k),
        );
        Some(bk.scale(&bracket, &self.pow(-(ax.j as i64) - 1)))
    }

    /// Coefficient of the indicator of `C_z`.
    pub fn coeff_indicator(&self, idx: &HaarIndex, zx: &Rational, zy: &Rational) -> B::Value {
        match (
            self.indicator_axis(idx.axis(0), zx),
            self.indicator_axis(idx.axis(1), zy),
        ) {
            (Some(a), Some(c)) => self.backend.mul(&a, &c),
            _ => self.backend.zero(),
        }
    }
}

/// Shared exact basis for base `b`.
pub fn exact_basis(b: u32) -> Result<Arc<Basis<Exact>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Basis<Exact>>>>> = OnceLock::new();
    shared(&CACHE, b, || Ok(Basis::new(Exact::new(b)?)))
}

/// Shared float basis for base `b`.
pub fn float_basis(b: u32) -> Result<Arc<Basis<Float>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Basis<Float>>>>> = OnceLock::new();
    shared(&CACHE, b, || Ok(Basis::new(Float::new(b)?)))
}

fn shared<T>(
    cache: &OnceLock<Mutex<HashMap<u32, Arc<T>>>>,
    b: u32,
    build: impl FnOnce() -> Result<T>,
) -> Result<Arc<T>> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("basis cache poisoned").get(&b) {
        return Ok(Arc::clone(v));
    }
    // build outside the lock; a racing builder just wins or loses the insert
    let built = Arc::new(build()?);
    let mut guard = map.lock().expect("basis cache poisoned");
    Ok(Arc::clone(guard.entry(b).or_insert(built)))
}

//! Arithmetic backends for coefficient formulas.
//!
//! The Haar coefficient code is written once against [`Backend`]. [`Exact`]
//! computes in the cyclotomic ring and is used for identity checks; [`Float`]
//! computes with `f64` complex numbers and is used to assemble norms.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::cyclo::{CycloRing, CycloValue};
use super::rational::{to_f64, Rational};
use crate::error::Result;

pub trait Backend: Send + Sync {
    type Value: Clone + Send + Sync + fmt::Debug;

    fn base(&self) -> u32;
    fn zero(&self) -> Self::Value;
    fn rational(&self, q: &Rational) -> Self::Value;
    fn zeta_pow(&self, k: i64) -> Self::Value;
    fn add(&self, a: &Self::Value, c: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, c: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, c: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn scale(&self, a: &Self::Value, q: &Rational) -> Self::Value;
    fn is_zero(&self, a: &Self::Value) -> bool;
    fn to_complex(&self, a: &Self::Value) -> Complex64;

    fn one(&self) -> Self::Value {
        self.zeta_pow(0)
    }
}

#[derive(Debug, Clone)]
pub struct Exact {
    ring: Arc<CycloRing>,
}

impl Exact {
    pub fn new(b: u32) -> Result<Self> {
        Ok(Self {
            ring: CycloRing::get(b)?,
        })
    }

    pub fn ring(&self) -> &Arc<CycloRing> {
        &self.ring
    }
}

impl Backend for Exact {
    type Value = CycloValue;

    fn base(&self) -> u32 {
        self.ring.base()
    }
    fn zero(&self) -> CycloValue {
        CycloValue::zero(&self.ring)
    }
    fn rational(&self, q: &Rational) -> CycloValue {
        CycloValue::from_rational(&self.ring, q.clone())
    }
    fn zeta_pow(&self, k: i64) -> CycloValue {
        CycloValue::zeta_pow(&self.ring, k)
    }
    fn add(&self, a: &CycloValue, c: &CycloValue) -> CycloValue {
        a + c
    }
    fn sub(&self, a: &CycloValue, c: &CycloValue) -> CycloValue {
        a - c
    }
    fn mul(&self, a: &CycloValue, c: &CycloValue) -> CycloValue {
        a * c
    }
    fn neg(&self, a: &CycloValue) -> CycloValue {
        -a
    }
    fn scale(&self, a: &CycloValue, q: &Rational) -> CycloValue {
        a.scale(q)
    }
    fn is_zero(&self, a: &CycloValue) -> bool {
        a.is_zero()
    }
    fn to_complex(&self, a: &CycloValue) -> Complex64 {
        a.to_complex()
    }
}

#[derive(Debug, Clone)]
pub struct Float {
    base: u32,
    roots: Vec<Complex64>,
}

impl Float {
    pub fn new(b: u32) -> Result<Self> {
        let ring = CycloRing::get(b)?;
        let roots = (0..b as i64)
            .map(|k| CycloValue::zeta_pow(&ring, k).to_complex())
            .collect();
        Ok(Self { base: b, roots })
    }
}

impl Backend for Float {
    type Value = Complex64;

    fn base(&self) -> u32 {
        self.base
    }
    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn rational(&self, q: &Rational) -> Complex64 {
        Complex64::new(to_f64(q), 0.0)
    }
    fn zeta_pow(&self, k: i64) -> Complex64 {
        self.roots[k.rem_euclid(self.base as i64) as usize]
    }
    fn add(&self, a: &Complex64, c: &Complex64) -> Complex64 {
        a + c
    }
    fn sub(&self, a: &Complex64, c: &Complex64) -> Complex64 {
        a - c
    }
    fn mul(&self, a: &Complex64, c: &Complex64) -> Complex64 {
        a * c
    }
    fn neg(&self, a: &Complex64) -> Complex64 {
        -a
    }
    fn scale(&self, a: &Complex64, q: &Rational) -> Complex64 {
        a * to_f64(q)
    }
    fn is_zero(&self, a: &Complex64) -> bool {
        a.re == 0.0 && a.im == 0.0
    }
    fn to_complex(&self, a: &Complex64) -> Complex64 {
        *a
    }
}

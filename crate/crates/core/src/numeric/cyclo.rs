//! Exact arithmetic in `Q(ζ_b)`, `ζ_b = e^{2πi/b}`.
//!
//! A value is a polynomial in `ζ_b` of degree below `φ(b)`, reduced modulo the
//! b-th cyclotomic polynomial. Reduced coefficient vectors are a normal form,
//! so equality is coefficient-wise.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use malachite_base::num::arithmetic::traits::{DivExactAssign, Gcd};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_nz::integer::Integer;
use malachite_nz::natural::Natural;
use num_complex::Complex64;

use super::poly::cyclotomic_poly;
use super::rational::{to_f64, Rational};
use crate::error::{Error, Result};

/// Float projection of a cyclotomic value.
pub type ComplexF = Complex64;

/// Shared per-base data: the modulus and the reduced powers `ζ^0 … ζ^{b-1}`.
#[derive(Debug)]
pub struct CycloRing {
    base: u32,
    modulus: Vec<i64>,
    powers: Vec<Vec<i64>>,
    roots: Vec<Complex64>,
}

impl CycloRing {
    /// Returns the cached ring for base `b`.
    pub fn get(b: u32) -> Result<Arc<CycloRing>> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloRing>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("cyclotomic ring cache poisoned");
        if let Some(ring) = guard.get(&b) {
            return Ok(Arc::clone(ring));
        }
        let ring = Arc::new(Self::build(b)?);
        guard.insert(b, Arc::clone(&ring));
        Ok(ring)
    }

    fn build(b: u32) -> Result<Self> {
        let modulus = cyclotomic_poly(b)?;
        let phi = modulus.len() - 1;
        let mut powers = Vec::with_capacity(b as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..b {
            powers.push(cur.clone());
            // multiply by x, then fold the x^phi term back using the monic modulus
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c -= top * modulus[i];
                }
            }
        }
        let roots = (0..b)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / b as f64))
            .collect();
        Ok(Self {
            base: b,
            modulus,
            powers,
            roots,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Degree of the extension, `φ(b)`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    fn reduced_power(&self, e: usize) -> &[i64] {
        &self.powers[e % self.base as usize]
    }
}

/// An element of `Q(ζ_b)` stored as an integer coefficient vector over one
/// positive denominator, with no common factor between the two.
#[derive(Clone)]
pub struct CycloValue {
    ring: Arc<CycloRing>,
    num: Vec<Integer>,
    den: Natural,
}

impl CycloValue {
    pub fn zero(ring: &Arc<CycloRing>) -> Self {
        Self {
            ring: Arc::clone(ring),
            num: vec![Integer::ZERO; ring.degree()],
            den: Natural::ONE,
        }
    }

    pub fn one(ring: &Arc<CycloRing>) -> Self {
        Self::from_rational(ring, Rational::ONE)
    }

    pub fn from_rational(ring: &Arc<CycloRing>, q: Rational) -> Self {
        let mut v = Self::zero(ring);
        let negative = q < Rational::ZERO;
        let (n, d) = q.into_numerator_and_denominator();
        v.num[0] = Integer::from_sign_and_abs(!negative, n);
        v.den = d;
        v
    }

    /// `ζ^k`, for any integer `k`.
    pub fn zeta_pow(ring: &Arc<CycloRing>, k: i64) -> Self {
        let b = ring.base as i64;
        let e = k.rem_euclid(b) as usize;
        Self {
            ring: Arc::clone(ring),
            num: ring.powers[e].iter().map(|&c| Integer::from(c)).collect(),
            den: Natural::ONE,
        }
    }

    /// Builds a value from an unreduced coefficient list (any length).
    pub fn from_coeffs(ring: &Arc<CycloRing>, coeffs: &[Rational]) -> Self {
        let mut out = Self::zero(ring);
        for (e, c) in coeffs.iter().enumerate() {
            let term = Self::zeta_pow(ring, e as i64).scale(c);
            out = &out + &term;
        }
        out
    }

    pub fn base(&self) -> u32 {
        self.ring.base
    }

    pub fn ring(&self) -> &Arc<CycloRing> {
        &self.ring
    }

    /// Coefficients of `ζ^0 … ζ^{φ(b)-1}`.
    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.num.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        Rational::from_integers(self.num[i].clone(), Integer::from(self.den.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| *c == Integer::ZERO)
    }

    /// `Some(q)` when the value is the rational number `q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.num[1..]
            .iter()
            .all(|c| *c == Integer::ZERO)
            .then(|| self.coeff(0))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if *q == Rational::ZERO {
            return Self::zero(&self.ring);
        }
        let qn = Integer::from_sign_and_abs(*q > Rational::ZERO, q.numerator_ref().clone());
        Self::normalized(
            &self.ring,
            self.num.iter().map(|c| c * &qn).collect(),
            &self.den * q.denominator_ref(),
        )
    }

    /// Complex conjugate, i.e. the automorphism `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let b = self.ring.base as usize;
        let mut num = vec![Integer::ZERO; self.num.len()];
        for (e, c) in self.num.iter().enumerate() {
            fold_power(&self.ring, &mut num, (b - e) % b, c);
        }
        Self::normalized(&self.ring, num, self.den.clone())
    }

    pub fn to_complex(&self) -> ComplexF {
        (0..self.num.len())
            .filter(|&i| self.num[i] != Integer::ZERO)
            .map(|i| self.ring.roots[i] * to_f64(&self.coeff(i)))
            .sum()
    }

    fn normalized(ring: &Arc<CycloRing>, mut num: Vec<Integer>, mut den: Natural) -> Self {
        let mut g = den.clone();
        for c in &num {
            if g == Natural::ONE {
                break;
            }
            if *c != Integer::ZERO {
                g = g.gcd(c.unsigned_abs_ref());
            }
        }
        if num.iter().all(|c| *c == Integer::ZERO) {
            den = Natural::ONE;
        } else if g != Natural::ONE {
            let gi = Integer::from(g.clone());
            for c in num.iter_mut() {
                c.div_exact_assign(&gi);
            }
            den.div_exact_assign(g);
        }
        Self {
            ring: Arc::clone(ring),
            num,
            den,
        }
    }

    fn check_base(&self, other: &Self) -> Result<()> {
        if self.ring.base != other.ring.base {
            return Err(Error::BaseMismatch(self.ring.base, other.ring.base));
        }
        Ok(())
    }

    fn add_signed(&self, other: &Self, negate: bool) -> Self {
        let combine = |a: Integer, c: Integer| if negate { a - c } else { a + c };
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, c)| combine(a.clone(), c.clone()))
                .collect();
            return Self::normalized(&self.ring, num, self.den.clone());
        }
        let g = (&self.den).gcd(&other.den);
        let fa = Integer::from(&other.den / &g);
        let fc = Integer::from(&self.den / &g);
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, c)| combine(a * &fa, c * &fc))
            .collect();
        let den = &self.den * fa.unsigned_abs_ref();
        Self::normalized(&self.ring, num, den)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let phi = self.num.len();
        if phi == 1 {
            return Self::normalized(
                &self.ring,
                vec![&self.num[0] * &other.num[0]],
                &self.den * &other.den,
            );
        }
        let mut prod = vec![Integer::ZERO; 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if *a == Integer::ZERO {
                continue;
            }
            for (k, c) in other.num.iter().enumerate() {
                if *c != Integer::ZERO {
                    prod[i + k] += a * c;
                }
            }
        }
        let high = prod.split_off(phi);
        for (e, c) in high.iter().enumerate() {
            fold_power(&self.ring, &mut prod, phi + e, c);
        }
        Self::normalized(&self.ring, prod, &self.den * &other.den)
    }
}

/// Adds `c ζ^e` to a reduced coefficient vector.
fn fold_power(ring: &CycloRing, coeffs: &mut [Integer], e: usize, c: &Integer) {
    if *c == Integer::ZERO {
        return;
    }
    if e < coeffs.len() {
        coeffs[e] += c;
        return;
    }
    for (slot, &p) in coeffs.iter_mut().zip(ring.reduced_power(e)) {
        match p {
            0 => {}
            1 => *slot += c,
            -1 => *slot -= c,
            p => *slot += c * Integer::from(p),
        }
    }
}

/// `ζ_b^k` as an exact value.
pub fn zeta_pow(b: u32, k: i64) -> Result<CycloValue> {
    Ok(CycloValue::zeta_pow(&CycloRing::get(b)?, k))
}

/// Exact product; fails when the operands live over different bases.
pub fn cyclo_mul(a: &CycloValue, c: &CycloValue) -> Result<CycloValue> {
    a.check_base(c)?;
    Ok(a.mul_unchecked(c))
}

pub fn to_complex(x: &CycloValue) -> ComplexF {
    x.to_complex()
}

impl PartialEq for CycloValue {
    fn eq(&self, other: &Self) -> bool {
        self.ring.base == other.ring.base && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycloValue {}

impl fmt::Debug for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloValue(b={}, {})", self.ring.base, self)
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (e, c) in self.coeffs().iter().enumerate() {
            if *c == Rational::ZERO {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ζ")?,
                _ => write!(f, "({c})ζ^{e}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator impls panic on a base mismatch; `cyclo_mul` is the checked form.
impl Add for &CycloValue {
    type Output = CycloValue;
    fn add(self, rhs: &CycloValue) -> CycloValue {
        self.check_base(rhs).expect("cyclotomic add");
        self.add_signed(rhs, false)
    }
}

impl Sub for &CycloValue {
    type Output = CycloValue;
    fn sub(self, rhs: &CycloValue) -> CycloValue {
        self.check_base(rhs).expect("cyclotomic sub");
        self.add_signed(rhs, true)
    }
}

impl Mul for &CycloValue {
    type Output = CycloValue;
    fn mul(self, rhs: &CycloValue) -> CycloValue {
        cyclo_mul(self, rhs).expect("cyclotomic mul")
    }
}

impl Neg for &CycloValue {
    type Output = CycloValue;
    fn neg(self) -> CycloValue {
        CycloValue {
            ring: Arc::clone(&self.ring),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

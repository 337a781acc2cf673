//! Integer polynomials needed to pin down the cyclotomic ring.
//!
//! Coefficients are stored lowest degree first.

use crate::error::{Error, Result};

/// The b-th cyclotomic polynomial, obtained by dividing `x^b - 1` by
/// `Φ_d` for every proper divisor `d` of `b`.
pub fn cyclotomic_poly(b: u32) -> Result<Vec<i64>> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    Ok(cyclotomic_unchecked(b))
}

fn cyclotomic_unchecked(b: u32) -> Vec<i64> {
    if b == 1 {
        return vec![-1, 1];
    }
    let mut quotient = vec![0i64; b as usize + 1];
    quotient[0] = -1;
    quotient[b as usize] = 1;
    for d in (1..b).filter(|d| b.is_multiple_of(*d)) {
        quotient = div_exact(&quotient, &cyclotomic_unchecked(d));
    }
    quotient
}

/// Exact division by a monic polynomial; the remainder must vanish.
fn div_exact(dividend: &[i64], divisor: &[i64]) -> Vec<i64> {
    let dd = divisor.len() - 1;
    debug_assert_eq!(divisor[dd], 1);
    let mut rem = dividend.to_vec();
    let qlen = dividend.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (k, &dk) in divisor.iter().enumerate() {
                rem[i + k] -= c * dk;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn euler_phi(b: u32) -> u32 {
    let mut n = b;
    let mut phi = b;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

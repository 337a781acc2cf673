//! Exact rationals, the cyclotomic ring `Q(ζ_b)`, and the arithmetic
//! backends shared by the coefficient formulas.

pub mod backend;
pub mod cyclo;
pub mod poly;
pub mod rational;

pub use backend::{Backend, Exact, Float};
pub use cyclo::{cyclo_mul, to_complex, zeta_pow, ComplexF, CycloRing, CycloValue};
pub use poly::{cyclotomic_poly, euler_phi};
pub use rational::{
    format_rational, numerator_denominator_strings, parse_rational, pow_int, ratio, to_f64,
    Rational,
};

//! Exact scalar arithmetic: arbitrary-precision rationals, cyclotomic fields
//! Q(zeta_N), and a deterministic fixed-point big-float fallback for numeric
//! cross-checks.

mod bigfloat;
mod cyclotomic;
mod rational;

pub use bigfloat::{BigComplex, BigFloat};
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CycloNum};
pub use rational::Rational;

use thiserror::Error;

/// Errors from exact-arithmetic operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero in Q(zeta_{order})")]
    DivisionByZero { order: u32 },
    #[error("cyclotomic number is not rational: coefficient of zeta^{index} is {coeff}")]
    NotRational { index: usize, coeff: Rational },
}

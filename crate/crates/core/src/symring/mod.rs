//! Exact commutative coefficient arithmetic.
//!
//! Coefficients are Laurent polynomials over the Gaussian rationals in named
//! symbols, reduced modulo monomial constraints such as `Q^2 = -Q - 1` or
//! `s^2 = r`.

mod coefficient;
mod gaussian;
mod ring;
mod roots;

pub use coefficient::Coefficient;
pub use gaussian::{rational_sqrt, GaussianRational};
pub use ring::{Constraint, Monomial, Ring, Symbol};
pub use roots::{polynomial_sqrt, quadratic_roots, LinearFactor};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("coefficients belong to different rings")]
    Mismatch,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("invalid symbol name `{0}`")]
    BadSymbolName(String),
    #[error("symbol `{0}` is not invertible")]
    NotInvertible(String),
    #[error("`{0}` is not a unit monomial")]
    NotUnit(String),
    #[error("constraint `{0} = 0` rejected: {1}")]
    BadConstraint(String, String),
    #[error("symbol `{0}` has no assigned value")]
    Unassigned(String),
    #[error("assignment violates constraint `{0} = 0`")]
    ConstraintViolated(String),
    #[error("evaluation divides by zero at `{0}`")]
    DivisionByZero(String),
}

/// `[k]_Q = 1 + Q + ... + Q^(k-1)`.
pub fn q_integer(k: u32, q: &Coefficient) -> Coefficient {
    assert!(k >= 1, "q_integer requires k >= 1");
    let mut acc = Coefficient::zero(q.ring());
    let mut p = Coefficient::one(q.ring());
    for _ in 0..k {
        acc = &acc + &p;
        p = &p * q;
    }
    acc
}

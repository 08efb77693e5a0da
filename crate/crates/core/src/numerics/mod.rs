//! Exact rational arithmetic, binomial coefficients, and small dense
//! symmetric eigen-decomposition.
//!
//! The exact layer ([`Rational`], [`binomial`]) backs every classical game
//! value; the floating layer ([`SymMatrix`], [`eigen_sym`], [`is_psd`]) backs
//! the SDP certificates and is generic over [`crate::Scalar`].

mod binomial;
mod eigen;
mod matrix;
mod rational;

pub use binomial::binomial;
pub use eigen::{eigen_sym, is_psd, Eigen};
pub use matrix::SymMatrix;
pub use rational::{format_ratio, one_over_pow2, parse_ratio, pow2, rat, to_f64, Rational};

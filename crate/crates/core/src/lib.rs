//! Optimal classical and quantum values of grouped multiplayer threshold
//! XOR games.
//!
//! An `n`-player threshold game splits into two communicating groups of
//! sizes `n-k` and `k`; because its payoff depends only on Hamming weights,
//! the grouped game collapses to a biased bipartite XOR game over small
//! input alphabets ([`reduction`]). Classical optima then come from exact
//! rational enumeration or closed forms ([`classical`]); quantum optima come
//! from the bipartite XOR-game semidefinite program with PSD-verified dual
//! certificates and planar EPR protocols ([`quantum`]).
//!
//! The floating-point layer is generic over [`Scalar`] (`f32`/`f64`); the
//! aliases below fix `f64` for ordinary use. Everything classical is exact:
//! [`Rational`] values with denominators dividing `2^n`.

// index loops mirror the matrix subscripts in the linear-algebra kernels
#![allow(clippy::needless_range_loop)]

pub mod classical;
pub mod error;
pub mod games;
pub mod numerics;
pub mod quantum;
pub mod reduction;
pub mod scalar;

pub use error::{Error, Result};
pub use games::{alpha, payoff_sign, threshold_output, Grouping, ThresholdGame};
pub use numerics::{binomial, eigen_sym, is_psd, Eigen, Rational, SymMatrix};
pub use reduction::{beta_pair, ns_box_value, reduce, BiasedGame, Provenance, ReductionTrace};
pub use scalar::Scalar;

pub use classical::{
    brute_force_value, gamma_majority, grouped_weight_value, protocol2_strategy, strategy_value,
    vc_and, vc_half_half, vc_majority, vc_threshold_k1, DeterministicStrategy,
};
pub use quantum::{
    dual_and_closed_form, dual_from_primal, dual_majority_conjecture, evaluate_protocol,
    extract_observables, protocol1, quantum_value, quantum_value_of, scan_majority_crossover,
    solve_primal, vq_threshold_formula, weight_matrix, CrossoverRow, CrossoverScan, SolverConfig,
};

/// Default floating-point scalar for solver-facing work.
pub type Real = f64;
pub type SymMat = SymMatrix<Real>;
pub type PrimalSolution = quantum::PrimalSolution<Real>;
pub type DualCertificate = quantum::DualCertificate<Real>;
pub type QuantumProtocol = quantum::QuantumProtocol<Real>;
pub type QuantumAssessment = quantum::QuantumAssessment<Real>;

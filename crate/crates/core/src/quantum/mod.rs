//! Quantum values and optimality certificates.
//!
//! The quantum value of a biased XOR game equals the optimum of a small
//! SDP over unit vectors (one per input letter), `max 1/2 Tr(GW)` with `G`
//! a unit-diagonal Gram matrix. [`sdp`] solves the primal by alternating
//! maximization with restarts and derives a dual vector from the stationarity
//! conditions; `K = 2 diag(lambda) - W` being PSD with `sum(lambda)` matching
//! the primal value certifies optimality. [`duals`] holds the closed-form
//! dual vectors for AND groupings and the conjectured MAJORITY duals.
//! [`protocol`] turns rank-2 solutions into planar EPR measurement angles
//! and back.

mod duals;
mod protocol;
mod sdp;

pub use duals::{
    and_dual_lambda_exact, dual_and_closed_form, dual_majority_conjecture,
    majority_dual_lambda_exact,
};
pub use protocol::{
    evaluate_protocol, evaluate_protocol_tensor, extract_observables, protocol1,
    vq_threshold_formula,
};
pub use sdp::{dual_from_primal, solve_primal, weight_matrix};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::{Grouping, ThresholdGame};
use crate::numerics::SymMatrix;
use crate::reduction::{reduce, BiasedGame};
use crate::scalar::Scalar;

/// Solver knobs; the defaults match the tolerances used by every
/// reproduction table.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Ambient vector dimension; `None` means `mA + mB`, always enough for
    /// the SDP optimum.
    pub dimension: Option<usize>,
    pub restarts: u32,
    pub seed: u64,
    pub max_iterations: u32,
    /// Relative value improvement per sweep below which a restart stops.
    pub convergence_tol: f64,
    /// Allowed negativity of the smallest eigenvalue of `K`.
    pub psd_tol: f64,
    /// Allowed gap `|sum(lambda) - primal|` for certification.
    pub gap_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dimension: None,
            restarts: 32,
            seed: 0,
            max_iterations: 10_000,
            convergence_tol: 1e-13,
            psd_tol: 1e-8,
            gap_tol: 1e-7,
        }
    }
}

/// A feasible primal point: unit vectors for both sides, the attained
/// value, and the Gram matrix of all pairwise inner products.
#[derive(Clone, Debug)]
pub struct PrimalSolution<F> {
    pub u: Vec<Vec<F>>,
    pub v: Vec<Vec<F>>,
    pub value: F,
    pub gram: SymMatrix<F>,
    pub converged: bool,
}

/// Dual vector with its PSD verdict; `certified` means `K` is PSD within
/// tolerance and the duality gap is closed, which proves the primal value
/// optimal.
#[derive(Clone, Debug)]
pub struct DualCertificate<F> {
    pub lambda: Vec<F>,
    pub dual_value: F,
    pub min_eig_k: F,
    pub certified: bool,
    pub gap: F,
}

/// Planar EPR strategy: one measurement angle per input letter, observables
/// `cos(angle) X - sin(angle) Z` measured on the shared EPR pair.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumProtocol<F> {
    pub theta: Vec<F>,
    pub phi: Vec<F>,
}

/// Outcome of the full pipeline for one game.
#[derive(Clone, Debug)]
pub struct QuantumAssessment<F> {
    pub value: F,
    pub certificate: DualCertificate<F>,
    pub protocol: Option<QuantumProtocol<F>>,
    pub converged: bool,
}

/// Reduce, solve, certify, and (when the solution is planar) extract the
/// measurement angles.
///
/// When the full-dimension solve lands on a higher-rank optimal face, a
/// second solve constrained to the plane is attempted; it is adopted only
/// if it reaches the same value, so the reported value never degrades.
pub fn quantum_value<F: Scalar>(
    game: &ThresholdGame,
    grouping: &Grouping,
    cfg: &SolverConfig,
) -> Result<QuantumAssessment<F>> {
    let (bg, _) = reduce(game, grouping)?;
    quantum_value_of(&bg, cfg)
}

/// Same pipeline for an already-reduced (or hand-built) biased game.
pub fn quantum_value_of<F: Scalar>(
    bg: &BiasedGame,
    cfg: &SolverConfig,
) -> Result<QuantumAssessment<F>> {
    let ps = solve_primal(bg, cfg)?;
    let cert = dual_from_primal(bg, &ps, cfg)?;
    match extract_observables(&ps) {
        Ok(p) => Ok(QuantumAssessment {
            value: ps.value,
            certificate: cert,
            protocol: Some(p),
            converged: ps.converged,
        }),
        Err(Error::ExtractionUnsupported { .. }) => {
            let planar_cfg = SolverConfig {
                dimension: Some(2),
                ..cfg.clone()
            };
            let ps2 = solve_primal(bg, &planar_cfg)?;
            let tol = F::from_f64_lossy(1e-8) * (F::one() + ps.value.abs());
            if ps2.value >= ps.value - tol {
                if let Ok(p) = extract_observables(&ps2) {
                    let cert2 = dual_from_primal(bg, &ps2, cfg)?;
                    if cert2.certified || !cert.certified {
                        return Ok(QuantumAssessment {
                            value: ps2.value,
                            certificate: cert2,
                            protocol: Some(p),
                            converged: ps2.converged,
                        });
                    }
                }
            }
            Ok(QuantumAssessment {
                value: ps.value,
                certificate: cert,
                protocol: None,
                converged: ps.converged,
            })
        }
        Err(e) => Err(e),
    }
}

/// One step of a crossover scan.
#[derive(Clone, Debug)]
pub struct CrossoverRow {
    pub n: u32,
    /// Exact classical optimum of the grouped game.
    pub classical: crate::Rational,
    /// Best certified quantum value found (equals `classical` at and past
    /// the crossover).
    pub quantum: f64,
    pub certified: bool,
    /// `quantum - classical`, clamped at zero when the boundary certifies.
    pub gap: f64,
    /// Whether the step was settled by the conjectured dual alone.
    pub by_conjecture_dual: bool,
}

/// Result of scanning even `n` upward for the point where the quantum
/// advantage of the `(n-k, k)` MAJORITY game disappears.
#[derive(Clone, Debug)]
pub struct CrossoverScan {
    pub k: u32,
    /// Smallest scanned `n` with certified quantum value within `1e-6` of
    /// the classical optimum; `None` if the scan hit `n_max` first.
    pub n_k: Option<u32>,
    pub rows: Vec<CrossoverRow>,
}

/// Scan even `n` from `2k` up to `n_max` for the quantum-classical
/// crossover of MAJORITY with grouping `(n-k, k)`.
///
/// Each step takes the exact classical optimum by brute force on the
/// reduced game, then tries the conjectured dual: PSD with an exactly
/// matching sum settles the step without solving anything. Otherwise the
/// SDP pipeline supplies a certified quantum value and the gap decides.
pub fn scan_majority_crossover(
    k: u32,
    n_max: u32,
    cfg: &SolverConfig,
) -> Result<CrossoverScan> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "crossover scan is defined for even k >= 2, got {k}"
        )));
    }
    let mut rows = Vec::new();
    let mut n_k = None;
    let mut n = 2 * k;
    while n <= n_max {
        let game = ThresholdGame::majority(n)?;
        let grouping = Grouping::new(k, n)?;
        let (bg, _) = reduce(&game, &grouping)?;
        let (classical, _) = crate::classical::brute_force_value(&bg)?;
        let classical_f = crate::numerics::to_f64(&classical);

        let lambda = duals::majority_dual_lambda_exact(n, k)?;
        let dual_sum: crate::Rational = lambda.iter().sum();
        let conjecture: DualCertificate<f64> = dual_majority_conjecture(n, k, cfg)?;
        let row = if conjecture.certified && dual_sum == classical {
            CrossoverRow {
                n,
                classical,
                quantum: classical_f,
                certified: true,
                gap: 0.0,
                by_conjecture_dual: true,
            }
        } else {
            let report = quantum_value_of::<f64>(&bg, cfg)?;
            CrossoverRow {
                n,
                classical,
                quantum: report.value,
                certified: report.certificate.certified,
                gap: report.value - classical_f,
                by_conjecture_dual: false,
            }
        };
        let boundary = row.certified && row.gap <= 1e-6;
        rows.push(row);
        if boundary {
            n_k = Some(n);
            break;
        }
        n += 2;
    }
    Ok(CrossoverScan { k, n_k, rows })
}

#[derive(Serialize)]
struct CertificateDto {
    value: f64,
    dual_value: f64,
    #[serde(rename = "min_eig_K")]
    min_eig_k: f64,
    certified: bool,
    lambda: Vec<f64>,
    #[serde(rename = "thetaA", skip_serializing_if = "Option::is_none")]
    theta_a: Option<Vec<f64>>,
    #[serde(rename = "phiB", skip_serializing_if = "Option::is_none")]
    phi_b: Option<Vec<f64>>,
}

/// JSON document for a value/certificate/protocol triple.
pub fn report_json<F: Scalar>(
    value: F,
    cert: &DualCertificate<F>,
    protocol: Option<&QuantumProtocol<F>>,
) -> String {
    let f = |x: &F| x.to_f64().unwrap_or(f64::NAN);
    let dto = CertificateDto {
        value: f(&value),
        dual_value: f(&cert.dual_value),
        min_eig_k: f(&cert.min_eig_k),
        certified: cert.certified,
        lambda: cert.lambda.iter().map(&f).collect(),
        theta_a: protocol.map(|p| p.theta.iter().map(&f).collect()),
        phi_b: protocol.map(|p| p.phi.iter().map(&f).collect()),
    };
    serde_json::to_string_pretty(&dto).expect("certificate serializes")
}

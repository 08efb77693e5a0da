//! Planar EPR protocols: the closed-form optimal strategy for the
//! biased-CHSH reductions, protocol evaluation (two independent backends),
//! and angle extraction from rank-2 primal solutions.
//!
//! Observables are `cos(angle) X - sin(angle) Z`; on the EPR pair the
//! expectation of a pair of such observables is `cos(theta - phi)`.

use num::bigint::BigInt;
use num::One;

use crate::error::{Error, Result};
use crate::numerics::{eigen_sym, pow2, to_f64, Rational};
use crate::quantum::{PrimalSolution, QuantumProtocol};
use crate::reduction::BiasedGame;
use crate::scalar::Scalar;

/// Optimal quantum value of the `(n-1, 1)` reduction with bias factor
/// `alpha`: `sqrt(2) sqrt((2^(n-2) - alpha)^2 + (2^(n-2))^2) / 2^(n-1)`.
pub fn vq_threshold_formula<F: Scalar>(n: u32, alpha: &Rational) -> Result<F> {
    if n < 2 {
        return Err(Error::Domain("formula needs n >= 2".into()));
    }
    let p = Rational::from(pow2(n - 2));
    let q = (&p - alpha) * (&p - alpha) + &p * &p;
    // exact radicand, one rounding at the square root
    let scaled = q * Rational::new(BigInt::from(2), pow2(n - 1) * pow2(n - 1));
    Ok(F::from_f64_lossy(to_f64(&scaled).sqrt()))
}

/// The optimal planar protocol for the `(n-1, 1)` reduction.
///
/// Coefficients are built exactly. Alice's observables form an orthonormal
/// frame; Bob's two observables are the reflections of `(X+Z)/sqrt(2)`
/// around that frame's axes, which realizes the expectation pattern
/// `E(D0 C0) = E(D0 C1)`, `E(D1 C0) = -E(D1 C1)` at the optimal bias split.
pub fn protocol1<F: Scalar>(n: u32, alpha: &Rational) -> Result<QuantumProtocol<F>> {
    if n < 2 {
        return Err(Error::Domain("protocol needs n >= 2".into()));
    }
    let p = Rational::from(pow2(n - 2)); // 2^(n-2)
    let norm = (&p - alpha) * (&p - alpha) + &p * &p;
    let two = Rational::from(BigInt::from(2));
    let four = Rational::from(BigInt::from(4));

    // (x, z, squared norm) triples; x^2 + z^2 = norm must hold exactly
    let d0 = (p.clone(), &p - alpha, norm.clone());
    let d1 = (alpha - &p, p.clone(), norm.clone());
    let c0 = (
        Rational::from(BigInt::one()),
        Rational::from(BigInt::one()),
        two.clone(),
    );
    let c1 = (
        &two * &p * &p - alpha * alpha,
        alpha * alpha - &four * &p * alpha + &two * &p * &p,
        &two * &norm * &norm,
    );

    let angle = |obs: &(Rational, Rational, Rational)| -> Result<F> {
        let (x, z, n2) = obs;
        if &(x * x + z * z) != n2 {
            return Err(Error::Inconsistent(
                "observable coefficients are not unit norm".into(),
            ));
        }
        Ok(F::from_f64_lossy(f64::atan2(-to_f64(z), to_f64(x))))
    };

    Ok(QuantumProtocol {
        theta: vec![angle(&d0)?, angle(&d1)?],
        phi: vec![angle(&c0)?, angle(&c1)?],
    })
}

/// Game value of a planar protocol, `sum pA pB signs cos(theta - phi)`,
/// cross-checked against the explicit tensor-product backend.
pub fn evaluate_protocol<F: Scalar>(bg: &BiasedGame, qp: &QuantumProtocol<F>) -> Result<F> {
    let by_cosine = evaluate_with(bg, qp, |t, p| (t - p).cos())?;
    let by_tensor = evaluate_protocol_tensor(bg, qp)?;
    let tol = F::from_f64_lossy(1e-12).max(F::epsilon() * F::from_f64_lossy(64.0));
    if (by_cosine - by_tensor).abs() > tol {
        return Err(Error::Inconsistent(format!(
            "cosine and tensor backends disagree: {by_cosine} vs {by_tensor}"
        )));
    }
    Ok(by_cosine)
}

/// Same value via the 4-dimensional EPR calculation:
/// `<psi| D(theta) x C(phi) |psi>` with explicit 2x2 observables.
pub fn evaluate_protocol_tensor<F: Scalar>(
    bg: &BiasedGame,
    qp: &QuantumProtocol<F>,
) -> Result<F> {
    evaluate_with(bg, qp, epr_expectation)
}

fn evaluate_with<F: Scalar>(
    bg: &BiasedGame,
    qp: &QuantumProtocol<F>,
    correlation: impl Fn(F, F) -> F,
) -> Result<F> {
    if qp.theta.len() != bg.ma() || qp.phi.len() != bg.mb() {
        return Err(Error::ShapeMismatch {
            expected: format!("{}+{} angles", bg.ma(), bg.mb()),
            found: format!("{}+{}", qp.theta.len(), qp.phi.len()),
        });
    }
    let mut value = F::zero();
    for (i, &t) in qp.theta.iter().enumerate() {
        for (j, &p) in qp.phi.iter().enumerate() {
            value += F::from_f64_lossy(to_f64(&bg.cell(i, j))) * correlation(t, p);
        }
    }
    Ok(value)
}

fn epr_expectation<F: Scalar>(theta: F, phi: F) -> F {
    let obs = |a: F| {
        // cos(a) X - sin(a) Z
        [[-a.sin(), a.cos()], [a.cos(), a.sin()]]
    };
    let d = obs(theta);
    let c = obs(phi);
    let s = F::one() / (F::one() + F::one()).sqrt();
    let psi = [s, F::zero(), F::zero(), s];
    let mut e = F::zero();
    for (row, &pr) in psi.iter().enumerate() {
        for (col, &pc) in psi.iter().enumerate() {
            let (a, b) = (row / 2, row % 2);
            let (x, y) = (col / 2, col % 2);
            e += pr * d[a][x] * c[b][y] * pc;
        }
    }
    e
}

/// Read planar angles off a rank-2 primal solution.
///
/// The Gram matrix is projected onto its dominant 2-plane; the first Alice
/// vector fixes the zero angle, and a global reflection is chosen so the
/// first angle that is not on the axis comes out non-negative. Fails when
/// more than `1e-8` of the spectral mass lies outside the plane, or when
/// the resulting angles do not reproduce every inner product to `1e-9`.
pub fn extract_observables<F: Scalar>(ps: &PrimalSolution<F>) -> Result<QuantumProtocol<F>> {
    let g = &ps.gram;
    let m = g.dim();
    if m < 2 {
        return Err(Error::Domain("need at least two vectors".into()));
    }
    let eig = eigen_sym(g)?;
    let trace: F = eig.values.iter().copied().sum();
    let top1 = eig.values[m - 1].max(F::zero());
    let top2 = eig.values[m - 2].max(F::zero());
    let residual = (F::one() - (top1 + top2) / trace).max(F::zero());
    if residual > F::from_f64_lossy(1e-8) {
        return Err(Error::ExtractionUnsupported {
            residual: residual.to_f64().unwrap_or(f64::NAN),
        });
    }
    let (s1, s2) = (top1.sqrt(), top2.sqrt());
    let raw: Vec<F> = (0..m)
        .map(|i| {
            let x = s1 * eig.vectors[m - 1][i];
            let y = s2 * eig.vectors[m - 2][i];
            y.atan2(x)
        })
        .collect();

    let mut angles: Vec<F> = raw.iter().map(|&a| wrap_angle(a - raw[0])).collect();
    angles[0] = F::zero();
    let sin_floor = F::from_f64_lossy(1e-6);
    if let Some(first) = angles.iter().find(|a| a.sin().abs() > sin_floor) {
        if *first < F::zero() {
            for a in angles.iter_mut() {
                *a = wrap_angle(-*a);
            }
        }
    }

    let mut worst = F::zero();
    for r in 0..m {
        for c in (r + 1)..m {
            worst = worst.max(((angles[r] - angles[c]).cos() - g.entry(r, c)).abs());
        }
    }
    if worst > F::from_f64_lossy(1e-9) {
        return Err(Error::ExtractionUnsupported {
            residual: worst.to_f64().unwrap_or(f64::NAN),
        });
    }

    let ma = ps.u.len();
    Ok(QuantumProtocol {
        theta: angles[..ma].to_vec(),
        phi: angles[ma..].to_vec(),
    })
}

/// Wrap into `(-pi, pi]`.
fn wrap_angle<F: Scalar>(a: F) -> F {
    let pi = F::PI();
    let two_pi = pi + pi;
    let mut x = a - two_pi * ((a + pi) / two_pi).floor();
    if x <= -pi {
        x += two_pi;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{alpha, Grouping, ThresholdGame};
    use crate::numerics::rat;
    use crate::quantum::{solve_primal, SolverConfig};
    use crate::reduction::reduce;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn chsh() -> BiasedGame {
        let game = ThresholdGame::and_game(2).unwrap();
        reduce(&game, &Grouping::new(1, 2).unwrap()).unwrap().0
    }

    #[test]
    fn formula_known_points() {
        let v: f64 = vq_threshold_formula(2, &rat(1, 1)).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let v: f64 = vq_threshold_formula(3, &rat(1, 1)).unwrap();
        assert!((v - 10f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn protocol1_reduces_to_the_chsh_optimum() {
        let qp = protocol1::<f64>(2, &rat(1, 1)).unwrap();
        assert_eq!(qp.theta[0], 0.0);
        assert!((qp.theta[1] + FRAC_PI_2).abs() < 1e-15); // D1 = Z
        assert!((qp.phi[0] + FRAC_PI_4).abs() < 1e-15); // C0 = (X+Z)/sqrt(2)
        assert!((qp.phi[1] - FRAC_PI_4).abs() < 1e-15); // C1 = (X-Z)/sqrt(2)
        let v = evaluate_protocol(&chsh(), &qp).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn protocol1_matches_the_formula_across_n_and_alpha() {
        for n in 2..=30u32 {
            for tt in (n..=2 * n).step_by(3) {
                let game = ThresholdGame::from_abs_threshold(n, tt as u64, 2).unwrap();
                let a = alpha(&game).unwrap();
                let qp = protocol1::<f64>(n, &a).unwrap();
                let (bg, _) = reduce(&game, &Grouping::new(1, n).unwrap()).unwrap();
                let direct = evaluate_protocol(&bg, &qp).unwrap();
                let formula: f64 = vq_threshold_formula(n, &a).unwrap();
                assert!(
                    (direct - formula).abs() <= 1e-12,
                    "n={n} t={tt}/2: protocol {direct} vs formula {formula}"
                );
            }
        }
    }

    #[test]
    fn equal_angles_give_the_all_plus_classical_value() {
        let bg = chsh();
        let qp = QuantumProtocol {
            theta: vec![0.3f64, 0.3],
            phi: vec![0.3, 0.3],
        };
        let v = evaluate_protocol(&bg, &qp).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chsh_angles_hit_tsirelson() {
        let qp = QuantumProtocol {
            theta: vec![0.0f64, FRAC_PI_2],
            phi: vec![FRAC_PI_4, -FRAC_PI_4],
        };
        let v = evaluate_protocol(&chsh(), &qp).unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn backends_agree_on_arbitrary_angles() {
        let bg = chsh();
        let mut a = 0.1f64;
        for step in 0..200 {
            a = (a * 1.7 + 0.31 + step as f64 * 0.013).sin() * 3.0;
            let qp = QuantumProtocol {
                theta: vec![a, a * 0.7 - 1.0],
                phi: vec![1.9 - a, a * a % 3.0 - 1.5],
            };
            let c = evaluate_with(&bg, &qp, |t, p| (t - p).cos()).unwrap();
            let t = evaluate_protocol_tensor(&bg, &qp).unwrap();
            assert!((c - t).abs() <= 1e-12, "angle set {step}: {c} vs {t}");
        }
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let qp = QuantumProtocol {
            theta: vec![0.0f64],
            phi: vec![0.0, 0.0],
        };
        assert!(evaluate_protocol(&chsh(), &qp).is_err());
    }

    #[test]
    fn extraction_recovers_the_chsh_geometry() {
        let bg = chsh();
        let cfg = SolverConfig::default();
        let ps = solve_primal::<f64>(&bg, &cfg).unwrap();
        let qp = extract_observables(&ps).unwrap();
        assert_eq!(qp.theta[0], 0.0);
        assert!((qp.theta[1] - FRAC_PI_2).abs() < 1e-6, "{}", qp.theta[1]);
        assert!((qp.phi[0] - FRAC_PI_4).abs() < 1e-6);
        assert!((qp.phi[1] + FRAC_PI_4).abs() < 1e-6);
        let v = evaluate_protocol(&bg, &qp).unwrap();
        assert!((v - ps.value).abs() <= 1e-8);
    }

    #[test]
    fn high_rank_solutions_are_refused() {
        let dim = 4;
        let mut gram = crate::numerics::SymMatrix::zeros(dim);
        for i in 0..dim {
            gram.set(i, i, 1.0f64);
        }
        let basis: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| f64::from(u8::from(i == j))).collect())
            .collect();
        let ps = crate::quantum::PrimalSolution {
            u: basis[..2].to_vec(),
            v: basis[2..].to_vec(),
            value: 0.0,
            gram,
            converged: true,
        };
        match extract_observables(&ps) {
            Err(Error::ExtractionUnsupported { residual }) => assert!(residual > 0.4),
            other => panic!("expected rank refusal, got {other:?}"),
        }
    }
}

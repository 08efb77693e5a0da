//! Primal solver and KKT dual for the XOR-game SDP.
//!
//! The primal `max 1/2 Tr(GW)` over unit-diagonal PSD `G` is equivalent to
//! maximizing `sum_ij M[i][j] (u_i . v_j)` over unit vectors, with `M` the
//! off-diagonal block of `W`. Alternating maximization updates each side to
//! the normalized weighted sum of the other; every update is monotone, so
//! each restart converges to a stationary point and the best of many
//! restarts reaches the optimum. The dual vector is read off stationarity:
//! `lambda_i = 1/2 sum_j W_ij (u_i . v_j)`, one rule for every game class.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{is_psd, to_f64, SymMatrix};
use crate::quantum::{DualCertificate, PrimalSolution, SolverConfig};
use crate::reduction::BiasedGame;
use crate::scalar::Scalar;

/// The symmetric SDP weight matrix: zero diagonal blocks and
/// `W[i][mA + j] = pA[i] pB[j] signs[i][j]`.
pub fn weight_matrix<F: Scalar>(bg: &BiasedGame) -> SymMatrix<F> {
    let (ma, mb) = (bg.ma(), bg.mb());
    let mut w = SymMatrix::zeros(ma + mb);
    for i in 0..ma {
        for j in 0..mb {
            w.set(i, ma + j, F::from_f64_lossy(to_f64(&bg.cell(i, j))));
        }
    }
    w
}

struct Restart<F> {
    u: Vec<Vec<F>>,
    v: Vec<Vec<F>>,
    value: F,
    converged: bool,
}

/// Best-of-restarts alternating maximization from seeded random starts.
///
/// Restarts are independent (one PRNG stream each) and run in parallel; the
/// reduction keeps the lowest-index maximizer, so results are reproducible
/// from the seed alone regardless of thread count.
pub fn solve_primal<F: Scalar>(bg: &BiasedGame, cfg: &SolverConfig) -> Result<PrimalSolution<F>> {
    let (ma, mb) = (bg.ma(), bg.mb());
    let dim = cfg.dimension.unwrap_or(ma + mb);
    if dim == 0 {
        return Err(Error::Domain("vector dimension must be positive".into()));
    }
    let m: Vec<Vec<F>> = (0..ma)
        .map(|i| {
            (0..mb)
                .map(|j| F::from_f64_lossy(to_f64(&bg.cell(i, j))))
                .collect()
        })
        .collect();

    let restarts = cfg.restarts.max(1);
    let runs: Vec<Restart<F>> = (0..restarts)
        .into_par_iter()
        .map(|idx| run_restart(&m, ma, mb, dim, cfg, idx))
        .collect();
    let best = runs
        .into_iter()
        .reduce(|best, run| if run.value > best.value { run } else { best })
        .expect("at least one restart");

    let vectors: Vec<&Vec<F>> = best.u.iter().chain(best.v.iter()).collect();
    let total = ma + mb;
    let mut gram = SymMatrix::zeros(total);
    for r in 0..total {
        for c in r..total {
            gram.set(r, c, dot(vectors[r], vectors[c]));
        }
    }
    Ok(PrimalSolution {
        u: best.u,
        v: best.v,
        value: best.value,
        gram,
        converged: best.converged,
    })
}

fn run_restart<F: Scalar>(
    m: &[Vec<F>],
    ma: usize,
    mb: usize,
    dim: usize,
    cfg: &SolverConfig,
    idx: u32,
) -> Restart<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(idx as u64 + 1);
    let mut u: Vec<Vec<F>> = (0..ma).map(|_| random_unit(&mut rng, dim)).collect();
    let mut v: Vec<Vec<F>> = (0..mb).map(|_| random_unit(&mut rng, dim)).collect();

    let tol = F::from_f64_lossy(cfg.convergence_tol);
    let mut prev: Option<F> = None;
    let mut converged = false;
    for _ in 0..cfg.max_iterations {
        for (i, ui) in u.iter_mut().enumerate() {
            let mut s = vec![F::zero(); dim];
            for (j, vj) in v.iter().enumerate() {
                axpy(&mut s, m[i][j], vj);
            }
            // a zero update (all-zero row) keeps the previous vector
            if normalize(&mut s) {
                *ui = s;
            }
        }
        for (j, vj) in v.iter_mut().enumerate() {
            let mut s = vec![F::zero(); dim];
            for (i, ui) in u.iter().enumerate() {
                axpy(&mut s, m[i][j], ui);
            }
            if normalize(&mut s) {
                *vj = s;
            }
        }
        let value = objective(m, &u, &v);
        if let Some(p) = prev {
            if (value - p).abs() <= tol * (F::one() + value.abs()) {
                converged = true;
                prev = Some(value);
                break;
            }
        }
        prev = Some(value);
    }
    Restart {
        value: prev.unwrap_or_else(|| objective(m, &u, &v)),
        u,
        v,
        converged,
    }
}

/// KKT dual vector, `K = 2 diag(lambda) - W`, and its PSD verdict. An
/// uncertified certificate is a valid outcome (it simply proves nothing).
pub fn dual_from_primal<F: Scalar>(
    bg: &BiasedGame,
    ps: &PrimalSolution<F>,
    cfg: &SolverConfig,
) -> Result<DualCertificate<F>> {
    let (ma, mb) = (bg.ma(), bg.mb());
    if ps.u.len() != ma || ps.v.len() != mb {
        return Err(Error::ShapeMismatch {
            expected: format!("{ma}+{mb} vectors"),
            found: format!("{}+{}", ps.u.len(), ps.v.len()),
        });
    }
    let w = weight_matrix::<F>(bg);
    let half = F::from_f64_lossy(0.5);
    let mut lambda = vec![F::zero(); ma + mb];
    for i in 0..ma {
        lambda[i] = half
            * (0..mb)
                .map(|j| w.entry(i, ma + j) * ps.gram.entry(i, ma + j))
                .sum();
    }
    for j in 0..mb {
        lambda[ma + j] = half
            * (0..ma)
                .map(|i| w.entry(i, ma + j) * ps.gram.entry(i, ma + j))
                .sum();
    }
    let dual_value: F = lambda.iter().copied().sum();

    let mut k = SymMatrix::zeros(ma + mb);
    for r in 0..(ma + mb) {
        for c in r..(ma + mb) {
            let base = if r == c {
                (lambda[r] + lambda[r]) - w.entry(r, c)
            } else {
                -w.entry(r, c)
            };
            k.set(r, c, base);
        }
    }
    let (psd, min_eig_k) = is_psd(&k, F::from_f64_lossy(cfg.psd_tol))?;
    let gap = (dual_value - ps.value).abs();
    Ok(DualCertificate {
        lambda,
        dual_value,
        min_eig_k,
        certified: psd && gap <= F::from_f64_lossy(cfg.gap_tol),
        gap,
    })
}

fn random_unit<F: Scalar, R: Rng>(rng: &mut R, dim: usize) -> Vec<F> {
    loop {
        let mut v: Vec<F> = (0..dim)
            .map(|_| F::from_f64_lossy(rng.random_range(-1.0..1.0)))
            .collect();
        if normalize(&mut v) {
            return v;
        }
    }
}

fn normalize<F: Scalar>(v: &mut [F]) -> bool {
    let norm = dot(v, v).sqrt();
    if norm > F::zero() {
        for x in v.iter_mut() {
            *x /= norm;
        }
        true
    } else {
        false
    }
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn axpy<F: Scalar>(acc: &mut [F], coeff: F, v: &[F]) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a += coeff * x;
    }
}

fn objective<F: Scalar>(m: &[Vec<F>], u: &[Vec<F>], v: &[Vec<F>]) -> F {
    let mut total = F::zero();
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            total += m[i][j] * dot(ui, vj);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{Grouping, ThresholdGame};
    use crate::numerics::rat;
    use crate::reduction::reduce;
    use crate::Rational;

    fn chsh() -> BiasedGame {
        let game = ThresholdGame::and_game(2).unwrap();
        reduce(&game, &Grouping::new(1, 2).unwrap()).unwrap().0
    }

    #[test]
    fn weight_matrix_blocks() {
        let w = weight_matrix::<f64>(&chsh());
        assert_eq!(w.dim(), 4);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(w.entry(i, j), 0.0);
                assert_eq!(w.entry(2 + i, 2 + j), 0.0);
            }
        }
        assert_eq!(w.entry(0, 2), 0.25);
        assert_eq!(w.entry(0, 3), 0.25);
        assert_eq!(w.entry(1, 2), 0.25);
        assert_eq!(w.entry(1, 3), -0.25);

        let game = ThresholdGame::and_game(3).unwrap();
        let (bg, _) = reduce(&game, &Grouping::new(1, 3).unwrap()).unwrap();
        let w = weight_matrix::<f64>(&bg);
        assert_eq!(w.entry(0, 2), 0.375);
        assert_eq!(w.entry(0, 3), 0.375);
        assert_eq!(w.entry(1, 2), 0.125);
        assert_eq!(w.entry(1, 3), -0.125);
    }

    #[test]
    fn all_plus_signs_make_the_block_an_outer_product() {
        let bg = BiasedGame::new(
            vec![rat(1, 4), rat(3, 4)],
            vec![rat(2, 5), rat(3, 5)],
            vec![vec![1, 1], vec![1, 1]],
            None,
        )
        .unwrap();
        let w = weight_matrix::<f64>(&bg);
        for i in 0..2 {
            for j in 0..2 {
                let pa = crate::numerics::to_f64(&bg.pa()[i]);
                let pb = crate::numerics::to_f64(&bg.pb()[j]);
                assert!((w.entry(i, 2 + j) - pa * pb).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn chsh_primal_reaches_tsirelson() {
        let ps = solve_primal::<f64>(&chsh(), &SolverConfig::default()).unwrap();
        assert!(ps.converged);
        assert!((ps.value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        for d in 0..4 {
            assert!((ps.gram.entry(d, d) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chsh_dual_certifies_with_known_entries() {
        let bg = chsh();
        let cfg = SolverConfig::default();
        let ps = solve_primal::<f64>(&bg, &cfg).unwrap();
        let cert = dual_from_primal(&bg, &ps, &cfg).unwrap();
        assert!(cert.certified, "gap {} min eig {}", cert.gap, cert.min_eig_k);
        let expect = 1.0 / (4.0 * std::f64::consts::SQRT_2);
        for l in &cert.lambda {
            assert!((l - expect).abs() < 1e-9, "lambda {l}");
        }
        assert!((cert.dual_value - ps.value).abs() <= 1e-9);
    }

    #[test]
    fn suboptimal_primal_is_rejected_by_the_certificate() {
        let bg = chsh();
        let cfg = SolverConfig::default();
        // classical point: every vector the same basis vector
        let e0 = vec![1.0, 0.0, 0.0, 0.0];
        let vectors = vec![e0.clone(), e0.clone(), e0.clone(), e0];
        let mut gram = crate::numerics::SymMatrix::zeros(4);
        for r in 0..4 {
            for c in r..4 {
                gram.set(r, c, 1.0);
            }
        }
        let ps = PrimalSolution {
            u: vectors[..2].to_vec(),
            v: vectors[2..].to_vec(),
            value: 0.5,
            gram,
            converged: true,
        };
        let cert = dual_from_primal(&bg, &ps, &cfg).unwrap();
        assert!(!cert.certified);
        assert!(cert.min_eig_k < -1e-3);
    }

    #[test]
    fn majority_4_2_has_quantum_advantage() {
        let game = ThresholdGame::majority(4).unwrap();
        let (bg, _) = reduce(&game, &Grouping::new(2, 4).unwrap()).unwrap();
        let cfg = SolverConfig::default();
        let ps = solve_primal::<f64>(&bg, &cfg).unwrap();
        assert!((ps.value - 0.7054).abs() < 5e-4);
        let cert = dual_from_primal(&bg, &ps, &cfg).unwrap();
        assert!(cert.certified);
    }

    #[test]
    fn deterministic_across_runs_and_generic_at_f32() {
        let bg = chsh();
        let cfg = SolverConfig {
            seed: 7,
            ..Default::default()
        };
        let a = solve_primal::<f64>(&bg, &cfg).unwrap();
        let b = solve_primal::<f64>(&bg, &cfg).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.u, b.u);

        let cfg32 = SolverConfig {
            convergence_tol: 1e-6,
            restarts: 8,
            ..Default::default()
        };
        let ps = solve_primal::<f32>(&bg, &cfg32).unwrap();
        assert!((ps.value - std::f32::consts::FRAC_1_SQRT_2).abs() < 1e-4);
    }

    #[test]
    fn weak_duality_holds_when_psd() {
        let samples = [(3u32, 1u32, 1u32, 1u32), (5, 1, 1, 2), (6, 2, 1, 2), (4, 2, 1, 1)];
        let cfg = SolverConfig::default();
        for (n, k, r, s) in samples {
            let game = ThresholdGame::new(n, r, s).unwrap();
            let (bg, _) = reduce(&game, &Grouping::new(k, n).unwrap()).unwrap();
            let ps = solve_primal::<f64>(&bg, &cfg).unwrap();
            let cert = dual_from_primal(&bg, &ps, &cfg).unwrap();
            if cert.min_eig_k >= -cfg.psd_tol {
                assert!(
                    cert.dual_value >= ps.value - 1e-9,
                    "weak duality violated at n={n} k={k}"
                );
            }
            let classical = crate::classical::brute_force_value(&bg).unwrap().0;
            assert!(ps.value + 1e-9 >= crate::numerics::to_f64(&classical));
        }
    }

}

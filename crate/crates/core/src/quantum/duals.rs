//! Closed-form and conjectured dual vectors, built exactly and verified
//! numerically.
//!
//! The characteristic-polynomial sign arguments that accompany these
//! vectors on paper are replaced by a direct eigenvalue check of
//! `K = 2 diag(lambda) - W`.

use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::games::{Grouping, ThresholdGame};
use crate::numerics::{
    binomial, is_psd, one_over_pow2, pow2, rat, to_f64, Rational, SymMatrix,
};
use crate::quantum::sdp::weight_matrix;
use crate::quantum::{DualCertificate, SolverConfig};
use crate::reduction::{reduce, BiasedGame};
use crate::scalar::Scalar;

/// Exact dual vector for AND with grouping `(n-k, k)`, on the merged
/// biased-CHSH form of the game; sums to `1 - 1/2^(n-1)`.
pub fn and_dual_lambda_exact(n: u32, k: u32) -> Result<[Rational; 4]> {
    check_grouping(n, k)?;
    let half = rat(1, 2);
    Ok([
        &half - one_over_pow2(n - k + 1),
        one_over_pow2(n - k + 1) - one_over_pow2(n),
        &half - one_over_pow2(k + 1),
        one_over_pow2(k + 1) - one_over_pow2(n),
    ])
}

/// The AND game in its merged two-letter form: Alice's second letter is the
/// all-ones group input (`p1 = 1/2^(n-k)`), likewise for Bob.
fn and_merged_game(n: u32, k: u32) -> Result<BiasedGame> {
    let one = Rational::from(BigInt::one());
    let pa = vec![&one - one_over_pow2(n - k), one_over_pow2(n - k)];
    let pb = vec![&one - one_over_pow2(k), one_over_pow2(k)];
    BiasedGame::new(pa, pb, vec![vec![1, 1], vec![1, -1]], None)
}

/// Certificate from the printed AND dual: `sum(lambda)` equals the
/// classical value exactly, so a PSD verdict proves there is no quantum
/// advantage.
pub fn dual_and_closed_form<F: Scalar>(
    n: u32,
    k: u32,
    cfg: &SolverConfig,
) -> Result<DualCertificate<F>> {
    let lambda = and_dual_lambda_exact(n, k)?;
    let game = and_merged_game(n, k)?;
    certificate_from_exact(&game, &lambda, cfg)
}

/// Exact conjectured dual vector `[lambda_0.., sigma_0..]` for MAJORITY with
/// grouping `(n-k, k)`, length `2k + 2`; sums to `1 - gamma / 2^(n-1)`.
pub fn majority_dual_lambda_exact(n: u32, k: u32) -> Result<Vec<Rational>> {
    check_grouping(n, k)?;
    let t = n.div_ceil(2) as i64; // ceil(n/2)
    let nk = (n - k) as u64;
    let mu = |i: i64| binomial(nk, i);
    let w = |j: i64| binomial(k as u64, j);
    let wsum = |lo: i64, hi: i64| -> BigInt { (lo..=hi).map(w).sum() };
    let musum = |lo: i64, hi: i64| -> BigInt { (lo..=hi).map(|j| mu(t - j)).sum() };
    let ki = k as i64;
    let big = |x: BigInt| Rational::from(x);

    let mut lam = vec![Rational::from(BigInt::zero()); (k + 1) as usize];
    let mut sig = lam.clone();
    lam[0] = rat(1, 2) - big(musum(1, ki)) * one_over_pow2(n - k + 1);

    if k.is_multiple_of(2) {
        let h = ki / 2;
        for i in 1..=h {
            lam[i as usize] = big(mu(t - ki + i - 1) * wsum(i, ki - i)) * one_over_pow2(n + 1);
        }
        for i in 1..=h {
            lam[(h + i) as usize] =
                big(mu(t - h + i - 1) * wsum(h - i + 1, h + i - 1)) * one_over_pow2(n + 1);
        }
        for i in 0..h {
            sig[i as usize] =
                big(w(i) * (pow2(n - k - 1) - musum(i + 1, h))) * one_over_pow2(n);
        }
        sig[h as usize] = big(w(h)) * one_over_pow2(k + 1);
        for i in (h + 1)..=ki {
            sig[i as usize] =
                big(w(i) * (pow2(n - k - 1) - musum(h + 1, i))) * one_over_pow2(n);
        }
    } else {
        let h = (ki - 1) / 2; // (k+1)/2 = h + 1
        for i in 1..=h {
            lam[i as usize] = big(mu(t - ki + i - 1) * wsum(i, ki - i)) * one_over_pow2(n + 1);
        }
        // lam[h + 1] stays zero
        for i in 1..=h {
            lam[(h + 1 + i) as usize] =
                big(mu(t - (h + 1) + i) * wsum(h - i + 1, h + i)) * one_over_pow2(n + 1);
        }
        let delta = pow2(n - k) - mu(t - (h + 1));
        sig[h as usize] = big(w(h + 1) * &delta) * one_over_pow2(n + 1);
        sig[(h + 1) as usize] = sig[h as usize].clone();
        for i in 0..h {
            sig[i as usize] =
                big(w(i) * (&delta - BigInt::from(2) * musum(i + 1, h))) * one_over_pow2(n + 1);
        }
        for i in (h + 2)..=ki {
            sig[i as usize] = big(w(i) * (&delta - BigInt::from(2) * musum(h + 2, i)))
                * one_over_pow2(n + 1);
        }
    }

    lam.extend(sig);
    Ok(lam)
}

/// Certificate from the conjectured MAJORITY dual against the actual
/// reduced game's weight matrix. Not PSD while a quantum advantage exists;
/// PSD from the crossover point on.
///
/// A PSD verdict proves `V_Q <= dual_value`; it collapses the game to its
/// classical value only where `dual_value` equals the classical optimum,
/// which holds on the even-`n`, even-`k` crossover grid but not for odd `k`
/// or the balanced grouping (there the sum tracks the cutoff protocol).
pub fn dual_majority_conjecture<F: Scalar>(
    n: u32,
    k: u32,
    cfg: &SolverConfig,
) -> Result<DualCertificate<F>> {
    let lambda = majority_dual_lambda_exact(n, k)?;
    let game = ThresholdGame::majority(n)?;
    let (bg, _) = reduce(&game, &Grouping::new(k, n)?)?;
    certificate_from_exact(&bg, &lambda, cfg)
}

/// Build `K = 2 diag(lambda) - W` from an exact dual vector and check it.
/// The gap is measured against the dual sum itself being the claimed
/// optimum, so it is zero by construction; certification hinges on PSD.
fn certificate_from_exact<F: Scalar>(
    bg: &BiasedGame,
    lambda: &[Rational],
    cfg: &SolverConfig,
) -> Result<DualCertificate<F>> {
    let dim = bg.ma() + bg.mb();
    if lambda.len() != dim {
        return Err(Error::ShapeMismatch {
            expected: format!("{dim} dual entries"),
            found: format!("{}", lambda.len()),
        });
    }
    let w = weight_matrix::<F>(bg);
    let lam_f: Vec<F> = lambda
        .iter()
        .map(|x| F::from_f64_lossy(to_f64(x)))
        .collect();
    let mut k_mat = SymMatrix::zeros(dim);
    for r in 0..dim {
        for c in r..dim {
            let v = if r == c {
                lam_f[r] + lam_f[r] - w.entry(r, c)
            } else {
                -w.entry(r, c)
            };
            k_mat.set(r, c, v);
        }
    }
    let (psd, min_eig_k) = is_psd(&k_mat, F::from_f64_lossy(cfg.psd_tol))?;
    let dual_value_exact: Rational = lambda.iter().sum();
    Ok(DualCertificate {
        lambda: lam_f,
        dual_value: F::from_f64_lossy(to_f64(&dual_value_exact)),
        min_eig_k,
        certified: psd,
        gap: F::zero(),
    })
}

fn check_grouping(n: u32, k: u32) -> Result<()> {
    if k < 2 || 2 * k > n {
        return Err(Error::Domain(format!(
            "closed-form duals need 2 <= k <= n/2, got k={k}, n={n}"
        )));
    }
    Ok(())
}

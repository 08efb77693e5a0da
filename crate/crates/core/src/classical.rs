//! Exact classical optima: brute-force oracles over deterministic
//! strategies, the closed forms for biased-CHSH-shaped games and AND
//! groupings, the MAJORITY gamma count, and the half-half grouping bound.
//!
//! Everything here stays in exact rationals; floats only appear in reports.

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::games::{alpha, payoff_sign, Grouping, ThresholdGame};
use crate::numerics::{binomial, one_over_pow2, pow2, rat, Rational};
use crate::reduction::BiasedGame;

/// Deterministic `±1` answers, one per input letter on each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicStrategy {
    pub alice: Vec<i8>,
    pub bob: Vec<i8>,
}

/// Exact game value `sum_ij pA[i] pB[j] signs[i][j] a[i] b[j]`.
pub fn strategy_value(bg: &BiasedGame, strategy: &DeterministicStrategy) -> Result<Rational> {
    if strategy.alice.len() != bg.ma() || strategy.bob.len() != bg.mb() {
        return Err(Error::ShapeMismatch {
            expected: format!("{}+{} outputs", bg.ma(), bg.mb()),
            found: format!("{}+{}", strategy.alice.len(), strategy.bob.len()),
        });
    }
    let mut value = Rational::from(BigInt::zero());
    for i in 0..bg.ma() {
        for j in 0..bg.mb() {
            let s = strategy.alice[i] * strategy.bob[j];
            let cell = bg.cell(i, j);
            value += if s > 0 { cell } else { -cell };
        }
    }
    Ok(value)
}

/// Exact optimum over all deterministic strategies, with a maximizing
/// strategy.
///
/// Bob's `2^mB` assignments are enumerated; Alice's best response is
/// row-wise the sign of the weighted row sum (exact, so this is a full
/// maximization, not a heuristic). Ties keep `+1` and the first maximizing
/// Bob assignment in lexicographic order, which makes the returned strategy
/// deterministic.
pub fn brute_force_value(bg: &BiasedGame) -> Result<(Rational, DeterministicStrategy)> {
    let (ma, mb) = (bg.ma(), bg.mb());
    if ma + mb > 30 {
        return Err(Error::Capacity(format!(
            "brute force limited to mA + mB <= 30, got {}",
            ma + mb
        )));
    }
    let cells: Vec<Vec<Rational>> = (0..ma)
        .map(|i| (0..mb).map(|j| bg.cell(i, j)).collect())
        .collect();

    let mut best: Option<(Rational, DeterministicStrategy)> = None;
    for mask in 0u32..(1 << mb) {
        // bit (mb-1-j) drives b[j], so ascending masks scan Bob's vectors
        // in lexicographic order with +1 before -1
        let bob: Vec<i8> = (0..mb)
            .map(|j| if mask >> (mb - 1 - j) & 1 == 1 { -1 } else { 1 })
            .collect();
        let mut value = Rational::from(BigInt::zero());
        let mut alice = Vec::with_capacity(ma);
        for row in &cells {
            let mut row_sum = Rational::from(BigInt::zero());
            for (j, cell) in row.iter().enumerate() {
                row_sum += if bob[j] > 0 { cell.clone() } else { -cell.clone() };
            }
            alice.push(if row_sum.is_negative() { -1 } else { 1 });
            value += row_sum.abs();
        }
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, DeterministicStrategy { alice, bob }));
        }
    }
    Ok(best.expect("at least one assignment"))
}

/// Exact optimum of the grouped game computed directly on weight classes,
/// bypassing the reduction; the independent side of the oracle pair.
pub fn grouped_weight_value(game: &ThresholdGame, grouping: &Grouping) -> Result<Rational> {
    let n = game.n();
    let k = grouping.k();
    if n > 30 {
        return Err(Error::Capacity(format!(
            "per-weight enumeration limited to n <= 30, got {n}"
        )));
    }
    let to_i64 = |b: BigInt| i64::try_from(b).expect("binomial fits i64 for n <= 30");
    let mu: Vec<i64> = (0..=(n - k))
        .map(|i| to_i64(binomial((n - k) as u64, i as i64)))
        .collect();
    let w: Vec<i64> = (0..=k)
        .map(|j| to_i64(binomial(k as u64, j as i64)))
        .collect();
    let sign: Vec<Vec<i64>> = (0..=(n - k))
        .map(|i| {
            (0..=k)
                .map(|j| payoff_sign(game, i, j).map(i64::from))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = i64::MIN;
    for mask in 0u32..(1 << (k + 1)) {
        let mut total = 0i64;
        for i in 0..=(n - k) as usize {
            let mut row = 0i64;
            for j in 0..=k as usize {
                let b = if mask >> (k as usize - j) & 1 == 1 { -1 } else { 1 };
                row += w[j] * sign[i][j] * b;
            }
            total += mu[i] * row.abs();
        }
        best = best.max(total);
    }
    Ok(Rational::new(BigInt::from(best), pow2(n)))
}

/// Closed form for the `(n-1, 1)` grouping: `1 - alpha / 2^(n-1)`.
pub fn vc_threshold_k1(game: &ThresholdGame) -> Result<Rational> {
    let a = alpha(game)?;
    Ok(Rational::from(BigInt::one()) - a * one_over_pow2(game.n() - 1))
}

/// Closed form for AND with any grouping: `1 - 1/2^(n-1)`. The value does
/// not depend on the group size `k`.
pub fn vc_and(n: u32, _k: u32) -> Rational {
    Rational::from(BigInt::one()) - one_over_pow2(n - 1)
}

/// The MAJORITY loss count `gamma` of the all-plus-Bob protocol, so that
/// its value is `1 - gamma / 2^(n-1)`.
///
/// Both parity cases read `mu[t-i] * w[j]` in their sums; the variant with
/// `mu[t-k]` in the odd second sum does not reproduce the known `(10, 5)`
/// value. The count gives the classical optimum for `k < n/2` (and for the
/// balanced groupings small enough to coincide); for balanced `k = n/2`
/// with even `k >= 4` the protocol behind it is beaten by a later cutoff
/// and [`vc_half_half`] is the optimum.
pub fn gamma_majority(n: u32, k: u32) -> Result<BigInt> {
    if k < 2 || 2 * k > n {
        return Err(Error::Domain(format!(
            "gamma is defined for 2 <= k <= n/2, got k={k}, n={n}"
        )));
    }
    let t_cap = n.div_ceil(2); // ceil(n/2)
    let mu = |i: i64| binomial((n - k) as u64, i);
    let w = |j: i64| binomial(k as u64, j);
    let t = t_cap as i64;
    let k = k as i64;

    let mut gamma = BigInt::zero();
    if k % 2 == 0 {
        for i in 1..=(k - 1) {
            for j in 0..=(i - 1) {
                gamma += mu(t - i) * w(j);
            }
        }
        gamma += mu(t - k);
    } else {
        for i in 1..=((k - 1) / 2) {
            for j in 0..=(i - 1) {
                gamma += mu(t - i) * w(j);
            }
        }
        for i in ((k + 1) / 2)..=k {
            for j in i..=k {
                gamma += mu(t - i) * w(j);
            }
        }
    }
    Ok(gamma)
}

/// `1 - gamma / 2^(n-1)`.
pub fn vc_majority(n: u32, k: u32) -> Result<Rational> {
    let gamma = gamma_majority(n, k)?;
    Ok(Rational::from(BigInt::one()) - Rational::new(gamma, pow2(n - 1)))
}

/// The optimal deterministic protocol on the reduced alphabet: Bob answers
/// `+1` everywhere; Alice answers `+1` up to a weight cutoff that depends on
/// the parity of `k`, and `-1` above it.
pub fn protocol2_strategy(
    game: &ThresholdGame,
    grouping: &Grouping,
) -> Result<DeterministicStrategy> {
    let n = game.n();
    let k = grouping.k();
    let t_cap = game.t_ceil();
    // the reduced alphabet has k+1 letters only when t <= n-k
    if (game.r() as u64 * n as u64) > (game.s() as u64 * (n - k) as u64) {
        return Err(Error::Domain(format!(
            "protocol requires t <= n-k, got t = {}",
            game.t()
        )));
    }
    let cutoff = if k.is_multiple_of(2) {
        t_cap as i64 - k as i64
    } else {
        t_cap as i64 - (k as i64 + 1) / 2
    };
    let mut alice = vec![1i8];
    for x in 1..=k as i64 {
        let weight = t_cap as i64 - k as i64 - 1 + x;
        alice.push(if weight <= cutoff { 1 } else { -1 });
    }
    Ok(DeterministicStrategy {
        alice,
        bob: vec![1; (k + 1) as usize],
    })
}

/// Closed form for MAJORITY with the balanced grouping `k = n/2`:
/// `1/2 + C(n/2-1, n/4)^2 / 2^(n-1)` when `n/2` is even, plain `1/2` when
/// it is odd.
pub fn vc_half_half(n: u32) -> Result<Rational> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "balanced grouping needs even n >= 2, got {n}"
        )));
    }
    let k = n / 2;
    let half = rat(1, 2);
    if k % 2 == 1 {
        return Ok(half);
    }
    let c = binomial((k - 1) as u64, (k / 2) as i64);
    Ok(half + Rational::new(&c * &c, pow2(n - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::reduce;

    fn game(n: u32, r: u32, s: u32) -> ThresholdGame {
        ThresholdGame::new(n, r, s).unwrap()
    }

    fn reduced(n: u32, r: u32, s: u32, k: u32) -> BiasedGame {
        reduce(&game(n, r, s), &Grouping::new(k, n).unwrap())
            .unwrap()
            .0
    }

    #[test]
    fn all_plus_strategy_hits_the_k1_closed_form() {
        for (n, r, s) in [(3, 1, 1), (5, 1, 2), (7, 2, 3), (9, 1, 1)] {
            let g = game(n, r, s);
            let bg = reduced(n, r, s, 1);
            let all_plus = DeterministicStrategy {
                alice: vec![1; bg.ma()],
                bob: vec![1; bg.mb()],
            };
            assert_eq!(
                strategy_value(&bg, &all_plus).unwrap(),
                vc_threshold_k1(&g).unwrap()
            );
        }
    }

    #[test]
    fn negating_alice_negates_the_value() {
        let bg = reduced(6, 1, 2, 2);
        let s = DeterministicStrategy {
            alice: vec![1, -1, 1],
            bob: vec![1, 1, -1],
        };
        let neg = DeterministicStrategy {
            alice: s.alice.iter().map(|a| -a).collect(),
            bob: s.bob.clone(),
        };
        assert_eq!(
            strategy_value(&bg, &neg).unwrap(),
            -strategy_value(&bg, &s).unwrap()
        );
    }

    #[test]
    fn strategy_shape_is_checked() {
        let bg = reduced(4, 1, 2, 2);
        let bad = DeterministicStrategy {
            alice: vec![1],
            bob: vec![1, 1, 1],
        };
        assert!(strategy_value(&bg, &bad).is_err());
    }

    #[test]
    fn chsh_brute_force() {
        let bg = reduced(2, 1, 1, 1);
        let (v, s) = brute_force_value(&bg).unwrap();
        assert_eq!(v, rat(1, 2));
        assert_eq!(strategy_value(&bg, &s).unwrap(), v);
    }

    #[test]
    fn all_plus_game_is_won_outright() {
        let bg = BiasedGame::new(
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(1, 3), rat(2, 3)],
            vec![vec![1, 1], vec![1, 1]],
            None,
        )
        .unwrap();
        let (v, _) = brute_force_value(&bg).unwrap();
        assert_eq!(v, rat(1, 1));
    }

    #[test]
    fn ten_five_grouping_protocol_value() {
        let g = game(15, 8, 15);
        let grouping = Grouping::new(5, 15).unwrap();
        let bg = reduced(15, 8, 15, 5);
        let protocol_value = rat(19184, 32768);

        // gamma counts exactly the protocol's losses
        assert_eq!(vc_majority(15, 5).unwrap(), protocol_value);
        let p2 = protocol2_strategy(&g, &grouping).unwrap();
        assert_eq!(p2.alice, vec![1, 1, 1, 1, -1, -1]);
        assert_eq!(strategy_value(&bg, &p2).unwrap(), protocol_value);

        // the protocol is not optimal here: flipping Bob's all-ones answer
        // wins more, and both independent oracles agree on the optimum
        let (bf, best) = brute_force_value(&bg).unwrap();
        assert_eq!(bf, rat(2433, 4096));
        assert_eq!(grouped_weight_value(&g, &grouping).unwrap(), bf);
        assert!(bf > protocol_value);
        assert_eq!(best.bob, vec![1, 1, 1, 1, 1, -1]);
    }

    #[test]
    fn gamma_small_cases() {
        assert_eq!(gamma_majority(4, 2).unwrap(), BigInt::from(3));
        assert_eq!(vc_majority(4, 2).unwrap(), rat(5, 8));
        assert_eq!(gamma_majority(6, 2).unwrap(), BigInt::from(10));
        assert_eq!(vc_majority(6, 2).unwrap(), rat(11, 16));
        assert_eq!(gamma_majority(15, 5).unwrap(), BigInt::from(6792));
        assert!(gamma_majority(4, 3).is_err());
    }

    #[test]
    fn and_closed_form() {
        assert_eq!(vc_and(4, 2), rat(7, 8));
        assert_eq!(vc_and(6, 3), rat(31, 32));
        assert_eq!(vc_and(12, 2), rat(2047, 2048));
    }

    #[test]
    fn k1_closed_form_examples() {
        assert_eq!(vc_threshold_k1(&game(2, 1, 1)).unwrap(), rat(1, 2));
        assert_eq!(vc_threshold_k1(&game(3, 2, 3)).unwrap(), rat(1, 2));
        assert_eq!(
            vc_threshold_k1(&game(10, 1, 1)).unwrap(),
            rat(511, 512)
        );
    }

    #[test]
    fn chsh_grouped_weights() {
        let g = game(2, 1, 1);
        assert_eq!(
            grouped_weight_value(&g, &Grouping::new(1, 2).unwrap()).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn and_grouped_matches_formula() {
        let g = game(4, 1, 1);
        assert_eq!(
            grouped_weight_value(&g, &Grouping::new(2, 4).unwrap()).unwrap(),
            rat(7, 8)
        );
    }

    #[test]
    fn protocol2_small_even_case() {
        let g = game(4, 1, 2);
        let grouping = Grouping::new(2, 4).unwrap();
        let p2 = protocol2_strategy(&g, &grouping).unwrap();
        // +1 only on weights <= t-k = 0, i.e. the merged letter and weight 0
        assert_eq!(p2.alice, vec![1, 1, -1]);
        let bg = reduced(4, 1, 2, 2);
        assert_eq!(strategy_value(&bg, &p2).unwrap(), rat(5, 8));
    }

    #[test]
    fn half_half_closed_form() {
        assert_eq!(vc_half_half(4).unwrap(), rat(5, 8));
        assert_eq!(vc_half_half(6).unwrap(), rat(1, 2));
        assert_eq!(vc_half_half(8).unwrap(), rat(1, 2) + rat(9, 128));
        assert!(vc_half_half(5).is_err());
    }

    #[test]
    fn oversized_inputs_hit_the_budget() {
        let g = game(31, 1, 1);
        assert!(grouped_weight_value(&g, &Grouping::new(2, 31).unwrap()).is_err());
    }
}

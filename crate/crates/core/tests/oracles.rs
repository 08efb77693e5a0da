//! Cross-validation of the classical layer: the reduction preserves exact
//! optimal values, the closed forms match brute force on their domains, and
//! the weight-class restriction loses nothing against full-string
//! enumeration.

mod common;

use common::{full_string_value, threshold_grid};
use loccg::numerics::{one_over_pow2, rat, Rational};
use loccg::{
    alpha, brute_force_value, gamma_majority, grouped_weight_value, ns_box_value,
    protocol2_strategy, reduce, strategy_value, vc_and, vc_half_half, vc_majority,
    vc_threshold_k1, Grouping, ThresholdGame,
};
use num::One;

#[test]
fn reduction_preserves_exact_classical_values() {
    for n in 2..=12u32 {
        for k in 1..=(n / 2) {
            let grouping = Grouping::new(k, n).unwrap();
            for game in threshold_grid(n) {
                if game.t_ceil() < k {
                    continue;
                }
                let (bg, _) = reduce(&game, &grouping).unwrap();
                let (reduced_opt, _) = brute_force_value(&bg).unwrap();
                let grouped_opt = grouped_weight_value(&game, &grouping).unwrap();
                assert_eq!(
                    reduced_opt,
                    grouped_opt,
                    "value not preserved at n={n} k={k} t={}",
                    game.t()
                );
                assert_eq!(ns_box_value(&bg), rat(1, 1));
            }
        }
    }
}

#[test]
fn weight_classes_lose_nothing_against_full_strings() {
    for n in 2..=8u32 {
        for k in 1..=(n / 2) {
            if n - k > 4 {
                continue;
            }
            let grouping = Grouping::new(k, n).unwrap();
            for game in threshold_grid(n) {
                if game.t_ceil() < k {
                    continue;
                }
                assert_eq!(
                    full_string_value(&game, k),
                    grouped_weight_value(&game, &grouping).unwrap(),
                    "full-string mismatch at n={n} k={k} t={}",
                    game.t()
                );
            }
        }
    }
}

#[test]
fn k1_closed_form_is_the_optimum_everywhere() {
    for n in 2..=12u32 {
        let grouping = Grouping::new(1, n).unwrap();
        for game in threshold_grid(n) {
            let formula = vc_threshold_k1(&game).unwrap();
            let (bf, _) = brute_force_value(&reduce(&game, &grouping).unwrap().0).unwrap();
            assert_eq!(formula, bf, "n={n} t={}", game.t());

            // the reduced game is a biased CHSH game with Alice bias
            // alpha / 2^(n-1)
            let (bg, _) = reduce(&game, &grouping).unwrap();
            assert_eq!(bg.ma(), 2);
            assert_eq!(bg.mb(), 2);
            assert_eq!(
                bg.pa()[1],
                alpha(&game).unwrap() * one_over_pow2(n - 1),
                "bias mismatch at n={n} t={}",
                game.t()
            );
        }
    }
}

#[test]
fn and_closed_form_is_the_optimum_for_all_groupings() {
    for n in 4..=12u32 {
        for k in 2..=(n / 2) {
            let game = ThresholdGame::and_game(n).unwrap();
            let grouping = Grouping::new(k, n).unwrap();
            assert_eq!(
                vc_and(n, k),
                grouped_weight_value(&game, &grouping).unwrap(),
                "n={n} k={k}"
            );
        }
    }
}

#[test]
fn gamma_is_the_optimum_for_pair_groupings() {
    for n in 4..=16u32 {
        let game = ThresholdGame::majority(n).unwrap();
        let grouping = Grouping::new(2, n).unwrap();
        assert_eq!(
            vc_majority(n, 2).unwrap(),
            grouped_weight_value(&game, &grouping).unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn gamma_matches_its_protocol_for_larger_groups() {
    // for k >= 3 the cutoff protocol is not optimal in general, but gamma
    // still counts exactly that protocol's losses
    for n in 6..=14u32 {
        let game = ThresholdGame::majority(n).unwrap();
        for k in 3..=(n / 2) {
            let grouping = Grouping::new(k, n).unwrap();
            let (bg, _) = reduce(&game, &grouping).unwrap();
            let p2 = protocol2_strategy(&game, &grouping).unwrap();
            assert_eq!(
                strategy_value(&bg, &p2).unwrap(),
                vc_majority(n, k).unwrap(),
                "n={n} k={k}"
            );
            let (optimum, _) = brute_force_value(&bg).unwrap();
            assert!(optimum >= vc_majority(n, k).unwrap());
        }
    }
}

#[test]
fn protocol2_is_optimal_for_pair_groupings() {
    for n in 4..=14u32 {
        let game = ThresholdGame::majority(n).unwrap();
        let grouping = Grouping::new(2, n).unwrap();
        let (bg, _) = reduce(&game, &grouping).unwrap();
        let p2 = protocol2_strategy(&game, &grouping).unwrap();
        let (bf, _) = brute_force_value(&bg).unwrap();
        assert_eq!(strategy_value(&bg, &p2).unwrap(), bf, "n={n}");
    }
}

#[test]
fn half_half_formula_matches_the_optimum_only_at_the_smallest_size() {
    // the balanced closed form is a protocol-level bound; brute force beats
    // it from n = 6 on
    let game4 = ThresholdGame::majority(4).unwrap();
    assert_eq!(
        vc_half_half(4).unwrap(),
        grouped_weight_value(&game4, &Grouping::new(2, 4).unwrap()).unwrap()
    );
    for n in [6u32, 8, 10, 12] {
        let game = ThresholdGame::majority(n).unwrap();
        let optimum = grouped_weight_value(&game, &Grouping::new(n / 2, n).unwrap()).unwrap();
        assert!(
            optimum >= vc_half_half(n).unwrap(),
            "balanced bound exceeded the optimum at n={n}"
        );
    }
}

#[test]
fn gamma_loss_count_never_exceeds_the_mass() {
    for n in 4..=16u32 {
        for k in 2..=(n / 2) {
            let gamma = gamma_majority(n, k).unwrap();
            let value = vc_majority(n, k).unwrap();
            assert!(value <= Rational::one(), "n={n} k={k}");
            assert!(gamma >= num::BigInt::from(0));
        }
    }
}

//! Shared oracle helpers for the integration suites.

use loccg::numerics::{pow2, Rational};
use loccg::{threshold_output, ThresholdGame};
use num::bigint::BigInt;

/// Exact classical optimum by unrestricted enumeration over all Boolean
/// output functions on full bit strings (no weight-class merging): Bob's
/// function is enumerated outright, Alice's best response is taken string
/// by string. Only feasible for tiny groups; independent of every
/// weight-class argument in the library.
pub fn full_string_value(game: &ThresholdGame, k: u32) -> Rational {
    let n = game.n();
    let nk = n - k;
    assert!(nk <= 4 && k <= 4, "full enumeration budget");
    let x_strings: Vec<u32> = (0..(1u32 << nk)).collect();
    let y_strings: Vec<u32> = (0..(1u32 << k)).collect();
    let sign = |wx: u32, wy: u32| -> i64 {
        if threshold_output(game, wx, wy).unwrap() == 0 {
            1
        } else {
            -1
        }
    };

    let mut best = i64::MIN;
    for bmask in 0u64..(1u64 << y_strings.len()) {
        let b: Vec<i64> = (0..y_strings.len())
            .map(|idx| if bmask >> idx & 1 == 1 { -1 } else { 1 })
            .collect();
        let mut total = 0i64;
        for &x in &x_strings {
            let wx = x.count_ones();
            let mut row = 0i64;
            for (idx, &y) in y_strings.iter().enumerate() {
                row += sign(wx, y.count_ones()) * b[idx];
            }
            total += row.abs();
        }
        best = best.max(total);
    }
    Rational::new(BigInt::from(best), pow2(n))
}

/// All thresholds on the half-integer grid `n/2 <= t <= n`, as games.
pub fn threshold_grid(n: u32) -> Vec<ThresholdGame> {
    (n..=2 * n)
        .map(|tt| ThresholdGame::from_abs_threshold(n, tt as u64, 2).unwrap())
        .collect()
}

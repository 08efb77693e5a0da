use num::bigint::BigInt;
use num::{One, Zero};

/// Binomial coefficient `C(n, k)` as a big integer.
///
/// Out-of-range `k` (negative or above `n`) returns 0, so weight sums can
/// index binomials without guarding every boundary.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut res = BigInt::one();
    for i in 0..k {
        // Exact at every step: the partial product is C(n, i+1) * i!.
        res = res * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    res
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn central_and_boundary_values() {
        assert_eq!(binomial(10, 5), BigInt::from(252));
        assert_eq!(binomial(7, 0), BigInt::one());
        assert_eq!(binomial(4, 6), BigInt::zero());
        assert_eq!(binomial(4, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn large_arguments_stay_exact() {
        assert_eq!(
            binomial(64, 32),
            "1832624140942590534".parse::<BigInt>().unwrap()
        );
    }

    proptest! {
        #[test]
        fn pascal_rule(n in 1u64..=64, k in 0i64..=64) {
            prop_assume!(k as u64 <= n);
            prop_assert_eq!(
                binomial(n, k),
                binomial(n - 1, k - 1) + binomial(n - 1, k)
            );
        }
    }
}

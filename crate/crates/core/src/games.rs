//! Threshold-family games and their grouping parameters.
//!
//! A game is an `n`-player XOR game whose target bit is 1 exactly when the
//! total input Hamming weight reaches the threshold `t = r*n/s`. `t = n` is
//! AND, `t = n/2` is MAJORITY (half-integer for odd `n`). The payoff depends
//! only on the two groups' weights, which is what every evaluator here
//! exploits.

use num::bigint::BigInt;
use num::One;

use crate::error::{Error, Result};
use crate::numerics::{binomial, rat, Rational};

/// An `n`-player threshold game with threshold `t = r*n/s`.
///
/// The fraction `r/s` is kept reduced so case splits on `n mod s` are
/// unambiguous. Construction outside the studied band `n/2 <= t <= n` is
/// allowed; [`ThresholdGame::in_studied_range`] reports it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdGame {
    n: u32,
    r: u32,
    s: u32,
}

impl ThresholdGame {
    pub fn new(n: u32, r: u32, s: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("player count must be positive".into()));
        }
        if r == 0 || s == 0 || r > s {
            return Err(Error::Domain(format!(
                "threshold fraction must satisfy 1 <= r <= s, got {r}/{s}"
            )));
        }
        let g = gcd(r, s);
        Ok(Self {
            n,
            r: r / g,
            s: s / g,
        })
    }

    /// AND: threshold `t = n`.
    pub fn and_game(n: u32) -> Result<Self> {
        Self::new(n, 1, 1)
    }

    /// MAJORITY: threshold `t = n/2` exactly (half-integer for odd `n`).
    pub fn majority(n: u32) -> Result<Self> {
        Self::new(n, 1, 2)
    }

    /// From an absolute threshold `t_num/t_den` (e.g. `8/1` or `5/2`),
    /// reduced to the fraction-of-`n` form.
    pub fn from_abs_threshold(n: u32, t_num: u64, t_den: u64) -> Result<Self> {
        if t_den == 0 || t_num == 0 {
            return Err(Error::Domain("absolute threshold must be positive".into()));
        }
        if t_num > t_den * n as u64 {
            return Err(Error::Domain(format!(
                "threshold {t_num}/{t_den} exceeds player count {n}"
            )));
        }
        let (r, s) = reduce_u64(t_num, t_den * n as u64)?;
        Self::new(n, r, s)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Numerator of the reduced threshold fraction `t/n = r/s`.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Denominator of the reduced threshold fraction.
    pub fn s(&self) -> u32 {
        self.s
    }

    /// The threshold `t = r*n/s` as an exact rational.
    pub fn t(&self) -> Rational {
        rat(self.r as i64 * self.n as i64, self.s as i64)
    }

    /// Least integer weight that already meets the threshold: `ceil(t)`.
    pub fn t_ceil(&self) -> u32 {
        let rn = self.r as u64 * self.n as u64;
        (rn.div_ceil(self.s as u64)) as u32
    }

    /// Whether `n/2 <= t <= n`, the band all closed forms are stated for.
    pub fn in_studied_range(&self) -> bool {
        // t >= n/2  <=>  2*r*n >= s*n  <=>  2r >= s
        2 * self.r as u64 >= self.s as u64
    }
}

/// Group sizes `(n-k, k)`; only `1 <= k <= n/2` is meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grouping {
    k: u32,
}

impl Grouping {
    pub fn new(k: u32, n: u32) -> Result<Self> {
        if k == 0 || 2 * k > n {
            return Err(Error::Domain(format!(
                "grouping size must satisfy 1 <= k <= n/2, got k={k} for n={n}"
            )));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// Target bit for group weights `(wx, wy)`: 0 when `wx + wy < t`, else 1.
///
/// The strict rational comparison is what makes half-integer thresholds
/// behave: for integer `t` it coincides with `wx + wy <= t - 1`.
pub fn threshold_output(game: &ThresholdGame, wx: u32, wy: u32) -> Result<u8> {
    let sum = wx as u64 + wy as u64;
    if sum > game.n as u64 {
        return Err(Error::Domain(format!(
            "weights {wx} + {wy} exceed player count {}",
            game.n
        )));
    }
    // sum < t  <=>  sum * s < r * n, all in exact integers
    if sum * (game.s as u64) < game.r as u64 * game.n as u64 {
        Ok(0)
    } else {
        Ok(1)
    }
}

///`(-1)^f` for the weights `(wx, wy)`.
pub fn payoff_sign(game: &ThresholdGame, wx: u32, wy: u32) -> Result<i8> {
    Ok(if threshold_output(game, wx, wy)? == 0 {
        1
    } else {
        -1
    })
}

/// The bias factor of the `(n-1, 1)` closed forms: the optimal classical
/// value is `1 - alpha / 2^(n-1)`.
///
/// Case order matters: `r = s` first (so the `r/(s-r)` branch never divides
/// by zero), then `n mod s != 0`, then `n mod s = 0`.
pub fn alpha(game: &ThresholdGame) -> Result<Rational> {
    if !game.in_studied_range() {
        return Err(Error::Domain(format!(
            "alpha is defined for n/2 <= t <= n, got t = {}",
            game.t()
        )));
    }
    if game.r == game.s {
        return Ok(Rational::from(BigInt::one()));
    }
    let t_floor = (game.r as u64 * game.n as u64) / game.s as u64;
    let c = binomial(game.n as u64 - 1, t_floor as i64);
    if !game.n.is_multiple_of(game.s) {
        Ok(Rational::from(c))
    } else {
        Ok(rat(game.r as i64, (game.s - game.r) as i64) * Rational::from(c))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn reduce_u64(a: u64, b: u64) -> Result<(u32, u32)> {
    fn gcd64(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd64(b, a % b)
        }
    }
    let g = gcd64(a, b);
    let (a, b) = (a / g, b / g);
    u32::try_from(a)
        .and_then(|a| u32::try_from(b).map(|b| (a, b)))
        .map_err(|_| Error::Domain("threshold fraction out of range".into()))
}

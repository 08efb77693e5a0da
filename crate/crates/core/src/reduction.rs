//! Reduction of a grouped threshold game to a biased bipartite XOR game.
//!
//! With groups of sizes `n-k` and `k`, every member broadcasts its input
//! inside its group, so one player per group (Alice, Bob) holds the whole
//! group string. Because the payoff depends only on Hamming weights, Alice's
//! weights collapse onto a shifted alphabet `x̂`: weights where she can
//! already determine the target bit merge into `x̂ = 0`, and the undecided
//! band `t-k <= |x| <= beta` shifts to `x̂ = 1..`. Bob keeps `ŷ = |y|`. The
//! reduced winning rule is `g(x̂, ŷ) = 0` iff `x̂ + ŷ <= k`, under input
//! distributions proportional to binomial weight counts.
//!
//! Half-integer thresholds evaluate every interval bound over exact
//! rationals; integer weight indices use `ceil(t) - 1` for "t - 1".

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{Grouping, ThresholdGame};
use crate::numerics::{binomial, format_ratio, parse_ratio, pow2, rat, Rational};

/// Originating game parameters carried by a reduced game; `r/s` is the
/// threshold as a fraction of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub s: u32,
}

/// A bipartite XOR game with rational input biases and a `±1` payoff matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BiasedGame {
    pa: Vec<Rational>,
    pb: Vec<Rational>,
    signs: Vec<Vec<i8>>,
    provenance: Option<Provenance>,
}

impl BiasedGame {
    /// Build and validate: distributions sum to one exactly, no negative
    /// entries, signs are `±1` with matching shape.
    pub fn new(
        pa: Vec<Rational>,
        pb: Vec<Rational>,
        signs: Vec<Vec<i8>>,
        provenance: Option<Provenance>,
    ) -> Result<Self> {
        if pa.is_empty() || pb.is_empty() {
            return Err(Error::Domain("input alphabets must be non-empty".into()));
        }
        for p in pa.iter().chain(pb.iter()) {
            if p.is_negative() {
                return Err(Error::Domain("input probabilities must be >= 0".into()));
            }
        }
        let one = Rational::from(BigInt::one());
        if pa.iter().sum::<Rational>() != one || pb.iter().sum::<Rational>() != one {
            return Err(Error::Domain(
                "input distributions must sum to exactly 1".into(),
            ));
        }
        if signs.len() != pa.len() || signs.iter().any(|row| row.len() != pb.len()) {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{} sign matrix", pa.len(), pb.len()),
                found: format!("{} rows", signs.len()),
            });
        }
        if signs.iter().flatten().any(|&s| s != 1 && s != -1) {
            return Err(Error::Domain("signs must be +1 or -1".into()));
        }
        Ok(Self {
            pa,
            pb,
            signs,
            provenance,
        })
    }

    pub fn ma(&self) -> usize {
        self.pa.len()
    }

    pub fn mb(&self) -> usize {
        self.pb.len()
    }

    pub fn pa(&self) -> &[Rational] {
        &self.pa
    }

    pub fn pb(&self) -> &[Rational] {
        &self.pb
    }

    pub fn sign(&self, i: usize, j: usize) -> i8 {
        self.signs[i][j]
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Signed cell weight `pA[i] * pB[j] * signs[i][j]`.
    pub fn cell(&self, i: usize, j: usize) -> Rational {
        let w = &self.pa[i] * &self.pb[j];
        if self.signs[i][j] > 0 {
            w
        } else {
            -w
        }
    }

    pub fn to_json(&self) -> String {
        let dto = BiasedGameDto {
            m_a: self.ma(),
            m_b: self.mb(),
            p_a: self.pa.iter().map(format_ratio).collect(),
            p_b: self.pb.iter().map(format_ratio).collect(),
            signs: self.signs.clone(),
            provenance: self.provenance.map(|p| ProvenanceDto {
                n: p.n,
                k: p.k,
                t: format!("{}/{}", p.r, p.s),
            }),
        };
        serde_json::to_string_pretty(&dto).expect("biased game serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: BiasedGameDto =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let pa = dto
            .p_a
            .iter()
            .map(|s| parse_ratio(s))
            .collect::<Result<Vec<_>>>()?;
        let pb = dto
            .p_b
            .iter()
            .map(|s| parse_ratio(s))
            .collect::<Result<Vec<_>>>()?;
        if dto.m_a != pa.len() || dto.m_b != pb.len() {
            return Err(Error::Parse("mA/mB fields disagree with vectors".into()));
        }
        let provenance = dto
            .provenance
            .map(|p| -> Result<Provenance> {
                let t = parse_ratio(&p.t)?;
                let (r, s) = (t.numer().clone(), t.denom().clone());
                let to32 = |x: &BigInt| -> Result<u32> {
                    u32::try_from(x.clone())
                        .map_err(|_| Error::Parse("provenance threshold out of range".into()))
                };
                Ok(Provenance {
                    n: p.n,
                    k: p.k,
                    r: to32(&r)?,
                    s: to32(&s)?,
                })
            })
            .transpose()?;
        Self::new(pa, pb, dto.signs, provenance)
    }
}

#[derive(Serialize, Deserialize)]
struct BiasedGameDto {
    #[serde(rename = "mA")]
    m_a: usize,
    #[serde(rename = "mB")]
    m_b: usize,
    #[serde(rename = "pA")]
    p_a: Vec<String>,
    #[serde(rename = "pB")]
    p_b: Vec<String>,
    signs: Vec<Vec<i8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<ProvenanceDto>,
}

#[derive(Serialize, Deserialize)]
struct ProvenanceDto {
    n: u32,
    k: u32,
    t: String,
}

/// Intermediate quantities of the reduction, exposed so tests can pin the
/// interval bounds and weight counts directly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub beta: u32,
    pub beta_prime: u32,
    /// Alice's merged weight counts; `nu[0] = 2^(n-k) - sum(mu[t-k..=beta])`.
    pub nu: Vec<BigInt>,
    /// `mu[i] = C(n-k, i)`.
    pub mu: Vec<BigInt>,
    /// `w[j] = C(k, j)`.
    pub w: Vec<BigInt>,
}

/// The interval bounds `(beta, beta_prime)` of the shifted alphabet.
pub fn beta_pair(game: &ThresholdGame, grouping: &Grouping) -> (u32, u32) {
    let n = game.n();
    let k = grouping.k();
    let t_cap = game.t_ceil();
    // t <= n-k over exact rationals: r*n <= s*(n-k)
    let below = (game.r() as u64 * n as u64) <= (game.s() as u64 * (n - k) as u64);
    if below {
        (t_cap - 1, n - k)
    } else {
        (n - k, t_cap - 1)
    }
}

/// Reduce a grouped threshold game to its biased bipartite form.
pub fn reduce(game: &ThresholdGame, grouping: &Grouping) -> Result<(BiasedGame, ReductionTrace)> {
    let n = game.n();
    let k = grouping.k();
    if k == 0 || 2 * k > n {
        return Err(Error::Domain(format!(
            "grouping k={k} invalid for n={n}"
        )));
    }
    let t_cap = game.t_ceil();
    if t_cap < k {
        return Err(Error::Domain(format!(
            "threshold {} below grouping size {k} is unsupported",
            game.t()
        )));
    }
    let (beta, beta_prime) = beta_pair(game, grouping);

    let mu: Vec<BigInt> = (0..=(n - k))
        .map(|i| binomial((n - k) as u64, i as i64))
        .collect();
    let w: Vec<BigInt> = (0..=k).map(|j| binomial(k as u64, j as i64)).collect();

    let shift = t_cap as i64 - k as i64 - 1; // can be -1 when t = k
    let band: BigInt = ((t_cap - k)..=beta).map(|i| mu[i as usize].clone()).sum();
    let mut nu = vec![pow2(n - k) - band];
    for x in 1..=(n - beta_prime) as i64 {
        nu.push(mu[(shift + x) as usize].clone());
    }
    let total: BigInt = nu.iter().sum();
    if total != pow2(n - k) || nu[0].is_negative() {
        return Err(Error::Inconsistent(format!(
            "weight counts sum to {total}, expected 2^{}",
            n - k
        )));
    }

    let pa: Vec<Rational> = nu
        .iter()
        .map(|c| Rational::new(c.clone(), pow2(n - k)))
        .collect();
    let pb: Vec<Rational> = w
        .iter()
        .map(|c| Rational::new(c.clone(), pow2(k)))
        .collect();
    let signs: Vec<Vec<i8>> = (0..pa.len())
        .map(|x| {
            (0..pb.len())
                .map(|y| if x + y <= k as usize { 1 } else { -1 })
                .collect()
        })
        .collect();

    let provenance = Provenance {
        n,
        k,
        r: game.r(),
        s: game.s(),
    };
    let bg = BiasedGame::new(pa, pb, signs, Some(provenance))?;
    let trace = ReductionTrace {
        beta,
        beta_prime,
        nu,
        mu,
        w,
    };
    Ok((bg, trace))
}

/// Value of the game under the no-signalling box `p(a,b|x̂,ŷ)` that puts
/// probability 1/2 on each outcome pair with `a XOR b = g(x̂, ŷ)`.
///
/// Every cell contributes its full weight, so the result is exactly 1 for
/// any well-formed game; the sum is still carried out term by term.
pub fn ns_box_value(bg: &BiasedGame) -> Rational {
    let mut value = Rational::from(BigInt::zero());
    let half = rat(1, 2);
    for i in 0..bg.ma() {
        for j in 0..bg.mb() {
            let g = u8::from(bg.sign(i, j) < 0);
            let mut corr = Rational::from(BigInt::zero());
            for a in 0..2u8 {
                for b in 0..2u8 {
                    if a ^ b == g {
                        let payoff = if (a + b) % 2 == 0 { 1 } else { -1 };
                        corr += &half * Rational::from(BigInt::from(payoff));
                    }
                }
            }
            // (-1)^g * E[a*b] under the box
            let signed = if g == 0 { corr } else { -corr };
            value += &bg.pa()[i] * &bg.pb()[j] * signed;
        }
    }
    value
}

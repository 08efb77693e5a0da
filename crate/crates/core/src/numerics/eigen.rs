//! Cyclic Jacobi eigen-decomposition.
//!
//! The matrices certified here are small (at most a few dozen rows), so the
//! quadratically convergent, unconditionally robust Jacobi sweep wins over
//! anything asymptotically faster.

use crate::error::{Error, Result};
use crate::numerics::SymMatrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix: `values` ascending,
/// `vectors[i]` the orthonormal eigenvector paired with `values[i]`.
#[derive(Clone, Debug)]
pub struct Eigen<F> {
    pub values: Vec<F>,
    pub vectors: Vec<Vec<F>>,
}

/// Full eigen-decomposition by cyclic Jacobi rotations.
pub fn eigen_sym<F: Scalar>(m: &SymMatrix<F>) -> Result<Eigen<F>> {
    let n = m.dim();
    if n == 0 {
        return Ok(Eigen {
            values: vec![],
            vectors: vec![],
        });
    }

    let mut a: Vec<Vec<F>> = (0..n)
        .map(|i| (0..n).map(|j| m.entry(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<F>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { F::one() } else { F::zero() })
                .collect()
        })
        .collect();

    let scale = m.max_abs().max(F::one());
    let stop = scale * F::epsilon() * F::from_f64_lossy(n as f64);
    let mut off = off_norm(&a);

    for _ in 0..MAX_SWEEPS {
        if off <= stop {
            return Ok(collect_sorted(&a, &v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_norm(&a);
    }

    Err(Error::EigenNonConvergence {
        residual: off.to_f64().unwrap_or(f64::NAN),
    })
}

/// PSD test: `(min_eigenvalue >= -tol, min_eigenvalue)`.
pub fn is_psd<F: Scalar>(m: &SymMatrix<F>, tol: F) -> Result<(bool, F)> {
    if tol < F::zero() {
        return Err(Error::Domain("psd tolerance must be non-negative".into()));
    }
    let eig = eigen_sym(m)?;
    let min = eig.values.first().copied().unwrap_or_else(F::zero);
    Ok((min >= -tol, min))
}

fn off_norm<F: Scalar>(a: &[Vec<F>]) -> F {
    let n = a.len();
    let mut s = F::zero();
    for p in 0..n {
        for q in (p + 1)..n {
            s += a[p][q] * a[p][q];
        }
    }
    (s + s).sqrt()
}

fn rotate<F: Scalar>(a: &mut [Vec<F>], v: &mut [Vec<F>], p: usize, q: usize) {
    let apq = a[p][q];
    if apq == F::zero() {
        return;
    }
    let two = F::one() + F::one();
    let theta = (a[q][q] - a[p][p]) / (two * apq);
    // tan of the rotation angle, smaller root for stability
    let t = if theta.abs() > F::one() / F::epsilon() {
        (two * theta).recip()
    } else {
        theta.signum() / (theta.abs() + (theta * theta + F::one()).sqrt())
    };
    let c = (t * t + F::one()).sqrt().recip();
    let s = t * c;
    let tau = s / (F::one() + c);

    a[p][p] -= t * apq;
    a[q][q] += t * apq;
    a[p][q] = F::zero();
    a[q][p] = F::zero();
    let n = a.len();
    for r in 0..n {
        if r != p && r != q {
            let arp = a[r][p];
            let arq = a[r][q];
            a[r][p] = arp - s * (arq + tau * arp);
            a[p][r] = a[r][p];
            a[r][q] = arq + s * (arp - tau * arq);
            a[q][r] = a[r][q];
        }
        let vrp = v[r][p];
        let vrq = v[r][q];
        v[r][p] = vrp - s * (vrq + tau * vrp);
        v[r][q] = vrq + s * (vrp - tau * vrq);
    }
}

fn collect_sorted<F: Scalar>(a: &[Vec<F>], v: &[Vec<F>]) -> Eigen<F> {
    let n = a.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].partial_cmp(&a[j][j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&j| a[j][j]).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..n).map(|r| v[r][j]).collect())
        .collect();
    Eigen { values, vectors }
}

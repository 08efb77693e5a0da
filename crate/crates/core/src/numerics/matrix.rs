use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense symmetric matrix with both triangles stored; `set` writes the
/// mirror entry so `entry(i, j) == entry(j, i)` holds exactly at all times.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<F> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Scalar> SymMatrix<F> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![F::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_diagonal(diag: &[F]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Build from full rows, rejecting asymmetric input.
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::ShapeMismatch {
                    expected: format!("{dim} columns"),
                    found: format!("{} in row {i}", row.len()),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if rows[j][i] != x {
                    return Err(Error::Domain(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
                m.data[i * dim + j] = x;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> F {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.dim + j] = x;
        self.data[j * self.dim + i] = x;
    }

    pub fn trace(&self) -> F {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    pub fn max_abs(&self) -> F {
        self.data
            .iter()
            .fold(F::zero(), |acc, &x| acc.max(x.abs()))
    }
}

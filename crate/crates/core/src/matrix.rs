//! Dense matrices of coefficients, and the n²×n² structure matrices that
//! encode quadratic exchange relations.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::symring::{Coefficient, GaussianRational, Ring, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Coefficient>,
}

impl Matrix {
    pub fn zeros(ring: &Arc<Ring>, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Coefficient::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Coefficient::one(ring));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Coefficient>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Dimension("ragged rows".into()));
        }
        let data: Vec<Coefficient> = rows.into_iter().flatten().collect();
        if let Some(first) = data.first() {
            for d in &data {
                d.check_same_ring(first)?;
            }
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.data[0].ring()
    }

    pub fn get(&self, i: usize, j: usize) -> &Coefficient {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coefficient) {
        self.data[i * self.cols + j] = v;
    }

    pub fn try_mul(&self, o: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != o.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Matrix::zeros(self.ring(), self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    fn zip_with<F>(&self, o: &Matrix, f: F) -> Result<Matrix, MatrixError>
    where
        F: Fn(&Coefficient, &Coefficient) -> Coefficient,
    {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(MatrixError::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, o: &Matrix) -> Result<Matrix, MatrixError> {
        self.zip_with(o, |a, b| a + b)
    }

    pub fn try_sub(&self, o: &Matrix) -> Result<Matrix, MatrixError> {
        self.zip_with(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Coefficient) -> Matrix {
        self.map(|x| x * c)
    }

    pub fn map<F: Fn(&Coefficient) -> Coefficient>(&self, f: F) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<F>(&self, f: F) -> Result<Matrix, RingError>
    where
        F: Fn(&Coefficient) -> Result<Coefficient, RingError>,
    {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.ring(), self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out.set(i * o.rows + k, j * o.cols + l, a * o.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Nonzero entries as `((row, col), value)`.
    pub fn nonzero_entries(&self) -> Vec<((usize, usize), Coefficient)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    out.push(((i, j), v.clone()));
                }
            }
        }
        out
    }

    pub fn specialize(
        &self,
        at: &HashMap<String, GaussianRational>,
    ) -> Result<Vec<Vec<GaussianRational>>, RingError> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).specialize(at))
                    .collect()
            })
            .collect()
    }

    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<Matrix, RingError> {
        self.try_map(|c| c.to_ring(target))
    }
}

/// An n²×n² array indexed by generator pairs: row `(i,j)`, column `(k,l)`,
/// both flattened as `(i-1)·n + (j-1)` (basis order 11, 12, ..., nn).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMatrix {
    n: usize,
    m: Matrix,
}

impl StructureMatrix {
    pub fn new(n: usize, m: Matrix) -> Result<Self, MatrixError> {
        if m.rows() != n * n || m.cols() != n * n {
            return Err(MatrixError::Dimension(format!(
                "structure matrix for n = {n} must be {0}x{0}, got {1}x{2}",
                n * n,
                m.rows(),
                m.cols()
            )));
        }
        Ok(StructureMatrix { n, m })
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<Coefficient>>) -> Result<Self, MatrixError> {
        Self::new(n, Matrix::from_rows(rows)?)
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Self {
        StructureMatrix {
            n,
            m: Matrix::identity(ring, n * n),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.m.ring()
    }

    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }

    /// `M^{ij}_{kl}` with 1-based generator indices.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> &Coefficient {
        self.m.get(self.pair_index(i, j), self.pair_index(k, l))
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        StructureMatrix {
            n: self.n,
            m: self.m.scale(c),
        }
    }

    pub fn map<F: Fn(&Coefficient) -> Coefficient>(&self, f: F) -> Self {
        StructureMatrix {
            n: self.n,
            m: self.m.map(f),
        }
    }

    pub fn try_map<F>(&self, f: F) -> Result<Self, RingError>
    where
        F: Fn(&Coefficient) -> Result<Coefficient, RingError>,
    {
        Ok(StructureMatrix {
            n: self.n,
            m: self.m.try_map(f)?,
        })
    }

    pub fn to_ring(&self, target: &Arc<Ring>) -> Result<Self, RingError> {
        Ok(StructureMatrix {
            n: self.n,
            m: self.m.to_ring(target)?,
        })
    }

    pub fn with_entry(&self, i: usize, j: usize, k: usize, l: usize, v: Coefficient) -> Self {
        let mut out = self.clone();
        let (r, c) = (self.pair_index(i, j), self.pair_index(k, l));
        out.m.set(r, c, v);
        out
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, MatrixError> {
        self.same_dim(o)?;
        Ok(StructureMatrix {
            n: self.n,
            m: self.m.try_mul(&o.m)?,
        })
    }

    pub fn try_add(&self, o: &Self) -> Result<Self, MatrixError> {
        self.same_dim(o)?;
        Ok(StructureMatrix {
            n: self.n,
            m: self.m.try_add(&o.m)?,
        })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self, MatrixError> {
        self.same_dim(o)?;
        Ok(StructureMatrix {
            n: self.n,
            m: self.m.try_sub(&o.m)?,
        })
    }

    pub(crate) fn same_dim(&self, o: &Self) -> Result<(), MatrixError> {
        if self.n != o.n {
            return Err(MatrixError::Dimension(format!(
                "n = {} vs n = {}",
                self.n, o.n
            )));
        }
        Ok(())
    }

    /// Rows as canonical strings, for reports and config files.
    pub fn render_rows(&self) -> Vec<Vec<String>> {
        (0..self.m.rows())
            .map(|i| {
                (0..self.m.cols())
                    .map(|j| self.m.get(i, j).to_string())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for StructureMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.render_rows() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

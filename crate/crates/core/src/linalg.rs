//! Tiny fixed-size matrices for maps on R^1 and R^2.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    a: [[f64; 2]; 2],
}

impl Matrix {
    pub fn new(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if !(1..=2).contains(&dim) {
            return Err(Error::Dimension(dim));
        }
        let mut a = [[0.0; 2]; 2];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidArgument("matrix must be square".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite("matrix entry".into()));
                }
                a[i][j] = v;
            }
        }
        Ok(Matrix { dim, a })
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&[1.0; 2][..dim])
    }

    pub fn zero(dim: usize) -> Self {
        Matrix { dim, a: [[0.0; 2]; 2] }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let mut a = [[0.0; 2]; 2];
        for (i, &v) in d.iter().enumerate() {
            a[i][i] = v;
        }
        Matrix { dim: d.len(), a }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    pub fn determinant(&self) -> f64 {
        match self.dim {
            1 => self.a[0][0],
            _ => self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0],
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let det = self.determinant();
        if det.abs() < 1e-12 {
            return Err(Error::Singular(format!("determinant {det:e}")));
        }
        Ok(match self.dim {
            1 => Matrix::diagonal(&[1.0 / det]),
            _ => Matrix {
                dim: 2,
                a: [
                    [self.a[1][1] / det, -self.a[0][1] / det],
                    [-self.a[1][0] / det, self.a[0][0] / det],
                ],
            },
        })
    }

    pub fn apply(&self, x: &[f64]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (i, o) in out.iter_mut().enumerate().take(self.dim) {
            *o = (0..self.dim).map(|j| self.a[i][j] * x[j]).sum();
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let mut a = self.a;
        for (i, row) in a.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v += other.a[i][j];
            }
        }
        Matrix { dim: self.dim, a }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let mut a = [[0.0; 2]; 2];
        for (i, row) in a.iter_mut().enumerate().take(self.dim) {
            for (j, v) in row.iter_mut().enumerate().take(self.dim) {
                *v = (0..self.dim).map(|k| self.a[i][k] * other.a[k][j]).sum();
            }
        }
        Matrix { dim: self.dim, a }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::new(&[&[2.0, 1.0], &[0.5, 3.0]]).unwrap();
        let p = m.mul(&m.inverse().unwrap());
        assert!((p.get(0, 0) - 1.0).abs() < 1e-15);
        assert!(p.get(0, 1).abs() < 1e-15);
        assert!(Matrix::zero(2).inverse().is_err());
    }
}

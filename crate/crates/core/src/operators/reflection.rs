//! The maps `f(x) -> f(S x + T(|x_1|, ..., |x_n|))` and their splitting into
//! orthant pieces `g_theta`.

use crate::error::{Error, Result};
use crate::grid::SampledField;
use crate::linalg::Matrix;

use super::pull_back;

/// `S x + T(|x_1|, ..., |x_n|)` with every sign pattern `S + T diag((-1)^theta)` invertible.
#[derive(Clone, Debug)]
pub struct HomogeneousReflection {
    s: Matrix,
    t: Matrix,
}

fn sign_pattern(dim: usize, theta: usize) -> Matrix {
    let d: Vec<f64> = (0..dim).map(|i| if theta >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
    Matrix::diagonal(&d)
}

impl HomogeneousReflection {
    pub fn new(s: Matrix, t: Matrix) -> Result<Self> {
        if s.dim() != t.dim() {
            return Err(Error::Dimension(t.dim()));
        }
        for theta in 0..1usize << s.dim() {
            let m = s.add(&t.mul(&sign_pattern(s.dim(), theta)));
            if m.determinant().abs() < 1e-12 {
                return Err(Error::Singular(format!("S + T D_theta is singular for theta = {theta:b}")));
            }
        }
        Ok(HomogeneousReflection { s, t })
    }

    /// `f(|x_1|, ..., |x_n|)`.
    pub fn full_fold(dim: usize) -> Result<Self> {
        Self::new(Matrix::zero(dim), Matrix::identity(dim))
    }

    /// `f(x_1, ..., x_{n-1}, |x_n|)`.
    pub fn last_fold(dim: usize) -> Result<Self> {
        let mut d = vec![1.0; dim];
        d[dim - 1] = 0.0;
        let s = Matrix::diagonal(&d);
        let t = Matrix::identity(dim).add(&s.mul(&Matrix::diagonal(&vec![-1.0; dim])));
        Self::new(s, t)
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    fn image(&self, x: &[f64], signs: &[f64]) -> [f64; 2] {
        let mut u = [0.0; 2];
        for i in 0..x.len() {
            u[i] = signs[i] * x[i];
        }
        let (a, b) = (self.s.apply(x), self.t.apply(&u[..x.len()]));
        [a[0] + b[0], a[1] + b[1]]
    }

    /// Samples `f(S x + T |x|)`.
    pub fn apply(&self, f: &SampledField) -> Result<SampledField> {
        if f.spec().dim() != self.dim() {
            return Err(Error::Dimension(f.spec().dim()));
        }
        pull_back(f, |x| {
            let signs: Vec<f64> = x.iter().map(|v| v.signum()).collect();
            self.image(x, &signs)
        })
    }

    /// The pieces `g_theta(x) = f(S x + T D_theta x) 1{D_theta x > 0}`, indexed by the bit pattern of `theta`.
    pub fn decompose(&self, f: &SampledField) -> Result<Vec<(usize, SampledField)>> {
        if f.spec().dim() != self.dim() {
            return Err(Error::Dimension(f.spec().dim()));
        }
        let n = self.dim();
        (0..1usize << n)
            .map(|theta| {
                let signs: Vec<f64> = (0..n).map(|i| if theta >> i & 1 == 1 { -1.0 } else { 1.0 }).collect();
                let pulled = pull_back(f, |x| self.image(x, &signs))?;
                let piece = pulled.mul_fn(|x| {
                    let inside = (0..n).all(|i| signs[i] * x[i] > 0.0);
                    num_complex::Complex64::new(if inside { 1.0 } else { 0.0 }, 0.0)
                });
                Ok((theta, piece))
            })
            .collect()
    }
}

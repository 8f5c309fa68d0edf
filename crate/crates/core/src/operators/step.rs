//! Step multipliers `sum_j c_j 1_{x_j + Q}` and their smooth-factor variant, plus the
//! triangle splitting `kappa_0 = sum_l kappa_l` used to move them through Gabor sums.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{GridSpec, SampledField};
use crate::profiles::triangle;
use crate::spaces::modulation_norm;
use crate::stft::Window;

pub type CellCoefficient = Arc<dyn Fn(&[i64]) -> Complex64 + Send + Sync>;
pub type CellFactor = Arc<dyn Fn(&[i64], &[f64]) -> Complex64 + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Constant coefficients `c_j` on each cube.
    Sigma0,
    /// Smooth factors `phi_j(x)` on each cube.
    Sigma,
}

#[derive(Clone)]
enum Cells {
    Constant(CellCoefficient),
    Smooth(CellFactor),
}

/// `sum_j m_j(x) 1_{side * j + [0, side)^n}(x)` over `j in Z^n`.
#[derive(Clone)]
pub struct StepMultiplier {
    dim: usize,
    side: f64,
    cells: Cells,
}

impl fmt::Debug for StepMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StepMultiplier").field("dim", &self.dim).field("side", &self.side).field("kind", &self.kind()).finish()
    }
}

impl StepMultiplier {
    pub fn sigma0(dim: usize, side: f64, coefficient: CellCoefficient) -> Result<Self> {
        Self::build(dim, side, Cells::Constant(coefficient))
    }

    pub fn sigma(dim: usize, side: f64, factor: CellFactor) -> Result<Self> {
        Self::build(dim, side, Cells::Smooth(factor))
    }

    /// `c_j = 1` on every cube.
    pub fn ones(dim: usize, side: f64) -> Result<Self> {
        Self::sigma0(dim, side, Arc::new(|_| Complex64::new(1.0, 0.0)))
    }

    /// `c_j = (-1)^{j_1 + ... + j_n}` on unit cubes.
    pub fn alternating(dim: usize) -> Result<Self> {
        Self::sigma0(dim, 1.0, Arc::new(|j| Complex64::new(if j.iter().sum::<i64>().rem_euclid(2) == 0 { 1.0 } else { -1.0 }, 0.0)))
    }

    fn build(dim: usize, side: f64, cells: Cells) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::Dimension(dim));
        }
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::InvalidArgument(format!("cube side {side} must be positive")));
        }
        Ok(StepMultiplier { dim, side, cells })
    }

    pub fn kind(&self) -> StepKind {
        match self.cells {
            Cells::Constant(_) => StepKind::Sigma0,
            Cells::Smooth(_) => StepKind::Sigma,
        }
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    fn cell(&self, x: &[f64]) -> [i64; 2] {
        let mut j = [0; 2];
        for a in 0..self.dim {
            j[a] = (x[a] / self.side).floor() as i64;
        }
        j
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        let j = self.cell(x);
        match &self.cells {
            Cells::Constant(c) => c(&j[..self.dim]),
            Cells::Smooth(phi) => phi(&j[..self.dim], x),
        }
    }

    /// `sup_j |c_j|` over the cubes meeting the box of `spec`, or for smooth factors the largest
    /// central-difference proxy of `|d^a phi_j|`, `|a| <= 2`, over the nodes.
    pub fn derivative_bound(&self, spec: &GridSpec) -> f64 {
        match &self.cells {
            Cells::Constant(c) => spec.points().map(|x| c(&self.cell(&x)[..self.dim]).norm()).fold(0.0, f64::max),
            Cells::Smooth(phi) => {
                let h = spec.spacing();
                let n = self.dim;
                spec.points()
                    .map(|x| {
                        let j = self.cell(&x);
                        let j = &j[..n];
                        let at = |d: [f64; 2]| {
                            let mut y = [0.0; 2];
                            for a in 0..n {
                                y[a] = x[a] + d[a];
                            }
                            phi(j, &y[..n])
                        };
                        let mut worst = at([0.0; 2]).norm();
                        for a in 0..n {
                            let mut e = [0.0; 2];
                            e[a] = h;
                            let (p, m) = (at(e), at([-e[0], -e[1]]));
                            worst = worst.max(((p - m) / (2.0 * h)).norm());
                            worst = worst.max(((p - 2.0 * at([0.0; 2]) + m) / (h * h)).norm());
                        }
                        if n == 2 {
                            let mixed = (at([h, h]) - at([h, -h]) - at([-h, h]) + at([-h, -h])) / (4.0 * h * h);
                            worst = worst.max(mixed.norm());
                        }
                        worst
                    })
                    .fold(0.0, f64::max)
            }
        }
    }

    /// Fails unless the coefficient or derivative proxy is finite and at most `limit`.
    pub fn validate(&self, spec: &GridSpec, limit: f64) -> Result<f64> {
        let b = self.derivative_bound(spec);
        if b.is_finite() && b <= limit {
            Ok(b)
        } else {
            Err(Error::InvalidArgument(format!("step multiplier bound {b} exceeds {limit}")))
        }
    }
}

pub fn step_multiplier_apply(m: &StepMultiplier, f: &SampledField) -> Result<SampledField> {
    if m.dim != f.spec().dim() {
        return Err(Error::Dimension(m.dim));
    }
    Ok(f.mul_fn(|x| m.eval(x)))
}

/// `||m f||_{M^{p,q}} / ||f||_{M^{p,q}}` for `1 < p, q < inf`.
pub fn step_multiplier_ratio(m: &StepMultiplier, f: &SampledField, window: &Window, p: Exponent, q: Exponent) -> Result<f64> {
    if !(p.is_interior() && q.is_interior()) {
        return Err(Error::InvalidArgument(format!("exponents ({p}, {q}) must lie strictly between 1 and inf")));
    }
    let den = modulation_norm(f, window, p, q, None)?;
    if den == 0.0 {
        return Err(Error::Degenerate("zero field".into()));
    }
    Ok(modulation_norm(&step_multiplier_apply(m, f)?, window, p, q, None)? / den)
}

/// `kappa_l(t) = prod_i chi_{l_i}(t_i)` with `chi_0` the triangle, `chi_1 = chi_0 1_{(-1,0)}`,
/// `chi_2 = chi_0 1_{(0,1)}`.
pub fn kappa(l: &[u8], t: &[f64]) -> f64 {
    l.iter()
        .zip(t)
        .map(|(&li, &ti)| match li {
            0 => triangle(ti),
            1 if ti > -1.0 && ti < 0.0 => triangle(ti),
            2 if ti > 0.0 && ti < 1.0 => triangle(ti),
            _ => 0.0,
        })
        .product()
}

/// All `l in {1, 2}^n`.
pub fn kappa_labels(dim: usize) -> Vec<Vec<u8>> {
    match dim {
        1 => vec![vec![1], vec![2]],
        _ => vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::lp_norm;

    #[test]
    fn unit_coefficients_are_identity() {
        let s = GridSpec::new(1, 6.0, 64).unwrap();
        let f = SampledField::from_real_fn(s, |p| (-p[0] * p[0]).exp()).unwrap();
        let m = StepMultiplier::ones(1, 1.0).unwrap();
        assert!(step_multiplier_apply(&m, &f).unwrap().max_abs_diff(&f) < 1e-12);
    }

    #[test]
    fn l2_ratio_is_bounded_by_sup() {
        let s = GridSpec::new(1, 8.0, 128).unwrap();
        let f = SampledField::from_fn(s, |p| Complex64::from_polar((-(p[0] - 0.2).powi(2)).exp(), p[0])).unwrap();
        let m = StepMultiplier::sigma0(1, 1.0, Arc::new(|j| Complex64::new(0.5 + 0.1 * j[0] as f64, 0.0))).unwrap();
        let sup = m.validate(&s, 10.0).unwrap();
        let r = step_multiplier_ratio(&m, &f, &Window::gaussian(s), Exponent::TWO, Exponent::TWO).unwrap();
        let l2 = lp_norm(&step_multiplier_apply(&m, &f).unwrap(), Exponent::TWO) / lp_norm(&f, Exponent::TWO);
        assert!((r - l2).abs() < 1e-9 && r <= sup + 1e-9);
    }

    #[test]
    fn kappa_splitting() {
        for t in [-0.75, -0.5, 0.25, 0.9] {
            let s: f64 = kappa_labels(1).iter().map(|l| kappa(l, &[t])).sum();
            assert!((s - kappa(&[0], &[t])).abs() < 1e-15);
        }
        let t = [0.3, -0.6];
        let s: f64 = kappa_labels(2).iter().map(|l| kappa(l, &t)).sum();
        assert!((s - kappa(&[0, 0], &t)).abs() < 1e-15);
    }

    #[test]
    fn smooth_factor_bound() {
        let s = GridSpec::new(1, 4.0, 64).unwrap();
        let m = StepMultiplier::sigma(1, 1.0, Arc::new(|_, x| Complex64::new(x[0].cos(), 0.0))).unwrap();
        let b = m.derivative_bound(&s);
        assert!(b <= 1.0 + 1e-3 && b > 0.9);
        assert_eq!(m.kind(), StepKind::Sigma);
    }
}

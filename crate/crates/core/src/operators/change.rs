//! Changes of variables `psi* f = f o psi`, canonical transforms `F^{-1} psi* F`, and the
//! localized and perturbed-linear ratio tests built on them.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{forward_fourier, inverse_fourier, GridSpec, SampledField};
use crate::linalg::Matrix;
use crate::spaces::modulation_norm;
use crate::stft::Window;

use super::pull_back;

pub type MapFn = Arc<dyn Fn(&[f64]) -> [f64; 2] + Send + Sync>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapClass {
    Affine,
    SmoothNonaffine,
    HomogeneousOrderOne,
    LatticeBijection,
}

/// A map `psi: R^n -> R^n` with its classification and, where known, its inverse.
#[derive(Clone)]
pub struct ChangeOfVariables {
    dim: usize,
    class: MapClass,
    name: String,
    map: MapFn,
    inverse: Option<MapFn>,
    affine: Option<(Matrix, [f64; 2])>,
}

impl fmt::Debug for ChangeOfVariables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChangeOfVariables").field("dim", &self.dim).field("class", &self.class).field("name", &self.name).finish()
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 1 || dim == 2 {
        Ok(())
    } else {
        Err(Error::Dimension(dim))
    }
}

impl ChangeOfVariables {
    pub fn identity(dim: usize) -> Result<Self> {
        let mut psi = Self::affine(Matrix::identity(dim), &[0.0; 2][..dim])?;
        psi.name = "identity".into();
        Ok(psi)
    }

    /// `psi(x) = A x + b` with `A` invertible.
    pub fn affine(a: Matrix, b: &[f64]) -> Result<Self> {
        let dim = a.dim();
        check_dim(dim)?;
        if b.len() != dim {
            return Err(Error::Dimension(b.len()));
        }
        let inv = a.inverse()?;
        let mut shift = [0.0; 2];
        shift[..dim].copy_from_slice(b);
        let (fa, fb) = (a, shift);
        let map: MapFn = Arc::new(move |x| {
            let mut y = fa.apply(x);
            for i in 0..fa.dim() {
                y[i] += fb[i];
            }
            y
        });
        let inverse: MapFn = Arc::new(move |y| {
            let mut d = [0.0; 2];
            for i in 0..inv.dim() {
                d[i] = y[i] - shift[i];
            }
            inv.apply(&d[..inv.dim()])
        });
        Ok(ChangeOfVariables { dim, class: MapClass::Affine, name: format!("affine{b:?}"), map, inverse: Some(inverse), affine: Some((a, shift)) })
    }

    /// `psi(x) = a x`.
    pub fn scaling(dim: usize, a: f64) -> Result<Self> {
        let mut psi = Self::affine(Matrix::diagonal(&vec![a; dim]), &[0.0; 2][..dim])?;
        psi.name = format!("scaling({a})");
        Ok(psi)
    }

    /// `psi(x) = x + b`.
    pub fn translation(b: &[f64]) -> Result<Self> {
        let mut psi = Self::affine(Matrix::identity(b.len()), b)?;
        psi.name = format!("translation({b:?})");
        Ok(psi)
    }

    /// `psi(x) = |x|` on the line.
    pub fn absolute_value() -> Self {
        ChangeOfVariables {
            dim: 1,
            class: MapClass::HomogeneousOrderOne,
            name: "abs".into(),
            map: Arc::new(|x| [x[0].abs(), 0.0]),
            inverse: None,
            affine: None,
        }
    }

    /// `psi(x)_i = x_i + eps * arctan(x_i)`: a smooth bounded perturbation of the identity
    /// with `1 <= psi'  <= 1 + eps`, so `psi*` is bounded on every `L^q`.
    pub fn arctan_perturbation(dim: usize, eps: f64) -> Result<Self> {
        check_dim(dim)?;
        if !(eps.is_finite() && eps > -1.0) {
            return Err(Error::InvalidArgument(format!("arctan perturbation needs eps > -1, got {eps}")));
        }
        let map: MapFn = Arc::new(move |x| {
            let mut y = [0.0; 2];
            for i in 0..x.len() {
                y[i] = x[i] + eps * x[i].atan();
            }
            y
        });
        let inverse: MapFn = Arc::new(move |y| {
            let mut x = [0.0; 2];
            for i in 0..y.len() {
                // Newton from x = y; the map is monotone with derivative in [min(1, 1+eps), max(1, 1+eps)].
                let mut t = y[i];
                for _ in 0..60 {
                    let step = (t + eps * t.atan() - y[i]) / (1.0 + eps / (1.0 + t * t));
                    t -= step;
                    if step.abs() <= 1e-15 * t.abs().max(1.0) {
                        break;
                    }
                }
                x[i] = t;
            }
            x
        });
        Ok(ChangeOfVariables {
            dim,
            class: MapClass::SmoothNonaffine,
            name: format!("arctan({eps})"),
            map,
            inverse: Some(inverse),
            affine: None,
        })
    }

    /// A user map. Homogeneous maps are checked at random points for `psi(l x) = l psi(x)`
    /// with `l in {2, 3}`; the affine class must go through [`ChangeOfVariables::affine`].
    pub fn custom(dim: usize, class: MapClass, name: impl Into<String>, map: MapFn, inverse: Option<MapFn>) -> Result<Self> {
        check_dim(dim)?;
        if class == MapClass::Affine {
            return Err(Error::InvalidArgument("affine maps are built from their matrix".into()));
        }
        let psi = ChangeOfVariables { dim, class, name: name.into(), map, inverse, affine: None };
        if class == MapClass::HomogeneousOrderOne {
            psi.check_homogeneous(64, 11)?;
        }
        Ok(psi)
    }

    fn check_homogeneous(&self, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let mut x = [0.0; 2];
            x.iter_mut().take(self.dim).for_each(|v| *v = rng.gen_range(-5.0..5.0));
            let lambda = if rng.gen::<bool>() { 2.0 } else { 3.0 };
            let mut lx = x;
            lx.iter_mut().for_each(|v| *v *= lambda);
            let (a, b) = (self.eval(&lx[..self.dim])?, self.eval(&x[..self.dim])?);
            for i in 0..self.dim {
                if (a[i] - lambda * b[i]).abs() > 1e-10 * (1.0 + a[i].abs()) {
                    return Err(Error::InvalidArgument(format!("map `{}` is not homogeneous of order one at {x:?}", self.name)));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class(&self) -> MapClass {
        self.class
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `(A, b)` for affine maps.
    pub fn affine_parts(&self) -> Option<&(Matrix, [f64; 2])> {
        self.affine.as_ref()
    }

    pub fn eval(&self, x: &[f64]) -> Result<[f64; 2]> {
        let y = (self.map)(x);
        if y[..self.dim].iter().all(|v| v.is_finite()) {
            Ok(y)
        } else {
            Err(Error::NonFinite(format!("map `{}` at {x:?}", self.name)))
        }
    }

    pub fn eval_inverse(&self, y: &[f64]) -> Option<[f64; 2]> {
        self.inverse.as_ref().map(|inv| inv(y))
    }

    pub(crate) fn map_fn(&self) -> &MapFn {
        &self.map
    }
}

/// Samples `f o psi` on the grid of `f`.
pub fn change_of_variables_apply(psi: &ChangeOfVariables, f: &SampledField) -> Result<SampledField> {
    if psi.dim != f.spec().dim() {
        return Err(Error::Dimension(psi.dim));
    }
    let map = psi.map_fn();
    pull_back(f, |x| map(x))
}

/// `I_psi f = F^{-1}[(F f) o psi]`.
pub fn canonical_transform(psi: &ChangeOfVariables, f: &SampledField) -> Result<SampledField> {
    Ok(inverse_fourier(&change_of_variables_apply(psi, &forward_fourier(f))?))
}

pub(crate) fn localized_ratio<T>(f: &SampledField, chi1: &SampledField, chi2: &SampledField, window: &Window, p: Exponent, q: Exponent, op: T) -> Result<f64>
where
    T: Fn(&SampledField) -> Result<SampledField>,
{
    let g = chi2.mul(f)?;
    let den = modulation_norm(&g, window, p, q, None)?;
    if den == 0.0 {
        return Err(Error::Degenerate("cut-off field vanishes".into()));
    }
    Ok(modulation_norm(&chi1.mul(&op(&g)?)?, window, p, q, None)? / den)
}

/// `||chi1 I_psi (chi2 f)||_{M^{p,q}} / ||chi2 f||_{M^{p,q}}`.
pub fn localized_canonical_norm_test(
    psi: &ChangeOfVariables,
    f: &SampledField,
    chi1: &SampledField,
    chi2: &SampledField,
    window: &Window,
    p: Exponent,
    q: Exponent,
) -> Result<f64> {
    localized_ratio(f, chi1, chi2, window, p, q, |g| canonical_transform(psi, g))
}

/// A perturbation `delta` of a linear map together with its Jacobian.
#[derive(Clone)]
pub struct Perturbation {
    dim: usize,
    value: MapFn,
    jacobian: Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>,
}

impl fmt::Debug for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Perturbation").field("dim", &self.dim).finish()
    }
}

impl Perturbation {
    pub fn zero(dim: usize) -> Self {
        Perturbation { dim, value: Arc::new(|_| [0.0; 2]), jacobian: Arc::new(move |_| Matrix::zero(dim)) }
    }

    /// `delta(x)_i = a sin(x_i)`.
    pub fn sine(dim: usize, a: f64) -> Self {
        Perturbation {
            dim,
            value: Arc::new(move |x| {
                let mut y = [0.0; 2];
                for i in 0..x.len() {
                    y[i] = a * x[i].sin();
                }
                y
            }),
            jacobian: Arc::new(move |x| Matrix::diagonal(&x.iter().map(|t| a * t.cos()).collect::<Vec<_>>())),
        }
    }

    pub fn new(dim: usize, value: MapFn, jacobian: Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>) -> Self {
        Perturbation { dim, value, jacobian }
    }

    /// Largest central-difference estimate of `max_ij |d delta_i / d x_j|` over the grid nodes.
    pub fn derivative_bound(&self, spec: &GridSpec) -> f64 {
        let h = spec.spacing();
        spec.points()
            .map(|x| {
                let mut worst = 0.0_f64;
                for j in 0..self.dim {
                    let (mut a, mut b) = ([0.0; 2], [0.0; 2]);
                    a[..self.dim].copy_from_slice(&x);
                    b[..self.dim].copy_from_slice(&x);
                    a[j] += h;
                    b[j] -= h;
                    let (fa, fb) = ((self.value)(&a[..self.dim]), (self.value)(&b[..self.dim]));
                    for i in 0..self.dim {
                        worst = worst.max(((fa[i] - fb[i]) / (2.0 * h)).abs());
                    }
                }
                worst
            })
            .fold(0.0, f64::max)
    }
}

/// `I_psi f` for `psi^{-1}(xi) = A xi + delta(xi)`, computed by substituting `xi = psi^{-1}(eta)`:
/// `(2 pi)^{-n} sum_k e^{i x . psi^{-1}(xi_k)} |det D psi^{-1}(xi_k)| F f(xi_k) dxi^n`.
pub fn perturbed_canonical_transform(a: &Matrix, delta: &Perturbation, f: &SampledField) -> Result<SampledField> {
    let spec = *f.spec();
    let n = spec.dim();
    if a.dim() != n || delta.dim != n {
        return Err(Error::Dimension(a.dim()));
    }
    a.inverse()?;
    let fhat = forward_fourier(f);
    let dual = *fhat.spec();
    let c = (dual.spacing() / (2.0 * PI)).powi(n as i32);
    let nodes: Vec<([f64; 2], Complex64)> = dual
        .points()
        .zip(fhat.values())
        .filter(|(_, v)| v.norm() > 0.0)
        .map(|(xi, v)| {
            let lin = a.apply(&xi);
            let d = (delta.value)(&xi);
            let mut image = [0.0; 2];
            for i in 0..n {
                image[i] = lin[i] + d[i];
            }
            let det = a.add(&(delta.jacobian)(&xi)).determinant().abs();
            (image, v * det * c)
        })
        .collect();
    let values = (0..spec.len())
        .into_par_iter()
        .map(|m| {
            let x = spec.point(m);
            nodes.iter().map(|(img, w)| w * Complex64::from_polar(1.0, x.dot(&img[..n]))).sum()
        })
        .collect();
    SampledField::new(spec, values)
}

/// Localized `M^{p,q}` ratio of the perturbed-linear canonical transform, for `1 < p < inf`.
#[allow(clippy::too_many_arguments)]
pub fn perturbed_linear_test(
    a: &Matrix,
    delta: &Perturbation,
    f: &SampledField,
    chi1: &SampledField,
    chi2: &SampledField,
    window: &Window,
    p: Exponent,
    q: Exponent,
) -> Result<f64> {
    if !p.is_interior() {
        return Err(Error::InvalidArgument(format!("p = {p} must lie strictly between 1 and inf")));
    }
    let bound = delta.derivative_bound(&f.spec().dual());
    if bound >= 0.1 {
        return Err(Error::InvalidArgument(format!("perturbation derivative {bound:.3} is not below 0.1")));
    }
    localized_ratio(f, chi1, chi2, window, p, q, |g| perturbed_canonical_transform(a, delta, g))
}

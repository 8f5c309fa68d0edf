//! Left (Kohn-Nirenberg) quantization `a(x, D)` on the node/dual-node product lattice and its
//! composition with canonical transforms.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{forward_fourier, GridSpec, SampledField};
use crate::spaces::fourier_lebesgue_norm;

use super::change::{canonical_transform, ChangeOfVariables};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolTag {
    /// Finite-difference proxies of `d_x^a d_xi^b a`, `|a| + |b| <= 2`, are bounded.
    S000,
    General,
}

/// Samples `a(x_m, xi_k)`, stored with `m` as the slow index.
#[derive(Clone, Debug)]
pub struct KnSymbol {
    spec: GridSpec,
    values: Vec<Complex64>,
    tag: SymbolTag,
}

impl KnSymbol {
    pub fn new(spec: GridSpec, values: Vec<Complex64>, tag: SymbolTag) -> Result<Self> {
        let len = spec.len() * spec.len();
        if values.len() != len {
            return Err(Error::ShapeMismatch { expected: len, got: values.len() });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite("symbol sample".into()));
        }
        Ok(KnSymbol { spec, values, tag })
    }

    pub fn from_fn<A>(spec: GridSpec, tag: SymbolTag, a: A) -> Result<Self>
    where
        A: Fn(&[f64], &[f64]) -> Complex64 + Sync,
    {
        let dual = spec.dual();
        let len = spec.len();
        let mut values = vec![Complex64::new(0.0, 0.0); len * len];
        values.par_chunks_mut(len).enumerate().for_each(|(m, row)| {
            let x = spec.point(m);
            for (k, v) in row.iter_mut().enumerate() {
                *v = a(&x, &dual.point(k));
            }
        });
        Self::new(spec, values, tag)
    }

    /// Tagged `S000` after checking that the derivative proxy is at most `limit`.
    pub fn s000<A>(spec: GridSpec, limit: f64, a: A) -> Result<Self>
    where
        A: Fn(&[f64], &[f64]) -> Complex64 + Sync,
    {
        let sym = Self::from_fn(spec, SymbolTag::S000, a)?;
        let bound = sym.derivative_bound();
        if bound > limit {
            return Err(Error::InvalidArgument(format!("symbol derivative proxy {bound} exceeds {limit}")));
        }
        Ok(sym)
    }

    /// `a(x, xi) = m(xi)`.
    pub fn from_multiplier<M>(spec: GridSpec, m: M) -> Result<Self>
    where
        M: Fn(&[f64]) -> Complex64 + Sync,
    {
        Self::from_fn(spec, SymbolTag::General, |_, xi| m(xi))
    }

    pub fn one(spec: GridSpec) -> Result<Self> {
        Self::from_fn(spec, SymbolTag::S000, |_, _| Complex64::new(1.0, 0.0))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn tag(&self) -> SymbolTag {
        self.tag
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, m: usize, k: usize) -> Complex64 {
        self.values[m * self.spec.len() + k]
    }

    /// Largest centred first, second and mixed difference quotient over the `2n` lattice axes,
    /// taken on interior nodes only.
    pub fn derivative_bound(&self) -> f64 {
        let spec = self.spec;
        let (n, len, npts) = (spec.dim(), spec.len(), spec.points_per_axis());
        let steps: Vec<f64> = (0..2 * n).map(|a| if a < n { spec.spacing() } else { spec.frequency_spacing() }).collect();
        let split = |i: usize| -> Vec<usize> {
            let (m, k) = (i / len, i % len);
            let (mu, ku) = (spec.unflatten(m), spec.unflatten(k));
            (0..n).map(|a| mu[a]).chain((0..n).map(|a| ku[a])).collect()
        };
        let join = |idx: &[usize]| -> usize {
            let mut mu = [0usize; 2];
            let mut ku = [0usize; 2];
            mu[..n].copy_from_slice(&idx[..n]);
            ku[..n].copy_from_slice(&idx[n..]);
            spec.flatten(mu) * len + spec.flatten(ku)
        };
        (0..self.values.len())
            .into_par_iter()
            .map(|i| {
                let idx = split(i);
                if idx.iter().any(|&c| c == 0 || c + 1 >= npts) {
                    return self.values[i].norm();
                }
                let at = |shift: &[(usize, i64)]| {
                    let mut j = idx.clone();
                    for &(a, d) in shift {
                        j[a] = (j[a] as i64 + d) as usize;
                    }
                    self.values[join(&j)]
                };
                let centre = self.values[i];
                let mut worst = centre.norm();
                for a in 0..2 * n {
                    let (p, m) = (at(&[(a, 1)]), at(&[(a, -1)]));
                    worst = worst.max(((p - m) / (2.0 * steps[a])).norm());
                    worst = worst.max(((p - 2.0 * centre + m) / (steps[a] * steps[a])).norm());
                    for b in a + 1..2 * n {
                        let mixed = at(&[(a, 1), (b, 1)]) - at(&[(a, 1), (b, -1)]) - at(&[(a, -1), (b, 1)]) + at(&[(a, -1), (b, -1)]);
                        worst = worst.max((mixed / (4.0 * steps[a] * steps[b])).norm());
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// `e^{i x_m xi_k}` per axis: `x_m xi_k = N pi / 2 - pi (k + m) + 2 pi m k / N`.
fn phase_table(n: usize) -> Vec<Complex64> {
    let roots: Vec<Complex64> = (0..n).map(|r| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r as f64 / n as f64)).collect();
    let global = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut table = vec![Complex64::new(0.0, 0.0); n * n];
    for m in 0..n {
        for k in 0..n {
            let sign = if (m + k) % 2 == 0 { global } else { -global };
            table[m * n + k] = roots[(m * k) % n] * sign;
        }
    }
    table
}

/// `(2 pi)^{-n} sum_k e^{i x . xi_k} a(x, xi_k) (F f)(xi_k) (pi/L)^n`.
pub fn kohn_nirenberg_apply(a: &KnSymbol, f: &SampledField) -> Result<SampledField> {
    f.spec().ensure_compatible(&a.spec, "kohn_nirenberg_apply")?;
    let spec = a.spec;
    let (dim, npts, len) = (spec.dim(), spec.points_per_axis(), spec.len());
    let fhat = forward_fourier(f);
    let table = phase_table(npts);
    let scale = spec.dual().cell_measure() / (2.0 * std::f64::consts::PI).powi(dim as i32);
    let values = (0..len)
        .into_par_iter()
        .map(|m| {
            let mu = spec.unflatten(m);
            let row = &a.values[m * len..(m + 1) * len];
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, (s, g)) in row.iter().zip(fhat.values()).enumerate() {
                let ku = spec.unflatten(k);
                let mut e = table[mu[0] * npts + ku[0]];
                if dim == 2 {
                    e *= table[mu[1] * npts + ku[1]];
                }
                acc += e * s * g;
            }
            acc * scale
        })
        .collect();
    SampledField::new(spec, values)
}

/// `a(x, D) I_psi f`.
pub fn fio_compose(a: &KnSymbol, psi: &ChangeOfVariables, f: &SampledField) -> Result<SampledField> {
    kohn_nirenberg_apply(a, &canonical_transform(psi, f)?)
}

/// `||chi1 T (chi2 f)||_{FL^q} / ||chi2 f||_{FL^q}` with `T = a(x, D) I_psi`.
pub fn localized_fio_ratio(
    a: &KnSymbol,
    psi: &ChangeOfVariables,
    f: &SampledField,
    chi1: &SampledField,
    chi2: &SampledField,
    q: Exponent,
) -> Result<f64> {
    let g = chi2.mul(f)?;
    let den = fourier_lebesgue_norm(&g, q, None)?;
    if den == 0.0 {
        return Err(Error::Degenerate("cut-off field vanishes".into()));
    }
    Ok(fourier_lebesgue_norm(&chi1.mul(&fio_compose(a, psi, &g)?)?, q, None)? / den)
}

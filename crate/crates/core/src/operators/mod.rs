//! Operators acting on sampled fields: multipliers, changes of variables and canonical
//! transforms, reflections, Gabor synthesis, step multipliers and pseudo-differential
//! operators.

pub mod bh;
pub mod change;
pub mod gabor;
pub mod kn;
pub mod multiplier;
pub mod reflection;
pub mod step;

pub use bh::beurling_helson_growth;
pub use change::{
    canonical_transform, change_of_variables_apply, localized_canonical_norm_test, perturbed_canonical_transform,
    perturbed_linear_test, ChangeOfVariables, MapClass, Perturbation,
};
pub use gabor::{gabor_bound_ratio, gabor_coeff_norm, gabor_synthesize, CoefficientOrdering, GaborCoefficients, GaborSystem};
pub use kn::{fio_compose, kohn_nirenberg_apply, localized_fio_ratio, KnSymbol, SymbolTag};
pub use multiplier::{
    fourier_multiplier, fourier_multiplier_sampled, half_line_multiplier_wiener_test, half_line_projector, hilbert_transform,
    propagator, HalfLine,
};
pub use reflection::HomogeneousReflection;
pub use step::{kappa, step_multiplier_apply, step_multiplier_ratio, StepKind, StepMultiplier};

use log::warn;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{BandLimited, GridSpec, Point, SampledField};
use crate::profiles;

/// Smooth tensor cutoff equal to 1 on `|x_i| <= radius - ramp` and 0 for `|x_i| >= radius`.
pub fn cutoff(spec: GridSpec, radius: f64, ramp: f64) -> Result<SampledField> {
    if !(ramp > 0.0 && ramp <= radius) {
        return Err(Error::InvalidArgument(format!("cutoff ramp {ramp} must lie in (0, {radius}]")));
    }
    SampledField::from_real_fn(spec, |p| p.iter().map(|&t| profiles::plateau(t, 0.0, radius, ramp)).product())
}

/// `|a - b| / max(|a|, |b|)`, the quantity bounded by the refinement-drift checks.
pub fn relative_drift(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

/// Samples `x -> f(target(x))`.
///
/// Targets that land on grid nodes are read directly; other points inside the closed box
/// use the trigonometric interpolant; points outside the box contribute zero.
pub(crate) fn pull_back<F>(f: &SampledField, target: F) -> Result<SampledField>
where
    F: Fn(&Point) -> [f64; 2] + Sync,
{
    let spec = *f.spec();
    let (dim, n, h, l) = (spec.dim(), spec.points_per_axis(), spec.spacing(), spec.half_width());
    let interp = BandLimited::new(f);
    let outside = std::sync::atomic::AtomicUsize::new(0);
    let values = (0..spec.len())
        .into_par_iter()
        .map(|i| {
            let y = target(&spec.point(i));
            let y = &y[..dim];
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("map value {y:?}")));
            }
            if !spec.contains(y) {
                outside.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                return Ok(Complex64::new(0.0, 0.0));
            }
            let mut idx = [0usize; 2];
            let mut on_grid = true;
            for a in 0..dim {
                let r = (y[a] + l) / h;
                let k = r.round();
                if (r - k).abs() <= 1e-9 && k >= 0.0 && (k as usize) < n {
                    idx[a] = k as usize;
                } else {
                    on_grid = false;
                }
            }
            Ok(if on_grid { f.values()[spec.flatten(idx)] } else { interp.eval_unchecked(y) })
        })
        .collect::<Result<Vec<_>>>()?;
    let outside = outside.into_inner();
    if outside > 0 && !f.is_well_decayed() {
        warn!(
            "{outside} mapped nodes fall outside the box while the source field is not decayed at the boundary \
             (relative edge value {:.2e}); extension by zero is inaccurate",
            f.boundary_decay()
        );
    }
    SampledField::new(spec, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_profile() {
        let s = GridSpec::new(1, 8.0, 64).unwrap();
        let c = cutoff(s, 3.0, 1.0).unwrap();
        for (i, v) in c.values().iter().enumerate() {
            let x = s.coordinate(i).abs();
            if x <= 2.0 {
                assert_eq!(v.re, 1.0);
            }
            if x >= 3.0 {
                assert_eq!(v.re, 0.0);
            }
        }
        assert!(cutoff(s, 1.0, 2.0).is_err());
    }

    #[test]
    fn pull_back_reads_nodes_exactly() {
        let s = GridSpec::new(1, 4.0, 32).unwrap();
        let f = SampledField::from_real_fn(s, |p| (-p[0] * p[0]).exp() + p[0]).unwrap();
        let g = pull_back(&f, |p| [-p[0], 0.0]).unwrap();
        for i in 1..32 {
            assert_eq!(g.values()[i], f.values()[32 - i]);
        }
        let far = pull_back(&f, |p| [p[0] + 100.0, 0.0]).unwrap();
        assert!(far.is_zero());
    }
}

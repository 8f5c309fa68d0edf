//! Growth curves `lambda -> ||chi e^{i lambda psi}||_{FL^q}` on the line.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::SampledField;
use crate::spaces::fourier_lebesgue_norm;

/// Evaluates `||chi e^{i lambda psi}||_{FL^q}` for each `lambda` (strictly increasing, positive).
pub fn beurling_helson_growth<P>(psi: P, chi: &SampledField, q: Exponent, lambdas: &[f64]) -> Result<Vec<(f64, f64)>>
where
    P: Fn(f64) -> f64 + Sync,
{
    if chi.spec().dim() != 1 {
        return Err(Error::Dimension(chi.spec().dim()));
    }
    if lambdas.is_empty() || lambdas[0] <= 0.0 || lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("lambda list must be positive and strictly increasing".into()));
    }
    if chi.is_zero() {
        return Err(Error::Degenerate("cutoff vanishes".into()));
    }
    let phase: Vec<f64> = chi.spec().points().map(|x| psi(x[0])).collect();
    if phase.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("phase function".into()));
    }
    lambdas
        .par_iter()
        .map(|&lambda| {
            let values = chi.values().iter().zip(&phase).map(|(c, t)| c * Complex64::from_polar(1.0, lambda * t)).collect();
            let g = SampledField::new(*chi.spec(), values)?;
            Ok((lambda, fourier_lebesgue_norm(&g, q, None)?))
        })
        .collect()
}

/// `max / min` of the values of a growth curve.
pub fn flatness(curve: &[(f64, f64)]) -> f64 {
    let max = curve.iter().map(|c| c.1).fold(0.0, f64::max);
    let min = curve.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    max / min
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::profiles::bump;

    #[test]
    fn affine_curve_is_flat_and_plancherel_holds() {
        let s = GridSpec::new(1, 16.0, 2048).unwrap();
        let chi = SampledField::from_real_fn(s, |p| bump(p[0] / 1.5)).unwrap();
        let lambdas = [1.0, 2.0, 4.0, 8.0, 16.0];
        let affine = beurling_helson_growth(|x| 2.0 * x + 1.0, &chi, Exponent::ONE, &lambdas).unwrap();
        assert!(flatness(&affine) < 1.05);
        let quad = beurling_helson_growth(|x| x * x, &chi, Exponent::TWO, &lambdas).unwrap();
        assert!(flatness(&quad) < 1.01);
        assert!(beurling_helson_growth(|x| x, &chi, Exponent::ONE, &[2.0, 1.0]).is_err());
    }
}

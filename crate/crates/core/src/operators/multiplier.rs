//! Fourier multipliers `m(D)`, propagators, the Hilbert transform and the half-line
//! frequency projectors.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::grid::{forward_fourier, inverse_fourier, SampledField};
use crate::spaces::modulation_norm;
use crate::stft::Window;

use super::pull_back;

/// `F^{-1}[m F f]` with `m` evaluated at the dual nodes.
pub fn fourier_multiplier<M>(m: M, f: &SampledField) -> Result<SampledField>
where
    M: Fn(&[f64]) -> Complex64,
{
    let fhat = forward_fourier(f);
    let symbol = SampledField::from_fn(*fhat.spec(), |xi| m(xi))
        .map_err(|_| Error::NonFinite("multiplier symbol on the dual grid".into()))?;
    Ok(inverse_fourier(&fhat.mul(&symbol)?))
}

/// `F^{-1}[m F f]` for a symbol already sampled on the dual grid.
pub fn fourier_multiplier_sampled(m: &SampledField, f: &SampledField) -> Result<SampledField> {
    Ok(inverse_fourier(&forward_fourier(f).mul(m)?))
}

/// `e^{i t |D|^alpha} f`; for `alpha < 0` the symbol is set to 1 at `xi = 0`.
pub fn propagator(alpha: f64, t: f64, f: &SampledField) -> Result<SampledField> {
    if !(alpha.is_finite() && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("propagator parameters must be finite, got alpha={alpha}, t={t}")));
    }
    fourier_multiplier(
        |xi| {
            let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r == 0.0 && alpha <= 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, t * r.powf(alpha))
            }
        },
        f,
    )
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `F^{-1}[-i sgn(xi) F f]` on the line (`sgn 0 = 0`).
pub fn hilbert_transform(f: &SampledField) -> Result<SampledField> {
    if f.spec().dim() != 1 {
        return Err(Error::Dimension(f.spec().dim()));
    }
    fourier_multiplier(|xi| Complex64::new(0.0, -sgn(xi[0])), f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfLine {
    /// `chi_{(-inf, 0)}(D) = -(iH - I)/2`.
    Negative,
    /// `chi_{[0, inf)}(D) = (iH + I)/2`.
    Positive,
}

/// The half-line projector built from the Hilbert transform; both project onto their
/// half line and split the zero frequency evenly.
pub fn half_line_projector(side: HalfLine, f: &SampledField) -> Result<SampledField> {
    let ih = hilbert_transform(f)?.scale(Complex64::new(0.0, 1.0));
    let half = Complex64::new(0.5, 0.0);
    match side {
        HalfLine::Negative => f.sub(&ih).map(|g| g.scale(half)),
        HalfLine::Positive => ih.add(f).map(|g| g.scale(half)),
    }
}

/// `||f(|.|)||_{M^{p,q}} / ||f||_{M^{p,q}}` on the line, for `1 < p, q < inf`.
pub fn half_line_multiplier_wiener_test(f: &SampledField, window: &Window, p: Exponent, q: Exponent) -> Result<f64> {
    if f.spec().dim() != 1 {
        return Err(Error::Dimension(f.spec().dim()));
    }
    if !(p.is_interior() && q.is_interior()) {
        return Err(Error::InvalidArgument(format!("exponents ({p}, {q}) must lie strictly between 1 and inf")));
    }
    let folded = pull_back(f, |x| [x[0].abs(), 0.0])?;
    let den = modulation_norm(f, window, p, q, None)?;
    if den == 0.0 {
        return Err(Error::Degenerate("zero field".into()));
    }
    Ok(modulation_norm(&folded, window, p, q, None)? / den)
}

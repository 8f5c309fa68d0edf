//! Hilbert transform and half-line projectors on a mean-zero band-limited field.

use num_complex::Complex64;
use tflab::operators::{fourier_multiplier, half_line_projector, hilbert_transform, HalfLine};
use tflab::{GridSpec, SampledField};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::new(1, 4.0 * std::f64::consts::PI, 256)?;
    let cos = SampledField::from_real_fn(spec, |x| x[0].cos())?;
    let sin = SampledField::from_real_fn(spec, |x| x[0].sin())?;
    println!("|H cos - sin| = {:.2e}", hilbert_transform(&cos)?.max_abs_diff(&sin));

    let raw = SampledField::from_fn(spec, |x| Complex64::from_polar((-(x[0] * x[0]) / 4.0).exp(), 0.7 * x[0]))?;
    let f = fourier_multiplier(|xi| Complex64::new(if xi[0] == 0.0 { 0.0 } else { 1.0 }, 0.0), &raw)?;
    let (neg, pos) = (half_line_projector(HalfLine::Negative, &f)?, half_line_projector(HalfLine::Positive, &f)?);
    println!("|P- f + P+ f - f| = {:.2e}", neg.add(&pos)?.max_abs_diff(&f));
    println!("|H H f + f|       = {:.2e}", hilbert_transform(&hilbert_transform(&f)?)?.add(&f)?.max_abs());
    Ok(())
}

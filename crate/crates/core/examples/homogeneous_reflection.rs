//! f(S x + T |x|) in the plane via its orthant decomposition, and the fold ratio on the line.

use num_complex::Complex64;
use tflab::operators::{half_line_multiplier_wiener_test, HomogeneousReflection};
use tflab::stft::Window;
use tflab::{Exponent, GridSpec, SampledField};

fn main() -> tflab::Result<()> {
    let plane = GridSpec::new(2, 8.0, 64)?;
    let f = SampledField::from_fn(plane, |x| Complex64::from_polar((-(x[0] - 0.5).powi(2) - (x[1] + 1.0).powi(2)).exp(), x[0]))?;
    let r = HomogeneousReflection::last_fold(2)?;
    let direct = r.apply(&f)?;
    let pieces = r.decompose(&f)?;
    let mut sum = SampledField::zeros(plane);
    for (_, g) in &pieces {
        sum = sum.add(g)?;
    }
    // Pieces vanish on the coordinate axes, so compare off them.
    let off_axes = (0..plane.len())
        .filter(|&i| plane.point(i).iter().all(|&v| v != 0.0))
        .map(|i| (sum.values()[i] - direct.values()[i]).norm())
        .fold(0.0, f64::max);
    println!("{} orthant pieces; |sum - direct| off the axes = {off_axes:.2e}", pieces.len());

    let line = GridSpec::new(1, 12.0, 256)?;
    let g = SampledField::from_fn(line, |x| Complex64::from_polar((-(x[0] - 1.0).powi(2)).exp(), 2.0 * x[0]))?;
    let even = SampledField::from_real_fn(line, |x| (-x[0] * x[0]).exp())?;
    let (p, q) = (Exponent::TWO, Exponent::new(3.0)?);
    let w = Window::gaussian(line);
    println!("fold ratio, general f: {:.5}", half_line_multiplier_wiener_test(&g, &w, p, q)?);
    println!("fold ratio, even f:    {:.5}", half_line_multiplier_wiener_test(&even, &w, p, q)?);
    Ok(())
}

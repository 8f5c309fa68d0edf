//! Sample a Gaussian, transform onto the dual grid, and compare with its closed form.

use std::f64::consts::PI;

use tflab::grid::{forward_fourier, inverse_fourier, lp_norm};
use tflab::{Exponent, GridSpec, SampledField};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::balanced(1, 128)?;
    let dual = spec.dual();
    println!("box [-{:.3}, {:.3}), h = {:.4}; dual spacing {:.4}", spec.half_width(), spec.half_width(), spec.spacing(), dual.spacing());

    let f = SampledField::from_real_fn(spec, |x| (-0.5 * x[0] * x[0]).exp())?;
    let fhat = forward_fourier(&f);
    let exact = SampledField::from_real_fn(dual, |xi| (2.0 * PI).sqrt() * (-0.5 * xi[0] * xi[0]).exp())?;
    println!("max |F f - sqrt(2 pi) e^(-xi^2/2)| = {:.2e}", fhat.max_abs_diff(&exact));
    println!("round trip error                  = {:.2e}", inverse_fourier(&fhat).max_abs_diff(&f));
    println!("||f||_2 = {:.12}, ||F f||_2 / sqrt(2 pi) = {:.12}", lp_norm(&f, Exponent::TWO), lp_norm(&fhat, Exponent::TWO) / (2.0 * PI).sqrt());
    Ok(())
}

//! Gabor synthesis from random coefficients and the coefficient-norm bound ratio.

use tflab::operators::{gabor_bound_ratio, gabor_coeff_norm, gabor_synthesize, CoefficientOrdering, GaborSystem};
use tflab::stft::Window;
use tflab::{Exponent, GridSpec};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::new(1, 8.0, 128)?;
    let sys = GaborSystem::with_default_lattice(Window::gaussian(spec), 3)?;
    println!("lattice alpha = {:.4}, beta = {:.4}, {} x {} coefficients", sys.alpha(), sys.beta(), sys.index_count(), sys.index_count());
    let c = sys.random_coefficients(1);
    let f = gabor_synthesize(&sys, &c)?;
    println!("max |synthesis| = {:.4}", f.max_abs());
    let w = Window::gaussian(spec);
    for (p, q) in [(2.0, 2.0), (3.0, 1.5), (4.0, 4.0)] {
        let (p, q) = (Exponent::new(p)?, Exponent::new(q)?);
        println!(
            "({p},{q}): ||c||_l1 = {:.4}, ratio = {:.4}",
            gabor_coeff_norm(&c, p, q, CoefficientOrdering::L1),
            gabor_bound_ratio(&sys, &c, &w, p, q)?
        );
    }
    Ok(())
}

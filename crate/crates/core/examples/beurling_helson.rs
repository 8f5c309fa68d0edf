//! Growth curves of chi e^{i lambda psi} in FL^1 and FL^2 for an affine and a quadratic phase.

use tflab::operators::beurling_helson_growth;
use tflab::profiles::bump;
use tflab::{Exponent, GridSpec, SampledField};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::new(1, 16.0, 4096)?;
    let chi = SampledField::from_real_fn(spec, |x| bump(x[0] / 1.5))?;
    let lambdas = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    for q in [Exponent::ONE, Exponent::TWO] {
        let affine = beurling_helson_growth(|x| 2.0 * x + 1.0, &chi, q, &lambdas)?;
        let quad = beurling_helson_growth(|x| x * x, &chi, q, &lambdas)?;
        println!("q = {q}");
        for (a, b) in affine.iter().zip(&quad) {
            println!("  lambda {:>4}: affine {:.5}  quadratic {:.5}", a.0, a.1, b.1);
        }
    }
    Ok(())
}

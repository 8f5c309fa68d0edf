//! Canonical transforms of a dilation and an arctan-perturbed identity, with a localized ratio.

use tflab::corpus::{Corpus, CorpusFamily};
use tflab::operators::{canonical_transform, cutoff, localized_canonical_norm_test, ChangeOfVariables};
use tflab::stft::Window;
use tflab::{Exponent, GridSpec, SampledField};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::new(1, 16.0, 256)?;
    let g = SampledField::from_real_fn(spec, |x| (-0.5 * x[0] * x[0]).exp())?;
    let dilated = canonical_transform(&ChangeOfVariables::scaling(1, 2.0)?, &g)?;
    let exact = SampledField::from_real_fn(spec, |x| 0.5 * (-0.125 * x[0] * x[0]).exp())?;
    println!("I_(2 xi) g vs g(x/2)/2: {:.2e}", dilated.max_abs_diff(&exact));

    let spec = GridSpec::new(1, 12.0, 256)?;
    let psi = ChangeOfVariables::arctan_perturbation(1, 0.1)?;
    let (chi1, chi2) = (cutoff(spec, 4.0, 1.0)?, cutoff(spec, 3.0, 1.0)?);
    let w = Window::gaussian(spec);
    let corpus = Corpus::build(CorpusFamily::RandomBandlimited, 1, 5, 7)?;
    let p = Exponent::new(1.5)?;
    for (m, f) in corpus.members().iter().zip(corpus.sample(spec)?) {
        println!("{}: ||chi1 I_psi chi2 f|| / ||chi2 f|| = {:.5}", m.id(), localized_canonical_norm_test(&psi, &f, &chi1, &chi2, &w, p, Exponent::TWO)?);
    }
    Ok(())
}

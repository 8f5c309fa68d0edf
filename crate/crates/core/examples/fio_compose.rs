//! a(x, D) after a canonical transform, localized and measured on Fourier-Lebesgue spaces.

use num_complex::Complex64;
use tflab::operators::{cutoff, fio_compose, localized_fio_ratio, ChangeOfVariables, KnSymbol};
use tflab::{Exponent, GridSpec, SampledField};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::new(1, 12.0, 256)?;
    let f = SampledField::from_fn(spec, |x| Complex64::from_polar((-(x[0] * x[0])).exp(), -x[0]))?;
    let id = fio_compose(&KnSymbol::one(spec)?, &ChangeOfVariables::identity(1)?, &f)?;
    println!("a = 1, psi = id: |T f - f| = {:.2e}", id.max_abs_diff(&f));

    let a = KnSymbol::s000(spec, 10.0, |x, xi| Complex64::from_polar(1.0 + 0.5 * x[0].cos(), xi[0].sin()))?;
    println!("symbol difference bound = {:.4}", a.derivative_bound());
    let (chi1, chi2) = (cutoff(spec, 4.0, 1.0)?, cutoff(spec, 3.0, 1.0)?);
    for eps in [0.05, 0.1, 0.2] {
        let psi = ChangeOfVariables::arctan_perturbation(1, eps)?;
        let r: Vec<String> = [1.0, 2.0, 4.0]
            .iter()
            .map(|&q| Ok(format!("{:.4}", localized_fio_ratio(&a, &psi, &f, &chi1, &chi2, Exponent::new(q)?)?)))
            .collect::<tflab::Result<_>>()?;
        println!("eps = {eps}: FL^1, FL^2, FL^4 ratios = {}", r.join(", "));
    }
    Ok(())
}

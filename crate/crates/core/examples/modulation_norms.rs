//! Modulation, Wiener and partition-of-unity norms of one compactly supported plateau.

use num_complex::Complex64;
use tflab::profiles::plateau;
use tflab::spaces::{modulation_norm, partition_norms, wiener_norm};
use tflab::stft::Window;
use tflab::{Exponent, GridSpec, SampledField};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::new(1, 12.0, 256)?;
    let w = Window::gaussian(spec);
    let f = SampledField::from_fn(spec, |x| Complex64::from_polar(plateau(x[0], 0.0, 2.0, 0.75), 1.5 * x[0]))?;
    let e = |v: f64| Exponent::new(v).unwrap();
    println!("{:>6} {:>6} {:>10} {:>10} {:>10} {:>10}", "p", "q", "M", "W", "M_part", "W_part");
    for (p, q) in [(1.0, 2.0), (2.0, 1.0), (2.0, 2.0), (4.0, 4.0 / 3.0), (1.0, f64::INFINITY)] {
        let (p, q) = (e(p), e(q));
        let part = partition_norms(&f, p, q)?;
        println!(
            "{:>6} {:>6} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            p.to_string(),
            q.to_string(),
            modulation_norm(&f, &w, p, q, None)?,
            wiener_norm(&f, &w, p, q, None)?,
            part.m,
            part.w
        );
    }
    Ok(())
}

//! Slopes of the M/W norm ratios against the fattened support measure for growing plateaus.

use tflab::corpus::Corpus;
use tflab::spaces::theorem1_ratio_experiment;
use tflab::stft::Window;
use tflab::{Exponent, GridSpec};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::new(1, 16.0, 1024)?;
    let window = Window::compact_bump(spec, 1.0)?;
    let family = Corpus::plateau_family(1, &[1.0, 2.0, 4.0, 8.0], 0.5)?;
    let members = family
        .members()
        .iter()
        .map(|m| Ok((m.support().cloned().expect("compact"), m.sample(spec)?)))
        .collect::<tflab::Result<Vec<_>>>()?;
    let inf = Exponent::INFINITY;
    for (p, q) in [(Exponent::ONE, inf), (inf, Exponent::ONE), (Exponent::TWO, Exponent::TWO)] {
        let t = theorem1_ratio_experiment(&members, &window, p, q, None)?;
        println!(
            "({p},{q}): slope W/M = {:+.4} (bound {}), slope M/W = {:+.4} (bound {})",
            t.slope_w_over_m,
            t.exponent_w_over_m(),
            t.slope_m_over_w,
            t.exponent_m_over_w()
        );
    }
    Ok(())
}

//! The weighted embedding chains for p = 4 with bracket-power weights.

use tflab::corpus::{Corpus, CorpusFamily};
use tflab::stft::Window;
use tflab::weights::{weighted_embedding_chain_test, ChainExponents, ChainLine, Weight};
use tflab::{Exponent, GridSpec};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::new(1, 12.0, 256)?;
    let fields = Corpus::build(CorpusFamily::ModulatedGaussians, 1, 6, 7)?.sample(spec)?;
    let window = Window::gaussian(spec);
    let ex = ChainExponents::sharp(Exponent::new(4.0)?);
    println!("fixed 4, inner {}, outer {}", ex.inner, ex.outer);
    for s in [-1.0, 0.0, 1.0] {
        for line in ChainLine::ALL {
            let t = weighted_embedding_chain_test(&fields, &window, line, ex, &Weight::bracket_power(s))?;
            println!("s = {s:+}  {line:<28?} max left {:.4}  max right {:.4}", t.max_left(), t.max_right());
        }
    }
    Ok(())
}

//! The STFT of a modulated packet and its Fourier covariance defect.

use num_complex::Complex64;
use tflab::stft::{check_fourier_covariance, stft, Window};
use tflab::{GridSpec, SampledField};

fn main() -> tflab::Result<()> {
    let spec = GridSpec::new(1, 12.0, 256)?;
    let f = SampledField::from_fn(spec, |x| Complex64::from_polar((-(x[0] - 1.0).powi(2)).exp(), 2.0 * x[0]))?;
    let w = Window::gaussian(spec);
    let v = stft(&f, &w)?;

    // The spectrogram peak should sit near (x, xi) = (1, 2).
    let (mut best, mut at) = (0.0, (0.0, 0.0));
    for m in 0..spec.len() {
        for k in 0..spec.len() {
            let a = v.get(m, k).norm();
            if a > best {
                best = a;
                at = (spec.coordinate(m), spec.dual().coordinate(k));
            }
        }
    }
    println!("peak |V f| = {best:.4} at x = {:.3}, xi = {:.3}", at.0, at.1);
    println!("Fourier covariance defect = {:.2e}", check_fourier_covariance(&f, &w)?);
    Ok(())
}

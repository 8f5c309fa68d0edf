//! Lattice bijections and propagators acting on sparse Fourier series on the torus.

use std::io::Cursor;

use tflab::torus::{torus_canonical_transform, torus_norm, torus_propagator, LatticeBijection, TorusCoefficients};
use tflab::Exponent;

fn main() -> tflab::Result<()> {
    let f = TorusCoefficients::random(2, 40, 8, 3)?;
    let q = Exponent::new(1.5)?;
    println!("{} coefficients, ||f||_l^1.5 = {:.15}", f.len(), torus_norm(&f, q));
    for psi in [LatticeBijection::negation(2), LatticeBijection::swap(), LatticeBijection::shear(2), LatticeBijection::translation(vec![3, -1])] {
        let g = torus_canonical_transform(&psi, &f)?;
        println!("{:<18} ||I_psi f|| = {:.15}", psi.name(), torus_norm(&g, q));
    }
    let g = torus_propagator(2.0, 0.7, &f)?;
    println!("{:<18} ||e^(it|D|^2) f|| = {:.15}", "schroedinger", torus_norm(&g, q));

    let mut buf = Vec::new();
    f.write_jsonl(&mut buf)?;
    let back = TorusCoefficients::read_jsonl(2, Cursor::new(buf))?;
    println!("JSONL round trip equal: {}", back == f);
    Ok(())
}

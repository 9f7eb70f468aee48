//! `1 + 2^{-s} + 3^{-s} + 4^{-s}`: ln 4 = 2 ln 2, so the exponents are
//! dependent and polygon closure is only necessary. A zero found by the
//! argument principle gives a σ where the torus search must succeed.

use apzeros::cli::SumSpecFile;
use apzeros::probe::torus_membership;
use apzeros::rset::compute_rset;
use apzeros::zerofind::{locate_zeros, Rectangle};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SumSpecFile::parse(include_str!("zeta4-dependent.json"))?.load()?;
    let f = &spec.sum;
    println!("independence: {}", f.independence().as_str());

    let r = compute_rset(f, spec.strip, &spec.tol)?;
    for iv in &r.intervals {
        println!("polygon closes on [{:.12}, {:.12}]", iv.lo, iv.hi);
    }

    let zeros = locate_zeros(f, &Rectangle::new(-2.0, 2.0, 0.0, 40.0)?, &spec.tol)?;
    let rep = f.basis_representation()?;
    for z in zeros.zeros.iter().take(4) {
        let sigma = z.location.re;
        let t = torus_membership(f, sigma, &rep, 16, 200)?;
        println!(
            "zero at {:.10}{:+.10}i: torus residual {:.2e}, member {}",
            sigma, z.location.im, t.residual, t.member
        );
    }
    Ok(())
}

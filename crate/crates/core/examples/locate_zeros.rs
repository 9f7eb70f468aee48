//! Locates zeros by the argument principle and checks their real parts
//! against the computed set.

use apzeros::cli::SumSpecFile;
use apzeros::zerofind::{crosscheck_rset, locate_zeros, winding_number, Rectangle};
use apzeros::{ExponentialSum, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = Tolerances::default();

    // e^s - 1 vanishes at 2πik
    let f = ExponentialSum::real([(1.0, 1.0), (-1.0, 0.0)])?;
    let rect = Rectangle::new(-1.0, 1.0, -1.0, 20.0)?;
    println!("e^s - 1: winding on {rect:?} = {}", winding_number(&f, &rect, &tol)?);

    let spec = SumSpecFile::parse(include_str!("zeta3-primes.json"))?.load()?;
    let search = locate_zeros(&spec.sum, &Rectangle::new(-1.5, 1.5, 0.0, 60.0)?, &tol)?;
    println!(
        "1 + 2^-s + 3^-s: {} zeros with 0 ≤ t ≤ 60 (complete: {})",
        search.zeros.len(),
        search.complete
    );
    for z in search.zeros.iter().take(8) {
        println!(
            "  {:.12} {:+.12}i   |f| = {:.1e}",
            z.location.re, z.location.im, z.residual
        );
    }

    let report = crosscheck_rset(&spec.sum, spec.strip, 200.0, &spec.tol)?;
    println!(
        "cross-check to t = 200: {} zeros, {} outside the set, farthest density gap {:.3}",
        report.zeros.len(),
        report.violations.len(),
        report.max_density_distance
    );
    println!("real-part histogram: {:?}", report.histogram);
    Ok(())
}

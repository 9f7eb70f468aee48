//! Vertical min-modulus scans against the auxiliary function on the phase torus.
//!
//! Inside `R_f` the torus search closes the polygon, and `|f(σ+it)|` dips
//! arbitrarily low somewhere up the line. Outside it neither happens.

use apzeros::probe::{eval_aux, min_modulus_scan, sample_image, torus_membership, PhaseAssignment};
use apzeros::rset::inf_modulus;
use apzeros::{ExponentialSum, Tolerances};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = ExponentialSum::zeta_partial_sum(3)?;
    let rep = f.basis_representation()?;
    let tol = Tolerances::default();

    let at0 = eval_aux(&f, 0.0, &PhaseAssignment::zeros(rep.dim()), &rep)?;
    println!("F(0, 0) = {at0}  (f(0) = 3)");

    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>7}",
        "sigma", "inf|f|", "scan min", "torus res", "member"
    );
    for sigma in [-1.5, -1.0, -0.5, 0.0, 0.5, 0.78, 1.0, 2.0] {
        let inf = inf_modulus(&f, sigma);
        let scan = min_modulus_scan(&f, sigma, 200.0, &tol)?;
        let torus = torus_membership(&f, sigma, &rep, 16, 200)?;
        println!(
            "{:>6.2} {:>12.3e} {:>12.3e} {:>12.3e} {:>7}",
            sigma, inf.value, scan.min_value, torus.search_residual, torus.member
        );
    }

    // points of the image F(0.5, T^2); the polygon closes so it covers the origin
    let image = sample_image(&f, 0.5, &rep, 8)?;
    let closest = image.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    println!(
        "closest of {} image samples to 0 at σ = 0.5: {closest:.3e}",
        image.len()
    );
    Ok(())
}

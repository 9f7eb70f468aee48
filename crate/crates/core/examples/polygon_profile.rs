//! `inf_t |f(σ+it)|` and the `B_j` across σ, printed as CSV.
//!
//! The infimum is `max(0, 2·max_j m_j − Σ m_j)` when the exponents are
//! independent, and it is zero exactly on `R_f`.

use apzeros::rset::{b_value, inf_modulus};
use apzeros::ExponentialSum;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = ExponentialSum::zeta_partial_sum(3)?;
    print!("sigma,inf_modulus");
    let order = f.label_order();
    for &j in &order {
        print!(",B_{}", f.terms()[j].label() + 1);
    }
    println!();
    for k in 0..=40 {
        let sigma = -2.0 + 4.0 * k as f64 / 40.0;
        print!("{sigma},{}", inf_modulus(&f, sigma).value);
        for &j in &order {
            print!(",{}", b_value(&f, j, sigma)?.lo);
        }
        println!();
    }
    Ok(())
}

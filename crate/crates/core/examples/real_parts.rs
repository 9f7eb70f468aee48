//! `R_f` for `1 + 2^{-s} + 3^{-s}` read from a spec file.
//!
//! Run with `cargo run -p apzeros --example real_parts`.

use apzeros::cli::{rset_json, SumSpecFile};
use apzeros::rset::{b_roots, compute_rset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SumSpecFile::parse(include_str!("zeta3-primes.json"))?.load()?;
    let r = compute_rset(&spec.sum, spec.strip, &spec.tol)?;

    let term_no = |j: Option<usize>| j.map(|j| spec.sum.terms()[j].label() + 1);
    for iv in &r.intervals {
        println!(
            "[{:.15}, {:.15}]  ends fixed by terms {:?} and {:?}",
            iv.lo,
            iv.hi,
            term_no(iv.lo_attribution),
            term_no(iv.hi_attribution)
        );
    }
    println!("certified: {}", r.certified);

    // each B_j on its own: where the j-th side is too long to close the polygon
    for j in spec.sum.label_order() {
        let b = b_roots(&spec.sum, j, spec.strip, &spec.tol)?;
        println!(
            "B_{}: negative on {:?}, min {:.6} at {:.6}",
            spec.sum.terms()[j].label() + 1,
            b.negative_interval,
            b.min_value,
            b.minimizer
        );
    }

    println!("{}", serde_json::to_string_pretty(&rset_json(&spec.sum, &r))?);
    Ok(())
}

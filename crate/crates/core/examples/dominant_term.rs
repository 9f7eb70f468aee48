//! A long truncated series with a tail bound whose leading term dominates
//! everywhere: the zero-free region is certified without locating a zero.

use apzeros::cli::{verify, SumSpecFile};
use apzeros::rset::{certify_empty, compute_rset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SumSpecFile::parse(include_str!("truncated-series.json"))?.load()?;
    let f = &spec.sum;
    let tail = f.tail().expect("series carries a tail bound");
    println!("{} terms, tail ≤ {} on {:?}", f.len(), tail.epsilon(), tail.valid_on());

    let r = compute_rset(f, spec.strip, &spec.tol)?;
    println!("R_f: {} intervals", r.intervals.len());
    for u in &r.uncertified_regions {
        println!("  outside the tail bound, uncertified: [{}, {}]", u.lo, u.hi);
    }

    let v = tail.valid_on();
    if let Some(c) = certify_empty(f, v.alpha(), v.beta(), &spec.tol) {
        println!(
            "empty on [{}, {}] by term {}, log-margin {:.3}",
            c.lo,
            c.hi,
            f.terms()[c.j].label() + 1,
            -c.worst
        );
    }

    let report = verify(&spec, 50.0, 64);
    for c in &report.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}

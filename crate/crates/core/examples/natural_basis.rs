//! Exact coordinates, independence certificates and the natural basis.

use apzeros::basis::{check_rational_independence, is_integral, natural_basis, RationalVector};
use apzeros::cli::SumSpecFile;

fn show(name: &str, text: &str) -> Result<(), Box<dyn std::error::Error>> {
    let spec = SumSpecFile::parse(text)?.load()?;
    let f = &spec.sum;
    println!("{name}: {} terms, independence {}", f.len(), f.independence().as_str());
    let rep = f.basis_representation()?;
    for &j in &f.label_order() {
        let t = &f.terms()[j];
        println!(
            "  term {}  λ = {:<22} r = {:?}",
            t.label() + 1,
            t.exponent(),
            rep.row_for(t).to_strings()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    show("three terms", include_str!("basis-three-terms.json"))?;
    show("zero exponent", include_str!("basis-zero-exponent.json"))?;
    show("half-integral", include_str!("basis-half-integral.json"))?;
    show("zeta_4", include_str!("zeta4-dependent.json"))?;

    // ln 4 = 2 ln 2 gives the relation 2·ln2 - ln4 = 0
    let coords = vec![RationalVector::from_integers(&[1]), RationalVector::from_integers(&[2])];
    let check = check_rational_independence(&coords)?;
    println!(
        "ln2, ln4: independent = {}, certificate = {:?}",
        check.independent,
        check.certificate.map(|c| c.to_strings())
    );

    let rep = natural_basis(
        &[RationalVector::parse(&["1/2"])?, RationalVector::parse(&["3/2"])?],
        &[0.5, 1.5],
    )?;
    println!(
        "natural basis of 1/2, 3/2 has dim {}, integral = {}",
        rep.dim(),
        is_integral(&rep)
    );
    Ok(())
}

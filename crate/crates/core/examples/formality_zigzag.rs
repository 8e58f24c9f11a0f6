//! The zig-zag of quasi-isomorphisms from an iterated bar construction to
//! its divided-power / exterior endpoint, with every arrow verified.

use emlkit::barlab::FGAbGroup;
use emlkit::exactring::CoefficientRing;
use emlkit::formality::emap::e_report;
use emlkit::formality::zigzag::formality_zigzag;

fn main() -> emlkit::Result<()> {
    let q = CoefficientRing::Rationals;
    for g in ["Z/2", "(Z/2)^2"] {
        let group: FGAbGroup = g.parse()?;
        let z = formality_zigzag(&group, &q, 2, 6)?;
        let r = z.report(6)?;
        println!("{g}: {} arrows, verdict {}, endpoint {}", r.arrows.len(), r.verdict, r.endpoint);
    }

    // in height one the comparison map e is itself a quasi-isomorphism
    let e = e_report(&"Z/3".parse()?, &"F2".parse()?, 6)?;
    println!("e for Z/3 over F2: chain {} algebra {} quasi-iso {}", e.chain_map_ok, e.algebra_map_ok, e.quasi_iso.is_quasi_iso);
    match e_report(&"Z/2".parse()?, &"F2".parse()?, 6) {
        Err(err) => println!("Z/2 over F2 is refused: {err}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

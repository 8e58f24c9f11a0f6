//! Homology of iterated bar constructions of finite abelian groups.
//!
//!     cargo run --example bar_homology -- Z/4 Z 2

use emlkit::barlab::{BasedDGA, FGAbGroup};
use emlkit::exactring::CoefficientRing;

fn main() -> emlkit::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let group: FGAbGroup = args.first().map_or("Z/2", |s| s.as_str()).parse()?;
    let ring: CoefficientRing = args.get(1).map_or("Z", |s| s.as_str()).parse()?;
    let height: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let n_top = 7;

    let bar = BasedDGA::iterated_bar(&group, &ring, height, n_top)?;
    let report = bar.check_structure_over(std::slice::from_ref(&ring));
    println!("B̄^{height} k[{group}] over {ring}: structure ok = {}", report[0].ok());
    let c = bar.to_complex();
    println!("chain dims {:?}", c.dims());
    for (i, h) in c.homology_all()?.iter().enumerate() {
        println!("  H_{i} = {h}");
    }
    Ok(())
}

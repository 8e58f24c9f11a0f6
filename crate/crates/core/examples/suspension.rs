//! The homology suspension from B̄ⁿ to B̄ⁿ⁺¹: an isomorphism below degree 2n
//! that kills products.

use emlkit::barlab::suspension::suspension_report;
use emlkit::barlab::FGAbGroup;

fn main() -> emlkit::Result<()> {
    let f2 = "F2".parse()?;
    for (n, top) in [(1, 5), (2, 7)] {
        let r = suspension_report(&FGAbGroup::cyclic(2), &f2, n, top)?;
        println!("n = {n}");
        println!("{}", serde_json::to_string_pretty(&r)?);
    }
    Ok(())
}

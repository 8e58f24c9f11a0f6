//! Smith normal form and homology over several coefficient rings.

use emlkit::chainkit::ChainComplex;
use emlkit::exactring::matrix::scalar_to_string;
use emlkit::exactring::{snf, CoefficientRing, SparseMatrix};

fn main() -> emlkit::Result<()> {
    let m = SparseMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let s = snf(&m, &CoefficientRing::Integers)?;
    println!("invariant factors over Z: {:?}", s.invariants.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    let diag = s.left.mul(&m)?.mul(&s.right)?;
    for row in diag.to_dense() {
        println!("  {}", row.iter().map(scalar_to_string).collect::<Vec<_>>().join(" "));
    }

    // RP^2: Z ← Z --2--> Z
    let basis = vec![vec!["v".into()], vec!["e".into()], vec!["f".into()], vec![]];
    let d = vec![SparseMatrix::zeros(1, 1), SparseMatrix::from_dense(&[vec![2]]), SparseMatrix::zeros(1, 0)];
    for r in ["Z", "Q", "F2", "F3", "Z[1/2]", "Z/4"] {
        let c = ChainComplex::new(r.parse()?, basis.clone(), d.clone())?;
        let h: Vec<String> = c.homology_all()?.iter().map(|h| h.to_string()).collect();
        println!("H_*(RP^2; {r}) = {h:?}");
    }
    Ok(())
}

//! Hom and Ext between functors on F_2-vector spaces, and the obstruction
//! table comparing them with the homology of iterated bar constructions.

use std::sync::Arc;

use emlkit::functorext::*;

fn main() -> emlkit::Result<()> {
    let site = Arc::new(Site::new(2, 2)?);
    let a = FunctorRep::additive(&site, 2)?;
    let bar = FunctorRep::representable(&site, 2, 1)?.reduced_part()?;
    println!("Hom(P̄, A) has dim {}", hom_space(&bar, &a)?.len());
    println!("Ext(P̄, A) = {:?}", ext_groups(&bar, &a, 2)?);
    println!("Ext(A, A) = {:?}", ext_groups(&a, &a, 2)?);

    let k = KoszulComplex::new(&Arc::new(Site::new(2, 3)?), 2)?;
    println!("Koszul complex at V = F_2^2: dims {:?}, exact {}", k.dims(2), k.is_exact_at(2));

    let rep = obstruction_report(&ObstructionParams { n: 1, n_top: 6, ..Default::default() })?;
    println!("column total {}, homology row {:?}, verdict {}", rep.column_total, rep.homology_row, rep.verdict);
    for w in &rep.witnesses {
        println!("  witness in degree {}: {}", w.degree, w.kind);
    }
    Ok(())
}

//! Comparison of `Ext(B̄ⁿ_s, A)` with `Hom(H_j(n), A)`: a formal diagram would force
//! the homology row to be as small as the column table.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::functor::FunctorRep;
use super::hom::{ext_from_resolution, hom_space, is_natural, resolve};
use super::homology::BarFamily;
use super::site::Site;
use crate::error::{Error, Result};
use crate::hocolim::srep::PageDims;

#[derive(Clone, Debug)]
pub struct ObstructionParams {
    pub n: usize,
    pub q: u64,
    pub p: u64,
    pub n_top: usize,
    pub r: usize,
    pub t_max: usize,
}

impl Default for ObstructionParams {
    fn default() -> Self {
        ObstructionParams { n: 1, q: 2, p: 2, n_top: 8, r: 2, t_max: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub kind: String,
    pub degree: usize,
    pub natural: bool,
    /// Rank of the transformation at each object.
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObstructionReport {
    pub n: usize,
    pub q: u64,
    pub p: u64,
    #[serde(rename = "N")]
    pub n_top: usize,
    pub r: usize,
    pub t_max: usize,
    /// Numbers are for the site truncated at rank `r`.
    pub truncated: bool,
    /// `"s,t" ↦ dim Ext^t(B̄ⁿ_s, A)`.
    pub column_table: PageDims,
    pub column_total: usize,
    /// `j ↦ dim Hom(H_j, A)`.
    pub homology_row: BTreeMap<usize, usize>,
    pub homology_total: usize,
    /// `j ↦ dims Ext^{≤tMax}(H_j, A)`.
    pub homology_ext: BTreeMap<usize, Vec<usize>>,
    pub verdict: String,
    pub witnesses: Vec<Witness>,
    /// Set when the budget forced a lower truncation than requested.
    pub partial: bool,
    pub notes: Vec<String>,
}

impl ObstructionReport {
    pub fn is_obstructed(&self) -> bool {
        self.verdict == "obstructed"
    }
}

fn ranks(h: &FunctorRep, eta: &[super::functor::Mat]) -> Vec<usize> {
    let f = h.field();
    eta.iter().map(|m| m.rank(&f)).collect()
}

pub fn obstruction_report(params: &ObstructionParams) -> Result<ObstructionReport> {
    let ObstructionParams { n, q, p, n_top, r, t_max } = params.clone();
    if q % p != 0 {
        return Err(Error::Precondition(format!("p = {p} does not divide q = {q}")));
    }
    let site = Arc::new(Site::new(q, r)?);
    let mut notes = Vec::new();
    let mut top = n_top;
    let family = loop {
        match BarFamily::new(&site, p, n, top) {
            Ok(fam) => break fam,
            Err(Error::Budget(msg)) if top > n + 1 => {
                notes.push(format!("N lowered from {top}: {msg}"));
                top -= 1;
            }
            Err(e) => return Err(e),
        }
    };
    let a = FunctorRep::additive(&site, p)?;
    // one injective coresolution of A serves every column and row entry
    let res = resolve(&a.dual(), t_max + 1)?;
    let ext = |f: &FunctorRep| ext_from_resolution(&res, &f.dual(), t_max);

    let mut column_table = PageDims::default();
    for s in 0..=top {
        for (t, d) in ext(&family.column(s)?)?.into_iter().enumerate() {
            if d != 0 {
                column_table.0.insert((s, t), d);
            }
        }
    }
    let column_total = column_table.0.values().sum();
    let beyond: usize = column_table.0.iter().filter(|((s, t), _)| *t > 0 && *s > r).map(|(_, d)| d).sum();
    if beyond > 0 {
        notes.push(format!(
            "{beyond} classes with t > 0 sit in columns s > r = {r}, where tensor powers of the reduced projective stop being projective on the truncated site"
        ));
    }

    let mut homology_row = BTreeMap::new();
    let mut homology_ext = BTreeMap::new();
    let mut witnesses = Vec::new();
    let stable_degree = 2 * p as usize + n - 1;
    for j in 0..top {
        let h = family.homology(j)?;
        let basis = hom_space(&h, &a)?;
        homology_row.insert(j, basis.len());
        homology_ext.insert(j, ext(&h)?);
        if j == stable_degree {
            if let Some(eta) = basis.first() {
                witnesses.push(Witness { kind: "verschiebungComposite".into(), degree: j, natural: is_natural(&h, &a, eta), ranks: ranks(&h, eta) });
            }
        }
    }
    let (h, eta) = family.degree_n_projection()?;
    witnesses.insert(0, Witness { kind: "degreeProjection".into(), degree: n, natural: is_natural(&h, &a, &eta), ranks: ranks(&h, &eta) });
    if stable_degree >= top {
        notes.push(format!("degree {stable_degree} lies beyond the computed range"));
    }
    let homology_total = homology_row.values().sum();
    let verdict = if homology_total > 1 && column_total == 1 { "obstructed" } else { "inconclusive" };
    Ok(ObstructionReport {
        n,
        q,
        p,
        n_top: top,
        r,
        t_max,
        truncated: true,
        column_table,
        column_total,
        homology_row,
        homology_total,
        homology_ext,
        verdict: verdict.into(),
        witnesses,
        partial: top < n_top,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_one_is_obstructed() {
        let rep = obstruction_report(&ObstructionParams { n_top: 6, ..Default::default() }).unwrap();
        assert_eq!(rep.column_total, 1);
        assert_eq!(rep.column_table.get(1, 0), 1);
        assert!(rep.homology_row[&1] >= 1 && rep.homology_row[&4] >= 1);
        assert!(rep.is_obstructed());
        assert_eq!(rep.witnesses.len(), 2);
        assert!(rep.witnesses.iter().all(|w| w.natural));
        assert_eq!(rep.witnesses[1].degree, 4);
        // Ext^2(A, A) = F_2
        assert_eq!(rep.homology_ext[&1], vec![1]);
    }

    #[test]
    fn higher_ext_sees_the_truncation() {
        let rep = obstruction_report(&ObstructionParams { n_top: 4, t_max: 2, ..Default::default() }).unwrap();
        assert_eq!(rep.homology_ext[&1], vec![1, 0, 1]);
        for ((s, t), d) in &rep.column_table.0 {
            assert!((*s, *t) == (1, 0) || (*t > 0 && *s > rep.r), "({s},{t}) = {d}");
        }
        assert_eq!(rep.column_table.get(3, 1), 3);
        assert_eq!(rep.verdict, "inconclusive");
        assert!(rep.notes.iter().any(|n| n.contains("truncated site")));
    }

    #[test]
    fn height_two() {
        let rep = obstruction_report(&ObstructionParams { n: 2, n_top: 7, ..Default::default() }).unwrap();
        assert_eq!(rep.column_total, 1);
        assert_eq!(rep.column_table.get(2, 0), 1);
        assert!(rep.homology_row[&2] >= 1 && rep.homology_row[&5] >= 1);
        assert!(rep.is_obstructed());
        assert_eq!(rep.witnesses[1].degree, 5);
    }
}

//! The suspension `σ: H_i(B̄ⁿ) → H_{i+1}(B̄ⁿ⁺¹)`, `z ↦ [z]`, over a field.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::dga::BasedDGA;
use super::group::FGAbGroup;
use crate::chainkit::map::{field_homology, induced_on};
use crate::error::{Error, Result};
use crate::exactring::field::{Field, FieldKind};
use crate::exactring::homology::{from_scalar_vec, rank, to_scalar_vec};
use crate::exactring::{int, CoefficientRing, Scalar, SparseMatrix};
use crate::with_field;

#[derive(Clone, Debug, Serialize)]
pub struct SuspensionDegree {
    pub degree: usize,
    #[serde(rename = "sourceDim")]
    pub source_dim: usize,
    #[serde(rename = "targetDim")]
    pub target_dim: usize,
    pub rank: usize,
    #[serde(rename = "isIso")]
    pub is_iso: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuspensionReport {
    pub n: usize,
    pub degrees: Vec<SuspensionDegree>,
    /// `σ` is an isomorphism in every checked degree `0 < i < 2n`.
    #[serde(rename = "stableIso")]
    pub stable_iso: bool,
    /// Highest degree of the stable range that fits in the truncation.
    #[serde(rename = "stableCheckedThrough")]
    pub stable_checked_through: usize,
    #[serde(rename = "productPairs")]
    pub product_pairs: usize,
    /// Pairs whose product is already nonzero in the homology of `B̄ⁿ`.
    #[serde(rename = "nonzeroProducts")]
    pub nonzero_products: usize,
    #[serde(rename = "productsKilled")]
    pub products_killed: bool,
}

/// Matrix of `z ↦ [z]` from degree `i` of the input of `bar` to degree `i + 1` of `bar`.
pub fn suspension_matrix(bar: &BasedDGA, i: usize) -> Result<SparseMatrix> {
    let input = bar.bar_input().ok_or_else(|| Error::Shape("suspension needs a bar construction".into()))?;
    let mut m = SparseMatrix::zeros(bar.dim(i + 1), input.dim(i));
    for x in input.in_degree(i) {
        let w = bar.find_word(&[x]).ok_or_else(|| Error::Truncation(format!("[{}] is outside the bar", input.label(x))))?;
        m.set(bar.local(w), input.local(x), int(1));
    }
    Ok(m)
}

/// Suspension from `B̄ⁿk[G]` to `B̄ⁿ⁺¹k[G]`, both from one tower truncated at `n_top`.
pub fn suspension_report(group: &FGAbGroup, ring: &CoefficientRing, n: usize, n_top: usize) -> Result<SuspensionReport> {
    let kind = FieldKind::of(ring)?;
    if n == 0 {
        return Err(Error::Precondition("suspension starts at height 1".into()));
    }
    let bar = BasedDGA::iterated_bar(group, ring, n + 1, n_top)?;
    with_field!(kind, f => run(&f, &bar, n, n_top))
}

fn run<F: Field>(f: &F, bar: &BasedDGA, n: usize, n_top: usize) -> Result<SuspensionReport> {
    let input = bar.bar_input().expect("iterated bar").clone();
    let (sc, tc) = (input.to_complex(), bar.to_complex());
    let ring = &bar.ring;
    let top = n_top.saturating_sub(2);
    let mut degrees = Vec::new();
    let mut homs = BTreeMap::new();
    for i in 1..=top {
        let hs = field_homology(f, &sc, i)?;
        let ht = field_homology(f, &tc, i + 1)?;
        let m = induced_on(f, &hs, &ht, &suspension_matrix(bar, i)?)?;
        let r = rank(&m, ring)?;
        degrees.push(SuspensionDegree { degree: i, source_dim: hs.dim(), target_dim: ht.dim(), rank: r, is_iso: r == hs.dim() && r == ht.dim() });
        homs.insert(i, (hs, ht));
    }
    let stable_checked_through = top.min(2 * n - 1);
    let stable_iso = degrees.iter().filter(|d| d.degree < 2 * n).all(|d| d.is_iso);

    let mut product_pairs = 0;
    let mut nonzero_products = 0;
    let mut products_killed = true;
    for i in 1..=top {
        for j in i..=top.saturating_sub(i) {
            let (hi, hj) = (&homs[&i].0, &homs[&j].0);
            let (hs, ht) = &homs[&(i + j)];
            let sigma = suspension_matrix(bar, i + j)?;
            for zi in &hi.witnesses {
                for zj in &hj.witnesses {
                    let (a, b) = (to_scalar_vec(f, zi), to_scalar_vec(f, zj));
                    let mut prod: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (x, c) in &a {
                        for (y, e) in &b {
                            let (gx, gy) = (input.in_degree(i).start + x, input.in_degree(j).start + y);
                            let p = input.product(gx, gy).ok_or_else(|| Error::Truncation("product outside the input".into()))?;
                            for (z, g) in p {
                                *prod.entry(input.local(z)).or_insert_with(Scalar::zero) += c * e * int(g);
                            }
                        }
                    }
                    let prod: Vec<(usize, Scalar)> = prod.into_iter().collect();
                    let img = from_scalar_vec(f, &sigma.apply(&prod));
                    product_pairs += 1;
                    if !hs.is_boundary(&from_scalar_vec(f, &prod)) {
                        nonzero_products += 1;
                    }
                    if !ht.is_boundary(&img) {
                        products_killed = false;
                    }
                }
            }
        }
    }
    Ok(SuspensionReport { n, degrees, stable_iso, stable_checked_through, product_pairs, nonzero_products, products_killed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suspension_z2_height_one() {
        let r = suspension_report(&FGAbGroup::cyclic(2), &CoefficientRing::PrimeField(2), 1, 5).unwrap();
        assert!(r.stable_iso && r.products_killed, "{r:?}");
        assert!(r.nonzero_products > 0);
        let r = suspension_report(&FGAbGroup::cyclic(2), &CoefficientRing::PrimeField(2), 2, 7).unwrap();
        assert!(r.stable_iso && r.products_killed, "{r:?}");
    }
}

//! `e: B̄k[G] → Λ(G⊗k[1])`, `[b_{g_1}|…|b_{g_p}] ↦ (1/p!) g_1∧…∧g_p`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::check_hypotheses;
use crate::barlab::bar::{bar_differential, deconcatenation, shuffle_product};
use crate::barlab::free::{mono_coproduct, mono_product, FreeKind};
use crate::barlab::map::{vanishes, AlgebraMap, MapReport};
use crate::barlab::symbolic::{words, BoundedGroupAlgebra};
use crate::barlab::{BasedDGA, FGAbGroup, GroupHom};
use crate::chainkit::complex::labels;
use crate::chainkit::{ChainComplex, QuasiIsoReport};
use crate::error::{Error, Result};
use crate::exactring::{int, CoefficientRing, Scalar, SparseMatrix};

/// Exterior monomials (exponent vectors) with coefficients.
pub type ExtComb = Vec<(Vec<usize>, Scalar)>;

fn merge(terms: impl IntoIterator<Item = (Vec<usize>, Scalar)>) -> ExtComb {
    let mut acc: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    for (k, c) in terms {
        *acc.entry(k).or_insert_with(Scalar::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `v_1 ∧ … ∧ v_p` in `Λ(k^r)` for integer vectors of length `r`.
pub fn wedge(vectors: &[Vec<i64>], r: usize) -> ExtComb {
    let mut acc: ExtComb = vec![(vec![0; r], Scalar::one())];
    for v in vectors {
        let mut next = Vec::new();
        for (m, c) in &acc {
            for (j, a) in v.iter().enumerate().take(r) {
                if *a == 0 {
                    continue;
                }
                let mut g = vec![0; r];
                g[j] = 1;
                if let Some((prod, s)) = mono_product(FreeKind::Exterior, 1, m, &g) {
                    next.push((prod, c * int(a * s)));
                }
            }
        }
        acc = merge(next);
    }
    acc
}

fn factorial(p: usize) -> Scalar {
    Scalar::from_integer((1..=p as u64).map(BigInt::from).product())
}

/// Value of `e` on a word of group elements; zero once the length exceeds the free rank.
pub fn e_word(group: &FGAbGroup, word: &[Vec<i64>]) -> ExtComb {
    let r = group.free_rank;
    if word.len() > r {
        return Vec::new();
    }
    let f = factorial(word.len());
    wedge(word, r).into_iter().map(|(m, c)| (m, c / &f)).collect()
}

/// `Λ(φ ⊗ k)` on a combination of exterior monomials.
pub fn exterior_apply(phi: &GroupHom, x: &ExtComb) -> ExtComb {
    let (r, r2) = (phi.source.free_rank, phi.target.free_rank);
    let cols: Vec<Vec<i64>> = (0..r).map(|j| (0..r2).map(|i| phi.matrix[i][j]).collect()).collect();
    merge(x.iter().flat_map(|(m, c)| {
        let vs: Vec<Vec<i64>> = (0..r).filter(|j| m[*j] == 1).map(|j| cols[j].clone()).collect();
        wedge(&vs, r2).into_iter().map(move |(n, e)| (n, c * e))
    }))
}

fn ext_mul(a: &ExtComb, b: &ExtComb) -> ExtComb {
    merge(a.iter().flat_map(|(m, c)| {
        b.iter().filter_map(move |(n, e)| mono_product(FreeKind::Exterior, 1, m, n).map(|(p, s)| (p, c * e * int(s))))
    }))
}

/// Results of the e-map checks on a finite group.
#[derive(Clone, Debug, Serialize)]
pub struct EMapReport {
    pub group: String,
    pub ring: String,
    pub dim: usize,
    #[serde(rename = "chainMapOk")]
    pub chain_map_ok: bool,
    #[serde(rename = "algebraMapOk")]
    pub algebra_map_ok: bool,
    #[serde(rename = "quasiIso")]
    pub quasi_iso: QuasiIsoReport,
}

/// `e` for a finite group as a map of based algebras through degree `n_top`.
pub fn e_map(group: &FGAbGroup, ring: &CoefficientRing, n_top: usize) -> Result<AlgebraMap> {
    let source = Arc::new(BasedDGA::iterated_bar(group, ring, 1, n_top)?);
    e_map_from(group, source)
}

/// `e` out of an already built `B̄k[G]`.
pub fn e_map_from(group: &FGAbGroup, source: Arc<BasedDGA>) -> Result<AlgebraMap> {
    let ring = source.ring.clone();
    check_hypotheses(group, &ring)?;
    let input = source.bar_input().ok_or_else(|| Error::Shape("e needs a bar of a group algebra".into()))?.clone();
    let target = Arc::new(BasedDGA::free(FreeKind::Exterior, group.free_rank, 1, &ring, source.n, None)?);
    let mut images = Vec::with_capacity(source.len());
    for x in 0..source.len() {
        let w = source.word(x).expect("bar basis");
        let gs: Vec<Vec<i64>> = w.iter().map(|l| input.group_element(*l).expect("group algebra").to_vec()).collect();
        let mut img = Vec::new();
        for (m, c) in e_word(group, &gs) {
            let z = target.find_monomial(&m).ok_or_else(|| Error::Truncation("exterior target too small".into()))?;
            img.push((z, c));
        }
        images.push(img);
    }
    AlgebraMap::new("e", source, target, images)
}

pub fn e_report(group: &FGAbGroup, ring: &CoefficientRing, n_top: usize) -> Result<EMapReport> {
    let dim = check_hypotheses(group, ring)?;
    let e = e_map(group, ring, n_top)?;
    let r: MapReport = e.check();
    // the cone test over a non-field needs one more degree than a field comparison
    let up_to = if ring.is_field() { n_top.saturating_sub(1) } else { n_top.saturating_sub(2) };
    let qi = e.to_chain_map().quasi_iso(up_to)?;
    Ok(EMapReport { group: group.to_string(), ring: ring.to_string(), dim, chain_map_ok: r.chain_ok(), algebra_map_ok: r.algebra_ok(), quasi_iso: qi })
}

/// Naturality `e ∘ B̄k[φ] = Λ(φ⊗k) ∘ e` for finite groups; returns the failing source words.
pub fn e_naturality_finite(phi: &GroupHom, ring: &CoefficientRing, n_top: usize) -> Result<Vec<String>> {
    let bphi = AlgebraMap::iterated_group_map(phi, ring, 1, n_top)?;
    let es = e_map_from(&phi.source, bphi.source.clone())?;
    let et = e_map_from(&phi.target, bphi.target.clone())?;
    let left = et.compose_after(&bphi)?;
    let mut bad = Vec::new();
    for x in 0..es.source.len() {
        let ext: ExtComb = es.images[x].iter().map(|(z, c)| (es.target.monomial(*z).expect("exterior").to_vec(), c.clone())).collect();
        let right = exterior_apply(phi, &ext);
        let mut terms: Vec<(Vec<usize>, Scalar)> = right.into_iter().map(|(m, c)| (m, -c)).collect();
        terms.extend(left.images[x].iter().map(|(z, c)| (et.target.monomial(*z).expect("exterior").to_vec(), c.clone())));
        if !vanishes(ring, terms) {
            bad.push(es.source.label(x).to_string());
        }
    }
    Ok(bad)
}

/// `e` on bar words over a box of a group with free part.
#[derive(Clone, Debug)]
pub struct BoundedEMap {
    pub alg: BoundedGroupAlgebra,
    pub ring: CoefficientRing,
    pub dim: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BoundedEReport {
    #[serde(rename = "wordsChecked")]
    pub words_checked: usize,
    #[serde(rename = "pairsChecked")]
    pub pairs_checked: usize,
    /// Words whose differential leaves the box.
    pub skipped: usize,
    #[serde(rename = "chainFailures")]
    pub chain_failures: usize,
    #[serde(rename = "algebraFailures")]
    pub algebra_failures: usize,
    #[serde(rename = "coalgebraWitness")]
    pub coalgebra_witness: Option<String>,
}

fn word_label(w: &[Vec<i64>]) -> String {
    format!("[{}]", w.iter().map(|g| format!("b{}", FGAbGroup::label(g))).collect::<Vec<_>>().join("|"))
}

impl BoundedEMap {
    pub fn new(group: &FGAbGroup, ring: &CoefficientRing, bound: i64, letter_bound: i64) -> Result<Self> {
        let dim = check_hypotheses(group, ring)?;
        Ok(BoundedEMap { alg: BoundedGroupAlgebra::new(group.clone(), bound, letter_bound), ring: ring.clone(), dim })
    }

    pub fn apply(&self, w: &[Vec<i64>]) -> ExtComb {
        e_word(&self.alg.group, w)
    }

    fn apply_lin(&self, x: &[(Vec<Vec<i64>>, i64)]) -> ExtComb {
        merge(x.iter().flat_map(|(w, c)| self.apply(w).into_iter().map(move |(m, e)| (m, e * int(*c)))))
    }

    /// Chain-map and algebra-map identities on all words of degree `≤ n_top`, and a
    /// search for a word where `e` fails to commute with the coproducts.
    pub fn check(&self, n_top: usize) -> BoundedEReport {
        let ring = &self.ring;
        let ws = words(&self.alg, n_top);
        let mut rep = BoundedEReport::default();
        for w in &ws {
            rep.words_checked += 1;
            match bar_differential(&self.alg, w) {
                Some(d) => {
                    if !vanishes(ring, self.apply_lin(&d)) {
                        rep.chain_failures += 1;
                    }
                }
                None => rep.skipped += 1,
            }
            if rep.coalgebra_witness.is_none() {
                let mut terms: Vec<((Vec<usize>, Vec<usize>), Scalar)> = Vec::new();
                for (m, c) in self.apply(w) {
                    for (a, b, s) in mono_coproduct(FreeKind::Exterior, 1, &m) {
                        if s != 0 {
                            terms.push(((a, b), &c * int(s)));
                        }
                    }
                }
                for (u, v, s) in deconcatenation(&self.alg, w) {
                    for (a, c) in self.apply(&u) {
                        for (b, e) in self.apply(&v) {
                            terms.push(((a.clone(), b), -(&c * e * int(s))));
                        }
                    }
                }
                if !vanishes(ring, terms) {
                    rep.coalgebra_witness = Some(word_label(w));
                }
            }
        }
        for u in &ws {
            for v in &ws {
                if u.len() + v.len() > n_top {
                    continue;
                }
                rep.pairs_checked += 1;
                let lhs = self.apply_lin(&shuffle_product(&self.alg, u, v));
                let rhs = ext_mul(&self.apply(u), &self.apply(v));
                if !vanishes(ring, lhs.into_iter().chain(rhs.into_iter().map(|(m, c)| (m, -c)))) {
                    rep.algebra_failures += 1;
                }
            }
        }
        rep
    }

    /// Words `w` with `e(φ_* w) ≠ Λ(φ⊗k)(e(w))`, over the words of degree `≤ n_top`.
    pub fn naturality_failures(&self, phi: &GroupHom, n_top: usize) -> Result<usize> {
        if phi.source != self.alg.group {
            return Err(Error::Shape("homomorphism does not start at the group".into()));
        }
        check_hypotheses(&phi.target, &self.ring)?;
        let zero = phi.target.zero();
        let mut bad = 0;
        for w in words(&self.alg, n_top) {
            let image: Vec<Vec<i64>> = w.iter().map(|g| phi.apply(g)).collect();
            // a unit letter kills the normalized word
            let left = if image.contains(&zero) { Vec::new() } else { e_word(&phi.target, &image) };
            let right = exterior_apply(phi, &self.apply(&w));
            if !vanishes(&self.ring, left.into_iter().chain(right.into_iter().map(|(m, c)| (m, -c)))) {
                bad += 1;
            }
        }
        Ok(bad)
    }
}

/// Exactness of `C_2 → C_1 → G⊗k → 0` on the words of length one and two inside a box,
/// where the last map is `e` on single letters.
#[derive(Clone, Debug, Serialize)]
pub struct PresentationCheck {
    pub bound: i64,
    #[serde(rename = "lengthOneWords")]
    pub c1: usize,
    #[serde(rename = "lengthTwoWords")]
    pub c2: usize,
    /// `e` is onto `G⊗k`.
    pub surjective: bool,
    /// `ker e = im d` on length-one words.
    #[serde(rename = "kernelIsImage")]
    pub kernel_is_image: bool,
}

impl PresentationCheck {
    pub fn exact(&self) -> bool {
        self.surjective && self.kernel_is_image
    }
}

pub fn presentation_check(group: &FGAbGroup, ring: &CoefficientRing, bound: i64) -> Result<PresentationCheck> {
    check_hypotheses(group, ring)?;
    let r = group.free_rank;
    let zero = group.zero();
    let letters: Vec<Vec<i64>> = group.box_elements(bound).into_iter().filter(|g| *g != zero).collect();
    let index: BTreeMap<&Vec<i64>, usize> = letters.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut e1 = SparseMatrix::zeros(r, letters.len());
    for (j, g) in letters.iter().enumerate() {
        for i in 0..r {
            if g[i] != 0 {
                e1.set(i, j, ring.normalize(&int(g[i])));
            }
        }
    }
    let mut pairs = Vec::new();
    for g in &letters {
        for h in &letters {
            let s = group.add(g, h);
            if group.in_box(&s, bound) {
                pairs.push((g, h, s));
            }
        }
    }
    let mut d2 = SparseMatrix::zeros(letters.len(), pairs.len());
    for (k, (g, h, s)) in pairs.iter().enumerate() {
        d2.add_to(index[h], k, &int(1));
        d2.add_to(index[g], k, &int(1));
        if *s != zero {
            d2.add_to(index[s], k, &int(-1));
        }
    }
    let d2 = d2.normalized(ring);
    let c = ChainComplex::new(
        ring.clone(),
        vec![labels("x", r), labels("b", letters.len()), labels("bb", pairs.len())],
        vec![e1, d2],
    )?;
    if !c.verify().is_empty() {
        return Err(Error::NotAComplex("e ∘ d is nonzero on length-two words".into()));
    }
    Ok(PresentationCheck {
        bound,
        c1: letters.len(),
        c2: pairs.len(),
        surjective: c.homology(0)?.is_zero(),
        kernel_is_image: c.homology(1)?.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_letter_value() {
        let z2: FGAbGroup = "Z^2".parse().unwrap();
        let v = e_word(&z2, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(v, vec![(vec![1, 1], crate::exactring::ratio(1, 2))]);
        assert!(e_word(&z2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).is_empty());
    }

    #[test]
    fn finite_groups_are_trivial() {
        let r = e_report(&FGAbGroup::cyclic(3), &CoefficientRing::Rationals, 5).unwrap();
        assert!(r.chain_map_ok && r.algebra_map_ok && r.quasi_iso.is_quasi_iso, "{r:?}");
    }

    #[test]
    fn bounded_plane() {
        let z2: FGAbGroup = "Z^2".parse().unwrap();
        let e = BoundedEMap::new(&z2, &CoefficientRing::Rationals, 3, 1).unwrap();
        let r = e.check(3);
        assert_eq!(r.chain_failures + r.algebra_failures, 0, "{r:?}");
        assert!(r.coalgebra_witness.is_some());
        let swap = GroupHom::new(z2.clone(), z2.clone(), vec![vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(e.naturality_failures(&swap, 3).unwrap(), 0);
    }

    #[test]
    fn presentation_is_exact() {
        let z2: FGAbGroup = "Z^2".parse().unwrap();
        for b in [2, 3] {
            let p = presentation_check(&z2, &CoefficientRing::Rationals, b).unwrap();
            assert!(p.exact(), "{p:?}");
        }
        let mixed: FGAbGroup = "Z x Z/2".parse().unwrap();
        let p = presentation_check(&mixed, &CoefficientRing::localized([2]).unwrap(), 2).unwrap();
        assert!(p.exact(), "{p:?}");
    }
}

//! Exhaustive structure checks for a `BasedDGA` on basis pairs within truncation.



use serde::Serialize;

use super::bar::merge_terms;
use super::dga::BasedDGA;
use super::{coeff_is_zero, Coeff};
use crate::exactring::CoefficientRing;

#[derive(Clone, Debug, Default, Serialize)]
pub struct StructureReport {
    /// Degrees where `d² ≠ 0`.
    pub d_squared: Vec<usize>,
    pub commutativity: Vec<(usize, usize)>,
    pub leibniz: Vec<(usize, usize)>,
    pub augmentation: Vec<(usize, usize)>,
    pub coassociativity: Vec<usize>,
    pub counit: Vec<usize>,
    pub coproduct_multiplicative: Vec<(usize, usize)>,
    pub coproduct_chain_map: Vec<usize>,
    pub pairs_checked: usize,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.d_squared.is_empty()
            && self.commutativity.is_empty()
            && self.leibniz.is_empty()
            && self.augmentation.is_empty()
            && self.coassociativity.is_empty()
            && self.counit.is_empty()
            && self.coproduct_multiplicative.is_empty()
            && self.coproduct_chain_map.is_empty()
    }
}

fn sign(odd: bool) -> Coeff {
    if odd {
        -1
    } else {
        1
    }
}

/// For each ring, whether a formal sum of terms fails to vanish there.
fn nonzero_in<K: Ord>(rings: &[CoefficientRing], mut terms: Vec<(K, Coeff)>) -> Vec<bool> {
    merge_terms(&mut terms);
    rings.iter().map(|r| !terms.iter().all(|(_, c)| coeff_is_zero(r, *c))).collect()
}

impl BasedDGA {
    /// Basis pairs `(x, y)` whose product lies in the represented range.
    pub fn basis_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.len() {
            for y in 0..self.len() {
                let (ex, ey) = (&self.elems[x], &self.elems[y]);
                if self.within(ex.degree + ey.degree, ex.weight + ey.weight) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Runs every algebra, augmentation and Hopf identity on all basis elements and pairs.
    pub fn check_structure(&self) -> StructureReport {
        self.check_structure_over(std::slice::from_ref(&self.ring)).remove(0)
    }

    /// The same checks for the base change to each ring in `rings`; the structure
    /// constants are integers, so every term is computed once.
    pub fn check_structure_over(&self, rings: &[CoefficientRing]) -> Vec<StructureReport> {
        let complex = self.to_complex();
        let mut reps: Vec<StructureReport> = rings
            .iter()
            .map(|r| StructureReport {
                d_squared: complex.with_ring(r.clone()).map(|c| c.verify()).unwrap_or_else(|_| (1..=self.n).collect()),
                ..Default::default()
            })
            .collect();
        let pairs = self.basis_pairs();
        for &(x, y) in &pairs {
            let Some([c, l, a, m]) = self.pair_failures(rings, x, y) else { continue };
            for (k, rep) in reps.iter_mut().enumerate() {
                rep.pairs_checked += 1;
                for (flag, list) in [(&c, &mut rep.commutativity), (&l, &mut rep.leibniz), (&a, &mut rep.augmentation), (&m, &mut rep.coproduct_multiplicative)] {
                    if flag[k] {
                        list.push((x, y));
                    }
                }
            }
        }
        for x in 0..self.len() {
            let checks = [self.coassociative_at(rings, x), self.counital_at(rings, x), self.coproduct_chain_at(rings, x)];
            let aug = if self.degree(x) == 1 {
                let e: Coeff = self.differential(x).iter().map(|&(z, c)| c * self.augmentation(z)).sum();
                nonzero_in(rings, vec![((), e)])
            } else {
                vec![false; rings.len()]
            };
            for (k, rep) in reps.iter_mut().enumerate() {
                if checks[0][k] {
                    rep.coassociativity.push(x);
                }
                if checks[1][k] {
                    rep.counit.push(x);
                }
                if checks[2][k] {
                    rep.coproduct_chain_map.push(x);
                }
                if aug[k] {
                    rep.augmentation.push((x, x));
                }
            }
        }
        reps
    }

    /// Failure flags per ring for commutativity, Leibniz, augmentation and Δ-multiplicativity.
    fn pair_failures(&self, rings: &[CoefficientRing], x: usize, y: usize) -> Option<[Vec<bool>; 4]> {
        let (dx, dy) = (self.degree(x), self.degree(y));
        let xy = self.product(x, y)?;

        let s = sign(dx * dy % 2 == 1);
        let mut t = xy.clone();
        t.extend(self.product(y, x)?.into_iter().map(|(z, c)| (z, -c * s)));
        let comm = nonzero_in(rings, t);

        let mut t = self.d_lin(&xy);
        for (z, c) in self.mul_lin(self.differential(x), &[(y, 1)])? {
            t.push((z, -c));
        }
        let sx = sign(dx % 2 == 1);
        for (z, c) in self.mul_lin(&[(x, 1)], self.differential(y))? {
            t.push((z, -c * sx));
        }
        let leib = nonzero_in(rings, t);

        let e_xy: Coeff = xy.iter().map(|&(z, c)| c * self.augmentation(z)).sum();
        let aug = nonzero_in(rings, vec![((), e_xy - self.augmentation(x) * self.augmentation(y))]);

        let mut t = self.coproduct_lin(&xy);
        for &((x1, x2), c) in self.coproduct(x) {
            for &((y1, y2), e) in self.coproduct(y) {
                let s = sign(self.degree(x2) * self.degree(y1) % 2 == 1);
                let a = self.product(x1, y1)?;
                let b = self.product(x2, y2)?;
                for &(u, f) in &a {
                    for &(v, g) in &b {
                        t.push(((u, v), -c * e * s * f * g));
                    }
                }
            }
        }
        let mult = nonzero_in(rings, t);
        Some([comm, leib, aug, mult])
    }

    pub fn coproduct_lin(&self, a: &[(usize, Coeff)]) -> Vec<((usize, usize), Coeff)> {
        let mut out = Vec::new();
        for &(x, c) in a {
            for &(k, e) in self.coproduct(x) {
                out.push((k, c * e));
            }
        }
        out
    }

    fn coassociative_at(&self, rings: &[CoefficientRing], x: usize) -> Vec<bool> {
        let mut t = Vec::new();
        for &((a, b), c) in self.coproduct(x) {
            for &((a1, a2), e) in self.coproduct(a) {
                t.push(((a1, a2, b), c * e));
            }
            for &((b1, b2), e) in self.coproduct(b) {
                t.push(((a, b1, b2), -c * e));
            }
        }
        nonzero_in(rings, t)
    }

    fn counital_at(&self, rings: &[CoefficientRing], x: usize) -> Vec<bool> {
        let mut left = vec![(x, -1)];
        let mut right = vec![(x, -1)];
        for &((a, b), c) in self.coproduct(x) {
            left.push((b, c * self.augmentation(a)));
            right.push((a, c * self.augmentation(b)));
        }
        let (l, r) = (nonzero_in(rings, left), nonzero_in(rings, right));
        l.iter().zip(&r).map(|(a, b)| *a || *b).collect()
    }

    /// `Δ d = (d ⊗ 1 + 1 ⊗ d) Δ` with the Koszul sign on the right factor.
    fn coproduct_chain_at(&self, rings: &[CoefficientRing], x: usize) -> Vec<bool> {
        let mut t = self.coproduct_lin(self.differential(x));
        for &((a, b), c) in self.coproduct(x) {
            for &(z, e) in self.differential(a) {
                t.push(((z, b), -c * e));
            }
            let s = sign(self.degree(a) % 2 == 1);
            for &(z, e) in self.differential(b) {
                t.push(((a, z), -c * s * e));
            }
        }
        nonzero_in(rings, t)
    }
}

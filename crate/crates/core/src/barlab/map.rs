//! Degree-preserving algebra maps between based dg algebras, given on basis elements.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use super::dga::BasedDGA;
use super::group::GroupHom;
use crate::chainkit::ChainMap;
use crate::error::{Error, Result};
use crate::exactring::{int, CoefficientRing, Scalar, SparseMatrix};

pub type ScalarComb = Vec<(usize, Scalar)>;

#[derive(Clone, Debug)]
pub struct AlgebraMap {
    pub name: String,
    pub source: Arc<BasedDGA>,
    pub target: Arc<BasedDGA>,
    /// Image of each source basis element.
    pub images: Vec<ScalarComb>,
}

/// Basis elements (or pairs) where an identity fails, in the common truncation.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MapReport {
    pub top: usize,
    pub chain: Vec<usize>,
    pub algebra: Vec<(usize, usize)>,
    pub unit: bool,
    pub augmentation: Vec<usize>,
    pub coalgebra: Vec<usize>,
    pub pairs_checked: usize,
    /// Pairs whose image product leaves the target truncation.
    pub pairs_skipped: usize,
}

impl MapReport {
    pub fn chain_ok(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn algebra_ok(&self) -> bool {
        self.algebra.is_empty() && self.unit && self.augmentation.is_empty()
    }

    pub fn coalgebra_ok(&self) -> bool {
        self.coalgebra.is_empty()
    }
}

/// Whether a formal sum vanishes in `ring`.
pub fn vanishes<K: Ord>(ring: &CoefficientRing, terms: impl IntoIterator<Item = (K, Scalar)>) -> bool {
    let mut acc: BTreeMap<K, Scalar> = BTreeMap::new();
    for (k, c) in terms {
        *acc.entry(k).or_insert_with(Scalar::zero) += c;
    }
    acc.values().all(|c| ring.is_zero(c))
}

fn merge(terms: impl IntoIterator<Item = (usize, Scalar)>) -> ScalarComb {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (k, c) in terms {
        *acc.entry(k).or_insert_with(Scalar::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl AlgebraMap {
    pub fn new(name: impl Into<String>, source: Arc<BasedDGA>, target: Arc<BasedDGA>, images: Vec<ScalarComb>) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::Shape(format!("rings differ: {} vs {}", source.ring, target.ring)));
        }
        if images.len() != source.len() {
            return Err(Error::Shape(format!("{} images for {} basis elements", images.len(), source.len())));
        }
        for (x, img) in images.iter().enumerate() {
            if let Some((z, _)) = img.iter().find(|(z, _)| *z >= target.len() || target.degree(*z) != source.degree(x)) {
                return Err(Error::Shape(format!("image of {} has a term {z} of the wrong degree", source.label(x))));
            }
        }
        let images = images.into_iter().map(merge).collect();
        Ok(AlgebraMap { name: name.into(), source, target, images })
    }

    pub fn identity(a: &Arc<BasedDGA>) -> Self {
        let images = (0..a.len()).map(|x| vec![(x, Scalar::one())]).collect();
        AlgebraMap { name: "id".into(), source: a.clone(), target: a.clone(), images }
    }

    /// Degrees through which both sides are represented.
    pub fn top(&self) -> usize {
        self.source.n.min(self.target.n)
    }

    pub fn apply(&self, a: &[(usize, Scalar)]) -> ScalarComb {
        merge(a.iter().flat_map(|(x, c)| self.images[*x].iter().map(move |(z, e)| (*z, c * e))))
    }

    fn apply_int(&self, a: &[(usize, i64)]) -> ScalarComb {
        merge(a.iter().flat_map(|&(x, c)| self.images[x].iter().map(move |(z, e)| (*z, e * int(c)))))
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &AlgebraMap) -> Result<AlgebraMap> {
        if !same_algebra(&first.target, &self.source) {
            return Err(Error::Shape(format!("cannot compose {} after {}", self.name, first.name)));
        }
        let images = first.images.iter().map(|img| self.apply(img)).collect();
        Ok(AlgebraMap { name: format!("{}∘{}", self.name, first.name), source: first.source.clone(), target: self.target.clone(), images })
    }

    /// Underlying chain map through the common truncation; entries in the ring's normal form.
    pub fn to_chain_map(&self) -> ChainMap {
        let (s, t) = (&self.source, &self.target);
        let ring = &t.ring;
        let comps = (0..=self.top())
            .map(|d| {
                let mut m = SparseMatrix::zeros(t.dim(d), s.dim(d));
                for x in s.in_degree(d) {
                    for (z, c) in &self.images[x] {
                        m.set(t.local(*z), s.local(x), ring.normalize(c));
                    }
                }
                m
            })
            .collect();
        ChainMap::new(s.to_complex(), t.to_complex(), comps).expect("algebra map shapes")
    }

    /// Chain, algebra, augmentation and coalgebra identities on basis elements and pairs.
    pub fn check(&self) -> MapReport {
        let (s, t) = (&self.source, &self.target);
        let ring = &t.ring;
        let top = self.top();
        let mut rep = MapReport { top, unit: vanishes(ring, self.images[s.unit].iter().cloned().chain([(t.unit, -Scalar::one())])), ..Default::default() };
        let low: Vec<usize> = (0..s.len()).filter(|&x| s.degree(x) <= top).collect();
        for &x in &low {
            let fd = self.apply_int(s.differential(x));
            let df = self.images[x].iter().flat_map(|(z, c)| t.differential(*z).iter().map(move |&(w, e)| (w, -(c * int(e)))));
            if !vanishes(ring, fd.into_iter().chain(df)) {
                rep.chain.push(x);
            }

            let eps = self.images[x].iter().map(|(z, c)| c * int(t.augmentation(*z))).fold(Scalar::zero(), |a, b| a + b);
            if !ring.is_zero(&(eps - int(s.augmentation(x)))) {
                rep.augmentation.push(x);
            }

            let mut terms: Vec<((usize, usize), Scalar)> = Vec::new();
            for (z, c) in &self.images[x] {
                for &(k, e) in t.coproduct(*z) {
                    terms.push((k, c * int(e)));
                }
            }
            for &((a, b), c) in s.coproduct(x) {
                for (u, e) in &self.images[a] {
                    for (v, f) in &self.images[b] {
                        terms.push(((*u, *v), -(int(c) * e * f)));
                    }
                }
            }
            if !vanishes(ring, terms) {
                rep.coalgebra.push(x);
            }
        }
        for &x in &low {
            for &y in &low {
                if s.degree(x) + s.degree(y) > top {
                    continue;
                }
                let Some(xy) = s.product(x, y) else { continue };
                let mut terms = self.apply_int(&xy);
                let mut skipped = false;
                'outer: for (u, c) in &self.images[x] {
                    for (v, e) in &self.images[y] {
                        match t.product(*u, *v) {
                            Some(p) => terms.extend(p.into_iter().map(|(w, f)| (w, -(c * e * int(f))))),
                            None => {
                                skipped = true;
                                break 'outer;
                            }
                        }
                    }
                }
                if skipped {
                    rep.pairs_skipped += 1;
                    continue;
                }
                rep.pairs_checked += 1;
                if !vanishes(ring, terms) {
                    rep.algebra.push((x, y));
                }
            }
        }
        rep
    }

    /// `B̄f` between the given bars of source and target, applied letterwise.
    pub fn bar_of_map(&self, source_bar: Arc<BasedDGA>, target_bar: Arc<BasedDGA>) -> Result<AlgebraMap> {
        let ok_in = source_bar.bar_input().is_some_and(|a| same_algebra(a, &self.source));
        let ok_out = target_bar.bar_input().is_some_and(|a| same_algebra(a, &self.target));
        if !ok_in || !ok_out {
            return Err(Error::Shape(format!("bars do not sit over the source and target of {}", self.name)));
        }
        let (s, t) = (&self.source, &self.target);
        for x in 0..s.len() {
            let eps = self.images[x].iter().map(|(z, c)| c * int(t.augmentation(*z))).fold(Scalar::zero(), |a, b| a + b);
            if !t.ring.is_zero(&(eps - int(s.augmentation(x)))) {
                return Err(Error::Precondition(format!("{} does not preserve the augmentation at {}", self.name, s.label(x))));
            }
        }
        // letter images modulo the unit
        let letters: Vec<ScalarComb> =
            self.images.iter().map(|img| img.iter().filter(|(z, _)| *z != t.unit).cloned().collect()).collect();
        let mut images = Vec::with_capacity(source_bar.len());
        for x in 0..source_bar.len() {
            let w = source_bar.word(x).expect("bar basis");
            let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), Scalar::one())];
            for l in w {
                let mut next = Vec::new();
                for (pw, c) in &partial {
                    for (z, e) in &letters[*l] {
                        let mut v = pw.clone();
                        v.push(*z);
                        next.push((v, c * e));
                    }
                }
                partial = next;
            }
            let mut img = Vec::with_capacity(partial.len());
            for (v, c) in partial {
                let z = target_bar.find_word(&v).ok_or_else(|| {
                    Error::Truncation(format!("image word of {} is outside the target bar", source_bar.label(x)))
                })?;
                img.push((z, c));
            }
            images.push(img);
        }
        AlgebraMap::new(format!("B̄({})", self.name), source_bar, target_bar, images)
    }

    /// `B̄f` with both bars built through degree `n`.
    pub fn bar_map(&self, n: usize) -> Result<AlgebraMap> {
        let sb = Arc::new(BasedDGA::bar(self.source.clone(), n)?);
        let tb = Arc::new(BasedDGA::bar(self.target.clone(), n)?);
        self.bar_of_map(sb, tb)
    }

    /// `k[φ]: k[G] → k[G']` on group algebras.
    pub fn of_group_hom(phi: &GroupHom, source: Arc<BasedDGA>, target: Arc<BasedDGA>) -> Result<AlgebraMap> {
        let mut images = Vec::with_capacity(source.len());
        for x in 0..source.len() {
            let g = source.group_element(x).ok_or_else(|| Error::Shape("source is not a group algebra".into()))?;
            let h = phi.apply(g);
            let z = target.find_group_element(&h).ok_or_else(|| Error::Shape("target is not the group algebra of the codomain".into()))?;
            images.push(vec![(z, Scalar::one())]);
        }
        AlgebraMap::new("k[φ]", source, target, images)
    }

    /// `B̄ⁿk[φ]` between iterated bars through degree `n_top`.
    pub fn iterated_group_map(phi: &GroupHom, ring: &CoefficientRing, n: usize, n_top: usize) -> Result<AlgebraMap> {
        let mut f = Self::of_group_hom(
            phi,
            Arc::new(BasedDGA::group_algebra(&phi.source, ring)?),
            Arc::new(BasedDGA::group_algebra(&phi.target, ring)?),
        )?;
        if n > 0 && n_top < n {
            return Err(Error::Truncation(format!("height {n} needs truncation at least {n}")));
        }
        for k in 1..=n {
            f = f.bar_map(n_top - (n - k))?;
        }
        Ok(f)
    }
}

/// Same algebra: identical allocation, or equal bases over the same ring.
pub fn same_algebra(a: &Arc<BasedDGA>, b: &Arc<BasedDGA>) -> bool {
    Arc::ptr_eq(a, b)
        || (a.ring == b.ring && a.n == b.n && a.len() == b.len() && (0..a.len()).all(|x| a.label(x) == b.label(x) && a.degree(x) == b.degree(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barlab::group::FGAbGroup;
    use crate::exactring::CoefficientRing;

    #[test]
    fn identity_bar_is_identity() {
        let g = FGAbGroup::cyclic(3);
        let q = CoefficientRing::Rationals;
        let a = Arc::new(BasedDGA::group_algebra(&g, &q).unwrap());
        let f = AlgebraMap::identity(&a).bar_map(4).unwrap();
        assert!(f.images.iter().enumerate().all(|(x, img)| img == &vec![(x, Scalar::one())]));
        let r = f.check();
        assert!(r.chain_ok() && r.algebra_ok() && r.coalgebra_ok(), "{r:?}");
    }

    #[test]
    fn group_hom_bars_are_hopf_maps() {
        let z4: FGAbGroup = "Z/4".parse().unwrap();
        let z2: FGAbGroup = "Z/2".parse().unwrap();
        let phi = GroupHom::new(z4, z2, vec![vec![1]]).unwrap();
        for ring in [CoefficientRing::Integers, CoefficientRing::PrimeField(2)] {
            let f = AlgebraMap::iterated_group_map(&phi, &ring, 2, 5).unwrap();
            let r = f.check();
            assert!(r.chain_ok() && r.algebra_ok() && r.coalgebra_ok(), "{ring}: {r:?}");
        }
    }

    #[test]
    fn augmentation_to_ground_ring() {
        // k[G] → k[0] is the augmentation; its bar kills every positive word
        let g = FGAbGroup::cyclic(2);
        let phi = GroupHom::new(g, FGAbGroup::trivial(), vec![]).unwrap();
        let f = AlgebraMap::iterated_group_map(&phi, &CoefficientRing::PrimeField(2), 1, 4).unwrap();
        assert_eq!(f.target.len(), 1);
        assert!(f.images.iter().skip(1).all(|img| img.is_empty()));
    }
}

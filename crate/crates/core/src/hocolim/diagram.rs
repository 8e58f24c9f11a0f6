//! Diagrams of chain complexes indexed by a finite category.

use crate::chainkit::ChainComplex;
use crate::error::{Error, Result};
use crate::exactring::{CoefficientRing, SparseMatrix};
use crate::with_field;
use crate::exactring::field::FieldKind;
use crate::chainkit::map::{field_homology, induced_on};

use super::category::FinCategory;

/// `D: C → complexes`, every complex truncated at the common degree `top`.
/// `maps[m][i]` is the degree-`i` component of `D(m)`; identities are stored too.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub shape: FinCategory,
    pub ring: CoefficientRing,
    pub objects: Vec<ChainComplex>,
    pub maps: Vec<Vec<SparseMatrix>>,
    pub top: usize,
}

/// A functor into finitely generated modules given by dimensions and matrices, as
/// used for category homology.
#[derive(Clone, Debug)]
pub struct ModuleFunctor {
    pub dims: Vec<usize>,
    /// One matrix per morphism, identities included.
    pub maps: Vec<SparseMatrix>,
}

impl Diagram {
    /// `arrow_maps` lists `D(m)` for every non-identity morphism, in morphism order.
    pub fn new(shape: FinCategory, objects: Vec<ChainComplex>, arrow_maps: Vec<Vec<SparseMatrix>>) -> Result<Self> {
        if objects.len() != shape.objects.len() {
            return Err(Error::DiagramInvalid(format!("{} objects but {} complexes", shape.objects.len(), objects.len())));
        }
        let n_obj = shape.objects.len();
        if arrow_maps.len() != shape.num_morphisms() - n_obj {
            return Err(Error::DiagramInvalid("one map per non-identity arrow required".into()));
        }
        let ring = objects[0].ring.clone();
        if objects.iter().any(|c| c.ring != ring) {
            return Err(Error::DiagramInvalid("complexes over different rings".into()));
        }
        let top = objects.iter().map(|c| c.n).min().unwrap_or(0);
        let objects: Vec<ChainComplex> = objects.iter().map(|c| c.truncate(top)).collect();
        let mut maps: Vec<Vec<SparseMatrix>> = objects.iter().map(|c| (0..=top).map(|i| SparseMatrix::identity(c.dim(i))).collect()).collect();
        for (k, comps) in arrow_maps.into_iter().enumerate() {
            let m = n_obj + k;
            let (s, t) = (&objects[shape.src[m]], &objects[shape.dst[m]]);
            if comps.len() <= top {
                return Err(Error::DiagramInvalid(format!("{} needs components through degree {top}", shape.names[m])));
            }
            for (i, c) in comps.iter().enumerate().take(top + 1) {
                if c.rows != t.dim(i) || c.cols != s.dim(i) {
                    return Err(Error::DiagramInvalid(format!("{} has a wrongly shaped component in degree {i}", shape.names[m])));
                }
            }
            maps.push(comps.into_iter().take(top + 1).map(|c| c.normalized(&ring)).collect());
        }
        let d = Diagram { shape, ring, objects, maps, top };
        d.verify()?;
        Ok(d)
    }

    /// Chain-map conditions and `D(g∘f) = D(g) D(f)` on every composable pair.
    pub fn verify(&self) -> Result<()> {
        let c = &self.shape;
        for m in 0..c.num_morphisms() {
            let (s, t) = (&self.objects[c.src[m]], &self.objects[c.dst[m]]);
            for i in 1..=self.top {
                let lhs = t.d[i].mul(&self.maps[m][i])?;
                let rhs = self.maps[m][i - 1].mul(&s.d[i])?;
                if !lhs.sub(&rhs)?.is_zero_in(&self.ring) {
                    return Err(Error::DiagramInvalid(format!("{} is not a chain map in degree {i}", c.names[m])));
                }
            }
        }
        for f in 0..c.num_morphisms() {
            for g in 0..c.num_morphisms() {
                let Some(h) = c.compose(f, g) else { continue };
                for i in 0..=self.top {
                    let gf = self.maps[g][i].mul(&self.maps[f][i])?;
                    if !gf.sub(&self.maps[h][i])?.is_zero_in(&self.ring) {
                        return Err(Error::DiagramInvalid(format!("D({}) ≠ D({}) D({}) in degree {i}", c.names[h], c.names[g], c.names[f])));
                    }
                }
            }
        }
        Ok(())
    }

    /// The degree-`q` chain groups as a functor.
    pub fn degree(&self, q: usize) -> ModuleFunctor {
        ModuleFunctor { dims: self.objects.iter().map(|c| c.dim(q)).collect(), maps: self.maps.iter().map(|m| m[q].clone()).collect() }
    }

    /// `H_q(D)` over a field, in witness bases; needs `q < top`.
    pub fn homology_functor(&self, q: usize) -> Result<ModuleFunctor> {
        let kind = FieldKind::of(&self.ring)?;
        with_field!(kind, f => {
            let hs = self.objects.iter().map(|c| field_homology(&f, c, q)).collect::<Result<Vec<_>>>()?;
            let mut maps = Vec::with_capacity(self.maps.len());
            for (m, comps) in self.maps.iter().enumerate() {
                maps.push(induced_on(&f, &hs[self.shape.src[m]], &hs[self.shape.dst[m]], &comps[q])?);
            }
            Ok(ModuleFunctor { dims: hs.iter().map(|h| h.dim()).collect(), maps })
        })
    }
}

impl ModuleFunctor {
    pub fn constant(shape: &FinCategory, dim: usize) -> Self {
        ModuleFunctor { dims: vec![dim; shape.objects.len()], maps: vec![SparseMatrix::identity(dim); shape.num_morphisms()] }
    }

    pub fn verify(&self, shape: &FinCategory, ring: &CoefficientRing) -> Result<()> {
        if self.dims.len() != shape.objects.len() || self.maps.len() != shape.num_morphisms() {
            return Err(Error::DiagramInvalid("functor does not match its shape".into()));
        }
        for m in 0..shape.num_morphisms() {
            let a = &self.maps[m];
            if a.rows != self.dims[shape.dst[m]] || a.cols != self.dims[shape.src[m]] {
                return Err(Error::DiagramInvalid(format!("{} has the wrong shape", shape.names[m])));
            }
            if shape.is_identity(m) && !a.sub(&SparseMatrix::identity(a.rows))?.is_zero_in(ring) {
                return Err(Error::DiagramInvalid(format!("{} is not sent to an identity", shape.names[m])));
            }
        }
        for f in 0..shape.num_morphisms() {
            for g in 0..shape.num_morphisms() {
                if let Some(h) = shape.compose(f, g) {
                    if !self.maps[g].mul(&self.maps[f])?.sub(&self.maps[h])?.is_zero_in(ring) {
                        return Err(Error::DiagramInvalid(format!("F({}) ≠ F({}) F({})", shape.names[h], shape.names[g], shape.names[f])));
                    }
                }
            }
        }
        Ok(())
    }
}

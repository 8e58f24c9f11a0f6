//! Homology functors `a ↦ H_j(B̄ⁿ F_p[(Z/q)^a])` and the bar columns `a ↦ B̄ⁿ_s`.

use std::sync::Arc;

use super::functor::{FunctorRep, Mat, Vector};
use super::hom::NatTrans;
use super::site::Site;
use crate::barlab::dga::BasedDGA;
use crate::barlab::group::{FGAbGroup, GroupHom};
use crate::barlab::map::AlgebraMap;
use crate::error::{Error, Result};
use crate::exactring::echelon::{collect_vec, FieldHomology};
use crate::exactring::field::{Field, PrimeField};
use crate::exactring::CoefficientRing;

pub const BUDGET_VAR: &str = "EMLKIT_BUDGET";
pub const DEFAULT_BUDGET: usize = 2000;

/// Largest value dimension allowed per object and degree.
pub fn budget() -> usize {
    std::env::var(BUDGET_VAR).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

fn group(site: &Site, a: usize) -> FGAbGroup {
    FGAbGroup { free_rank: 0, torsion: vec![site.q; a] }
}

/// The iterated bars of every object with letterwise maps for every listed morphism.
pub struct BarFamily {
    pub site: Arc<Site>,
    pub p: u64,
    pub n: usize,
    pub n_top: usize,
    bars: Vec<Arc<BasedDGA>>,
    /// `d[a][i]`: the differential out of degree `i` at object `a`.
    d: Vec<Vec<Mat>>,
    /// `maps[m][i]`: the chain map of morphism `m` in degree `i`.
    maps: Vec<Vec<Mat>>,
}

impl BarFamily {
    pub fn new(site: &Arc<Site>, p: u64, n: usize, n_top: usize) -> Result<Self> {
        if !site.q.is_multiple_of(p) {
            return Err(Error::Precondition(format!("p = {p} does not divide q = {}", site.q)));
        }
        if n == 0 || n_top < n {
            return Err(Error::Precondition(format!("need 1 ≤ n ≤ N, got n = {n}, N = {n_top}")));
        }
        let f = PrimeField::new(p);
        let ring = CoefficientRing::PrimeField(p);
        let limit = budget();
        let mut towers = Vec::new();
        for a in 0..=site.r {
            let g = group(site, a);
            let mut stage = vec![Arc::new(BasedDGA::group_algebra(&g, &ring)?)];
            for k in 1..=n {
                let b = BasedDGA::bar(stage[k - 1].clone(), n_top - (n - k))?;
                if let Some(d) = (0..=b.n).find(|d| b.dim(*d) > limit) {
                    return Err(Error::Budget(format!("B̄^{k} at object {a} has dimension {} in degree {d}, over the budget {limit}", b.dim(d))));
                }
                stage.push(Arc::new(b));
            }
            towers.push(stage);
        }
        let bars: Vec<Arc<BasedDGA>> = towers.iter().map(|t| t[n].clone()).collect();
        let d = bars
            .iter()
            .map(|b| {
                let c = b.to_complex();
                c.d.iter().map(|m| Mat::from_columns(m.rows, m.columns().iter().map(|col| to_field(&f, col)).collect())).collect()
            })
            .collect();
        let mut maps = Vec::with_capacity(site.len());
        for m in &site.morphisms {
            let phi = GroupHom::new(group(site, m.src), group(site, m.dst), m.rows())?;
            let mut am = AlgebraMap::of_group_hom(&phi, towers[m.src][0].clone(), towers[m.dst][0].clone())?;
            for k in 1..=n {
                am = am.bar_of_map(towers[m.src][k].clone(), towers[m.dst][k].clone())?;
            }
            maps.push(components(&f, &am));
        }
        Ok(BarFamily { site: site.clone(), p, n, n_top, bars, d, maps })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p)
    }

    /// `a ↦ B̄ⁿ_s`, the degree-`s` chains as a functor.
    pub fn column(&self, s: usize) -> Result<FunctorRep> {
        if s > self.n_top {
            return Err(Error::Truncation(format!("column {s} lies beyond N = {}", self.n_top)));
        }
        let dims = self.bars.iter().map(|b| b.dim(s)).collect();
        Ok(FunctorRep {
            name: format!("B̄^{}_{s}", self.n),
            site: self.site.clone(),
            p: self.p,
            variance: super::functor::Variance::Co,
            dims,
            action: self.maps.iter().map(|m| m[s].clone()).collect(),
        })
    }

    fn field_homology(&self, a: usize, j: usize) -> FieldHomology<PrimeField> {
        let f = self.field();
        FieldHomology::new(&f, &self.d[a][j].columns, &self.d[a][j + 1].columns)
    }

    /// `H_j(n, F_p)` with action in witness bases.
    pub fn homology(&self, j: usize) -> Result<FunctorRep> {
        Ok(self.homology_with_witnesses(j)?.0)
    }

    fn homology_with_witnesses(&self, j: usize) -> Result<(FunctorRep, Vec<FieldHomology<PrimeField>>)> {
        if j + 1 > self.n_top {
            return Err(Error::Truncation(format!("H_{j} needs the bar through degree {}", j + 1)));
        }
        let f = self.field();
        let hs: Vec<_> = (0..=self.site.r).map(|a| self.field_homology(a, j)).collect();
        let mut action = Vec::with_capacity(self.site.len());
        for (k, m) in self.site.morphisms.iter().enumerate() {
            let cols = hs[m.src]
                .witnesses
                .iter()
                .map(|w| hs[m.dst].coordinates(&self.maps[k][j].apply(&f, w)).ok_or_else(|| Error::NotAComplex("image of a cycle is not a cycle".into())))
                .collect::<Result<Vec<_>>>()?;
            action.push(Mat::from_columns(hs[m.dst].dim(), cols));
        }
        let rep = FunctorRep {
            name: format!("H_{j}({},F_{})", self.n, self.p),
            site: self.site.clone(),
            p: self.p,
            variance: super::functor::Variance::Co,
            dims: hs.iter().map(|h| h.dim()).collect(),
            action,
        };
        Ok((rep, hs))
    }

    /// The group element underlying a degree-`n` basis element `[[…[g]…]]`.
    fn nested_letter(&self, a: usize, x: usize) -> Option<Vec<i64>> {
        let mut alg = self.bars[a].clone();
        let mut x = x;
        loop {
            if let Some(g) = alg.group_element(x) {
                return Some(g.to_vec());
            }
            let w = alg.word(x)?;
            if w.len() != 1 {
                return None;
            }
            x = w[0];
            let next = alg.bar_input()?.clone();
            alg = next;
        }
    }

    /// `H_n → A` induced by `[[…[g]…]] ↦ g ⊗ 1`.
    pub fn degree_n_projection(&self) -> Result<(FunctorRep, NatTrans)> {
        let f = self.field();
        let (h, hs) = self.homology_with_witnesses(self.n)?;
        let mut eta = Vec::with_capacity(self.site.r + 1);
        for a in 0..=self.site.r {
            let start = self.bars[a].in_degree(self.n).start;
            let chain: Vec<Vector> = (0..self.bars[a].dim(self.n))
                .map(|i| {
                    let g = self.nested_letter(a, start + i).unwrap_or_default();
                    collect_vec(&f, g.iter().enumerate().map(|(k, c)| (k, (*c as u64) % self.p)))
                })
                .collect();
            let chain = Mat::from_columns(a, chain);
            eta.push(Mat::from_columns(a, hs[a].witnesses.iter().map(|w| chain.apply(&f, w)).collect()));
        }
        Ok((h, eta))
    }
}

fn to_field(f: &PrimeField, col: &[(usize, crate::exactring::Scalar)]) -> Vector {
    collect_vec(f, col.iter().map(|(i, v)| (*i, f.from_scalar(v))))
}

fn components(f: &PrimeField, am: &AlgebraMap) -> Vec<Mat> {
    let (s, t) = (&am.source, &am.target);
    (0..=s.n.min(t.n))
        .map(|d| {
            let cols = s
                .in_degree(d)
                .map(|x| collect_vec(f, am.images[x].iter().map(|(z, c)| (t.local(*z), f.from_scalar(c)))))
                .collect();
            Mat::from_columns(t.dim(d), cols)
        })
        .collect()
}

/// `H_j(n, F_p)` on the site, bars built through degree `n_top`.
pub fn homology_functor(site: &Arc<Site>, p: u64, n: usize, j: usize, n_top: usize) -> Result<FunctorRep> {
    BarFamily::new(site, p, n, n_top)?.homology(j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functorext::hom::{hom_space, is_natural};

    #[test]
    fn low_degree_homology() {
        let s = Arc::new(Site::new(2, 2).unwrap());
        let fam = BarFamily::new(&s, 2, 1, 5).unwrap();
        let a = FunctorRep::additive(&s, 2).unwrap();
        let h0 = fam.homology(0).unwrap();
        assert_eq!(h0.dims, vec![1, 1, 1]);
        let h1 = fam.homology(1).unwrap();
        h1.verify().unwrap();
        assert_eq!(h1.dims, a.dims);
        let h4 = fam.homology(4).unwrap();
        assert_eq!(h4.dims[1], 1);
        h4.verify().unwrap();
        let (h, eta) = fam.degree_n_projection().unwrap();
        assert!(is_natural(&h, &a, &eta));
        assert_eq!(eta[2].rank(&fam.field()), 2);
        assert_eq!(hom_space(&h4, &a).unwrap().len(), 1);
        let col = fam.column(2).unwrap();
        col.verify().unwrap();
        assert_eq!(col.dims, vec![0, 1, 9]);
    }
}

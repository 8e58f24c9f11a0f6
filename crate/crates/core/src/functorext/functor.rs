//! Functors from the truncated site to `F_p`-vector spaces.

use std::sync::Arc;

use super::site::{Morph, Site};
use crate::error::{Error, Result};
use crate::exactring::echelon::{axpy, collect_vec, kernel_of, rank_of, FVec, Solver};
use crate::exactring::field::{Field, PrimeField};
use crate::exactring::ring::is_prime;

pub type Vector = FVec<u64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Co,
    Contra,
}

impl Variance {
    pub fn flip(self) -> Self {
        match self {
            Variance::Co => Variance::Contra,
            Variance::Contra => Variance::Co,
        }
    }

    /// Object whose value the action of `m` reads from, and the one it writes to.
    pub fn ends(self, m: &Morph) -> (usize, usize) {
        match self {
            Variance::Co => (m.src, m.dst),
            Variance::Contra => (m.dst, m.src),
        }
    }
}

/// Matrix over `F_p` stored by sparse columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vector>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Mat { rows: n, cols: n, columns: (0..n).map(|i| vec![(i, 1)]).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vector>) -> Self {
        Mat { rows, cols: columns.len(), columns }
    }

    /// From dense rows with entries reduced mod `p`.
    pub fn from_dense(f: &PrimeField, rows: usize, cols: usize, entry: impl Fn(usize, usize) -> u64) -> Self {
        let columns = (0..cols).map(|j| (0..rows).map(|i| (i, entry(i, j) % f.p)).filter(|(_, v)| *v != 0).collect()).collect();
        Mat { rows, cols, columns }
    }

    pub fn apply(&self, f: &PrimeField, v: &[(usize, u64)]) -> Vector {
        let mut acc = Vec::new();
        for (j, c) in v {
            acc = axpy(f, &acc, c, &self.columns[*j]);
        }
        acc
    }

    /// `self ∘ other`.
    pub fn mul(&self, f: &PrimeField, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        Mat { rows: self.rows, cols: other.cols, columns: other.columns.iter().map(|c| self.apply(f, c)).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let mut cols: Vec<Vector> = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, v) in c {
                cols[*i].push((j, *v));
            }
        }
        Mat { rows: self.cols, cols: self.rows, columns: cols }
    }

    pub fn kron(&self, f: &PrimeField, other: &Mat) -> Mat {
        let mut columns = Vec::with_capacity(self.cols * other.cols);
        for a in &self.columns {
            for b in &other.columns {
                let entries = a.iter().flat_map(|(i, x)| b.iter().map(move |(k, y)| (i * other.rows + k, f.mul(x, y))));
                columns.push(collect_vec(f, entries));
            }
        }
        Mat { rows: self.rows * other.rows, cols: self.cols * other.cols, columns }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn rank(&self, f: &PrimeField) -> usize {
        rank_of(f, self.columns.iter().cloned())
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.columns[j].iter().find(|(k, _)| *k == i).map_or(0, |e| e.1)
    }
}

/// Sequence index of a `b × a` matrix over `Z/q` among all of them, first entry slowest.
pub fn matrix_code(m: &Morph, q: u64) -> usize {
    m.entries.iter().fold(0usize, |acc, e| acc * q as usize + *e as usize)
}

/// All `b × a` matrices over `Z/q` in code order.
pub fn matrices(q: u64, a: usize, b: usize) -> impl Iterator<Item = Morph> {
    let len = a * b;
    (0..(q as usize).pow(len as u32)).map(move |mut code| {
        let mut entries = vec![0; len];
        for k in (0..len).rev() {
            entries[k] = (code % q as usize) as u64;
            code /= q as usize;
        }
        Morph { src: a, dst: b, entries }
    })
}

/// A functor `⟨Z/q⟩_{≤r} → F_p`-modules with one action matrix per listed site morphism.
#[derive(Clone, Debug)]
pub struct FunctorRep {
    pub name: String,
    pub site: Arc<Site>,
    pub p: u64,
    pub variance: Variance,
    pub dims: Vec<usize>,
    pub action: Vec<Mat>,
}

impl FunctorRep {
    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p)
    }

    pub fn from_fn(name: impl Into<String>, site: &Arc<Site>, p: u64, dims: Vec<usize>, act: impl Fn(&Morph) -> Mat) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not prime")));
        }
        let action = site.morphisms.iter().map(act).collect();
        Ok(FunctorRep { name: name.into(), site: site.clone(), p, variance: Variance::Co, dims, action })
    }

    /// `P^X: a ↦ F_p[Hom(X, a)]`, acting by postcomposition.
    pub fn representable(site: &Arc<Site>, p: u64, x: usize) -> Result<Self> {
        if x > site.r {
            return Err(Error::Precondition(format!("object {x} exceeds the rank bound {}", site.r)));
        }
        let q = site.q;
        let dims = (0..=site.r).map(|a| (q as usize).pow((x * a) as u32)).collect();
        Self::from_fn(format!("P^{x}"), site, p, dims, |m| {
            let cols = matrices(q, x, m.src).map(|g| vec![(matrix_code(&m.after(&g, q), q), 1)]).collect();
            Mat::from_columns((q as usize).pow((x * m.dst) as u32), cols)
        })
    }

    pub fn constant(site: &Arc<Site>, p: u64, dim: usize) -> Result<Self> {
        Self::from_fn(format!("k^{dim}"), site, p, vec![dim; site.r + 1], |_| Mat::identity(dim))
    }

    /// `A(a) = (Z/q)^a ⊗ F_p = F_p^a` for `p | q`, matrices reduced mod `p`.
    pub fn additive(site: &Arc<Site>, p: u64) -> Result<Self> {
        if !site.q.is_multiple_of(p) {
            return Err(Error::Precondition(format!("p = {p} does not divide q = {}", site.q)));
        }
        let f = PrimeField::new(p);
        Self::from_fn("A", site, p, (0..=site.r).collect(), |m| Mat::from_dense(&f, m.dst, m.src, |i, j| m.get(i, j)))
    }

    /// `F̄(a) = ker(F(a) → F(0))`.
    pub fn reduced_part(&self) -> Result<Self> {
        if self.variance == Variance::Contra {
            return Err(Error::Precondition("reduced part of a contravariant functor".into()));
        }
        let f = self.field();
        let to_zero: Vec<usize> = (0..=self.site.r)
            .map(|a| self.site.find(&Morph { src: a, dst: 0, entries: vec![] }).ok_or_else(|| Error::Shape("zero maps must be listed".into())))
            .collect::<Result<_>>()?;
        let bases: Vec<Vec<Vector>> = to_zero.iter().map(|m| kernel_of(&f, &self.action[*m].columns)).collect();
        let solvers: Vec<Solver<PrimeField>> = bases.iter().map(|b| Solver::new(&f, b)).collect();
        let mut action = Vec::with_capacity(self.action.len());
        for (k, m) in self.site.morphisms.iter().enumerate() {
            let cols = bases[m.src]
                .iter()
                .map(|v| {
                    let img = self.action[k].apply(&f, v);
                    solvers[m.dst].solve(&img).ok_or_else(|| Error::NotAComplex("reduced part is not preserved".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            action.push(Mat::from_columns(bases[m.dst].len(), cols));
        }
        Ok(FunctorRep { name: format!("{}̄", self.name), site: self.site.clone(), p: self.p, variance: self.variance, dims: bases.iter().map(|b| b.len()).collect(), action })
    }

    /// Objectwise tensor product, Kronecker products on morphisms.
    pub fn tensor(&self, other: &FunctorRep) -> Result<Self> {
        if !Arc::ptr_eq(&self.site, &other.site) || self.p != other.p || self.variance != other.variance {
            return Err(Error::Shape("tensor factors live on different sites".into()));
        }
        let f = self.field();
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a * b).collect();
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.kron(&f, b)).collect();
        Ok(FunctorRep { name: format!("{}⊗{}", self.name, other.name), site: self.site.clone(), p: self.p, variance: self.variance, dims, action })
    }

    pub fn tensor_power(&self, k: usize) -> Result<Self> {
        let mut out = Self::constant(&self.site, self.p, 1)?;
        for _ in 0..k {
            out = out.tensor(self)?;
        }
        out.name = format!("{}^⊗{k}", self.name);
        Ok(out)
    }

    pub fn direct_sum(&self, other: &FunctorRep) -> Result<Self> {
        if !Arc::ptr_eq(&self.site, &other.site) || self.p != other.p || self.variance != other.variance {
            return Err(Error::Shape("summands live on different sites".into()));
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut cols = a.columns.clone();
                cols.extend(b.columns.iter().map(|c| c.iter().map(|(i, v)| (i + a.rows, *v)).collect()));
                Mat::from_columns(a.rows + b.rows, cols)
            })
            .collect();
        Ok(FunctorRep { name: format!("{}⊕{}", self.name, other.name), site: self.site.clone(), p: self.p, variance: self.variance, dims, action })
    }

    /// Objectwise linear dual, of opposite variance.
    pub fn dual(&self) -> Self {
        FunctorRep {
            name: format!("{}^∨", self.name),
            site: self.site.clone(),
            p: self.p,
            variance: self.variance.flip(),
            dims: self.dims.clone(),
            action: self.action.iter().map(Mat::transpose).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|d| *d == 0)
    }

    /// Identities act trivially and `F(g∘f) = F(g)F(f)` on every listed composable pair.
    pub fn verify(&self) -> Result<()> {
        let f = self.field();
        let s = &self.site;
        for (k, m) in s.morphisms.iter().enumerate() {
            let a = &self.action[k];
            let (from, to) = self.variance.ends(m);
            if a.rows != self.dims[to] || a.cols != self.dims[from] {
                return Err(Error::DiagramInvalid(format!("{} has a wrongly shaped action", self.name)));
            }
        }
        for a in 0..=s.r {
            if self.action[s.identity(a)] != Mat::identity(self.dims[a]) {
                return Err(Error::DiagramInvalid(format!("{} moves the identity of {a}", self.name)));
            }
        }
        for i in 0..s.len() {
            for j in 0..s.len() {
                let Some(k) = s.compose(i, j) else { continue };
                let prod = match self.variance {
                    Variance::Co => self.action[j].mul(&f, &self.action[i]),
                    Variance::Contra => self.action[i].mul(&f, &self.action[j]),
                };
                if prod != self.action[k] {
                    return Err(Error::DiagramInvalid(format!("{} does not respect a composite", self.name)));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn site() -> Arc<Site> {
        Arc::new(Site::new(2, 2).unwrap())
    }

    #[test]
    fn representable_dims() {
        let s = site();
        let p1 = FunctorRep::representable(&s, 2, 1).unwrap();
        assert_eq!(p1.dims, vec![1, 2, 4]);
        p1.verify().unwrap();
        let p0 = FunctorRep::representable(&s, 2, 0).unwrap();
        assert_eq!(p0.dims, vec![1, 1, 1]);
        let bar = p1.reduced_part().unwrap();
        assert_eq!(bar.dims, vec![0, 1, 3]);
        bar.verify().unwrap();
        let sq = bar.tensor(&bar).unwrap();
        assert_eq!(sq.dims, vec![0, 1, 9]);
        sq.verify().unwrap();
        assert!(FunctorRep::constant(&s, 2, 1).unwrap().reduced_part().unwrap().is_zero());
        let sum = bar.direct_sum(&FunctorRep::constant(&s, 2, 1).unwrap()).unwrap();
        assert_eq!(sum.dims, p1.dims);
        let d = sq.dual();
        d.verify().unwrap();
        assert_eq!(d.dual().action, sq.action);
    }

    #[test]
    fn additive_functor() {
        let s = site();
        let a = FunctorRep::additive(&s, 2).unwrap();
        assert_eq!(a.dims, vec![0, 1, 2]);
        a.verify().unwrap();
        let one = s.find(&Morph { src: 1, dst: 1, entries: vec![1] }).unwrap();
        assert_eq!(a.action[one], Mat::identity(1));
        let s4 = Arc::new(Site::new(4, 1).unwrap());
        let a4 = FunctorRep::additive(&s4, 2).unwrap();
        let two = s4.find(&Morph { src: 1, dst: 1, entries: vec![2] }).unwrap();
        assert!(a4.action[two].is_zero());
        assert!(FunctorRep::additive(&s, 3).is_err());
    }
}

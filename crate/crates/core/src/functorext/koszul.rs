//! Divided and exterior powers of the additive functor, the Koszul complex
//! `Γ^{p-i} ⊗ Λ^i`, and the Verschiebung `Γ^p → A`.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use num_integer::binomial;

use super::functor::{FunctorRep, Mat, Vector};
use super::hom::{is_natural, NatTrans};
use super::site::{Morph, Site};
use crate::error::{Error, Result};
use crate::exactring::echelon::collect_vec;
use crate::exactring::field::{Field, PrimeField};

/// Multi-indices of length `a` and weight `m`, lexicographic.
pub fn multi_indices(a: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(a: usize, m: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == a {
            prefix.push(m);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=m).rev() {
            prefix.push(k);
            go(a, m - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if a == 0 {
        if m == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(a, m, &mut Vec::new(), &mut out);
    out
}

pub fn subsets(a: usize, i: usize) -> Vec<Vec<usize>> {
    (0..a).combinations(i).collect()
}

type Poly = BTreeMap<Vec<usize>, u64>;

fn gamma_of_sum(f: &PrimeField, coeffs: &[u64], k: usize) -> Poly {
    multi_indices(coeffs.len(), k)
        .into_iter()
        .map(|alpha| {
            let c = alpha.iter().zip(coeffs).fold(1, |acc, (e, c)| (0..*e).fold(acc, |x, _| f.mul(&x, c)));
            (alpha, c)
        })
        .filter(|(_, c)| *c != 0)
        .collect()
}

fn gamma_product(f: &PrimeField, x: &Poly, y: &Poly) -> Poly {
    let mut out = Poly::new();
    for (a, u) in x {
        for (b, v) in y {
            let mut c = f.mul(u, v);
            let s: Vec<usize> = a.iter().zip(b).map(|(i, j)| i + j).collect();
            for (i, j) in a.iter().zip(b) {
                c = f.mul(&c, &(binomial((i + j) as u64, *i as u64) % f.p));
            }
            if c != 0 {
                let e = out.entry(s).or_insert(0);
                *e = f.add(e, &c);
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn column(m: &Morph, j: usize, p: u64) -> Vec<u64> {
    (0..m.dst).map(|i| m.get(i, j) % p).collect()
}

/// `Γ^m(M)` on the basis `γ_e`.
fn divided_power_matrix(f: &PrimeField, mor: &Morph, m: usize) -> Mat {
    let target: BTreeMap<Vec<usize>, usize> = multi_indices(mor.dst, m).into_iter().enumerate().map(|(i, e)| (e, i)).collect();
    let cols = multi_indices(mor.src, m)
        .into_iter()
        .map(|e| {
            let mut acc: Poly = [(vec![0; mor.dst], 1)].into_iter().collect();
            for (j, k) in e.iter().enumerate() {
                acc = gamma_product(f, &acc, &gamma_of_sum(f, &column(mor, j, f.p), *k));
            }
            collect_vec(f, acc.into_iter().map(|(e, c)| (target[&e], c)))
        })
        .collect();
    Mat::from_columns(target.len(), cols)
}

/// `Λ^i(M)` on the basis `x_S`, `S` increasing.
fn exterior_power_matrix(f: &PrimeField, mor: &Morph, i: usize) -> Mat {
    let target: BTreeMap<Vec<usize>, usize> = subsets(mor.dst, i).into_iter().enumerate().map(|(k, s)| (s, k)).collect();
    let cols = subsets(mor.src, i)
        .into_iter()
        .map(|s| {
            let mut acc: BTreeMap<Vec<usize>, u64> = [(Vec::new(), 1)].into_iter().collect();
            for &j in &s {
                let col = column(mor, j, f.p);
                let mut next = BTreeMap::new();
                for (t, c) in &acc {
                    for (r, x) in col.iter().enumerate() {
                        if *x == 0 || t.contains(&r) {
                            continue;
                        }
                        let mut v = f.mul(c, x);
                        if t.iter().filter(|u| **u > r).count() % 2 == 1 {
                            v = f.neg(&v);
                        }
                        let mut u = t.clone();
                        u.push(r);
                        u.sort_unstable();
                        let e = next.entry(u).or_insert(0);
                        *e = f.add(e, &v);
                    }
                }
                acc = next;
            }
            collect_vec(f, acc.into_iter().filter(|(_, c)| *c != 0).map(|(t, c)| (target[&t], c)))
        })
        .collect();
    Mat::from_columns(target.len(), cols)
}

fn over_field(site: &Arc<Site>, p: u64) -> Result<PrimeField> {
    if !site.q.is_multiple_of(p) {
        return Err(Error::Precondition(format!("p = {p} does not divide q = {}", site.q)));
    }
    Ok(PrimeField::new(p))
}

pub fn divided_power(site: &Arc<Site>, p: u64, m: usize) -> Result<FunctorRep> {
    let f = over_field(site, p)?;
    let dims = (0..=site.r).map(|a| multi_indices(a, m).len()).collect();
    FunctorRep::from_fn(format!("Γ^{m}"), site, p, dims, |mor| divided_power_matrix(&f, mor, m))
}

pub fn exterior_power(site: &Arc<Site>, p: u64, i: usize) -> Result<FunctorRep> {
    let f = over_field(site, p)?;
    let dims = (0..=site.r).map(|a| subsets(a, i).len()).collect();
    FunctorRep::from_fn(format!("Λ^{i}"), site, p, dims, |mor| exterior_power_matrix(&f, mor, i))
}

/// `K^0 → K^1 → … → K^p` with `K^i = Γ^{p-i} ⊗ Λ^i`.
pub struct KoszulComplex {
    pub p: u64,
    pub terms: Vec<FunctorRep>,
    pub differentials: Vec<NatTrans>,
}

fn koszul_differential(f: &PrimeField, a: usize, n: usize, i: usize) -> Mat {
    let lam_src = subsets(a, i);
    let gam_tgt: BTreeMap<Vec<usize>, usize> = multi_indices(a, n - i - 1).into_iter().enumerate().map(|(k, e)| (e, k)).collect();
    let lam_tgt: BTreeMap<Vec<usize>, usize> = subsets(a, i + 1).into_iter().enumerate().map(|(k, s)| (s, k)).collect();
    let mut cols = Vec::new();
    for e in multi_indices(a, n - i) {
        for s in &lam_src {
            let entries = (0..a).filter(|j| e[*j] > 0 && !s.contains(j)).map(|j| {
                let mut e2 = e.clone();
                e2[j] -= 1;
                let mut s2 = s.clone();
                s2.push(j);
                s2.sort_unstable();
                let sign = if s.iter().filter(|u| **u < j).count() % 2 == 1 { f.neg(&1) } else { 1 };
                (gam_tgt[&e2] * lam_tgt.len() + lam_tgt[&s2], sign)
            });
            cols.push(collect_vec(f, entries));
        }
    }
    Mat::from_columns(gam_tgt.len() * lam_tgt.len(), cols)
}

impl KoszulComplex {
    pub fn new(site: &Arc<Site>, p: u64) -> Result<Self> {
        let f = over_field(site, p)?;
        let n = p as usize;
        let terms = (0..=n)
            .map(|i| {
                let mut t = divided_power(site, p, n - i)?.tensor(&exterior_power(site, p, i)?)?;
                t.name = format!("Γ^{}⊗Λ^{i}", n - i);
                Ok(t)
            })
            .collect::<Result<Vec<_>>>()?;
        let differentials = (0..n).map(|i| (0..=site.r).map(|a| koszul_differential(&f, a, n, i)).collect()).collect();
        Ok(KoszulComplex { p, terms, differentials })
    }

    pub fn dims(&self, a: usize) -> Vec<usize> {
        self.terms.iter().map(|t| t.dims[a]).collect()
    }

    pub fn is_natural(&self) -> bool {
        self.differentials.iter().enumerate().all(|(i, d)| is_natural(&self.terms[i], &self.terms[i + 1], d))
    }

    pub fn squares_to_zero(&self) -> bool {
        let f = PrimeField::new(self.p);
        self.differentials.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(x, y)| y.mul(&f, x).is_zero()))
    }

    /// Exactness of the complex at object `a`, both ends included.
    pub fn is_exact_at(&self, a: usize) -> bool {
        let f = PrimeField::new(self.p);
        let ranks: Vec<usize> = self.differentials.iter().map(|d| d[a].rank(&f)).collect();
        self.terms.iter().enumerate().all(|(i, t)| {
            let into = if i == 0 { 0 } else { ranks[i - 1] };
            let out = ranks.get(i).copied().unwrap_or(0);
            t.dims[a] == into + out
        })
    }
}

/// `Γ^p → A`, `γ_{pε_j} ↦ x_j` and every other basis element to zero.
pub fn verschiebung(site: &Arc<Site>, p: u64) -> Result<(FunctorRep, FunctorRep, NatTrans)> {
    over_field(site, p)?;
    let gamma = divided_power(site, p, p as usize)?;
    let a = FunctorRep::additive(site, p)?;
    let v = (0..=site.r)
        .map(|dim| {
            let cols: Vec<Vector> = multi_indices(dim, p as usize)
                .into_iter()
                .map(|e| match e.iter().position(|k| *k == p as usize) {
                    Some(j) => vec![(j, 1)],
                    None => Vec::new(),
                })
                .collect();
            Mat::from_columns(dim, cols)
        })
        .collect();
    Ok((gamma, a, v))
}

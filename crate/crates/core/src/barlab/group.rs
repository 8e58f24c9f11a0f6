use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::ring::prime_factors;
use crate::exactring::CoefficientRing;

/// `Z^free_rank ⊕ Z/q_1 ⊕ … ⊕ Z/q_k`. Elements are integer vectors with the
/// free coordinates first; torsion coordinates are kept in `[0, q_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FGAbGroup {
    #[serde(rename = "freeRank")]
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl FGAbGroup {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(q) = torsion.iter().find(|q| **q < 2) {
            return Err(Error::Parse(format!("torsion order {q} must be at least 2")));
        }
        Ok(FGAbGroup { free_rank, torsion })
    }

    pub fn cyclic(q: u64) -> Self {
        FGAbGroup { free_rank: 0, torsion: vec![q] }
    }

    pub fn free(r: usize) -> Self {
        FGAbGroup { free_rank: r, torsion: vec![] }
    }

    pub fn trivial() -> Self {
        FGAbGroup { free_rank: 0, torsion: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn reduce(&self, mut v: Vec<i64>) -> Vec<i64> {
        for (k, q) in self.torsion.iter().enumerate() {
            let i = self.free_rank + k;
            v[i] = v[i].mod_floor(&(*q as i64));
        }
        v
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduce(a.iter().map(|x| -x).collect())
    }

    /// All elements of a finite group in mixed-radix order (zero first).
    pub fn elements(&self) -> Result<Vec<Vec<i64>>> {
        if !self.is_finite() {
            return Err(Error::UnsupportedRing(format!("{self} is infinite; use bounded mode")));
        }
        let mut out = vec![Vec::new()];
        for q in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                for a in 0..*q as i64 {
                    let mut v = prefix.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out = next;
        }
        // order so that the first coordinate varies slowest is fine, but keep zero first
        out.sort();
        Ok(out)
    }

    /// Elements whose free coordinates lie in `[-bound, bound]`.
    pub fn box_elements(&self, bound: i64) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.free_rank {
            let mut next = Vec::new();
            for prefix in &out {
                for a in -bound..=bound {
                    let mut v = prefix.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out = next;
        }
        for q in &self.torsion {
            let mut next = Vec::new();
            for prefix in &out {
                for a in 0..*q as i64 {
                    let mut v = prefix.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    pub fn in_box(&self, v: &[i64], bound: i64) -> bool {
        v[..self.free_rank].iter().all(|x| x.abs() <= bound)
    }

    pub fn label(v: &[i64]) -> String {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// Largest `d` with `Λ^d(G ⊗ k) ≠ 0`.
    ///
    /// `Λ^d(⊕ k/a_i)` is the sum over `d`-subsets `S` of `k/gcd(a_S)`, which is
    /// nonzero exactly when `gcd(a_S)` is not a unit. A subset works iff some
    /// prime not invertible in `k` divides all its torsion orders.
    pub fn dim_over(&self, ring: &CoefficientRing) -> usize {
        let bad_primes: Vec<u64> = match ring {
            CoefficientRing::Rationals => vec![],
            CoefficientRing::PrimeField(p) => vec![*p],
            CoefficientRing::CyclicRing(m) => prime_factors(*m),
            CoefficientRing::Integers | CoefficientRing::LocalizedIntegers(_) => {
                let mut ps: Vec<u64> = self.torsion.iter().flat_map(|q| prime_factors(*q)).collect();
                ps.sort_unstable();
                ps.dedup();
                ps.retain(|p| !ring.is_invertible_integer(*p));
                ps
            }
        };
        let best = bad_primes
            .iter()
            .map(|p| self.torsion.iter().filter(|q| *q % p == 0).count())
            .max()
            .unwrap_or(0);
        self.free_rank + best
    }

    /// Torsion orders of `G` not invertible in `k`. Empty means `G` is `k`-torsion free
    /// in the sense used for the e-map hypotheses.
    pub fn torsion_obstructions(&self, ring: &CoefficientRing) -> Vec<u64> {
        self.torsion.iter().copied().filter(|q| !ring.is_invertible_integer(*q)).collect()
    }

    /// Rank of `G ⊗ k` when it is free: always over a field, and over any ring
    /// once `G` is `k`-torsion free.
    pub fn tensor_rank(&self, ring: &CoefficientRing) -> usize {
        self.free_rank + self.torsion.iter().filter(|q| !ring.is_invertible_integer(**q)).count()
    }
}

impl fmt::Display for FGAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|q| format!("Z/{q}")));
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" x "))
    }
}

impl FromStr for FGAbGroup {
    type Err = Error;

    /// Accepts `Z^r x Z/q1 x Z/q2 ...` with factors in any order, `(Z/2)^2` powers, and `0`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "0" || t == "1" || t.is_empty() {
            return Ok(FGAbGroup::trivial());
        }
        let mut free = 0;
        let mut torsion = Vec::new();
        for part in t.split(['x', '×', '+', '⊕']) {
            let part = part.trim();
            let bad = || Error::Parse(format!("bad group factor '{part}'"));
            let (base, power) = match part.rsplit_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let base = base.trim_start_matches('(').trim_end_matches(')').trim();
            if base == "Z" {
                free += power;
            } else if let Some(q) = base.strip_prefix("Z/") {
                let q: u64 = q.trim().parse().map_err(|_| bad())?;
                if q < 2 {
                    return Err(bad());
                }
                torsion.extend(std::iter::repeat_n(q, power));
            } else {
                return Err(bad());
            }
        }
        FGAbGroup::new(free, torsion)
    }
}

/// Group homomorphism given by an integer matrix on coordinates
/// (`rows = target.rank()`, `cols = source.rank()`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupHom {
    pub source: FGAbGroup,
    pub target: FGAbGroup,
    pub matrix: Vec<Vec<i64>>,
}

impl GroupHom {
    pub fn new(source: FGAbGroup, target: FGAbGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::Shape(format!(
                "homomorphism {source} -> {target} needs a {}x{} matrix",
                target.rank(),
                source.rank()
            )));
        }
        let h = GroupHom { source, target, matrix };
        // well-defined: q_i * image of the i-th torsion generator is zero
        for (k, q) in h.source.torsion.iter().enumerate() {
            let j = h.source.free_rank + k;
            let img: Vec<i64> = h.matrix.iter().map(|r| r[j] * *q as i64).collect();
            let red = h.target.reduce(img);
            if red[..h.target.free_rank].iter().any(|x| *x != 0) || red.iter().any(|x| *x != 0) {
                return Err(Error::Precondition(format!("matrix column {j} does not respect the order {q}")));
            }
        }
        Ok(h)
    }

    pub fn identity(g: &FGAbGroup) -> Self {
        let r = g.rank();
        let m = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
        GroupHom { source: g.clone(), target: g.clone(), matrix: m }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let img = self.matrix.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
        self.target.reduce(img)
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &GroupHom) -> GroupHom {
        let m = self
            .matrix
            .iter()
            .map(|row| (0..first.source.rank()).map(|j| row.iter().enumerate().map(|(k, a)| a * first.matrix[k][j]).sum()).collect())
            .collect();
        GroupHom { source: first.source.clone(), target: self.target.clone(), matrix: m }
    }
}

//! The full subcategory of `Z/q`-modules on `0, C, C², …, C^r`.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A morphism `C^src → C^dst`: a `dst × src` matrix over `Z/q`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morph {
    pub src: usize,
    pub dst: usize,
    pub entries: Vec<u64>,
}

impl Morph {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.src + j]
    }

    pub fn identity(a: usize) -> Self {
        let mut entries = vec![0; a * a];
        for i in 0..a {
            entries[i * a + i] = 1;
        }
        Morph { src: a, dst: a, entries }
    }

    /// `self ∘ first` over `Z/q`.
    pub fn after(&self, first: &Morph, q: u64) -> Morph {
        let (a, b, c) = (first.src, first.dst, self.dst);
        let mut entries = vec![0; c * a];
        for i in 0..c {
            for j in 0..a {
                entries[i * a + j] = (0..b).map(|k| self.get(i, k) * first.get(k, j)).sum::<u64>() % q;
            }
        }
        Morph { src: a, dst: c, entries }
    }

    /// Rows as signed integer vectors, for group homomorphisms.
    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.dst).map(|i| (0..self.src).map(|j| self.get(i, j) as i64).collect()).collect()
    }
}

/// Above this many morphisms only a generating set is kept.
const ENUMERATION_CAP: u64 = 4000;

#[derive(Clone, Debug)]
pub struct Site {
    pub q: u64,
    pub r: usize,
    pub morphisms: Vec<Morph>,
    index: HashMap<Morph, usize>,
    /// Every morphism of the site is listed.
    pub complete: bool,
    /// Morphisms whose naturality squares are imposed: all of them for `q ≤ 3, r ≤ 2`,
    /// otherwise elementary matrices, scalars at one coordinate, transpositions,
    /// the standard inclusions and projections, and identities.
    pub naturality: Vec<usize>,
}

fn all_matrices(q: u64, a: usize, b: usize) -> Vec<Morph> {
    let len = a * b;
    let total = q.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut entries = vec![0; len];
            // first entry varies slowest
            for k in (0..len).rev() {
                entries[k] = code % q;
                code /= q;
            }
            Morph { src: a, dst: b, entries }
        })
        .collect()
}

fn generators(q: u64, r: usize) -> Vec<Morph> {
    let mut out = Vec::new();
    for a in 0..=r {
        out.push(Morph::identity(a));
        for i in 0..a {
            for j in 0..a {
                if i != j {
                    let mut m = Morph::identity(a);
                    m.entries[i * a + j] = 1;
                    out.push(m);
                }
            }
        }
        if a > 0 {
            for c in 0..q {
                if c != 1 {
                    let mut m = Morph::identity(a);
                    m.entries[0] = c;
                    out.push(m);
                }
            }
        }
        for i in 0..a.saturating_sub(1) {
            let mut m = Morph::identity(a);
            m.entries[i * a + i] = 0;
            m.entries[(i + 1) * a + i + 1] = 0;
            m.entries[i * a + i + 1] = 1;
            m.entries[(i + 1) * a + i] = 1;
            out.push(m);
        }
        if a > 0 {
            out.push(Morph { src: a, dst: 0, entries: vec![] });
            out.push(Morph { src: 0, dst: a, entries: vec![0; a] });
        }
        if a < r {
            let mut inc = Morph { src: a, dst: a + 1, entries: vec![0; a * (a + 1)] };
            let mut proj = Morph { src: a + 1, dst: a, entries: vec![0; a * (a + 1)] };
            for i in 0..a {
                inc.entries[i * a + i] = 1;
                proj.entries[i * (a + 1) + i] = 1;
            }
            out.push(inc);
            out.push(proj);
        }
    }
    out
}

impl Site {
    pub fn new(q: u64, r: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::Precondition(format!("q = {q} must be at least 2")));
        }
        let count: u64 = (0..=r).flat_map(|a| (0..=r).map(move |b| (a * b) as u32)).map(|e| q.checked_pow(e).unwrap_or(u64::MAX)).fold(0u64, |s, x| s.saturating_add(x));
        let complete = count <= ENUMERATION_CAP;
        let mut morphisms: Vec<Morph> = Vec::new();
        // identities first so that morphism `a` is id_a
        for a in 0..=r {
            morphisms.push(Morph::identity(a));
        }
        if complete {
            for a in 0..=r {
                for b in 0..=r {
                    morphisms.extend(all_matrices(q, a, b).into_iter().filter(|m| !(a == b && *m == Morph::identity(a))));
                }
            }
        } else {
            for g in generators(q, r) {
                if !morphisms.contains(&g) {
                    morphisms.push(g);
                }
            }
        }
        let index: HashMap<Morph, usize> = morphisms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let naturality = if complete && q <= 3 && r <= 2 {
            (0..morphisms.len()).collect()
        } else {
            let mut v: Vec<usize> = generators(q, r).iter().filter_map(|g| index.get(g).copied()).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        Ok(Site { q, r, morphisms, index, complete, naturality })
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn identity(&self, a: usize) -> usize {
        a
    }

    pub fn find(&self, m: &Morph) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Index of `g ∘ f` when it is listed.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        let (f, g) = (&self.morphisms[f], &self.morphisms[g]);
        if f.dst != g.src {
            return None;
        }
        self.find(&g.after(f, self.q))
    }

    /// Morphisms `a → b`; needs a complete enumeration.
    pub fn hom(&self, a: usize, b: usize) -> Result<Vec<usize>> {
        if !self.complete {
            return Err(Error::Budget(format!("the site for q={}, r={} is too large to enumerate", self.q, self.r)));
        }
        Ok((0..self.len()).filter(|i| self.morphisms[*i].src == a && self.morphisms[*i].dst == b).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hom_set_sizes() {
        let s = Site::new(2, 2).unwrap();
        assert_eq!(s.len(), 31);
        for a in 0..=2 {
            for b in 0..=2 {
                assert_eq!(s.hom(a, b).unwrap().len() as u64, 2u64.pow((a * b) as u32));
            }
        }
        assert_eq!(Site::new(3, 2).unwrap().len(), 107);
        assert_eq!(s.naturality.len(), 31);
        let big = Site::new(3, 3).unwrap();
        assert!(!big.complete);
        assert!(big.hom(1, 1).is_err());
    }

    #[test]
    fn composition_is_matrix_product() {
        let s = Site::new(2, 2).unwrap();
        let f = s.find(&Morph { src: 1, dst: 2, entries: vec![1, 1] }).unwrap();
        let g = s.find(&Morph { src: 2, dst: 1, entries: vec![1, 1] }).unwrap();
        let gf = s.compose(f, g).unwrap();
        assert_eq!(s.morphisms[gf], Morph { src: 1, dst: 1, entries: vec![0] });
    }
}

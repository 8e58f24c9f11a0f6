use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::bicomplex::Bicomplex;
use super::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::exactring::echelon::{axpy, kernel_of, unit_vec, Echelon, FVec};
use crate::exactring::field::{Field, FieldKind};
use crate::exactring::homology::field_columns;
use crate::exactring::homology::rank;
use crate::exactring::{CoefficientRing, SparseMatrix};
use crate::with_field;

/// One page `E^r` of the column-filtration spectral sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPage {
    pub r: usize,
    pub ring: CoefficientRing,
    pub entries: BTreeMap<(usize, usize), usize>,
    /// `d^r: E^r_{p,q} → E^r_{p-r,q+r-1}` keyed by the source `(p, q)`.
    pub differentials: BTreeMap<(usize, usize), SparseMatrix>,
}

impl SpectralPage {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn total(&self, n: usize) -> usize {
        self.entries.iter().filter(|((p, q), _)| p + q == n).map(|(_, d)| d).sum()
    }

    /// Dimension of the homology of `(E^r, d^r)` at `(p, q)`.
    pub fn homology_dim(&self, p: usize, q: usize) -> usize {
        let here = self.get(p, q);
        let out_rank = self.differentials.get(&(p, q)).map_or(0, |m| self.rank(m));
        let in_rank = self.differentials.get(&(p + self.r, (q + 1).wrapping_sub(self.r))).filter(|_| q + 1 >= self.r).map_or(0, |m| self.rank(m));
        here - out_rank - in_rank
    }

    fn rank(&self, m: &SparseMatrix) -> usize {
        rank(m, &self.ring).unwrap_or(0)
    }

    /// Whether `d^r ∘ d^r = 0` wherever both maps are present.
    pub fn squares_to_zero(&self) -> bool {
        self.differentials.iter().all(|(&(p, q), m)| {
            if p < self.r {
                return true;
            }
            match self.differentials.get(&(p - self.r, q + self.r - 1)) {
                Some(next) => next.mul(m).map(|c| c.is_zero_in(&self.ring)).unwrap_or(false),
                None => true,
            }
        })
    }
}

impl Serialize for SpectralPage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("r", &self.r)?;
        let entries: BTreeMap<String, usize> = self.entries.iter().map(|((p, q), d)| (format!("{p},{q}"), *d)).collect();
        m.serialize_entry("entries", &entries)?;
        m.end()
    }
}

/// Subquotient `num / den` of a vector space with chosen representatives.
struct Subquotient<F: Field> {
    reps: Vec<FVec<F::Elem>>,
    e: Echelon<F>,
}

impl<F: Field> Subquotient<F> {
    fn new(f: &F, num: &[FVec<F::Elem>], den: &[FVec<F::Elem>]) -> Self {
        let mut e = Echelon::new(f.clone());
        for v in den {
            e.insert(v.clone(), Vec::new());
        }
        let mut reps = Vec::new();
        for v in num {
            let (rem, tag) = e.reduce(v.clone(), Vec::new());
            if !rem.is_empty() {
                let k = reps.len();
                reps.push(v.clone());
                e.insert_reduced(rem, axpy(f, &tag, &f.one(), &unit_vec(f, k)));
            }
        }
        Subquotient { reps, e }
    }

    fn coordinates(&self, f: &F, v: &[(usize, F::Elem)]) -> Option<FVec<F::Elem>> {
        let (rem, tag) = self.e.reduce(v.to_vec(), Vec::new());
        if !rem.is_empty() {
            return None;
        }
        Some(tag.iter().map(|(i, x)| (*i, f.neg(x))).collect())
    }
}

struct TotData<F: Field> {
    /// `blocks[n]` = list of `(p, offset, dim)`.
    blocks: Vec<Vec<(usize, usize, usize)>>,
    /// `cols[n][j]` = `D` applied to basis vector `j` of `Tot_n`.
    cols: Vec<Vec<FVec<F::Elem>>>,
}

impl<F: Field> TotData<F> {
    fn filt_end(&self, n: usize, p: isize) -> usize {
        // number of coordinates in F_p Tot_n
        if p < 0 {
            return 0;
        }
        self.blocks[n].iter().filter(|(pp, _, _)| (*pp as isize) <= p).map(|(_, _, d)| d).sum()
    }

    /// `Z^r_p` in degree `n`: `x ∈ F_p` with `D x ∈ F_{p-r}`.
    fn z(&self, f: &F, n: usize, p: isize, r: usize) -> Vec<FVec<F::Elem>> {
        let end = self.filt_end(n, p);
        if end == 0 {
            return Vec::new();
        }
        if n == 0 {
            return (0..end).map(|j| unit_vec(f, j)).collect();
        }
        let cut = self.filt_end(n - 1, p - r as isize);
        let proj: Vec<FVec<F::Elem>> =
            self.cols[n][..end].iter().map(|c| c.iter().filter(|(i, _)| *i >= cut).cloned().collect()).collect();
        kernel_of(f, &proj)
    }

    fn apply_d(&self, f: &F, n: usize, x: &[(usize, F::Elem)]) -> FVec<F::Elem> {
        let mut acc: FVec<F::Elem> = Vec::new();
        for (j, c) in x {
            acc = axpy(f, &acc, c, &self.cols[n][*j]);
        }
        acc
    }
}

/// Pages `E^1 .. E^{r_max}` of the spectral sequence of the column filtration.
/// Entries are computed for total degrees `n < complete_through`.
pub fn spectral_pages(b: &Bicomplex, r_max: usize) -> Result<Vec<SpectralPage>> {
    let kind = FieldKind::of(&b.ring).map_err(|_| Error::UnsupportedRing(format!("spectral pages need a field, got {}", b.ring)))?;
    let tot = b.totalize();
    with_field!(kind, f => pages_over(&f, b, &tot, r_max))
}

fn pages_over<F: Field>(f: &F, b: &Bicomplex, tot: &ChainComplex, r_max: usize) -> Result<Vec<SpectralPage>> {
    let top = tot.n;
    let data: TotData<F> = TotData {
        blocks: (0..=top).map(|n| b.tot_layout(n)).collect(),
        cols: (0..=top).map(|n| field_columns(f, &tot.d[n])).collect(),
    };
    let mut pages = Vec::new();
    for r in 1..=r_max {
        let mut entries = BTreeMap::new();
        let mut quots: BTreeMap<(usize, usize), Subquotient<F>> = BTreeMap::new();
        for n in 0..top {
            for &(p, _, _) in &data.blocks[n] {
                let pi = p as isize;
                let num = data.z(f, n, pi, r);
                let mut den = data.z(f, n, pi - 1, r - 1);
                for y in data.z(f, n + 1, pi + r as isize - 1, r - 1) {
                    den.push(data.apply_d(f, n + 1, &y));
                }
                let sq = Subquotient::new(f, &num, &den);
                entries.insert((p, n - p), sq.reps.len());
                quots.insert((p, n - p), sq);
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(p, q), sq) in &quots {
            if p < r || sq.reps.is_empty() {
                continue;
            }
            let n = p + q;
            let Some(target) = quots.get(&(p - r, q + r - 1)) else { continue };
            let mut m = SparseMatrix::zeros(target.reps.len(), sq.reps.len());
            for (k, x) in sq.reps.iter().enumerate() {
                let dx = data.apply_d(f, n, x);
                let c = target
                    .coordinates(f, &dx)
                    .ok_or_else(|| Error::NotAComplex(format!("d^{r} image at ({p},{q}) left Z^{r}")))?;
                for (i, v) in c {
                    m.set(i, k, f.to_scalar(&v));
                }
            }
            differentials.insert((p, q), m);
        }
        pages.push(SpectralPage { r, ring: b.ring.clone(), entries, differentials });
    }
    Ok(pages)
}

/// Whether each page is the homology of the previous one, entry by entry.
pub fn pages_consistent(pages: &[SpectralPage]) -> bool {
    pages.windows(2).all(|w| {
        w[1].entries.iter().all(|(&(p, q), &d)| w[0].homology_dim(p, q) == d) && w[0].squares_to_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainkit::complex::labels;

    #[test]
    fn zero_horizontal_gives_e2_equal_e1() {
        let ring = CoefficientRing::Rationals;
        let col = ChainComplex::zero_differential(ring.clone(), vec![labels("a", 1), labels("b", 2), vec![]]);
        let h = vec![vec![], (0..=2).map(|q| SparseMatrix::zeros(col.dim(q), col.dim(q))).collect()];
        let b = Bicomplex::new(ring.clone(), vec![col.clone(), col], h, 2).unwrap();
        let pages = spectral_pages(&b, 3).unwrap();
        assert_eq!(pages[0].entries, pages[1].entries);
        assert!(pages_consistent(&pages));
    }
}

use super::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::exactring::{int, CoefficientRing, SparseMatrix};

/// First-quadrant bicomplex stored as vertical column complexes plus
/// horizontal maps `(p, q) → (p-1, q)`.
///
/// Squares commute: `d' d'' = d'' d'`. The sign `(-1)^p` on the vertical
/// differential is applied only when totalizing.
#[derive(Clone, Debug)]
pub struct Bicomplex {
    pub ring: CoefficientRing,
    pub columns: Vec<ChainComplex>,
    /// `horizontal[p][q]` for `p ≥ 1`; `horizontal[0]` is empty.
    pub horizontal: Vec<Vec<SparseMatrix>>,
    /// `Tot_n` contains every nonzero `(p, q)` with `p + q = n` for `n` up to this bound.
    pub complete_through: usize,
}

impl Bicomplex {
    pub fn new(ring: CoefficientRing, columns: Vec<ChainComplex>, horizontal: Vec<Vec<SparseMatrix>>, complete_through: usize) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Shape("bicomplex needs at least one column".into()));
        }
        if horizontal.len() != columns.len() {
            return Err(Error::Shape("one horizontal list per column required".into()));
        }
        for p in 1..columns.len() {
            let top = columns[p].n.min(columns[p - 1].n);
            if horizontal[p].len() <= top {
                return Err(Error::Shape(format!("column {p} needs horizontal maps through q={top}")));
            }
            for q in 0..=top {
                let h = &horizontal[p][q];
                if h.rows != columns[p - 1].dim(q) || h.cols != columns[p].dim(q) {
                    return Err(Error::Shape(format!("horizontal map at ({p},{q}) has wrong shape")));
                }
            }
        }
        Ok(Bicomplex { ring, columns, horizontal, complete_through })
    }

    pub fn p_max(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.columns.get(p).map_or(0, |c| if q <= c.n { c.dim(q) } else { 0 })
    }

    pub fn horizontal_at(&self, p: usize, q: usize) -> Option<&SparseMatrix> {
        if p == 0 {
            return None;
        }
        self.horizontal.get(p).and_then(|h| h.get(q))
    }

    /// Failures of `d'² = 0`, `d''² = 0` and `d' d'' = d'' d'`, as `(kind, p, q)`.
    pub fn verify(&self) -> Vec<(String, usize, usize)> {
        let mut bad = Vec::new();
        for (p, c) in self.columns.iter().enumerate() {
            for q in c.verify() {
                bad.push(("vertical".to_string(), p, q));
            }
        }
        for p in 2..self.columns.len() {
            for q in 0..=self.columns[p].n.min(self.columns[p - 2].n) {
                if let (Some(a), Some(b)) = (self.horizontal_at(p - 1, q), self.horizontal_at(p, q)) {
                    if !a.mul(b).map(|m| m.is_zero_in(&self.ring)).unwrap_or(false) {
                        bad.push(("horizontal".to_string(), p, q));
                    }
                }
            }
        }
        for p in 1..self.columns.len() {
            for q in 1..=self.columns[p].n.min(self.columns[p - 1].n) {
                let (Some(h_q), Some(h_q1)) = (self.horizontal_at(p, q), self.horizontal_at(p, q - 1)) else { continue };
                let lhs = self.columns[p - 1].d[q].mul(h_q);
                let rhs = h_q1.mul(&self.columns[p].d[q]);
                let ok = match (lhs, rhs) {
                    (Ok(a), Ok(b)) => a.sub(&b).map(|m| m.is_zero_in(&self.ring)).unwrap_or(false),
                    _ => false,
                };
                if !ok {
                    bad.push(("square".to_string(), p, q));
                }
            }
        }
        bad
    }

    /// Offsets of the `(p, n-p)` blocks inside `Tot_n`, ordered by `p`.
    pub fn tot_layout(&self, n: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for p in 0..=n.min(self.p_max()) {
            let d = self.dim(p, n - p);
            out.push((p, off, d));
            off += d;
        }
        out
    }

    /// Total complex with differential `d' + (-1)^p d''`, through degree `complete_through`.
    pub fn totalize(&self) -> ChainComplex {
        let top = self.complete_through;
        let mut basis = Vec::new();
        for n in 0..=top {
            let mut b = Vec::new();
            for p in 0..=n.min(self.p_max()) {
                let q = n - p;
                if q <= self.columns[p].n {
                    b.extend(self.columns[p].basis[q].iter().map(|x| format!("({p},{q}){x}")));
                }
            }
            basis.push(b);
        }
        let mut higher = Vec::new();
        for n in 1..=top {
            let src = self.tot_layout(n);
            let dst = self.tot_layout(n - 1);
            let mut m = SparseMatrix::zeros(basis[n - 1].len(), basis[n].len());
            for &(p, off, d) in &src {
                if d == 0 {
                    continue;
                }
                let q = n - p;
                let sign = if p % 2 == 0 { int(1) } else { int(-1) };
                if q >= 1 {
                    let (_, toff, _) = dst[p];
                    for ((i, j), v) in self.columns[p].d[q].entries() {
                        m.set(toff + i, off + j, v * &sign);
                    }
                }
                if p >= 1 {
                    if let Some(h) = self.horizontal_at(p, q) {
                        let (_, toff, _) = dst[p - 1];
                        for ((i, j), v) in h.entries() {
                            m.add_to(toff + i, off + j, v);
                        }
                    }
                }
            }
            higher.push(m);
        }
        ChainComplex::new(self.ring.clone(), basis, higher).expect("totalization shapes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chainkit::complex::labels;

    #[test]
    fn single_column_is_unchanged() {
        let c = ChainComplex::new(
            CoefficientRing::Rationals,
            vec![labels("a", 1), labels("b", 1)],
            vec![SparseMatrix::from_dense(&[vec![3]])],
        )
        .unwrap();
        let b = Bicomplex::new(CoefficientRing::Rationals, vec![c.clone()], vec![vec![]], 1).unwrap();
        let t = b.totalize();
        assert_eq!(t.d[1], c.d[1]);
        assert_eq!(t.dims(), c.dims());
    }
}

use std::collections::HashMap;

use super::field::Field;

/// Sparse vector over a field: strictly increasing indices, no zero entries.
pub type FVec<E> = Vec<(usize, E)>;

/// `a + c*b` on sorted sparse vectors.
pub fn axpy<F: Field>(f: &F, a: &[(usize, F::Elem)], c: &F::Elem, b: &[(usize, F::Elem)]) -> FVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = f.mul(c, &b[j].1);
            if !f.is_zero(&v) {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, v: &[(usize, F::Elem)]) -> FVec<F::Elem> {
    if f.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, f.mul(c, x))).collect()
}

pub fn unit_vec<F: Field>(f: &F, i: usize) -> FVec<F::Elem> {
    vec![(i, f.one())]
}

/// Build a sorted sparse vector from unsorted entries, summing duplicates.
pub fn collect_vec<F: Field>(f: &F, entries: impl IntoIterator<Item = (usize, F::Elem)>) -> FVec<F::Elem> {
    let mut v: Vec<(usize, F::Elem)> = entries.into_iter().collect();
    v.sort_by_key(|e| e.0);
    let mut out: FVec<F::Elem> = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = f.add(&last.1, &x),
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !f.is_zero(&e.1));
    out
}

struct Row<E> {
    vec: FVec<E>,
    tag: FVec<E>,
}

/// Incremental row echelon form. Every stored row carries a tag vector that
/// is transformed alongside it, so callers can track which combination of
/// inputs (or which homology class) each row represents.
pub struct Echelon<F: Field> {
    f: F,
    rows: Vec<Row<F::Elem>>,
    pivot: HashMap<usize, usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(f: F) -> Self {
        Echelon { f, rows: Vec::new(), pivot: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> &F {
        &self.f
    }

    /// Subtract stored rows until no entry of `v` sits on a pivot column.
    /// Returns the remainder and `tag - sum(c_k * tag_k)`.
    pub fn reduce(&self, mut v: FVec<F::Elem>, mut tag: FVec<F::Elem>) -> (FVec<F::Elem>, FVec<F::Elem>) {
        let mut cursor = 0;
        loop {
            let hit = v[cursor..].iter().position(|(c, _)| self.pivot.contains_key(c));
            let Some(off) = hit else { break };
            let pos = cursor + off;
            let (col, val) = v[pos].clone();
            let row = &self.rows[self.pivot[&col]];
            let c = self.f.neg(&self.f.mul(&val, &self.f.inv(&row.vec[0].1)));
            v = axpy(&self.f, &v, &c, &row.vec);
            if !row.tag.is_empty() {
                tag = axpy(&self.f, &tag, &c, &row.tag);
            }
            // entries before `pos` are untouched since the row starts at `col`
            cursor = pos;
        }
        (v, tag)
    }

    /// Reduce and store the remainder when it is nonzero. Returns the new pivot column.
    pub fn insert(&mut self, v: FVec<F::Elem>, tag: FVec<F::Elem>) -> Option<usize> {
        let (rem, tag) = self.reduce(v, tag);
        self.insert_reduced(rem, tag)
    }

    /// Store an already reduced vector.
    pub fn insert_reduced(&mut self, rem: FVec<F::Elem>, tag: FVec<F::Elem>) -> Option<usize> {
        let lead = rem.first()?.0;
        debug_assert!(!self.pivot.contains_key(&lead));
        self.pivot.insert(lead, self.rows.len());
        self.rows.push(Row { vec: rem, tag });
        Some(lead)
    }

    pub fn contains(&self, v: FVec<F::Elem>) -> bool {
        self.reduce(v, Vec::new()).0.is_empty()
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivot.keys().copied().collect();
        p.sort_unstable();
        p
    }
}

/// Rank of the span of the given vectors.
pub fn rank_of<F: Field>(f: &F, vectors: impl IntoIterator<Item = FVec<F::Elem>>) -> usize {
    let mut e = Echelon::new(f.clone());
    for v in vectors {
        e.insert(v, Vec::new());
    }
    e.rank()
}

/// Basis of the kernel of the linear map whose `j`-th column image is `columns[j]`.
/// Kernel vectors come out in order of their last nonzero coordinate, each with
/// coefficient one there.
pub fn kernel_of<F: Field>(f: &F, columns: &[FVec<F::Elem>]) -> Vec<FVec<F::Elem>> {
    let mut e = Echelon::new(f.clone());
    let mut out = Vec::new();
    for (j, c) in columns.iter().enumerate() {
        let (rem, tag) = e.reduce(c.clone(), unit_vec(f, j));
        if rem.is_empty() {
            out.push(tag);
        } else {
            e.insert_reduced(rem, tag);
        }
    }
    out
}

/// Coordinates of `v` in the basis `basis`, if `v` lies in its span.
pub struct Solver<F: Field> {
    e: Echelon<F>,
}

impl<F: Field> Solver<F> {
    pub fn new(f: &F, basis: &[FVec<F::Elem>]) -> Self {
        let mut e = Echelon::new(f.clone());
        for (j, b) in basis.iter().enumerate() {
            e.insert(b.clone(), unit_vec(f, j));
        }
        Solver { e }
    }

    pub fn rank(&self) -> usize {
        self.e.rank()
    }

    pub fn solve(&self, v: &[(usize, F::Elem)]) -> Option<FVec<F::Elem>> {
        let (rem, tag) = self.e.reduce(v.to_vec(), Vec::new());
        if !rem.is_empty() {
            return None;
        }
        let f = self.e.field();
        Some(tag.iter().map(|(i, x)| (*i, f.neg(x))).collect())
    }
}

/// Field homology `ker(d_out) / im(d_in)` with deterministic witnesses and a
/// coordinate map for arbitrary cycles.
pub struct FieldHomology<F: Field> {
    pub witnesses: Vec<FVec<F::Elem>>,
    e: Echelon<F>,
}

impl<F: Field> FieldHomology<F> {
    /// `out_cols[j]` is `d_out` of the `j`-th basis element, `in_cols` the images of `d_in`.
    pub fn new(f: &F, out_cols: &[FVec<F::Elem>], in_cols: &[FVec<F::Elem>]) -> Self {
        let mut e = Echelon::new(f.clone());
        for c in in_cols {
            e.insert(c.clone(), Vec::new());
        }
        let mut witnesses = Vec::new();
        for z in kernel_of(f, out_cols) {
            let (rem, tag) = e.reduce(z.clone(), Vec::new());
            if !rem.is_empty() {
                let k = witnesses.len();
                witnesses.push(z);
                let tag = axpy(f, &tag, &f.one(), &unit_vec(f, k));
                e.insert_reduced(rem, tag);
            }
        }
        FieldHomology { witnesses, e }
    }

    pub fn dim(&self) -> usize {
        self.witnesses.len()
    }

    /// Coordinates of the class of cycle `z` in the witness basis.
    /// `None` when `z` is not in the span of cycles seen.
    pub fn coordinates(&self, z: &[(usize, F::Elem)]) -> Option<FVec<F::Elem>> {
        let (rem, tag) = self.e.reduce(z.to_vec(), Vec::new());
        if !rem.is_empty() {
            return None;
        }
        let f = self.e.field();
        Some(tag.iter().map(|(i, x)| (*i, f.neg(x))).collect())
    }

    pub fn is_boundary(&self, z: &[(usize, F::Elem)]) -> bool {
        matches!(self.coordinates(z), Some(c) if c.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::field::{PrimeField, RationalField};
    use crate::exactring::ring::int;

    #[test]
    fn kernel_of_row_sum_over_f2() {
        let f = PrimeField::new(2);
        let cols = vec![vec![(0, 1u64)], vec![(0, 1u64)]];
        let k = kernel_of(&f, &cols);
        assert_eq!(k, vec![vec![(0, 1), (1, 1)]]);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let f = PrimeField::new(2);
        let cols: Vec<FVec<u64>> = (0..3).map(|i| vec![(i, 1)]).collect();
        assert!(kernel_of(&f, &cols).is_empty());
    }

    #[test]
    fn kernel_of_zero_over_q() {
        let f = RationalField;
        assert_eq!(kernel_of(&f, &[vec![], vec![]]).len(), 2);
    }

    #[test]
    fn homology_coordinates() {
        // C_1 = Q^2 -> C_0 = 0 with d_in hitting (1,1); H_1 has dim 1
        let f = RationalField;
        let h = FieldHomology::new(&f, &[vec![], vec![]], &[vec![(0, int(1)), (1, int(1))]]);
        assert_eq!(h.dim(), 1);
        let w = h.witnesses[0].clone();
        assert_eq!(h.coordinates(&w), Some(vec![(0, int(1))]));
        // (1,0) = (1,1) - (0,1): (0,1) class is -(1,0) class when w=(1,0)
        let c = h.coordinates(&[(0, int(1)), (1, int(1))]).unwrap();
        assert!(c.is_empty());
        let c1 = h.coordinates(&[(1, int(3))]).unwrap();
        assert_eq!(c1.len(), 1);
    }
}

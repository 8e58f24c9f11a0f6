use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ring::{CoefficientRing, Scalar};
use crate::error::{Error, Result};

/// Sparse matrix over exact scalars. Absent keys are zero; zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

/// A sparse column vector as sorted `(row, value)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged dense matrix");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigRational::from_integer(BigInt::from(*v)));
            }
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col {
                m.add_to(*i, j, v);
            }
        }
        m
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        let mut cols = vec![Vec::new(); self.cols];
        for ((i, j), v) in &self.entries {
            cols[*j].push((*i, v.clone()));
        }
        for c in &mut cols {
            c.sort_by_key(|x| x.0);
        }
        cols
    }

    pub fn row_vectors(&self) -> Vec<SparseVec> {
        let mut rows = vec![Vec::new(); self.rows];
        for ((i, j), v) in &self.entries {
            rows[*i].push((*j, v.clone()));
        }
        rows
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for ((i, j), v) in &self.entries {
            d[*i][*j] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for ((i, j), v) in &self.entries {
            t.entries.insert((*j, *i), v.clone());
        }
        t
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let rows = other.row_vectors();
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for ((i, k), a) in &self.entries {
            for (j, b) in &rows[*k] {
                *acc.entry((*i, *j)).or_insert_with(Scalar::zero) += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, entries: acc })
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let cols = self.columns();
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, x) in v {
            for (i, a) in &cols[*j] {
                *acc.entry(*i).or_insert_with(Scalar::zero) += a * x;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        let mut m = Self::zeros(self.rows, self.cols);
        for ((i, j), v) in &self.entries {
            m.set(*i, *j, v * c);
        }
        m
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("cannot subtract matrices of different shapes".into()));
        }
        let mut m = self.clone();
        for ((i, j), v) in &other.entries {
            m.add_to(*i, *j, &-v.clone());
        }
        Ok(m)
    }

    /// Zero test interpreted in the ring (so `4` is zero over `Z/4`).
    pub fn is_zero_in(&self, ring: &CoefficientRing) -> bool {
        self.entries.values().all(|v| ring.is_zero(v))
    }

    pub fn normalized(&self, ring: &CoefficientRing) -> SparseMatrix {
        let mut m = Self::zeros(self.rows, self.cols);
        for ((i, j), v) in &self.entries {
            m.set(*i, *j, ring.normalize(v));
        }
        m
    }

    /// Block matrix `[[a, b], [c, d]]`; any block may be absent (zero).
    pub fn block(
        top: usize,
        bottom: usize,
        left: usize,
        right: usize,
        blocks: [Option<&SparseMatrix>; 4],
    ) -> SparseMatrix {
        let mut m = Self::zeros(top + bottom, left + right);
        let offsets = [(0, 0), (0, left), (top, 0), (top, left)];
        for (b, (ro, co)) in blocks.iter().zip(offsets) {
            if let Some(b) = b {
                for ((i, j), v) in &b.entries {
                    m.set(i + ro, j + co, v.clone());
                }
            }
        }
        m
    }
}

pub fn scalar_to_string(v: &Scalar) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let bad = || Error::Parse(format!("bad scalar '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Serde adapter for optional lists of sparse vectors, as `[[index, "num/den"], ...]`.
pub mod vecs_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<SparseVec>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let out: Option<Vec<Vec<(usize, String)>>> =
            v.as_ref().map(|vs| vs.iter().map(|x| x.iter().map(|(i, a)| (*i, scalar_to_string(a))).collect()).collect());
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<SparseVec>>, D::Error> {
        let raw: Option<Vec<Vec<(usize, String)>>> = Option::deserialize(d)?;
        raw.map(|vs| {
            vs.into_iter()
                .map(|x| x.into_iter().map(|(i, a)| parse_scalar(&a).map(|v| (i, v)).map_err(D::Error::custom)).collect())
                .collect()
        })
        .transpose()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

impl Serialize for SparseMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|((i, j), v)| (*i, *j, scalar_to_string(v))).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        let mut m = SparseMatrix::zeros(j.rows, j.cols);
        for (i, c, v) in j.entries {
            if i >= j.rows || c >= j.cols {
                return Err(D::Error::custom(format!("entry ({i},{c}) out of bounds")));
            }
            let v = parse_scalar(&v).map_err(D::Error::custom)?;
            m.add_to(i, c, &v);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::ring::ratio;

    #[test]
    fn json_roundtrip_keeps_fractions() {
        let mut m = SparseMatrix::zeros(2, 3);
        m.set(0, 2, ratio(-3, 4));
        m.set(1, 0, ratio(5, 1));
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":2,"cols":3,"entries":[[0,2,"-3/4"],[1,0,"5"]]}"#);
        let back: SparseMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_out_of_bounds_entries() {
        let s = r#"{"rows":1,"cols":1,"entries":[[1,0,"1"]]}"#;
        assert!(serde_json::from_str::<SparseMatrix>(s).is_err());
    }

    #[test]
    fn multiplication() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = SparseMatrix::from_dense(&[vec![1, -2], vec![0, 1]]);
        assert_eq!(a.mul(&b).unwrap(), SparseMatrix::identity(2));
    }
}

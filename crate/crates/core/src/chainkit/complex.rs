use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactring::homology::{cyclic_via_cone, homology_at, DENSE_WITNESS_LIMIT};
use crate::exactring::{CoefficientRing, FGModule, SparseMatrix};

/// Degreewise free chain complex `C_0 ← C_1 ← … ← C_N`.
///
/// `d[i]` is the matrix of `C_i → C_{i-1}`; `d[0]` is the `0 × dim C_0` zero map.
/// Homology is reliable in degrees `≤ N - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    pub ring: CoefficientRing,
    pub n: usize,
    pub basis: Vec<Vec<String>>,
    pub d: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Build from basis labels and differentials `d_1..d_N`.
    pub fn new(ring: CoefficientRing, basis: Vec<Vec<String>>, higher: Vec<SparseMatrix>) -> Result<Self> {
        let n = basis.len().checked_sub(1).ok_or_else(|| Error::Shape("complex needs degree 0".into()))?;
        if higher.len() != n {
            return Err(Error::Shape(format!("expected {n} differentials, got {}", higher.len())));
        }
        let mut d = vec![SparseMatrix::zeros(0, basis[0].len())];
        for (k, m) in higher.into_iter().enumerate() {
            let i = k + 1;
            if m.rows != basis[i - 1].len() || m.cols != basis[i].len() {
                return Err(Error::Shape(format!(
                    "d_{i} is {}x{}, expected {}x{}",
                    m.rows,
                    m.cols,
                    basis[i - 1].len(),
                    basis[i].len()
                )));
            }
            d.push(m);
        }
        Ok(ChainComplex { ring, n, basis, d })
    }

    /// Complex with all differentials zero.
    pub fn zero_differential(ring: CoefficientRing, basis: Vec<Vec<String>>) -> Self {
        let n = basis.len() - 1;
        let mut d = vec![SparseMatrix::zeros(0, basis[0].len())];
        for i in 1..=n {
            d.push(SparseMatrix::zeros(basis[i - 1].len(), basis[i].len()));
        }
        ChainComplex { ring, n, basis, d }
    }

    pub fn dim(&self, i: usize) -> usize {
        self.basis.get(i).map_or(0, |b| b.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    /// Degrees at which homology can be trusted.
    pub fn reliable(&self) -> usize {
        self.n.saturating_sub(1)
    }

    pub fn differential(&self, i: usize) -> Result<&SparseMatrix> {
        self.d.get(i).ok_or_else(|| Error::Truncation(format!("d_{i} is beyond the truncation N={}", self.n)))
    }

    /// Degrees `i` with `d_{i-1} d_i ≠ 0`. Empty means the complex is valid.
    pub fn verify(&self) -> Vec<usize> {
        (2..=self.n)
            .filter(|&i| match self.d[i - 1].mul(&self.d[i]) {
                Ok(c) => !c.is_zero_in(&self.ring),
                Err(_) => true,
            })
            .collect()
    }

    pub fn homology(&self, i: usize) -> Result<FGModule> {
        if i + 1 > self.n {
            return Err(Error::Truncation(format!(
                "H_{i} needs d_{} but the complex stops at N={}",
                i + 1,
                self.n
            )));
        }
        match &self.ring {
            CoefficientRing::CyclicRing(m) if self.dim(i) > DENSE_WITNESS_LIMIT => {
                let prev = if i == 0 {
                    SparseMatrix::zeros(0, 0)
                } else if i == 1 {
                    SparseMatrix::zeros(0, self.dim(0))
                } else {
                    self.d[i - 1].clone()
                };
                cyclic_via_cone(*m, &prev, &self.d[i], &self.d[i + 1])
            }
            ring => homology_at(ring, &self.d[i], &self.d[i + 1]),
        }
    }

    /// Homology in every reliable degree.
    pub fn homology_all(&self) -> Result<Vec<FGModule>> {
        (0..self.n).map(|i| self.homology(i)).collect()
    }

    /// Field dimensions of homology in every reliable degree.
    pub fn betti(&self) -> Result<Vec<usize>> {
        Ok(self.homology_all()?.iter().map(|h| h.num_generators()).collect())
    }

    /// Same complex with coefficients reinterpreted in another ring.
    pub fn with_ring(&self, ring: CoefficientRing) -> Result<Self> {
        let mut d = Vec::with_capacity(self.d.len());
        for m in &self.d {
            let mut out = SparseMatrix::zeros(m.rows, m.cols);
            for ((i, j), v) in m.entries() {
                let v = match &ring {
                    CoefficientRing::CyclicRing(_) => v.clone(),
                    r => r.try_normalize(v)?,
                };
                out.set(*i, *j, v);
            }
            d.push(out);
        }
        Ok(ChainComplex { ring, n: self.n, basis: self.basis.clone(), d })
    }

    /// Drop degrees above `n`.
    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.n);
        ChainComplex {
            ring: self.ring.clone(),
            n,
            basis: self.basis[..=n].to_vec(),
            d: self.d[..=n].to_vec(),
        }
    }

    pub fn euler_characteristic(&self, upto: usize) -> i64 {
        (0..=upto).map(|i| if i % 2 == 0 { self.dim(i) as i64 } else { -(self.dim(i) as i64) }).sum()
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    ring: String,
    #[serde(rename = "N")]
    n: usize,
    basis: BTreeMap<String, Vec<String>>,
    d: BTreeMap<String, SparseMatrix>,
}

impl Serialize for ChainComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson {
            ring: self.ring.to_string(),
            n: self.n,
            basis: self.basis.iter().enumerate().map(|(i, b)| (i.to_string(), b.clone())).collect(),
            d: self.d.iter().enumerate().skip(1).map(|(i, m)| (i.to_string(), m.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ComplexJson::deserialize(d)?;
        let ring: CoefficientRing = j.ring.parse().map_err(D::Error::custom)?;
        let mut basis = Vec::new();
        for i in 0..=j.n {
            basis.push(j.basis.get(&i.to_string()).cloned().unwrap_or_default());
        }
        let mut higher = Vec::new();
        for i in 1..=j.n {
            let m = match j.d.get(&i.to_string()) {
                Some(m) => m.clone(),
                None => SparseMatrix::zeros(basis[i - 1].len(), basis[i].len()),
            };
            higher.push(m);
        }
        ChainComplex::new(ring, basis, higher).map_err(D::Error::custom)
    }
}

/// Basis labels `prefix0..prefix{n-1}`.
pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_flags_bad_square() {
        let one = SparseMatrix::from_dense(&[vec![1]]);
        let c = ChainComplex::new(
            CoefficientRing::PrimeField(2),
            vec![labels("a", 1), labels("b", 1), labels("c", 1)],
            vec![one.clone(), one],
        )
        .unwrap();
        assert_eq!(c.verify(), vec![2]);
        let z = ChainComplex::zero_differential(CoefficientRing::Rationals, vec![labels("a", 2), labels("b", 1)]);
        assert!(z.verify().is_empty());
    }

    #[test]
    fn truncation_error() {
        let z = ChainComplex::zero_differential(CoefficientRing::Rationals, vec![labels("a", 1), labels("b", 1)]);
        assert!(z.homology(0).is_ok());
        assert!(matches!(z.homology(1), Err(Error::Truncation(_))));
    }

    #[test]
    fn json_roundtrip() {
        let c = ChainComplex::new(
            CoefficientRing::Integers,
            vec![labels("a", 1), labels("b", 1)],
            vec![SparseMatrix::from_dense(&[vec![2]])],
        )
        .unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: ChainComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::matrix::SparseVec;
use super::ring::CoefficientRing;

/// A finitely generated module `R^free ⊕ R/t_1 ⊕ … ⊕ R/t_k`.
///
/// Over `Z/m` the free summands are copies of `Z/m` itself and `torsion` lists
/// the proper cyclic summands `Z/d` with `d | m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FGModule {
    pub ring: CoefficientRing,
    #[serde(rename = "freeRank")]
    pub free_rank: usize,
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
    #[serde(rename = "witnessBasis", skip_serializing_if = "Option::is_none", default, with = "super::matrix::vecs_serde")]
    pub witnesses: Option<Vec<SparseVec>>,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

impl FGModule {
    pub fn zero(ring: &CoefficientRing) -> Self {
        FGModule { ring: ring.clone(), free_rank: 0, torsion: Vec::new(), witnesses: None }
    }

    pub fn free(ring: &CoefficientRing, rank: usize) -> Self {
        FGModule { ring: ring.clone(), free_rank: rank, torsion: Vec::new(), witnesses: None }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of cyclic summands. Over a field this is the dimension.
    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Isomorphism class comparison, ignoring witnesses.
    pub fn same_class(&self, other: &FGModule) -> bool {
        self.ring == other.ring && self.free_rank == other.free_rank && self.torsion == other.torsion
    }

    /// Dimension over `F_p` of `M ⊗ F_p` for a module over `Z` (or a prime
    /// field when `M` is already one).
    pub fn mod_p_dim(&self, p: u64) -> usize {
        let pb = BigInt::from(p);
        self.free_rank + self.torsion.iter().filter(|t| (*t % &pb) == BigInt::from(0)).count()
    }

    /// Dimension over `F_p` of `Tor_1(M, F_p)` = number of torsion summands divisible by p.
    pub fn p_torsion_count(&self, p: u64) -> usize {
        let pb = BigInt::from(p);
        self.torsion.iter().filter(|t| (*t % &pb) == BigInt::from(0)).count()
    }
}

impl fmt::Display for FGModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(self.ring.to_string()),
            r => parts.push(format!("{}^{}", self.ring, r)),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

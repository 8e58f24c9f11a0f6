//! Group homology of cyclic groups from the periodic resolution, and the
//! universal-coefficient prediction from integral homology. Both are independent
//! of the bar construction and serve as cross-checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::chainkit::complex::labels;
use crate::chainkit::ChainComplex;
use crate::error::{Error, Result};
use crate::exactring::{int, CoefficientRing, FGModule, SparseMatrix};

/// `k ⊗_{Z[C_q]}` of the periodic resolution: `k` in each degree, `d_odd = 0`, `d_even = q`.
pub fn cyclic_resolution(q: u64, ring: &CoefficientRing, top: usize) -> Result<ChainComplex> {
    let basis = (0..=top).map(|i| labels(&format!("e{i}_"), 1)).collect();
    let higher = (1..=top)
        .map(|i| {
            let mut m = SparseMatrix::zeros(1, 1);
            if i % 2 == 0 {
                m.set(0, 0, ring.normalize(&int(q as i64)));
            }
            m
        })
        .collect();
    ChainComplex::new(ring.clone(), basis, higher)
}

/// `H_i(Z/q; k)` for `i ≤ top`, computed from the periodic resolution.
pub fn cyclic_group_homology(q: u64, ring: &CoefficientRing, top: usize) -> Result<Vec<FGModule>> {
    if q < 2 {
        return Err(Error::Precondition(format!("cyclic group order {q} must be at least 2")));
    }
    let c = cyclic_resolution(q, ring, top + 1)?;
    (0..=top).map(|i| c.homology(i)).collect()
}

/// Closed form: `H_0 = k`, `H_odd = k/q`, `H_even = {x : qx = 0}`.
pub fn cyclic_group_homology_closed(q: u64, ring: &CoefficientRing, top: usize) -> Vec<FGModule> {
    let (quotient, kernel) = match ring {
        CoefficientRing::Rationals => (FGModule::zero(ring), FGModule::zero(ring)),
        CoefficientRing::Integers => (cyclic(ring, q), FGModule::zero(ring)),
        CoefficientRing::PrimeField(p) => {
            let m = if q.is_multiple_of(*p) { FGModule::free(ring, 1) } else { FGModule::zero(ring) };
            (m.clone(), m)
        }
        CoefficientRing::CyclicRing(m) => {
            let g = q.gcd(m);
            let module = if g == *m { FGModule::free(ring, 1) } else { cyclic(ring, g) };
            (module.clone(), module)
        }
        CoefficientRing::LocalizedIntegers(_) => (cyclic(ring, ring.strip_units(&BigInt::from(q)).to_u64().unwrap_or(1)), FGModule::zero(ring)),
    };
    (0..=top)
        .map(|i| match i {
            0 => FGModule::free(ring, 1),
            i if i % 2 == 1 => quotient.clone(),
            _ => kernel.clone(),
        })
        .collect()
}

fn cyclic(ring: &CoefficientRing, d: u64) -> FGModule {
    let mut m = FGModule::zero(ring);
    if d > 1 {
        m.torsion.push(BigInt::from(d));
    }
    m
}

/// `H_j(C; k)` predicted by `H_j(C) ⊗ k ⊕ Tor(H_{j-1}(C), k)` from integral homology,
/// for `k = F_p` or `Z/m`.
pub fn uct_prediction(integral: &[FGModule], ring: &CoefficientRing) -> Result<Vec<FGModule>> {
    let m: u64 = match ring {
        CoefficientRing::PrimeField(p) => *p,
        CoefficientRing::CyclicRing(m) => *m,
        other => return Err(Error::UnsupportedRing(format!("universal coefficients only for F_p and Z/m, not {other}"))),
    };
    let mb = BigInt::from(m);
    let mut out = Vec::with_capacity(integral.len());
    for (j, h) in integral.iter().enumerate() {
        let mut pieces: Vec<BigInt> = vec![mb.clone(); h.free_rank];
        pieces.extend(h.torsion.iter().map(|t| t.gcd(&mb)));
        if j > 0 {
            pieces.extend(integral[j - 1].torsion.iter().map(|t| t.gcd(&mb)));
        }
        let mut module = FGModule::zero(ring);
        for d in pieces {
            if d == mb {
                module.free_rank += 1;
            } else if !d.is_one() {
                module.torsion.push(d);
            }
        }
        module.torsion.sort();
        out.push(module);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub q: u64,
    pub ring: String,
    pub homology: Vec<FGModule>,
}

pub fn oracle_report(q: u64, ring: &CoefficientRing, top: usize) -> Result<OracleReport> {
    Ok(OracleReport { q, ring: ring.to_string(), homology: cyclic_group_homology(q, ring, top)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_matches_closed_form() {
        for ring in [
            CoefficientRing::Integers,
            CoefficientRing::Rationals,
            CoefficientRing::PrimeField(2),
            CoefficientRing::PrimeField(3),
            CoefficientRing::CyclicRing(4),
            CoefficientRing::localized([2]).unwrap(),
        ] {
            for q in [2, 3, 4, 6] {
                let a = cyclic_group_homology(q, &ring, 6).unwrap();
                let b = cyclic_group_homology_closed(q, &ring, 6);
                for (x, y) in a.iter().zip(&b) {
                    assert!(x.same_class(y), "Z/{q} over {ring}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn uct_for_z4() {
        let z = cyclic_group_homology(4, &CoefficientRing::Integers, 5).unwrap();
        let pred = uct_prediction(&z, &CoefficientRing::PrimeField(2)).unwrap();
        assert!(pred.iter().all(|m| m.free_rank == 1 && m.torsion.is_empty()));
        let pred = uct_prediction(&z, &CoefficientRing::CyclicRing(4)).unwrap();
        assert!(pred.iter().all(|m| m.free_rank == 1));
    }
}

#[cfg(test)]
mod bar_agreement {
    use super::*;
    use crate::barlab::dga::BasedDGA;
    use crate::barlab::group::FGAbGroup;

    #[test]
    fn bar_of_cyclic_groups() {
        for q in [2u64, 3, 4] {
            for ring in [CoefficientRing::Integers, CoefficientRing::CyclicRing(4), CoefficientRing::PrimeField(3)] {
                let b = BasedDGA::iterated_bar(&FGAbGroup::cyclic(q), &ring, 1, 6).unwrap().to_complex();
                let want = cyclic_group_homology_closed(q, &ring, 5);
                for (i, w) in want.iter().enumerate() {
                    assert!(b.homology(i).unwrap().same_class(w), "Z/{q} {ring} H_{i}");
                }
            }
        }
    }
}

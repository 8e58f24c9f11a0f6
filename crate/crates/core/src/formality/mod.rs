//! Formality morphisms for iterated bars of group algebras and the zig-zags they assemble into.

pub mod emap;
pub mod inclusions;
pub mod zigzag;

pub use emap::{e_map, e_word, BoundedEMap, EMapReport, PresentationCheck};
pub use inclusions::{divided_to_symmetric, i_gamma, i_lambda};
pub use zigzag::{formality_zigzag, ArrowReport, Direction, ZigZag, ZigZagReport};

use crate::barlab::FGAbGroup;
use crate::error::{Error, Result};
use crate::exactring::CoefficientRing;

/// Checks the e-map hypotheses and returns `dim(G, k)`: every torsion order of `G`
/// is a unit of `k`, and so is every integer up to the dimension.
pub fn check_hypotheses(group: &FGAbGroup, ring: &CoefficientRing) -> Result<usize> {
    if let Some(q) = group.torsion_obstructions(ring).first() {
        let p = ring.non_invertible_prime(*q).unwrap_or(*q);
        return Err(Error::Precondition(format!("{group} is not {ring}-torsion free: the order {q} is not invertible (prime {p})")));
    }
    let dim = group.dim_over(ring);
    for m in 2..=dim as u64 {
        if let Some(p) = ring.non_invertible_prime(m) {
            return Err(Error::Precondition(format!("{dim}! is not invertible in {ring}: prime {p}")));
        }
    }
    Ok(dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypotheses() {
        let z2: FGAbGroup = "Z^2".parse().unwrap();
        assert_eq!(check_hypotheses(&z2, &CoefficientRing::Rationals).unwrap(), 2);
        assert!(matches!(check_hypotheses(&z2, &CoefficientRing::Integers), Err(Error::Precondition(m)) if m.contains("prime 2")));
        assert_eq!(check_hypotheses(&z2, &CoefficientRing::localized([2]).unwrap()).unwrap(), 2);
        let c2 = FGAbGroup::cyclic(2);
        assert!(matches!(check_hypotheses(&c2, &CoefficientRing::PrimeField(2)), Err(Error::Precondition(m)) if m.contains("torsion")));
        assert_eq!(check_hypotheses(&c2, &CoefficientRing::PrimeField(3)).unwrap(), 0);
        let mixed: FGAbGroup = "Z x Z/3".parse().unwrap();
        assert_eq!(check_hypotheses(&mixed, &CoefficientRing::Integers).err().map(|e| e.exit_code()), Some(2));
        assert_eq!(check_hypotheses(&mixed, &CoefficientRing::localized([3]).unwrap()).unwrap(), 1);
    }
}

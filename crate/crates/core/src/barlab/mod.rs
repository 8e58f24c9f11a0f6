pub mod bar;
pub mod checks;
pub mod dga;
pub mod free;
pub mod group;
pub mod map;
pub mod oracle;
pub mod suspension;
pub mod symbolic;

pub use bar::LetterAlgebra;
pub use checks::StructureReport;
pub use dga::{BasedDGA, LinComb, Structure, Tensor};
pub use free::FreeKind;
pub use group::{FGAbGroup, GroupHom};
pub use map::{AlgebraMap, MapReport};

use crate::exactring::CoefficientRing;

/// Structure constants of group, free and bar algebras are small integers.
pub type Coeff = i64;

pub fn coeff_is_zero(ring: &CoefficientRing, c: Coeff) -> bool {
    match ring {
        CoefficientRing::PrimeField(p) | CoefficientRing::CyclicRing(p) => c % (*p as Coeff) == 0,
        _ => c == 0,
    }
}

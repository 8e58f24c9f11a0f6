//! Functors on the truncated category of free `Z/q`-modules, their Hom and Ext.

pub mod functor;
pub mod hom;
pub mod homology;
pub mod koszul;
pub mod obstruction;
pub mod site;

pub use functor::{FunctorRep, Mat, Variance};
pub use hom::{ext_from_resolution, ext_groups, ext_via_injectives, hom_space, is_natural, resolve, NatTrans, Resolution};
pub use homology::{budget, homology_functor, BarFamily};
pub use koszul::{divided_power, exterior_power, verschiebung, KoszulComplex};
pub use obstruction::{obstruction_report, ObstructionParams, ObstructionReport, Witness};
pub use site::{Morph, Site};

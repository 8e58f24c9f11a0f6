//! Homotopy colimits of diagrams of chain complexes over finite categories.

pub mod category;
pub mod diagram;
pub mod eml;
pub mod srep;

pub use category::{Arrow, Chain, FinCategory};
pub use diagram::{Diagram, ModuleFunctor};
pub use eml::{eml_diagram, DiagramSpec, Model};
pub use srep::{category_homology, e1_total_complex, hocolim_ss, simplicial_replacement, CollapseReport, Srep};

//! Chain complexes, chain maps, bicomplexes and their spectral sequences.

pub mod bicomplex;
pub mod complex;
pub mod map;
pub mod spectral;

pub use bicomplex::Bicomplex;
pub use complex::ChainComplex;
pub use map::{ChainMap, QuasiIsoReport};
pub use spectral::{pages_consistent, spectral_pages, SpectralPage};

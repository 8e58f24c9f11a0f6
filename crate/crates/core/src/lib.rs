pub mod error;
pub mod chainkit;
pub mod exactring;
pub mod barlab;
pub mod formality;
pub mod hocolim;
pub mod functorext;
pub mod cli;

pub use error::{Error, Result};

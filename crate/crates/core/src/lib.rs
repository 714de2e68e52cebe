pub mod bimodule_derivation;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod fock;
pub mod gaussian_dynamics;
pub mod group_rep;
pub mod wick;

pub use error::{Error, Result};

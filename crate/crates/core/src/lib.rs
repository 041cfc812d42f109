pub mod commands;
pub mod error;
pub mod fhs;
pub mod generator;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod mhs;
pub mod motive;
pub mod realize;
pub mod samples;
pub mod scalar;
pub mod suite;

pub use error::{Error, HodgeAxiom, Result};

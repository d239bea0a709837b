//! Root data, affine root systems, θ-subsystems and Hecke algebra parameters
//! for depth-zero Bernstein blocks, with a finite-group oracle for
//! q-parameters of principal series.

pub mod affine;
pub mod calc;
pub mod error;
pub mod finitegrp;
pub mod hecke;
pub mod lattice;
pub mod rational;
pub mod rootdata;
pub mod theta;

pub use error::{Error, Result};

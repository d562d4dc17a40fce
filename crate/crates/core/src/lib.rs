//! Adaptive variational imaginary time evolution on a dense state-vector
//! simulator, for Hermitian and transcorrelated (non-Hermitian) Hamiltonians.

pub mod cli;
pub mod engine;
pub mod error;
pub mod fermion;
pub mod pauli;
pub mod pool;
pub mod reference;
pub mod resources;
pub mod statevector;

pub use error::{Error, Result};

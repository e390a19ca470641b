//! Exact simulation of the full state vector of Fock-state boson sampling.
//!
//! An input Fock state is expanded as a finite superposition of generalized
//! (SU(M)) coherent states. The expansion is exact, the amplitudes are
//! constant under linear-optical evolution, and the parameter vectors evolve
//! by a single matrix product with the circuit unitary. On top of that
//! representation the crate provides:
//!
//! - permanents (naive, Ryser, Glynn) and boson-sampling amplitudes,
//! - bipartite entanglement: purity, integer-order Renyi entropies, and the
//!   von Neumann entropy from small Gram-coupled matrices,
//! - a brute-force Fock-space reference implementation for validation,
//! - seeded, reproducible experiment drivers with CSV/JSON output.

pub mod eigen;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod gcs;
pub mod numeric;
pub mod permanent;
pub mod unitary;

pub use error::{Error, Result};

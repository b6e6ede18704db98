//! Simulator for a single Cooper-pair-box charge qubit coupled to one cavity
//! mode.
//!
//! The crate evolves the joint qubit⊗field state two independent ways (an
//! analytic per-sector solution and an exact-diagonalization propagator),
//! quantifies the entanglement generated between the qubit and the field
//! (partial-transpose spectrum, negativity, Wootters concurrence,
//! populations), and runs the standard teleportation protocol over the
//! generated two-qubit channel.
//!
//! All public interfaces use the dimensionless scaled time `tau`; see
//! [`model::ModelParams`] for the unit conventions.

pub mod cli;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod model;
pub mod search;
pub mod teleport;
pub mod validate;

pub use error::{Result, SimError};
pub use model::{DensityOperator, HilbertSpace, ModelParams, QubitLevel, StateVector};

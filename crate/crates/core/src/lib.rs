//! Circuit synthesis for particle-number-conserving multiconfigurational
//! states, with an exact statevector oracle and the moment, phase-estimation
//! and excited-state routines that consume the prepared states.
//!
//! Bit strings follow one convention throughout: the leftmost character is
//! qubit 0, and qubit 0 is the most significant bit of a basis-state index.

pub mod algorithms;
pub mod circuit;
pub mod config;
pub mod error;
pub mod givens;
pub mod io;
pub mod pauli;
pub mod prep;
pub mod sim;
pub mod ssp;

pub use circuit::{Angle, Circuit, Gate, GateKind, GateSet};
pub use config::{OnConfig, StateSpec};
pub use error::{Error, Result};
pub use pauli::{PauliSum, PauliWord};
pub use prep::PrepMethod;
pub use sim::StateVector;

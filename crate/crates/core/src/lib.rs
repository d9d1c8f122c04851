//! Collapse-free simulation of quantum teleportation.
//!
//! The Bell-state measurement is modelled as a premeasurement unitary that
//! entangles a four-state probe with the sender's two qubits, and the
//! classical feed-forward as a second unitary on probe and receiver. All
//! reported quantities (reduced states, fidelities, the coincidence
//! expectation) come from partial traces of the pure total state.
//!
//! * [`tensor`]: dense complex linear algebra on small tensor products.
//! * [`protocol`]: the protocol objects and a single end-to-end run.
//! * [`experiments`]: θ sweeps, randomized trials and per-run checks.

pub mod error;
pub mod experiments;
pub mod protocol;
pub mod tensor;

pub use error::{Error, Result};

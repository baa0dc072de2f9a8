//! Exact simulation of remote entanglement distribution by entanglement
//! swapping.
//!
//! The crate covers four layers:
//!
//! * [`quantum`]: pure bipartite states, density matrices, Schmidt
//!   decomposition, projective measurement on multi-party tensors.
//! * [`measures`]: concurrence, teleportation fidelity (pure and Bloch form) and
//!   dense-coding capacity.
//! * [`swap`]: measurement bases, single and chained swaps, and checkers for the
//!   concurrence, fidelity and capacity relations between resources and the
//!   swapped state.
//! * [`network`]: a network of entangled links, route selection and exact
//!   end-to-end simulation of the chosen path.
//!
//! All numerics are generic over [`Real`]; the aliases below fix the
//! double-precision instantiation used by the CLI and the test suites.

pub mod error;
pub mod linalg;
pub mod measures;
pub mod network;
pub mod quantum;
pub mod random;
pub mod scalar;
pub mod suite;
pub mod swap;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

pub type CMatrix64 = linalg::CMatrix<f64>;
pub type State = quantum::PureBipartiteState<f64>;
pub type State32 = quantum::PureBipartiteState<f32>;
pub type Density = quantum::DensityMatrix<f64>;
pub type Schmidt = quantum::SchmidtForm<f64>;
pub type Outcome = swap::SwapOutcome<f64>;
pub type Basis = swap::MeasurementBasis<f64>;
pub type Network = network::NetworkGraph<f64>;

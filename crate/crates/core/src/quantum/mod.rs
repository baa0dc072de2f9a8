//! Pure bipartite states, multi-party tensors, density matrices and the
//! Schmidt decomposition.

mod density;
mod joint;
mod schmidt;
mod state;

pub use density::{partial_trace, shannon_entropy, von_neumann_entropy, DensityMatrix, Subsystem};
pub use joint::{project_measurement, tensor, JointState, Projection};
pub use schmidt::{schmidt_decompose, SchmidtForm};
pub use state::PureBipartiteState;

pub(crate) use state::root_of_unity;

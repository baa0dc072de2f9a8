//! Measurement bases, single and chained entanglement swaps, and the relation
//! checkers built on top of them.

mod basis;
mod chain;
mod single;
mod verify;

pub use basis::{closed_form_amplitudes, gram_matrix, GeneralQubitBasis, MeasurementBasis, QuditBellBasis};
pub use chain::{
    chain_swap_sequential, chain_swap_sequential_with_bases, chain_swap_simultaneous,
    chain_swap_simultaneous_with_bases, closed_form_chain,
};
pub use single::{canonicalize_local, swap_once, SwapOutcome};
pub use verify::{
    case_tolerance, classify_capacity_case, entropy_of_swapped, k_term, probability_defect,
    verify_chain_fidelity_relation, verify_qubit_relation, verify_qudit_relation, verify_swap_fidelity_relation,
    CapacityCase, CapacityCaseReport, CapacityOutcome, QuditRelationReport, Relation, RelationReport, ResidualEntry,
};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::measures::concurrence;
use crate::quantum::{project_measurement, schmidt_decompose, tensor, PureBipartiteState, SchmidtForm};
use crate::scalar::Real;
use crate::swap::basis::{closed_form_amplitudes, MeasurementBasis};

/// One measurement record of a swap or a chain of swaps.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapOutcome<T> {
    /// `(r, h)` per measured node, in chain order.
    pub outcome_indices: Vec<(usize, usize)>,
    pub probability: T,
    /// Normalized state between the end nodes; `None` for impossible outcomes.
    pub state: Option<PureBipartiteState<T>>,
    /// Closed-form normalization of the swapped state (`M_rh`, `N_rh`, or the
    /// chain's `M_{r₁h₁…r_gh_g}`).
    pub normalization: T,
}

impl<T: Real> SwapOutcome<T> {
    pub fn is_possible(&self) -> bool {
        self.state.is_some()
    }

    /// Concurrence of the end-to-end state, `None` for impossible outcomes.
    pub fn concurrence(&self) -> Option<T> {
        self.state.as_ref().map(concurrence)
    }
}

/// Swaps `s12` and `s23` by measuring their shared node in `basis`.
///
/// Each outcome's state comes from projecting the four-party product state;
/// the normalization comes from the closed-form amplitudes. The two are
/// independent routes to the same numbers.
pub fn swap_once<T: Real>(
    s12: &PureBipartiteState<T>,
    s23: &PureBipartiteState<T>,
    basis: &MeasurementBasis<T>,
) -> Result<Vec<SwapOutcome<T>>> {
    let d = basis.dim();
    if s12.dim_right() != d || s23.dim_left() != d {
        return Err(Error::DimensionMismatch(format!(
            "node-2 subsystems have dimensions {} and {}, basis measures {d}",
            s12.dim_right(),
            s23.dim_left()
        )));
    }
    let joint = tensor(s12, s23);
    basis
        .outcomes()
        .into_iter()
        .map(|(r, h)| {
            let proj = project_measurement(&joint, basis.vector(r, h), (1, 2))?;
            let normalization = closed_form_amplitudes(s12, s23, basis, r, h)?.norm_sqr();
            Ok(SwapOutcome {
                outcome_indices: vec![(r, h)],
                probability: proj.probability,
                state: proj.residual,
                normalization,
            })
        })
        .collect()
}

/// Schmidt form of `s` together with its Schmidt-diagonal representative
/// `Σ_k λ_k |kk⟩`, which local unitaries map back onto `s`.
pub fn canonicalize_local<T: Real>(s: &PureBipartiteState<T>) -> (SchmidtForm<T>, PureBipartiteState<T>) {
    let sf = schmidt_decompose(s);
    let diag = CMatrix::from_diagonal(s.dim_left(), s.dim_right(), sf.coeffs());
    let diagonal = PureBipartiteState::normalized(diag).expect("Schmidt spectrum is normalized");
    (sf, diagonal)
}

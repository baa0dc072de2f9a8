use crate::error::{Error, Result};
use crate::linalg::{svd, CMatrix};
use crate::quantum::density::shannon_entropy;
use crate::quantum::PureBipartiteState;
use crate::scalar::Real;

/// Schmidt form `Σ_k λ_k |u_k⟩|w_k⟩` of a pure bipartite state.
///
/// Coefficients are non-negative and sorted descending; all phases live in the
/// local unitaries, whose columns are the Schmidt vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtForm<T> {
    coeffs: Vec<T>,
    left_unitary: CMatrix<T>,
    right_unitary: CMatrix<T>,
}

impl<T: Real> SchmidtForm<T> {
    /// Schmidt form of the diagonal state `Σ_i λ_i |ii⟩`, identity rotations.
    ///
    /// The spectrum is sorted descending; it must be non-negative and satisfy
    /// `Σ λ² = 1` within [`Real::norm_tol`].
    pub fn from_coeffs(coeffs: &[T]) -> Result<Self> {
        let d = coeffs.len();
        if d < 2 {
            return Err(Error::InvalidParameter("need at least two Schmidt coefficients".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite() || *c < T::zero()) {
            return Err(Error::InvalidParameter(
                "Schmidt coefficients must be finite and non-negative".into(),
            ));
        }
        let norm: T = coeffs.iter().map(|c| *c * *c).sum();
        if (norm - T::one()).abs() > T::norm_tol() {
            return Err(Error::NotNormalized {
                norm_sqr: norm.to_f64_lossy(),
            });
        }
        let mut sorted = coeffs.to_vec();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Ok(Self {
            coeffs: sorted,
            left_unitary: CMatrix::identity(d),
            right_unitary: CMatrix::identity(d),
        })
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn left_unitary(&self) -> &CMatrix<T> {
        &self.left_unitary
    }

    pub fn right_unitary(&self) -> &CMatrix<T> {
        &self.right_unitary
    }

    /// Number of Schmidt coefficients (`min(d_A, d_B)`).
    pub fn rank_bound(&self) -> usize {
        self.coeffs.len()
    }

    /// Squared coefficients, the spectrum of either reduced state.
    pub fn probabilities(&self) -> Vec<T> {
        self.coeffs.iter().map(|c| *c * *c).collect()
    }

    /// `left · diag(λ) · rightᵀ`, the amplitude matrix this form describes.
    pub fn reconstruct(&self) -> CMatrix<T> {
        let sigma = CMatrix::from_diagonal(self.left_unitary.rows(), self.right_unitary.rows(), &self.coeffs);
        self.left_unitary.matmul(&sigma).matmul(&self.right_unitary.transpose())
    }

    /// The Schmidt-diagonal representative `Σ_k λ_k |kk⟩`.
    pub fn diagonal_state(&self) -> PureBipartiteState<T> {
        let k = self.coeffs.len();
        PureBipartiteState::normalized(CMatrix::from_diagonal(k, k, &self.coeffs))
            .expect("Schmidt spectrum is normalized")
    }

    /// Entanglement entropy in bits.
    pub fn entanglement_entropy(&self) -> T {
        shannon_entropy(&self.probabilities())
    }

    /// Whether every coefficient equals `1/√k` within `tol`.
    pub fn is_maximally_entangled(&self, tol: T) -> bool {
        let target = T::one() / T::from_usize(self.coeffs.len()).sqrt();
        self.coeffs.iter().all(|c| (*c - target).abs() <= tol)
    }
}

/// Schmidt decomposition via the singular value decomposition of the amplitude
/// matrix: with `amp = U Σ Vᴴ`, the right Schmidt vectors are the columns of
/// `conj(V)`.
pub fn schmidt_decompose<T: Real>(s: &PureBipartiteState<T>) -> SchmidtForm<T> {
    let dec = svd(s.amp());
    SchmidtForm {
        coeffs: dec.singular_values,
        left_unitary: dec.u,
        right_unitary: dec.v.conj(),
    }
}

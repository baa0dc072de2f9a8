use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::Real;

/// Normalized pure state on `H_{d_A} ⊗ H_{d_B}`.
///
/// `amp[(i, j)]` is the coefficient of `|i⟩|j⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureBipartiteState<T> {
    amp: CMatrix<T>,
}

impl<T: Real> PureBipartiteState<T> {
    /// Wraps an amplitude matrix, rejecting it unless it is normalized to within
    /// [`Real::norm_tol`].
    pub fn new(amp: CMatrix<T>) -> Result<Self> {
        check_dims(&amp)?;
        let n = amp.norm_sqr();
        if !n.is_finite() || (n - T::one()).abs() > T::norm_tol() {
            return Err(Error::NotNormalized {
                norm_sqr: n.to_f64_lossy(),
            });
        }
        Ok(Self { amp })
    }

    /// Rescales an arbitrary non-zero amplitude matrix to unit norm.
    pub fn normalized(amp: CMatrix<T>) -> Result<Self> {
        check_dims(&amp)?;
        let n = amp.norm_sqr();
        if !n.is_finite() || n <= T::min_positive_value() {
            return Err(Error::NotNormalizable);
        }
        Ok(Self {
            amp: amp.scale_real(T::one() / n.sqrt()),
        })
    }

    /// `Σ_i coeffs[i] |ii⟩` on a `k ⊗ k` space, `k = coeffs.len()`.
    pub fn diagonal(coeffs: &[T]) -> Result<Self> {
        let k = coeffs.len();
        Self::new(CMatrix::from_diagonal(k, k, coeffs))
    }

    /// Computational basis state `|i⟩|j⟩`.
    pub fn product(dim_left: usize, dim_right: usize, i: usize, j: usize) -> Result<Self> {
        if i >= dim_left || j >= dim_right {
            return Err(Error::InvalidParameter(format!(
                "basis index ({i}, {j}) outside {dim_left}x{dim_right}"
            )));
        }
        let mut amp = CMatrix::zeros(dim_left, dim_right);
        amp[(i, j)] = Complex::one();
        Self::new(amp)
    }

    /// `(1/√d) Σ_i |ii⟩`.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        let w = T::one() / T::from_usize(d).sqrt();
        Self::diagonal(&vec![w; d])
    }

    /// `|Φ⁺⟩ = (|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        Self::maximally_entangled(2).expect("Bell state is normalized")
    }

    #[inline]
    pub fn dim_left(&self) -> usize {
        self.amp.rows()
    }

    #[inline]
    pub fn dim_right(&self) -> usize {
        self.amp.cols()
    }

    /// Local dimension when both sides agree.
    pub fn local_dim(&self) -> Option<usize> {
        (self.dim_left() == self.dim_right()).then_some(self.dim_left())
    }

    #[inline]
    pub fn amp(&self) -> &CMatrix<T> {
        &self.amp
    }

    pub fn into_amp(self) -> CMatrix<T> {
        self.amp
    }

    /// Same state with the two parties exchanged.
    pub fn swapped_parties(&self) -> Self {
        Self {
            amp: self.amp.transpose(),
        }
    }

    /// `(U ⊗ V)|ψ⟩`, i.e. `amp → U · amp · Vᵀ`.
    pub fn apply_local(&self, left: &CMatrix<T>, right: &CMatrix<T>) -> Result<Self> {
        if left.rows() != self.dim_left()
            || left.cols() != self.dim_left()
            || right.rows() != self.dim_right()
            || right.cols() != self.dim_right()
        {
            return Err(Error::DimensionMismatch(
                "local operators must match the party dimensions".into(),
            ));
        }
        Self::normalized(left.matmul(&self.amp).matmul(&right.transpose()))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim_left() != other.dim_left() || self.dim_right() != other.dim_right() {
            return Err(Error::DimensionMismatch("inner product of different shapes".into()));
        }
        Ok(self.amp.iter().zip(other.amp.iter()).map(|(a, b)| a.conj() * *b).sum())
    }

    /// `|⟨self|other⟩|`, equal to 1 exactly when the states agree up to a global phase.
    pub fn overlap(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm())
    }

    /// Flattened amplitude vector, index `i * d_B + j`.
    pub fn to_vector(&self) -> Vec<Complex<T>> {
        self.amp.as_slice().to_vec()
    }

    pub fn is_product(&self) -> bool {
        let sf = crate::quantum::schmidt_decompose(self);
        sf.coeffs().iter().skip(1).all(|&c| c <= T::prob_floor().sqrt())
    }
}

fn check_dims<T: Real>(amp: &CMatrix<T>) -> Result<()> {
    if amp.rows() < 2 || amp.cols() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "party dimensions must be at least 2, got {}x{}",
            amp.rows(),
            amp.cols()
        )));
    }
    if amp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NotNormalizable);
    }
    Ok(())
}

/// Complex unit `e^{iθ}`.
pub(crate) fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `e^{2πi k/d}` with the quarter-turn cases returned exactly.
pub(crate) fn root_of_unity<T: Real>(k: usize, d: usize) -> Complex<T> {
    let k = k % d;
    if k == 0 {
        return Complex::one();
    }
    if 2 * k == d {
        return Complex::new(-T::one(), T::zero());
    }
    if 4 * k == d {
        return Complex::new(T::zero(), T::one());
    }
    if 4 * k == 3 * d {
        return Complex::new(T::zero(), -T::one());
    }
    cis(T::TAU() * T::from_usize(k) / T::from_usize(d))
}

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::quantum::PureBipartiteState;
use crate::scalar::Real;

/// Which factor of `A ⊗ B` survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Unit-trace, Hermitian, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    rho: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates trace, Hermiticity and positivity.
    pub fn new(rho: CMatrix<T>) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::NonPhysical(format!(
                "density matrix must be square, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let tr = rho.trace();
        if (tr.re - T::one()).abs() > T::norm_tol() || tr.im.abs() > T::norm_tol() {
            return Err(Error::NonPhysical(format!("trace {} + {}i", tr.re, tr.im)));
        }
        let defect = rho.hermitian_defect();
        if defect > T::norm_tol() {
            return Err(Error::NonPhysical(format!("not Hermitian (defect {defect})")));
        }
        let min = hermitian_eigenvalues(&rho).last().copied().unwrap_or_else(T::zero);
        if min < -T::psd_tol() {
            return Err(Error::NonPhysical(format!("negative eigenvalue {min}")));
        }
        Ok(Self { rho })
    }

    /// `|ψ⟩⟨ψ|` on the `d_A·d_B` dimensional joint space.
    pub fn from_pure(s: &PureBipartiteState<T>) -> Self {
        let v = s.to_vector();
        let rho = CMatrix::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj());
        Self { rho }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let w = T::one() / T::from_usize(dim);
        Self {
            rho: CMatrix::from_diagonal(dim, dim, &vec![w; dim]),
        }
    }

    /// Convex combination `p·self + (1−p)·other`.
    pub fn mix(&self, p: T, other: &Self) -> Result<Self> {
        if !(T::zero()..=T::one()).contains(&p) {
            return Err(Error::InvalidParameter(format!("mixing weight {p} outside [0, 1]")));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("mixing matrices of different size".into()));
        }
        Ok(Self {
            rho: self.rho.scale_real(p).add(&other.rho.scale_real(T::one() - p)),
        })
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.rho
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.rho)
    }

    /// Reduced state on the kept factor of `A ⊗ B`.
    pub fn partial_trace(&self, dim_a: usize, dim_b: usize, keep: Subsystem) -> Result<Self> {
        if dim_a * dim_b != self.dim() || dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{}-dimensional matrix does not factor as {dim_a}x{dim_b}",
                self.dim()
            )));
        }
        let rho = &self.rho;
        let out = match keep {
            Subsystem::B => CMatrix::from_fn(dim_b, dim_b, |j, l| {
                (0..dim_a).fold(Complex::zero(), |acc, i| acc + rho[(i * dim_b + j, i * dim_b + l)])
            }),
            Subsystem::A => CMatrix::from_fn(dim_a, dim_a, |i, k| {
                (0..dim_b).fold(Complex::zero(), |acc, j| acc + rho[(i * dim_b + j, k * dim_b + j)])
            }),
        };
        Ok(Self { rho: out })
    }

    /// `−Σ e log₂ e` over the spectrum, with eigenvalues under
    /// [`Real::eig_clamp`] treated as zero.
    pub fn von_neumann_entropy(&self) -> T {
        shannon_entropy(&self.eigenvalues())
    }
}

/// Shannon entropy in bits of a (possibly slightly perturbed) distribution;
/// entries below [`Real::eig_clamp`] contribute nothing.
pub fn shannon_entropy<T: Real>(probs: &[T]) -> T {
    probs
        .iter()
        .filter(|&&p| p > T::eig_clamp())
        .map(|&p| -p * p.log2())
        .sum::<T>()
        .max(T::zero())
}

/// Free-function form of [`DensityMatrix::partial_trace`].
pub fn partial_trace<T: Real>(
    rho: &DensityMatrix<T>,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<DensityMatrix<T>> {
    rho.partial_trace(dim_a, dim_b, keep)
}

/// Free-function form of [`DensityMatrix::von_neumann_entropy`].
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.von_neumann_entropy()
}

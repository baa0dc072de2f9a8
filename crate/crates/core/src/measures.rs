//! Entanglement and capacity functionals.
//!
//! Capacities are in bits (base-2 logarithms throughout).

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::quantum::{schmidt_decompose, DensityMatrix, PureBipartiteState, SchmidtForm, Subsystem};
use crate::scalar::Real;

/// Two-qubit pure-state concurrence `2|det(amp)|`.
///
/// `|det|` is invariant under local unitaries, so this equals `2λ₀λ₁` without
/// computing the Schmidt form.
pub fn concurrence_two_qubit<T: Real>(s: &PureBipartiteState<T>) -> Result<T> {
    if s.dim_left() != 2 || s.dim_right() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two-qubit concurrence needs a 2x2 state, got {}x{}",
            s.dim_left(),
            s.dim_right()
        )));
    }
    Ok((T::lit(2.0) * s.amp().det2().norm()).min(T::one()))
}

/// `C = sqrt( 2d/(d−1) · Σ_{i<j} λ_i² λ_j² )`.
///
/// Panics if `d < 2`.
pub fn concurrence_qudit<T: Real>(sf: &SchmidtForm<T>, d: usize) -> T {
    assert!(d >= 2, "concurrence needs d >= 2");
    let p = sf.probabilities();
    let mut pairs = T::zero();
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            pairs += p[i] * p[j];
        }
    }
    (prefactor::<T>(d) * pairs).max(T::zero()).sqrt()
}

/// Concurrence when only `λ_i` and `λ_j` are kept: `sqrt(2d/(d−1)) · λ_i λ_j`.
pub fn sub_concurrence<T: Real>(sf: &SchmidtForm<T>, i: usize, j: usize, d: usize) -> Result<T> {
    if i >= j {
        return Err(Error::InvalidParameter(format!(
            "sub-concurrence needs i < j, got ({i}, {j})"
        )));
    }
    if j >= sf.rank_bound() {
        return Err(Error::InvalidParameter(format!(
            "index {j} outside a spectrum of length {}",
            sf.rank_bound()
        )));
    }
    if d < 2 {
        return Err(Error::InvalidParameter("d must be at least 2".into()));
    }
    let c = sf.coeffs();
    Ok(prefactor::<T>(d).sqrt() * c[i] * c[j])
}

fn prefactor<T: Real>(d: usize) -> T {
    let d = T::from_usize(d);
    (d + d) / (d - T::one())
}

/// Concurrence of an arbitrary pure state: the determinant formula for qubits,
/// the Schmidt-spectrum formula otherwise (with `d = min(d_A, d_B)`).
pub fn concurrence<T: Real>(s: &PureBipartiteState<T>) -> T {
    if s.dim_left() == 2 && s.dim_right() == 2 {
        return concurrence_two_qubit(s).expect("checked dimensions");
    }
    let sf = schmidt_decompose(s);
    concurrence_qudit(&sf, s.dim_left().min(s.dim_right()))
}

/// Pure-resource teleportation fidelity `(2 + C)/3`.
pub fn teleportation_fidelity_pure<T: Real>(concurrence: T) -> T {
    (T::lit(2.0) + concurrence) / T::lit(3.0)
}

/// Local Bloch vectors and correlation matrix of a two-qubit state:
/// `r_i = Tr[ρ σ_i⊗I]`, `s_i = Tr[ρ I⊗σ_i]`, `t_ij = Tr[ρ σ_i⊗σ_j]`, Paulis in
/// the order (x, y, z).
#[derive(Clone, Debug, PartialEq)]
pub struct BlochForm<T> {
    pub r: [T; 3],
    pub s: [T; 3],
    pub t: [[T; 3]; 3],
}

/// Pauli matrices `σ_x`, `σ_y`, `σ_z`.
pub fn paulis<T: Real>() -> [CMatrix<T>; 3] {
    let z = Complex::zero();
    let one = Complex::one();
    let i = Complex::i();
    [
        CMatrix::from_row_major(2, 2, vec![z, one, one, z]),
        CMatrix::from_row_major(2, 2, vec![z, -i, i, z]),
        CMatrix::from_row_major(2, 2, vec![one, z, z, -one]),
    ]
}

impl<T: Real> BlochForm<T> {
    pub fn from_density(rho: &DensityMatrix<T>) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "Bloch form needs a two-qubit state, got dimension {}",
                rho.dim()
            )));
        }
        let p = paulis::<T>();
        let id = CMatrix::identity(2);
        let expect = |op: CMatrix<T>| rho.matrix().matmul(&op).trace().re;
        let r = [0, 1, 2].map(|i| expect(p[i].kron(&id)));
        let s = [0, 1, 2].map(|i| expect(id.kron(&p[i])));
        let t = [0, 1, 2].map(|i| [0, 1, 2].map(|j| expect(p[i].kron(&p[j]))));
        Ok(Self { r, s, t })
    }

    /// Eigenvalues of `U = TᵀT`, descending.
    pub fn correlation_eigenvalues(&self) -> Vec<T> {
        let u = CMatrix::from_fn(3, 3, |i, j| {
            let v: T = (0..3).map(|k| self.t[k][i] * self.t[k][j]).sum();
            Complex::new(v, T::zero())
        });
        hermitian_eigenvalues(&u)
    }

    /// `F = ½ [1 + ⅓ Σ_i √u_i]`.
    pub fn teleportation_fidelity(&self) -> T {
        let sum: T = self
            .correlation_eigenvalues()
            .into_iter()
            .map(|u| u.max(T::zero()).sqrt())
            .sum();
        T::lit(0.5) * (T::one() + sum / T::lit(3.0))
    }
}

/// Teleportation fidelity of a two-qubit (possibly mixed) resource from its
/// correlation matrix.
pub fn teleportation_fidelity_mixed<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    // revalidate: matrices built through `mix` or `from_pure` skip the checks
    let checked = DensityMatrix::new(rho.matrix().clone())?;
    Ok(BlochForm::from_density(&checked)?.teleportation_fidelity())
}

/// `log₂d + S(ρ_B) − S(ρ_AB)` for a state on `H_d ⊗ H_d`, floored at the
/// classical `log₂d` that sending the qudit alone always achieves.
pub fn dense_coding_capacity_mixed<T: Real>(rho_ab: &DensityMatrix<T>, d: usize) -> Result<T> {
    if d < 2 || d * d != rho_ab.dim() {
        return Err(Error::DimensionMismatch(format!(
            "a {}-dimensional matrix is not a state on H_{d} ⊗ H_{d}",
            rho_ab.dim()
        )));
    }
    let rho_b = rho_ab.partial_trace(d, d, Subsystem::B)?;
    let classical = T::from_usize(d).log2();
    Ok(classical.max(classical + rho_b.von_neumann_entropy() - rho_ab.von_neumann_entropy()))
}

/// `log₂d + E(ψ)` for a pure state on `H_d ⊗ H_d`, with `E` the entanglement entropy.
pub fn dense_coding_capacity_pure<T: Real>(s: &PureBipartiteState<T>) -> Result<T> {
    let d = s.local_dim().ok_or_else(|| {
        Error::DimensionMismatch(format!(
            "dense coding capacity needs equal local dimensions, got {}x{}",
            s.dim_left(),
            s.dim_right()
        ))
    })?;
    Ok(capacity_from_schmidt(&schmidt_decompose(s), d))
}

/// `log₂d + H(λ²)` directly from a Schmidt spectrum.
pub fn capacity_from_schmidt<T: Real>(sf: &SchmidtForm<T>, d: usize) -> T {
    T::from_usize(d).log2() + sf.entanglement_entropy()
}

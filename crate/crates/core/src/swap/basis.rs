use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quantum::{root_of_unity, PureBipartiteState};
use crate::scalar::Real;

/// Non-maximally entangled two-qubit basis
/// `|φ_G^{rh}⟩ = B_rh^{-1/2} Σ_t (−1)^{rt} R_t^{rh} |t⟩|t⊕h⟩`.
///
/// `R_t^{rh}` is `n` at `(r,h,t) ∈ {(0,0,1), (1,0,0)}`, `m` at
/// `(r,h,t) ∈ {(0,1,1), (1,1,0)}` and 1 elsewhere. The four vectors are
/// orthonormal only for real parameters, so `n` and `m` are restricted to
/// `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralQubitBasis<T> {
    n: T,
    m: T,
    vectors: Vec<PureBipartiteState<T>>,
}

impl<T: Real> GeneralQubitBasis<T> {
    pub fn new(n: T, m: T) -> Result<Self> {
        for (name, v) in [("n", n), ("m", m)] {
            if !v.is_finite() || v < T::zero() || v > T::one() {
                return Err(Error::InvalidParameter(format!(
                    "entangling parameter {name} = {v} must be real and in [0, 1]"
                )));
            }
        }
        let mut vectors = Vec::with_capacity(4);
        for r in 0..2 {
            for h in 0..2 {
                let mut amp = CMatrix::zeros(2, 2);
                let norm = b_factor(n, m, r, h).sqrt();
                for t in 0..2 {
                    let sign = if r * t == 1 { -T::one() } else { T::one() };
                    amp[(t, t ^ h)] = Complex::new(sign * r_coeff(n, m, r, h, t) / norm, T::zero());
                }
                vectors.push(PureBipartiteState::new(amp)?);
            }
        }
        Ok(Self { n, m, vectors })
    }

    pub fn n(&self) -> T {
        self.n
    }

    pub fn m(&self) -> T {
        self.m
    }

    pub fn vector(&self, r: usize, h: usize) -> &PureBipartiteState<T> {
        &self.vectors[2 * r + h]
    }

    /// `R_j^{rh}`.
    pub fn r_coeff(&self, r: usize, h: usize, j: usize) -> T {
        r_coeff(self.n, self.m, r, h, j)
    }

    /// `F_rh`: `n` for `h = 0`, `m` for `h = 1`. Equals `|R_0^{rh} R_1^{rh}|`.
    pub fn f_coeff(&self, _r: usize, h: usize) -> T {
        if h == 0 {
            self.n
        } else {
            self.m
        }
    }

    /// `B_rh = Σ_t (R_t^{rh})²`.
    pub fn b_factor(&self, r: usize, h: usize) -> T {
        b_factor(self.n, self.m, r, h)
    }

    /// False when some basis vector is a product state (`n = 0` or `m = 0`);
    /// those outcomes can never leave the end nodes entangled.
    pub fn is_entangling(&self) -> bool {
        self.n > T::zero() && self.m > T::zero()
    }
}

fn r_coeff<T: Real>(n: T, m: T, r: usize, h: usize, j: usize) -> T {
    match (r, h, j) {
        (0, 0, 1) | (1, 0, 0) => n,
        (0, 1, 1) | (1, 1, 0) => m,
        _ => T::one(),
    }
}

fn b_factor<T: Real>(n: T, m: T, r: usize, h: usize) -> T {
    (0..2).map(|t| r_coeff(n, m, r, h, t).powi(2)).sum()
}

/// Generalized Bell basis `|φ^{rh}⟩ = d^{-1/2} Σ_t ω^{rt} |t⟩|t⊕h⟩`, `ω = e^{2πi/d}`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuditBellBasis<T> {
    d: usize,
    vectors: Vec<PureBipartiteState<T>>,
}

impl<T: Real> QuditBellBasis<T> {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!("Bell basis needs d >= 2, got {d}")));
        }
        let w = T::one() / T::from_usize(d).sqrt();
        let mut vectors = Vec::with_capacity(d * d);
        for r in 0..d {
            for h in 0..d {
                let mut amp = CMatrix::zeros(d, d);
                for t in 0..d {
                    amp[(t, (t + h) % d)] = root_of_unity::<T>(r * t, d) * w;
                }
                vectors.push(PureBipartiteState::normalized(amp)?);
            }
        }
        Ok(Self { d, vectors })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn vector(&self, r: usize, h: usize) -> &PureBipartiteState<T> {
        &self.vectors[r * self.d + h]
    }

    /// Coefficients of `|i⟩|j⟩` in this basis:
    /// `|i,j⟩ = d^{-1/2} Σ_r ω^{−ri} |φ^{r, j⊖i}⟩`.
    pub fn product_expansion(&self, i: usize, j: usize) -> Vec<((usize, usize), Complex<T>)> {
        let d = self.d;
        let h = (j + d - i % d) % d;
        let w = T::one() / T::from_usize(d).sqrt();
        (0..d)
            .map(|r| ((r, h), root_of_unity::<T>(r * i, d).conj() * w))
            .collect()
    }
}

/// A complete projective measurement on two equal-dimension subsystems,
/// indexed by `(r, h)`.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasurementBasis<T> {
    GeneralQubit(GeneralQubitBasis<T>),
    QuditBell(QuditBellBasis<T>),
}

impl<T: Real> MeasurementBasis<T> {
    /// General two-qubit basis with entangling parameters `n`, `m`.
    pub fn general(n: T, m: T) -> Result<Self> {
        GeneralQubitBasis::new(n, m).map(Self::GeneralQubit)
    }

    pub fn bell(d: usize) -> Result<Self> {
        QuditBellBasis::new(d).map(Self::QuditBell)
    }

    /// Local dimension of each measured subsystem.
    pub fn dim(&self) -> usize {
        match self {
            Self::GeneralQubit(_) => 2,
            Self::QuditBell(b) => b.dim(),
        }
    }

    /// All `(r, h)` labels, `r` major.
    pub fn outcomes(&self) -> Vec<(usize, usize)> {
        let d = self.dim();
        (0..d).flat_map(|r| (0..d).map(move |h| (r, h))).collect()
    }

    pub fn vector(&self, r: usize, h: usize) -> &PureBipartiteState<T> {
        match self {
            Self::GeneralQubit(b) => b.vector(r, h),
            Self::QuditBell(b) => b.vector(r, h),
        }
    }

    /// Squared inverse of the vector's normalization prefactor: `B_rh` for the
    /// general qubit basis, `d` for the Bell basis. Probability times this
    /// weight is the normalization of the closed-form swapped state.
    pub fn weight(&self, r: usize, h: usize) -> T {
        match self {
            Self::GeneralQubit(b) => b.b_factor(r, h),
            Self::QuditBell(b) => T::from_usize(b.dim()),
        }
    }

    /// Unnormalized coefficient `c_j` with `|φ^{rh}⟩ ∝ Σ_j c_j |j⟩|j⊕h⟩`.
    pub fn coefficient(&self, r: usize, h: usize, j: usize) -> Complex<T> {
        match self {
            Self::GeneralQubit(b) => {
                let sign = if r * j == 1 { -T::one() } else { T::one() };
                Complex::new(sign * b.r_coeff(r, h, j), T::zero())
            }
            Self::QuditBell(b) => root_of_unity(r * j, b.dim()),
        }
    }
}

/// Closed-form unnormalized swapped amplitudes
/// `X_{iq} = Σ_j conj(c_j^{rh}) a_{ij} b_{j⊕h, q}`.
///
/// Its squared norm is the normalization `M_rh` (qubit basis) or `N_rh` (Bell
/// basis).
pub fn closed_form_amplitudes<T: Real>(
    a: &PureBipartiteState<T>,
    b: &PureBipartiteState<T>,
    basis: &MeasurementBasis<T>,
    r: usize,
    h: usize,
) -> Result<CMatrix<T>> {
    let d = basis.dim();
    if a.dim_right() != d || b.dim_left() != d {
        return Err(Error::DimensionMismatch(format!(
            "middle subsystems ({}, {}) do not match basis dimension {d}",
            a.dim_right(),
            b.dim_left()
        )));
    }
    let op = link_operator(basis, r, h)?;
    Ok(a.amp().matmul(&op).matmul(b.amp()))
}

/// `D·P`: the `d x d` matrix with entry `conj(c_j)` at `(j, j⊕h)`, so that the
/// swapped amplitudes are `A · (D·P) · B`.
pub(crate) fn link_operator<T: Real>(basis: &MeasurementBasis<T>, r: usize, h: usize) -> Result<CMatrix<T>> {
    let d = basis.dim();
    if r >= d || h >= d {
        return Err(Error::InvalidParameter(format!(
            "outcome ({r}, {h}) outside basis of dimension {d}"
        )));
    }
    let mut op = CMatrix::zeros(d, d);
    for j in 0..d {
        op[(j, (j + h) % d)] = basis.coefficient(r, h, j).conj();
    }
    Ok(op)
}

/// Gram matrix `G[k][l] = ⟨φ_k|φ_l⟩` of the basis vectors, outcomes in
/// [`MeasurementBasis::outcomes`] order.
pub fn gram_matrix<T: Real>(basis: &MeasurementBasis<T>) -> CMatrix<T> {
    let labels = basis.outcomes();
    CMatrix::from_fn(labels.len(), labels.len(), |k, l| {
        let (a, b) = (labels[k], labels[l]);
        basis
            .vector(a.0, a.1)
            .inner(basis.vector(b.0, b.1))
            .unwrap_or_else(|_| Complex::zero())
    })
}

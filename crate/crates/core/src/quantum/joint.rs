use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quantum::PureBipartiteState;
use crate::scalar::Real;

/// Pure state of several parties stored as a dense row-major tensor; party 0 is
/// the most significant index.
#[derive(Clone, Debug, PartialEq)]
pub struct JointState<T> {
    dims: Vec<usize>,
    amp: Vec<Complex<T>>,
}

/// Result of projecting one pair of a four-party state onto a bipartite vector.
#[derive(Clone, Debug)]
pub struct Projection<T> {
    /// Squared norm of the contraction.
    pub probability: T,
    /// Unnormalized amplitudes left on the two unmeasured parties.
    pub unnormalized: CMatrix<T>,
    /// Normalized residual state, `None` when the outcome is impossible.
    pub residual: Option<PureBipartiteState<T>>,
}

impl<T: Real> Projection<T> {
    pub fn is_possible(&self) -> bool {
        self.residual.is_some()
    }
}

impl<T: Real> JointState<T> {
    pub fn from_bipartite(s: &PureBipartiteState<T>) -> Self {
        Self {
            dims: vec![s.dim_left(), s.dim_right()],
            amp: s.to_vector(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amp
    }

    pub fn norm_sqr(&self) -> T {
        self.amp.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Amplitude at a multi-index, one digit per party.
    pub fn get(&self, index: &[usize]) -> Complex<T> {
        assert_eq!(index.len(), self.dims.len());
        let mut flat = 0;
        for (&i, &d) in index.iter().zip(&self.dims) {
            assert!(i < d);
            flat = flat * d + i;
        }
        self.amp[flat]
    }

    /// `self ⊗ other`, with the parties of `other` appended after those of `self`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amp = Vec::with_capacity(self.amp.len() * other.amp.len());
        for a in &self.amp {
            for b in &other.amp {
                amp.push(*a * *b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, amp }
    }

    /// Contracts each listed pair of parties with the conjugate of its bipartite
    /// vector, all at once, and returns the unnormalized state of the remaining
    /// parties together with its squared norm.
    ///
    /// Pairs must be disjoint; the vector's left side pairs with the first party
    /// of the pair.
    pub fn project_pairs(
        &self,
        pairs: &[(usize, usize)],
        vectors: &[&PureBipartiteState<T>],
    ) -> Result<(JointState<T>, T)> {
        if pairs.len() != vectors.len() {
            return Err(Error::InvalidParameter("one vector per measured pair".into()));
        }
        let n = self.dims.len();
        let mut role: Vec<Option<(usize, bool)>> = vec![None; n];
        for (k, (&(a, b), v)) in pairs.iter().zip(vectors).enumerate() {
            if a >= n || b >= n || a == b || role[a].is_some() || role[b].is_some() {
                return Err(Error::InvalidParameter(format!(
                    "measured pair ({a}, {b}) is out of range or overlaps another pair"
                )));
            }
            if v.dim_left() != self.dims[a] || v.dim_right() != self.dims[b] {
                return Err(Error::DimensionMismatch(format!(
                    "basis vector {}x{} does not fit parties of dimension {} and {}",
                    v.dim_left(),
                    v.dim_right(),
                    self.dims[a],
                    self.dims[b]
                )));
            }
            role[a] = Some((k, true));
            role[b] = Some((k, false));
        }

        let kept: Vec<usize> = (0..n).filter(|&p| role[p].is_none()).collect();
        let out_dims: Vec<usize> = kept.iter().map(|&p| self.dims[p]).collect();
        let out_len: usize = out_dims.iter().product();
        let mut out = vec![Complex::<T>::zero(); out_len];

        let conj_vecs: Vec<CMatrix<T>> = vectors.iter().map(|v| v.amp().conj()).collect();
        let mut digits = vec![0usize; n];
        let mut pair_idx = vec![(0usize, 0usize); pairs.len()];
        for flat in 0..self.amp.len() {
            let a = self.amp[flat];
            if !a.is_zero() {
                let mut out_flat = 0;
                for p in 0..n {
                    match role[p] {
                        None => out_flat = out_flat * self.dims[p] + digits[p],
                        Some((k, true)) => pair_idx[k].0 = digits[p],
                        Some((k, false)) => pair_idx[k].1 = digits[p],
                    }
                }
                let mut w = a;
                for (k, &(x, y)) in pair_idx.iter().enumerate() {
                    w *= conj_vecs[k][(x, y)];
                }
                out[out_flat] += w;
            }
            // odometer increment, last party fastest
            for p in (0..n).rev() {
                digits[p] += 1;
                if digits[p] < self.dims[p] {
                    break;
                }
                digits[p] = 0;
            }
        }

        let residual = JointState {
            dims: out_dims,
            amp: out,
        };
        let prob = residual.norm_sqr();
        Ok((residual, prob))
    }

    /// Reads a two-party state back as an (unnormalized) amplitude matrix.
    pub fn to_matrix(&self) -> Result<CMatrix<T>> {
        if self.dims.len() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "expected two parties, found {}",
                self.dims.len()
            )));
        }
        Ok(CMatrix::from_row_major(self.dims[0], self.dims[1], self.amp.clone()))
    }
}

/// `|a⟩ ⊗ |b⟩` as a four-party tensor `T[i][j][p][q] = a[i][j] · b[p][q]`.
pub fn tensor<T: Real>(a: &PureBipartiteState<T>, b: &PureBipartiteState<T>) -> JointState<T> {
    JointState::from_bipartite(a).tensor(&JointState::from_bipartite(b))
}

/// Projects the parties `measured_pair` of a four-party state onto
/// `basis_vector`, leaving a bipartite state on the other two parties (in their
/// original order).
pub fn project_measurement<T: Real>(
    joint: &JointState<T>,
    basis_vector: &PureBipartiteState<T>,
    measured_pair: (usize, usize),
) -> Result<Projection<T>> {
    if joint.parties() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "projection expects a four-party state, found {} parties",
            joint.parties()
        )));
    }
    let (rest, probability) = joint.project_pairs(&[measured_pair], &[basis_vector])?;
    let unnormalized = rest.to_matrix()?;
    let residual = if probability < T::prob_floor() {
        None
    } else {
        Some(PureBipartiteState::normalized(unnormalized.clone())?)
    };
    Ok(Projection {
        probability,
        unnormalized,
        residual,
    })
}

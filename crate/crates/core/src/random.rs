//! Seeded generation of random states, spectra, unitaries and basis parameters.
//!
//! Amplitudes are drawn from a rotation-invariant complex normal distribution
//! and normalized. Schmidt spectra are uniform on the probability simplex
//! (normalized exponential draws), then square-rooted and sorted. Unitaries
//! are Haar-distributed via Gram-Schmidt on a complex Ginibre matrix.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::CMatrix;
use crate::quantum::{PureBipartiteState, SchmidtForm};
use crate::scalar::Real;

/// Deterministic source of random test inputs.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn complex_normal<T: Real>(&mut self) -> Complex<T> {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex::new(T::lit(re), T::lit(im))
    }

    /// Uniform in `(0, 1]`.
    pub fn unit<T: Real>(&mut self) -> T {
        T::lit(1.0 - self.rng.random::<f64>())
    }

    /// Random pure state on `dim_left x dim_right`.
    pub fn state<T: Real>(&mut self, dim_left: usize, dim_right: usize) -> PureBipartiteState<T> {
        loop {
            let amp = CMatrix::from_fn(dim_left, dim_right, |_, _| self.complex_normal());
            if let Ok(s) = PureBipartiteState::normalized(amp) {
                return s;
            }
        }
    }

    /// Schmidt coefficients whose squares are uniform on the simplex, descending.
    pub fn spectrum<T: Real>(&mut self, d: usize) -> Vec<T> {
        let draws: Vec<f64> = (0..d).map(|_| self.rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = draws.iter().sum();
        let mut coeffs: Vec<T> = draws.iter().map(|x| T::lit((x / total).sqrt())).collect();
        coeffs.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        coeffs
    }

    pub fn schmidt<T: Real>(&mut self, d: usize) -> SchmidtForm<T> {
        SchmidtForm::from_coeffs(&self.spectrum::<T>(d)).expect("sampled spectrum is normalized")
    }

    /// Haar-random `d x d` unitary.
    pub fn unitary<T: Real>(&mut self, d: usize) -> CMatrix<T> {
        let g = CMatrix::from_fn(d, d, |_, _| self.complex_normal::<T>());
        let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = g.column(j);
            for q in &cols {
                let proj: Complex<T> = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            for x in &mut v {
                *x /= norm;
            }
            cols.push(v);
        }
        CMatrix::from_fn(d, d, |i, j| cols[j][i])
    }

    /// Real general-basis parameters `(n, m)`, each in `(0, 1]`.
    pub fn basis_params<T: Real>(&mut self) -> (T, T) {
        (self.unit(), self.unit())
    }
}

//! Independent reference computations. Nothing here calls the swap, measure or
//! routing code under test; linear algebra goes through nalgebra.

#![allow(dead_code)]

use std::collections::BTreeSet;

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex;

use redswap::linalg::CMatrix;
use redswap::network::NetworkGraph;

pub type C = Complex<f64>;

pub fn to_na(m: &CMatrix<f64>) -> DMatrix<C> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

/// Unnormalized general-basis vector as a `2 x 2` amplitude table.
pub fn general_vector(n: f64, m: f64, r: usize, h: usize) -> DMatrix<C> {
    // R_t for t = 0, 1, keyed by (r, h)
    let coeffs = match (r, h) {
        (0, 0) => [1.0, n],
        (0, 1) => [1.0, m],
        (1, 0) => [n, 1.0],
        (1, 1) => [m, 1.0],
        _ => unreachable!(),
    };
    let mut v = DMatrix::zeros(2, 2);
    for t in 0..2 {
        let sign = if r == 1 && t == 1 { -1.0 } else { 1.0 };
        v[(t, t ^ h)] = C::new(sign * coeffs[t], 0.0);
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v / C::new(norm, 0.0)
}

/// Bell vector `d^{-1/2} Σ_t e^{2πi rt/d} |t, t+h⟩`.
pub fn bell_vector(d: usize, r: usize, h: usize) -> DMatrix<C> {
    let mut v = DMatrix::zeros(d, d);
    for t in 0..d {
        let angle = 2.0 * std::f64::consts::PI * ((r * t) % d) as f64 / d as f64;
        v[(t, (t + h) % d)] = C::from_polar(1.0 / (d as f64).sqrt(), angle);
    }
    v
}

/// `χ_iq = Σ_{j,k} conj(φ_jk) a_ij b_kq` by explicit loops: the node-2 pair
/// projected onto `φ`, unnormalized. Its squared norm is the probability.
pub fn brute_swap(a: &DMatrix<C>, b: &DMatrix<C>, phi: &DMatrix<C>) -> DMatrix<C> {
    let mut out = DMatrix::zeros(a.nrows(), b.ncols());
    for i in 0..a.nrows() {
        for q in 0..b.ncols() {
            let mut acc = C::new(0.0, 0.0);
            for j in 0..a.ncols() {
                for k in 0..b.nrows() {
                    acc += phi[(j, k)].conj() * a[(i, j)] * b[(k, q)];
                }
            }
            out[(i, q)] = acc;
        }
    }
    out
}

/// Projects every measured pair of a chain in turn, by explicit loops.
pub fn brute_chain(links: &[DMatrix<C>], vectors: &[DMatrix<C>]) -> DMatrix<C> {
    let mut acc = links[0].clone();
    for (k, phi) in vectors.iter().enumerate() {
        acc = brute_swap(&acc, &links[k + 1], phi);
    }
    acc
}

pub fn norm_sqr(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Singular values, descending.
pub fn singular_values(m: &DMatrix<C>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Normalized Schmidt coefficients of an unnormalized amplitude table.
pub fn schmidt(m: &DMatrix<C>) -> Vec<f64> {
    let norm = norm_sqr(m).sqrt();
    singular_values(m).into_iter().map(|s| s / norm).collect()
}

/// `sqrt(2d/(d−1) Σ_{i<j} λ_i²λ_j²)` from the Schmidt coefficients.
pub fn concurrence_from_schmidt(l: &[f64], d: usize) -> f64 {
    let mut pairs = 0.0;
    for i in 0..l.len() {
        for j in (i + 1)..l.len() {
            pairs += (l[i] * l[j]).powi(2);
        }
    }
    (2.0 * d as f64 / (d as f64 - 1.0) * pairs).max(0.0).sqrt()
}

/// Eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<C>) -> Vec<f64> {
    m.clone().symmetric_eigen().eigenvalues.iter().copied().collect()
}

pub fn entropy_bits(eigs: &[f64]) -> f64 {
    eigs.iter().filter(|&&p| p > 1e-300).map(|&p| -p * p.log2()).sum()
}

/// Entanglement entropy from the reduced matrix `M M† / ‖M‖²`.
pub fn entanglement_entropy(m: &DMatrix<C>) -> f64 {
    let rho = m * m.adjoint() / C::new(norm_sqr(m), 0.0);
    entropy_bits(&hermitian_eigenvalues(&rho))
}

fn pauli(k: usize) -> DMatrix<C> {
    let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
    match k {
        0 => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        1 => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        _ => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Teleportation fidelity from Pauli expectations `t_ij = Tr[ρ σ_i⊗σ_j]` and
/// the eigenvalues of `TᵀT`.
pub fn pauli_fidelity(rho: &DMatrix<C>) -> f64 {
    let t = Matrix3::from_fn(|i, j| (rho * pauli(i).kronecker(&pauli(j))).trace().re);
    let u = t.transpose() * t;
    let sum: f64 = u.symmetric_eigen().eigenvalues.iter().map(|x| x.max(0.0).sqrt()).sum();
    0.5 * (1.0 + sum / 3.0)
}

/// `|ψ⟩⟨ψ|` for a row-major amplitude table.
pub fn projector(m: &DMatrix<C>) -> DMatrix<C> {
    let v = DMatrix::from_fn(m.len(), 1, |k, _| m[(k / m.ncols(), k % m.ncols())]);
    &v * v.adjoint() / C::new(norm_sqr(m), 0.0)
}

/// Best route by exhaustive enumeration of simple paths over links with
/// concurrence above `1e-12`, maximizing `score` (product or bottleneck of
/// per-link values), ties to fewer hops then node names.
pub fn enumerate_best(
    g: &NetworkGraph<f64>,
    source: &str,
    target: &str,
    link_value: impl Fn(usize) -> (f64, f64),
    bottleneck: bool,
) -> Option<(Vec<String>, f64)> {
    let s = g.index_of(source).ok()?;
    let t = g.index_of(target).ok()?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut stack = vec![(vec![s], if bottleneck { f64::INFINITY } else { 1.0 })];
    while let Some((path, score)) = stack.pop() {
        let u = *path.last().unwrap();
        if u == t {
            let replace = match &best {
                None => true,
                Some((bp, bs)) => {
                    if (score - bs).abs() > 1e-9 * bs.abs().max(1e-300) + 1e-12 {
                        score > *bs
                    } else if path.len() != bp.len() {
                        path.len() < bp.len()
                    } else {
                        let names = |p: &[usize]| p.iter().map(|&v| g.name(v).to_string()).collect::<Vec<_>>();
                        names(&path) < names(bp)
                    }
                }
            };
            if replace {
                best = Some((path, score));
            }
            continue;
        }
        let seen: BTreeSet<usize> = path.iter().copied().collect();
        for (k, e) in g.edges().iter().enumerate() {
            let v = if e.a == u {
                e.b
            } else if e.b == u {
                e.a
            } else {
                continue;
            };
            let (conc, value) = link_value(k);
            if seen.contains(&v) || conc <= 1e-12 {
                continue;
            }
            let next = if bottleneck { score.min(value) } else { score * value };
            let mut p = path.clone();
            p.push(v);
            stack.push((p, next));
        }
    }
    best.map(|(p, s)| (p.iter().map(|&v| g.name(v).to_string()).collect(), s))
}

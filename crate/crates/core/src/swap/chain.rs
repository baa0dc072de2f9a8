//! Swapping along a chain of `g + 1` links with `g` intermediate measurements.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quantum::{JointState, PureBipartiteState};
use crate::scalar::Real;
use crate::swap::basis::{link_operator, MeasurementBasis};
use crate::swap::single::{swap_once, SwapOutcome};

/// Measures every intermediate node of a two-qubit chain at once.
///
/// `params[k]` holds the `(n, m)` of the general basis at the `k`-th
/// intermediate node.
pub fn chain_swap_simultaneous<T: Real>(
    states: &[PureBipartiteState<T>],
    params: &[(T, T)],
) -> Result<Vec<SwapOutcome<T>>> {
    let bases = qubit_chain_bases(states, params)?;
    chain_swap_simultaneous_with_bases(states, &bases)
}

/// Measures the intermediate nodes one after another, producing entanglement
/// between the first node and each successive node.
pub fn chain_swap_sequential<T: Real>(
    states: &[PureBipartiteState<T>],
    params: &[(T, T)],
) -> Result<Vec<SwapOutcome<T>>> {
    let bases = qubit_chain_bases(states, params)?;
    chain_swap_sequential_with_bases(states, &bases)
}

fn qubit_chain_bases<T: Real>(states: &[PureBipartiteState<T>], params: &[(T, T)]) -> Result<Vec<MeasurementBasis<T>>> {
    if let Some((k, s)) = states
        .iter()
        .enumerate()
        .find(|(_, s)| s.dim_left() != 2 || s.dim_right() != 2)
    {
        return Err(Error::DimensionMismatch(format!(
            "chain link {k} is {}x{}; the general-basis chain needs two-qubit links",
            s.dim_left(),
            s.dim_right()
        )));
    }
    params.iter().map(|&(n, m)| MeasurementBasis::general(n, m)).collect()
}

fn check_chain<T: Real>(states: &[PureBipartiteState<T>], bases: &[MeasurementBasis<T>]) -> Result<()> {
    if states.len() < 2 {
        return Err(Error::InvalidParameter("a chain needs at least two links".into()));
    }
    if bases.len() + 1 != states.len() {
        return Err(Error::InvalidParameter(format!(
            "{} links need {} measurement bases, got {}",
            states.len(),
            states.len() - 1,
            bases.len()
        )));
    }
    for (k, basis) in bases.iter().enumerate() {
        let (left, right) = (states[k].dim_right(), states[k + 1].dim_left());
        if left != basis.dim() || right != basis.dim() {
            return Err(Error::DimensionMismatch(format!(
                "node {} holds subsystems of dimension {left} and {right}, basis measures {}",
                k + 2,
                basis.dim()
            )));
        }
    }
    Ok(())
}

/// Every outcome tuple, first node most significant.
fn outcome_tuples<T: Real>(bases: &[MeasurementBasis<T>]) -> Vec<Vec<(usize, usize)>> {
    bases.iter().fold(vec![Vec::new()], |acc, basis| {
        let labels = basis.outcomes();
        acc.into_iter()
            .flat_map(|prefix| {
                labels.iter().map(move |&l| {
                    let mut t = prefix.clone();
                    t.push(l);
                    t
                })
            })
            .collect()
    })
}

/// Closed-form unnormalized end-to-end amplitudes
/// `A₀ · L₁ · A₁ · L₂ ⋯ L_g · A_g`, where `L_k` carries the phases and
/// `R` coefficients of the `k`-th outcome and the index shift `j ↦ j⊕h_k`.
pub fn closed_form_chain<T: Real>(
    states: &[PureBipartiteState<T>],
    bases: &[MeasurementBasis<T>],
    indices: &[(usize, usize)],
) -> Result<CMatrix<T>> {
    check_chain(states, bases)?;
    if indices.len() != bases.len() {
        return Err(Error::InvalidParameter("one outcome label per measured node".into()));
    }
    let mut x = states[0].amp().clone();
    for (k, &(r, h)) in indices.iter().enumerate() {
        x = x.matmul(&link_operator(&bases[k], r, h)?).matmul(states[k + 1].amp());
    }
    Ok(x)
}

/// Simultaneous chain swap with explicit bases (two-qubit general bases or
/// qudit Bell bases).
///
/// The whole chain is held as one `2(g+1)`-party tensor and every outcome
/// projects all measured pairs in a single contraction.
pub fn chain_swap_simultaneous_with_bases<T: Real>(
    states: &[PureBipartiteState<T>],
    bases: &[MeasurementBasis<T>],
) -> Result<Vec<SwapOutcome<T>>> {
    check_chain(states, bases)?;
    let joint = states
        .iter()
        .skip(1)
        .fold(JointState::from_bipartite(&states[0]), |acc, s| {
            acc.tensor(&JointState::from_bipartite(s))
        });
    let pairs: Vec<(usize, usize)> = (0..bases.len()).map(|k| (2 * k + 1, 2 * k + 2)).collect();

    outcome_tuples(bases)
        .into_iter()
        .map(|indices| {
            let vectors: Vec<&PureBipartiteState<T>> =
                indices.iter().zip(bases).map(|(&(r, h), b)| b.vector(r, h)).collect();
            let (rest, probability) = joint.project_pairs(&pairs, &vectors)?;
            let state = if probability < T::prob_floor() {
                None
            } else {
                Some(PureBipartiteState::normalized(rest.to_matrix()?)?)
            };
            let normalization = closed_form_chain(states, bases, &indices)?.norm_sqr();
            Ok(SwapOutcome {
                outcome_indices: indices,
                probability,
                state,
                normalization,
            })
        })
        .collect()
}

/// Sequential chain swap with explicit bases: node `k + 2` is measured on the
/// renormalized state of nodes `(1, k + 2)` and the next link.
///
/// The normalization reported here is the product of conditional
/// probabilities times the basis weights, i.e. derived from the measurement
/// record rather than from the closed form.
pub fn chain_swap_sequential_with_bases<T: Real>(
    states: &[PureBipartiteState<T>],
    bases: &[MeasurementBasis<T>],
) -> Result<Vec<SwapOutcome<T>>> {
    check_chain(states, bases)?;
    let mut out = Vec::new();
    descend(&states[0], states, bases, 0, Vec::new(), T::one(), &mut out)?;
    Ok(out)
}

fn descend<T: Real>(
    current: &PureBipartiteState<T>,
    states: &[PureBipartiteState<T>],
    bases: &[MeasurementBasis<T>],
    k: usize,
    prefix: Vec<(usize, usize)>,
    prob: T,
    out: &mut Vec<SwapOutcome<T>>,
) -> Result<()> {
    if k == bases.len() {
        out.push(SwapOutcome {
            normalization: prob * weight_product(bases, &prefix),
            outcome_indices: prefix,
            probability: prob,
            state: Some(current.clone()),
        });
        return Ok(());
    }
    for o in swap_once(current, &states[k + 1], &bases[k])? {
        let mut indices = prefix.clone();
        indices.extend_from_slice(&o.outcome_indices);
        let p = prob * o.probability;
        match &o.state {
            Some(next) => descend(next, states, bases, k + 1, indices, p, out)?,
            None => {
                // the branch is dead; spread its residual weight evenly over
                // its leaves so the total stays exact
                let tails = outcome_tuples(&bases[k + 1..]);
                let share = p / T::from_usize(tails.len());
                for tail in tails {
                    let mut leaf = indices.clone();
                    leaf.extend(tail);
                    out.push(SwapOutcome {
                        normalization: share * weight_product(bases, &leaf),
                        outcome_indices: leaf,
                        probability: share,
                        state: None,
                    });
                }
            }
        }
    }
    Ok(())
}

fn weight_product<T: Real>(bases: &[MeasurementBasis<T>], indices: &[(usize, usize)]) -> T {
    indices
        .iter()
        .zip(bases)
        .map(|(&(r, h), b)| b.weight(r, h))
        .fold(T::one(), |acc, w| acc * w)
}

//! Checkers for the relations between resource states and swapped states.
//!
//! Every checker simulates the swap by projection and compares the measured
//! quantity (left-hand side) against the closed-form prediction built from
//! the resources alone (right-hand side).

use std::fmt;

use crate::error::{Error, Result};
use crate::measures::{
    concurrence_qudit, concurrence_two_qubit, dense_coding_capacity_pure, sub_concurrence, teleportation_fidelity_mixed,
};
use crate::quantum::{schmidt_decompose, shannon_entropy, DensityMatrix, PureBipartiteState, SchmidtForm};
use crate::scalar::Real;
use crate::swap::basis::{GeneralQubitBasis, MeasurementBasis};
use crate::swap::chain::chain_swap_simultaneous;
use crate::swap::single::{swap_once, SwapOutcome};

/// Which relation a report checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `C(χ) = F_rh/(2M_rh) · C₁C₂` for the general qubit basis.
    QubitConcurrence,
    /// `C²(χ) = (d−1)/(2dN²) · [C₁²C₂² − K]` for qudit Bell measurements.
    QuditConcurrence,
    /// `C(χ) = C₁C₂/(2N)`, the two-qubit Bell-basis special case.
    BellConcurrence,
    /// `3F(χ) − 2 = F_rh/(2M_rh) · [3F₁ − 2][3F₂ − 2]`.
    SwapFidelity,
    /// `3F(χ) − 2 = ∏F_k/(2^g M) · ∏[3F_k − 2]` along a chain.
    ChainFidelity,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::QubitConcurrence => "qubit concurrence product",
            Relation::QuditConcurrence => "qudit concurrence with K term",
            Relation::BellConcurrence => "two-qubit Bell concurrence",
            Relation::SwapFidelity => "single-swap fidelity product",
            Relation::ChainFidelity => "chain fidelity product",
        })
    }
}

/// One outcome's comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualEntry<T> {
    pub outcome: Vec<(usize, usize)>,
    pub probability: T,
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
}

impl<T: Real> ResidualEntry<T> {
    fn new(outcome: Vec<(usize, usize)>, probability: T, lhs: T, rhs: T) -> Self {
        Self {
            outcome,
            probability,
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
        }
    }
}

/// Per-outcome residuals of one relation. Impossible outcomes (both sides
/// vanish) are counted in `skipped` rather than listed.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport<T> {
    pub relation: Relation,
    pub entries: Vec<ResidualEntry<T>>,
    pub skipped: usize,
}

impl<T: Real> RelationReport<T> {
    fn from_entries(relation: Relation, entries: Vec<ResidualEntry<T>>, skipped: usize) -> Self {
        Self {
            relation,
            entries,
            skipped,
        }
    }

    pub fn max_residual(&self) -> T {
        self.entries.iter().map(|e| e.residual).fold(T::zero(), T::max)
    }

    pub fn within(&self, tol: T) -> bool {
        self.entries.iter().all(|e| e.residual <= tol)
    }

    pub fn worst(&self) -> Option<&ResidualEntry<T>> {
        self.entries
            .iter()
            .max_by(|a, b| a.residual.partial_cmp(&b.residual).unwrap_or(std::cmp::Ordering::Equal))
    }
}

/// `|Σ p − 1|` over a complete outcome list.
pub fn probability_defect<T: Real>(outcomes: &[SwapOutcome<T>]) -> T {
    (outcomes.iter().map(|o| o.probability).sum::<T>() - T::one()).abs()
}

fn require_qubits<T: Real>(states: &[&PureBipartiteState<T>]) -> Result<()> {
    for s in states {
        if s.dim_left() != 2 || s.dim_right() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "relation is defined for two-qubit resources, got {}x{}",
                s.dim_left(),
                s.dim_right()
            )));
        }
    }
    Ok(())
}

/// `3F − 2` with `F` from the Bloch-form (correlation matrix) fidelity.
fn fidelity_term<T: Real>(s: &PureBipartiteState<T>) -> Result<T> {
    Ok(T::lit(3.0) * teleportation_fidelity_mixed(&DensityMatrix::from_pure(s))? - T::lit(2.0))
}

/// Concurrence relation for the general two-qubit basis.
pub fn verify_qubit_relation<T: Real>(
    s12: &PureBipartiteState<T>,
    s23: &PureBipartiteState<T>,
    n: T,
    m: T,
) -> Result<RelationReport<T>> {
    require_qubits(&[s12, s23])?;
    let basis = GeneralQubitBasis::new(n, m)?;
    let c1 = concurrence_two_qubit(s12)?;
    let c2 = concurrence_two_qubit(s23)?;
    let outcomes = swap_once(s12, s23, &MeasurementBasis::GeneralQubit(basis.clone()))?;
    let mut entries = Vec::new();
    let mut skipped = 0;
    for o in outcomes {
        let Some(state) = &o.state else {
            skipped += 1;
            continue;
        };
        let (r, h) = o.outcome_indices[0];
        let lhs = concurrence_two_qubit(state)?;
        let rhs = basis.f_coeff(r, h) / (T::lit(2.0) * o.normalization) * c1 * c2;
        entries.push(ResidualEntry::new(o.outcome_indices, o.probability, lhs, rhs));
    }
    Ok(RelationReport::from_entries(
        Relation::QubitConcurrence,
        entries,
        skipped,
    ))
}

/// Fidelity relation for a single swap in the general two-qubit basis. All
/// three fidelities are evaluated from the correlation matrix, not from the
/// concurrence.
pub fn verify_swap_fidelity_relation<T: Real>(
    s12: &PureBipartiteState<T>,
    s23: &PureBipartiteState<T>,
    n: T,
    m: T,
) -> Result<RelationReport<T>> {
    require_qubits(&[s12, s23])?;
    let basis = GeneralQubitBasis::new(n, m)?;
    let t1 = fidelity_term(s12)?;
    let t2 = fidelity_term(s23)?;
    let outcomes = swap_once(s12, s23, &MeasurementBasis::GeneralQubit(basis.clone()))?;
    let mut entries = Vec::new();
    let mut skipped = 0;
    for o in outcomes {
        let Some(state) = &o.state else {
            skipped += 1;
            continue;
        };
        let (r, h) = o.outcome_indices[0];
        let lhs = fidelity_term(state)?;
        let rhs = basis.f_coeff(r, h) / (T::lit(2.0) * o.normalization) * t1 * t2;
        entries.push(ResidualEntry::new(o.outcome_indices, o.probability, lhs, rhs));
    }
    Ok(RelationReport::from_entries(Relation::SwapFidelity, entries, skipped))
}

/// Fidelity relation along a chain of two-qubit links measured in general
/// bases with per-node parameters.
pub fn verify_chain_fidelity_relation<T: Real>(
    states: &[PureBipartiteState<T>],
    params: &[(T, T)],
) -> Result<RelationReport<T>> {
    let refs: Vec<&PureBipartiteState<T>> = states.iter().collect();
    require_qubits(&refs)?;
    let bases = params
        .iter()
        .map(|&(n, m)| GeneralQubitBasis::new(n, m))
        .collect::<Result<Vec<_>>>()?;
    let terms = states.iter().map(fidelity_term).collect::<Result<Vec<T>>>()?;
    let resource_product = terms.iter().fold(T::one(), |acc, &t| acc * t);
    let g = params.len() as i32;

    let outcomes = chain_swap_simultaneous(states, params)?;
    let mut entries = Vec::new();
    let mut skipped = 0;
    for o in outcomes {
        let Some(state) = &o.state else {
            skipped += 1;
            continue;
        };
        let f_product = o
            .outcome_indices
            .iter()
            .zip(&bases)
            .fold(T::one(), |acc, (&(r, h), b)| acc * b.f_coeff(r, h));
        let lhs = fidelity_term(state)?;
        let rhs = f_product / (T::lit(2.0).powi(g) * o.normalization) * resource_product;
        entries.push(ResidualEntry::new(o.outcome_indices, o.probability, lhs, rhs));
    }
    Ok(RelationReport::from_entries(Relation::ChainFidelity, entries, skipped))
}

/// Result of checking the qudit concurrence relation for one `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuditRelationReport<T> {
    pub d: usize,
    pub h: usize,
    /// The dimension-dependent correction `K_d^h`; zero for `d = 2`.
    pub k_term: T,
    /// Squared-concurrence comparison, one entry per `r`.
    pub squared: RelationReport<T>,
    /// For `d = 2`, the unsquared form `C(χ) = C₁C₂/(2N)`.
    pub reduced: Option<RelationReport<T>>,
}

impl<T: Real> QuditRelationReport<T> {
    pub fn max_residual(&self) -> T {
        let r = self.reduced.as_ref().map_or(T::zero(), |r| r.max_residual());
        self.squared.max_residual().max(r)
    }
}

/// `K_d^h = Σ_{i<f} C²_{if}(ψ₁₂) Σ_{l<m, (l,m)≠(i,f)} C²_{l⊕h, m⊕h}(ψ₂₃)`.
pub fn k_term<T: Real>(sf12: &SchmidtForm<T>, sf23: &SchmidtForm<T>, d: usize, h: usize) -> Result<T> {
    if d <= 2 {
        return Ok(T::zero());
    }
    let mut k = T::zero();
    for i in 0..d {
        for f in (i + 1)..d {
            let c_if = sub_concurrence(sf12, i, f, d)?;
            let mut inner = T::zero();
            for l in 0..d {
                for m in (l + 1)..d {
                    if (l, m) == (i, f) {
                        continue;
                    }
                    let (a, b) = ((l + h) % d, (m + h) % d);
                    let c = sub_concurrence(sf23, a.min(b), a.max(b), d)?;
                    inner += c * c;
                }
            }
            k += c_if * c_if * inner;
        }
    }
    Ok(k)
}

fn check_spectra<T: Real>(sf12: &SchmidtForm<T>, sf23: &SchmidtForm<T>, d: usize) -> Result<()> {
    if sf12.rank_bound() != d || sf23.rank_bound() != d {
        return Err(Error::DimensionMismatch(format!(
            "spectra of length {} and {} do not match d = {d}",
            sf12.rank_bound(),
            sf23.rank_bound()
        )));
    }
    Ok(())
}

/// Qudit concurrence relation for Schmidt-diagonal resources measured in the
/// Bell basis, for all `r` at a fixed `h`.
pub fn verify_qudit_relation<T: Real>(
    sf12: &SchmidtForm<T>,
    sf23: &SchmidtForm<T>,
    d: usize,
    h: usize,
) -> Result<QuditRelationReport<T>> {
    check_spectra(sf12, sf23, d)?;
    if h >= d {
        return Err(Error::InvalidParameter(format!("h = {h} outside 0..{d}")));
    }
    let c1 = concurrence_qudit(sf12, d);
    let c2 = concurrence_qudit(sf23, d);
    let k = k_term(sf12, sf23, d, h)?;
    let df = T::from_usize(d);
    let factor = (df - T::one()) / (T::lit(2.0) * df);

    let outcomes = swap_once(
        &sf12.diagonal_state(),
        &sf23.diagonal_state(),
        &MeasurementBasis::bell(d)?,
    )?;
    let mut squared = Vec::new();
    let mut reduced = Vec::new();
    let mut skipped = 0;
    for o in outcomes.into_iter().filter(|o| o.outcome_indices[0].1 == h) {
        let Some(state) = &o.state else {
            skipped += 1;
            continue;
        };
        let c = concurrence_qudit(&schmidt_decompose(state), d);
        let n = o.normalization;
        let rhs = factor / (n * n) * (c1 * c1 * c2 * c2 - k);
        squared.push(ResidualEntry::new(o.outcome_indices.clone(), o.probability, c * c, rhs));
        if d == 2 {
            let rhs = c1 * c2 / (T::lit(2.0) * n);
            reduced.push(ResidualEntry::new(o.outcome_indices, o.probability, c, rhs));
        }
    }
    Ok(QuditRelationReport {
        d,
        h,
        k_term: k,
        squared: RelationReport::from_entries(Relation::QuditConcurrence, squared, skipped),
        reduced: (d == 2).then(|| RelationReport::from_entries(Relation::BellConcurrence, reduced, skipped)),
    })
}

/// Closed-form entanglement entropy of the Bell-basis swapped state,
/// `−(1/N) Σ_i λ_i²μ_{i⊕h}² log₂(λ_i²μ_{i⊕h}²/N)`. Independent of `r`.
pub fn entropy_of_swapped<T: Real>(
    sf12: &SchmidtForm<T>,
    sf23: &SchmidtForm<T>,
    r: usize,
    h: usize,
    d: usize,
) -> Result<T> {
    check_spectra(sf12, sf23, d)?;
    if r >= d || h >= d {
        return Err(Error::InvalidParameter(format!("outcome ({r}, {h}) outside 0..{d}")));
    }
    let (l, mu) = (sf12.coeffs(), sf23.coeffs());
    let weights: Vec<T> = (0..d).map(|i| (l[i] * mu[(i + h) % d]).powi(2)).collect();
    let n: T = weights.iter().copied().sum();
    if n < T::prob_floor() {
        return Err(Error::ImpossibleOutcome {
            probability: (n / T::from_usize(d)).to_f64_lossy(),
        });
    }
    let p: Vec<T> = weights.iter().map(|w| *w / n).collect();
    Ok(shannon_entropy(&p))
}

/// Which of the resources are maximally entangled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapacityCase {
    /// Both maximal: every outcome keeps the common capacity.
    BothMaximal,
    /// Exactly one maximal: every outcome inherits the other resource's capacity.
    OneMaximal,
    /// Neither maximal: claimed bound `𝒞(χ) ≤ max(𝒞₁, 𝒞₂)`.
    NeitherMaximal,
}

impl fmt::Display for CapacityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapacityCase::BothMaximal => "both maximal",
            CapacityCase::OneMaximal => "one maximal",
            CapacityCase::NeitherMaximal => "neither maximal",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapacityOutcome<T> {
    pub r: usize,
    pub h: usize,
    pub probability: T,
    pub capacity: T,
}

/// Capacities of the resources and of every swapped outcome, with the
/// predicted relation for the resources' case.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacityCaseReport<T> {
    pub case: CapacityCase,
    pub capacity_12: T,
    pub capacity_23: T,
    pub outcomes: Vec<CapacityOutcome<T>>,
    /// Predicted common value (first two cases) or the upper bound (third).
    pub predicted: T,
    /// Equality cases: largest `|𝒞(χ) − predicted|`. Bound case: largest
    /// `𝒞(χ) − bound`, negative when the bound holds with room to spare.
    pub max_deviation: T,
    /// Whether the predicted relation holds within the classification tolerance.
    pub holds: bool,
    /// Bound case only: whether every outcome is strictly below the bound.
    pub strict: bool,
    /// Probability-weighted mean capacity over outcomes.
    pub average_capacity: T,
}

/// Tolerance for spectrum uniformity and capacity equalities.
pub fn case_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::norm_tol() * T::lit(10.0))
}

/// Classifies a resource pair by which spectra are uniform, swaps it in the
/// Bell basis and reports how the outcome capacities compare with the
/// prediction for that case.
pub fn classify_capacity_case<T: Real>(
    sf12: &SchmidtForm<T>,
    sf23: &SchmidtForm<T>,
    d: usize,
) -> Result<CapacityCaseReport<T>> {
    check_spectra(sf12, sf23, d)?;
    let tol = case_tolerance::<T>();
    let max12 = sf12.is_maximally_entangled(tol);
    let max23 = sf23.is_maximally_entangled(tol);
    let s12 = sf12.diagonal_state();
    let s23 = sf23.diagonal_state();
    let capacity_12 = dense_coding_capacity_pure(&s12)?;
    let capacity_23 = dense_coding_capacity_pure(&s23)?;

    let mut outcomes = Vec::new();
    let mut average = T::zero();
    for o in swap_once(&s12, &s23, &MeasurementBasis::bell(d)?)? {
        let Some(state) = &o.state else { continue };
        let (r, h) = o.outcome_indices[0];
        let capacity = dense_coding_capacity_pure(state)?;
        average += o.probability * capacity;
        outcomes.push(CapacityOutcome {
            r,
            h,
            probability: o.probability,
            capacity,
        });
    }

    let (case, predicted) = match (max12, max23) {
        (true, true) => (CapacityCase::BothMaximal, capacity_12),
        (true, false) => (CapacityCase::OneMaximal, capacity_23),
        (false, true) => (CapacityCase::OneMaximal, capacity_12),
        (false, false) => (CapacityCase::NeitherMaximal, capacity_12.max(capacity_23)),
    };
    let (max_deviation, holds, strict) = match case {
        CapacityCase::NeitherMaximal => {
            let top = outcomes.iter().map(|o| o.capacity).fold(T::neg_infinity(), T::max);
            let excess = top - predicted;
            (excess, excess <= tol, excess < -tol)
        }
        _ => {
            let dev = outcomes
                .iter()
                .map(|o| (o.capacity - predicted).abs())
                .fold(T::zero(), T::max);
            (dev, dev <= tol, false)
        }
    };
    Ok(CapacityCaseReport {
        case,
        capacity_12,
        capacity_23,
        outcomes,
        predicted,
        max_deviation,
        holds,
        strict,
        average_capacity: average,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn bell_pair_qubit_relation_is_one_equals_one() {
        let b = PureBipartiteState::<f64>::bell();
        let rep = verify_qubit_relation(&b, &b, 1.0, 1.0).unwrap();
        assert_eq!(rep.entries.len(), 4);
        for e in &rep.entries {
            assert!((e.lhs - 1.0).abs() < 1e-12 && (e.rhs - 1.0).abs() < 1e-12);
        }
        let fid = verify_swap_fidelity_relation(&b, &b, 1.0, 1.0).unwrap();
        assert!(fid.max_residual() < 1e-12);
        assert!(fid.entries.iter().all(|e| (e.lhs - 1.0).abs() < 1e-12));
    }

    #[test]
    fn product_resource_gives_zero_on_both_sides() {
        let p = PureBipartiteState::<f64>::product(2, 2, 1, 0).unwrap();
        let b = PureBipartiteState::<f64>::bell();
        let rep = verify_qubit_relation(&p, &b, 0.6, 0.3).unwrap();
        for e in &rep.entries {
            assert!(e.lhs.abs() < 1e-12 && e.rhs.abs() < 1e-12);
        }
        let fid = verify_swap_fidelity_relation(&p, &b, 0.6, 0.3).unwrap();
        // F(χ) = 2/3
        assert!(fid.entries.iter().all(|e| e.lhs.abs() < 1e-12));
    }

    #[test]
    fn k_term_vanishes_for_qubits() {
        let a = SchmidtForm::from_coeffs(&[0.9f64.sqrt(), 0.1f64.sqrt()]).unwrap();
        assert_eq!(k_term(&a, &a, 2, 1).unwrap(), 0.0);
        let rep = verify_qudit_relation(&a, &a, 2, 1).unwrap();
        assert_eq!(rep.k_term, 0.0);
        assert!(rep.max_residual() < 1e-12);
    }

    #[test]
    fn uniform_qutrits_satisfy_qudit_relation() {
        let w = 1.0 / 3f64.sqrt();
        let u = SchmidtForm::from_coeffs(&[w, w, w]).unwrap();
        for h in 0..3 {
            let rep = verify_qudit_relation(&u, &u, 3, h).unwrap();
            assert_eq!(rep.squared.entries.len(), 3);
            assert!(rep.max_residual() < 1e-12);
            assert!(rep.k_term > 0.0);
        }
    }

    #[test]
    fn entropy_of_swapped_reference_values() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = SchmidtForm::from_coeffs(&[h, h]).unwrap();
        assert!((entropy_of_swapped(&bell, &bell, 0, 1, 2).unwrap() - 1.0).abs() < 1e-14);
        let a = SchmidtForm::from_coeffs(&[0.9f64.sqrt(), 0.1f64.sqrt()]).unwrap();
        let e = entropy_of_swapped(&a, &a, 0, 0, 2).unwrap();
        assert!((e - h2(0.81 / 0.82)).abs() < 1e-14);
        let product = SchmidtForm::from_coeffs(&[1.0, 0.0]).unwrap();
        assert_eq!(entropy_of_swapped(&product, &a, 1, 0, 2).unwrap(), 0.0);
        // λ = (1, 0), μ = (1, 0), h = 1 pairs 1 with 0 everywhere
        assert!(matches!(
            entropy_of_swapped(&product, &product, 0, 1, 2),
            Err(Error::ImpossibleOutcome { .. })
        ));
    }

    #[test]
    fn capacity_cases_first_two() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = SchmidtForm::from_coeffs(&[h, h]).unwrap();
        let rep = classify_capacity_case(&bell, &bell, 2).unwrap();
        assert_eq!(rep.case, CapacityCase::BothMaximal);
        assert!(rep.holds);
        assert!(rep.outcomes.iter().all(|o| (o.capacity - 2.0).abs() < 1e-12));

        let a = SchmidtForm::from_coeffs(&[0.9f64.sqrt(), 0.1f64.sqrt()]).unwrap();
        let rep = classify_capacity_case(&bell, &a, 2).unwrap();
        assert_eq!(rep.case, CapacityCase::OneMaximal);
        assert!(rep.holds);
        assert!(rep
            .outcomes
            .iter()
            .all(|o| (o.capacity - (1.0 + h2(0.1))).abs() < 1e-10));
    }

    #[test]
    fn capacity_bound_fails_for_equal_spectra_shifted() {
        // λ = μ non-maximal, h = 1: amplitudes λ₀μ₁ and λ₁μ₀ coincide, so the
        // swapped state is maximally entangled and beats both resources
        let a = SchmidtForm::from_coeffs(&[0.8f64.sqrt(), 0.2f64.sqrt()]).unwrap();
        let rep = classify_capacity_case(&a, &a, 2).unwrap();
        assert_eq!(rep.case, CapacityCase::NeitherMaximal);
        assert!(!rep.holds);
        assert!((rep.max_deviation - (2.0 - (1.0 + h2(0.2)))).abs() < 1e-12);
        // on average the capacity still cannot exceed either resource
        assert!(rep.average_capacity <= rep.capacity_12.min(rep.capacity_23) + 1e-12);
    }
}

//! Seeded randomized suites that exercise every relation checker and collect
//! the largest residual of each.

use serde::Serialize;

use crate::error::Result;
use crate::measures::{concurrence_two_qubit, teleportation_fidelity_mixed, teleportation_fidelity_pure};
use crate::quantum::{DensityMatrix, PureBipartiteState, SchmidtForm, Subsystem};
use crate::random::Sampler;
use crate::swap::{
    chain_swap_sequential, chain_swap_simultaneous, classify_capacity_case, entropy_of_swapped, probability_defect,
    swap_once, verify_chain_fidelity_relation, verify_qubit_relation, verify_qudit_relation,
    verify_swap_fidelity_relation, MeasurementBasis, RelationReport, SwapOutcome,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 1000,
            tolerance: 1e-9,
        }
    }
}

/// Largest residual of one relation over its suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationSummary {
    pub name: String,
    pub cases: usize,
    pub max_residual: f64,
    pub passed: bool,
    /// Where the largest residual occurred.
    pub worst_case: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: SuiteConfig,
    pub relations: Vec<RelationSummary>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationSummary> {
        self.relations.iter().filter(|r| !r.passed)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSummary> {
        self.relations.iter().find(|r| r.name == name)
    }
}

struct Acc {
    name: &'static str,
    cases: usize,
    max: f64,
    worst: Option<String>,
    notes: Vec<String>,
}

impl Acc {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            max: 0.0,
            worst: None,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, residual: f64, at: impl FnOnce() -> String) {
        self.cases += 1;
        // NaN counts as the worst possible residual
        if residual.is_nan() || residual > self.max || (self.worst.is_none() && residual >= self.max) {
            self.max = if residual.is_nan() { f64::INFINITY } else { residual };
            self.worst = Some(at());
        }
    }

    fn report(&mut self, rep: &RelationReport<f64>, at: &str) {
        for e in &rep.entries {
            self.record(e.residual, || format!("{at}, outcome {:?}", e.outcome));
        }
    }

    fn finish(self, tolerance: f64) -> RelationSummary {
        RelationSummary {
            name: self.name.to_string(),
            cases: self.cases,
            max_residual: self.max,
            passed: self.max <= tolerance,
            worst_case: self.worst,
            notes: self.notes,
        }
    }
}

/// Shared across suites: `|Σp − 1|` of every swap and chain invocation.
struct Completeness(Acc);

impl Completeness {
    fn check(&mut self, outcomes: &[SwapOutcome<f64>], at: impl FnOnce() -> String) {
        self.0.record(probability_defect(outcomes), at);
    }
}

pub const QUBIT_CONCURRENCE: &str = "qubit concurrence product";
pub const SWAP_FIDELITY: &str = "single-swap fidelity product";
pub const BELL_CONCURRENCE: &str = "two-qubit Bell concurrence";
pub const QUDIT_CONCURRENCE: &str = "qudit concurrence with K term";
pub const CHAIN_FIDELITY: &str = "chain fidelity product";
pub const SEQUENTIAL_SIMULTANEOUS: &str = "sequential equals simultaneous";
pub const SWAPPED_ENTROPY: &str = "swapped-state entropy";
pub const CAPACITY_BOTH: &str = "capacity, both resources maximal";
pub const CAPACITY_ONE: &str = "capacity, one resource maximal";
pub const CAPACITY_NEITHER: &str = "capacity bound, neither maximal";
pub const COMPLETENESS: &str = "probability completeness";
pub const PURE_FIDELITY: &str = "Bloch fidelity of pure states";
pub const WERNER_FIDELITY: &str = "Werner fidelity";

fn sampler(seed: u64, stream: u64) -> Sampler {
    Sampler::new(seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn scaled(trials: usize, divisor: usize) -> usize {
    (trials / divisor).max(1)
}

/// Runs every suite with `config` and returns one summary per relation.
pub fn run_all(config: &SuiteConfig) -> Result<VerifyReport> {
    let tol = config.tolerance;
    let mut completeness = Completeness(Acc::new(COMPLETENESS));
    let mut out = Vec::new();
    out.extend(
        qubit_suites(config, &mut completeness)?
            .into_iter()
            .map(|a| a.finish(tol)),
    );
    out.push(bell_suite(config, &mut completeness)?.finish(tol));
    out.push(qudit_suite(config, &mut completeness)?.finish(tol));
    out.push(chain_suite(config, &mut completeness)?.finish(tol));
    out.push(sequential_suite(config, &mut completeness)?.finish(tol));
    out.push(entropy_suite(config, &mut completeness)?.finish(tol));
    out.extend(capacity_suites(config)?.into_iter().map(|a| a.finish(tol)));
    out.push(completeness.0.finish(tol));
    out.extend(fidelity_suites(config)?.into_iter().map(|a| a.finish(tol)));
    Ok(VerifyReport {
        config: *config,
        relations: out,
    })
}

/// Concurrence and fidelity relations on the same random qubit pairs and
/// general-basis parameters.
fn qubit_suites(config: &SuiteConfig, comp: &mut Completeness) -> Result<[Acc; 2]> {
    let mut rng = sampler(config.seed, 1);
    let mut conc = Acc::new(QUBIT_CONCURRENCE);
    let mut fid = Acc::new(SWAP_FIDELITY);
    for trial in 0..config.trials {
        let s12 = rng.state::<f64>(2, 2);
        let s23 = rng.state::<f64>(2, 2);
        let (n, m) = rng.basis_params::<f64>();
        let at = format!("trial {trial}, n = {n:.6}, m = {m:.6}");
        conc.report(&verify_qubit_relation(&s12, &s23, n, m)?, &at);
        fid.report(&verify_swap_fidelity_relation(&s12, &s23, n, m)?, &at);
        comp.check(&swap_once(&s12, &s23, &MeasurementBasis::general(n, m)?)?, || {
            format!("general-basis swap, {at}")
        });
    }
    Ok([conc, fid])
}

fn bell_suite(config: &SuiteConfig, comp: &mut Completeness) -> Result<Acc> {
    let mut rng = sampler(config.seed, 2);
    let mut acc = Acc::new(BELL_CONCURRENCE);
    let mut nonzero_k = 0;
    for trial in 0..config.trials {
        let a = rng.schmidt::<f64>(2);
        let b = rng.schmidt::<f64>(2);
        for h in 0..2 {
            let rep = verify_qudit_relation(&a, &b, 2, h)?;
            if rep.k_term != 0.0 {
                nonzero_k += 1;
            }
            if let Some(reduced) = &rep.reduced {
                acc.report(reduced, &format!("trial {trial}"));
            }
        }
        comp.check(
            &swap_once(&a.diagonal_state(), &b.diagonal_state(), &MeasurementBasis::bell(2)?)?,
            || format!("qubit Bell swap, trial {trial}"),
        );
    }
    if nonzero_k > 0 {
        acc.record(f64::INFINITY, || format!("K term non-zero in {nonzero_k} qubit cases"));
    }
    acc.notes.push("K term identically zero for d = 2".into());
    Ok(acc)
}

fn qudit_suite(config: &SuiteConfig, comp: &mut Completeness) -> Result<Acc> {
    let mut rng = sampler(config.seed, 3);
    let mut acc = Acc::new(QUDIT_CONCURRENCE);
    let mut negative_k = 0;
    for d in 3..=5 {
        for trial in 0..scaled(config.trials, 5) {
            let a = rng.schmidt::<f64>(d);
            let b = rng.schmidt::<f64>(d);
            for h in 0..d {
                let rep = verify_qudit_relation(&a, &b, d, h)?;
                if rep.k_term < 0.0 {
                    negative_k += 1;
                }
                acc.report(&rep.squared, &format!("d = {d}, trial {trial}, h = {h}"));
            }
            comp.check(
                &swap_once(&a.diagonal_state(), &b.diagonal_state(), &MeasurementBasis::bell(d)?)?,
                || format!("d = {d} Bell swap, trial {trial}"),
            );
        }
    }
    acc.notes.push(format!("K term negative in {negative_k} cases"));
    if negative_k > 0 {
        acc.record(f64::INFINITY, || format!("K term negative in {negative_k} cases"));
    }
    Ok(acc)
}

fn random_chain(rng: &mut Sampler, g: usize) -> (Vec<PureBipartiteState<f64>>, Vec<(f64, f64)>) {
    let states = (0..=g).map(|_| rng.state::<f64>(2, 2)).collect();
    let params = (0..g).map(|_| rng.basis_params::<f64>()).collect();
    (states, params)
}

fn chain_suite(config: &SuiteConfig, comp: &mut Completeness) -> Result<Acc> {
    let mut rng = sampler(config.seed, 4);
    let mut acc = Acc::new(CHAIN_FIDELITY);
    for g in 2..=3 {
        for trial in 0..scaled(config.trials, 5) {
            let (states, params) = random_chain(&mut rng, g);
            let at = format!("g = {g}, trial {trial}");
            acc.report(&verify_chain_fidelity_relation(&states, &params)?, &at);
            comp.check(&chain_swap_simultaneous(&states, &params)?, || {
                format!("simultaneous chain, {at}")
            });
        }
    }
    Ok(acc)
}

fn sequential_suite(config: &SuiteConfig, comp: &mut Completeness) -> Result<Acc> {
    let mut rng = sampler(config.seed, 5);
    let mut acc = Acc::new(SEQUENTIAL_SIMULTANEOUS);
    for (g, count) in [(2, scaled(config.trials, 10)), (3, scaled(config.trials, 20))] {
        for trial in 0..count {
            let (states, params) = random_chain(&mut rng, g);
            let sim = chain_swap_simultaneous(&states, &params)?;
            let seq = chain_swap_sequential(&states, &params)?;
            let at = format!("g = {g}, trial {trial}");
            comp.check(&seq, || format!("sequential chain, {at}"));
            for (a, b) in sim.iter().zip(&seq) {
                let mut residual = (a.probability - b.probability).abs();
                if let (Some(x), Some(y)) = (&a.state, &b.state) {
                    residual = residual.max(1.0 - x.overlap(y)?);
                }
                if a.outcome_indices != b.outcome_indices {
                    residual = f64::INFINITY;
                }
                acc.record(residual, || format!("{at}, outcome {:?}", a.outcome_indices));
            }
        }
    }
    Ok(acc)
}

fn entropy_suite(config: &SuiteConfig, comp: &mut Completeness) -> Result<Acc> {
    let mut rng = sampler(config.seed, 6);
    let mut acc = Acc::new(SWAPPED_ENTROPY);
    for trial in 0..scaled(config.trials, 2) {
        let d = 2 + trial % 4;
        let a = rng.schmidt::<f64>(d);
        let b = rng.schmidt::<f64>(d);
        let outcomes = swap_once(&a.diagonal_state(), &b.diagonal_state(), &MeasurementBasis::bell(d)?)?;
        comp.check(&outcomes, || format!("entropy swap d = {d}, trial {trial}"));
        for o in outcomes {
            let Some(state) = &o.state else { continue };
            let (r, h) = o.outcome_indices[0];
            let formula = entropy_of_swapped(&a, &b, r, h, d)?;
            let reduced = DensityMatrix::from_pure(state).partial_trace(d, d, Subsystem::A)?;
            let residual = (formula - reduced.von_neumann_entropy()).abs();
            acc.record(residual, || format!("d = {d}, trial {trial}, outcome ({r}, {h})"));
        }
    }
    Ok(acc)
}

fn uniform(d: usize) -> SchmidtForm<f64> {
    SchmidtForm::from_coeffs(&vec![1.0 / (d as f64).sqrt(); d]).expect("uniform spectrum")
}

fn capacity_suites(config: &SuiteConfig) -> Result<[Acc; 3]> {
    let mut rng = sampler(config.seed, 7);

    let mut both = Acc::new(CAPACITY_BOTH);
    for d in 2..=5 {
        let rep = classify_capacity_case(&uniform(d), &uniform(d), d)?;
        let target = 2.0 * (d as f64).log2();
        for o in &rep.outcomes {
            both.record((o.capacity - target).abs(), || {
                format!("d = {d}, outcome ({}, {})", o.r, o.h)
            });
        }
    }

    let mut one = Acc::new(CAPACITY_ONE);
    for trial in 0..scaled(config.trials, 2) {
        let d = 2 + trial % 4;
        let (a, b) = if trial % 2 == 0 {
            (uniform(d), rng.schmidt::<f64>(d))
        } else {
            (rng.schmidt::<f64>(d), uniform(d))
        };
        let rep = classify_capacity_case(&a, &b, d)?;
        for o in &rep.outcomes {
            one.record((o.capacity - rep.predicted).abs(), || {
                format!("d = {d}, trial {trial}, outcome ({}, {})", o.r, o.h)
            });
        }
    }

    let mut neither = Acc::new(CAPACITY_NEITHER);
    let (mut strict, mut violations, mut average_excess) = (0, 0, 0usize);
    let trials = scaled(config.trials, 2);
    for trial in 0..trials {
        let d = 2 + trial % 2;
        let a = rng.schmidt::<f64>(d);
        let b = rng.schmidt::<f64>(d);
        let rep = classify_capacity_case(&a, &b, d)?;
        if rep.strict {
            strict += 1;
        }
        if !rep.holds {
            violations += 1;
        }
        if rep.average_capacity > rep.capacity_12.min(rep.capacity_23) + 1e-10 {
            average_excess += 1;
        }
        neither.record(rep.max_deviation.max(0.0), || {
            format!(
                "d = {d}, trial {trial}, spectra {:?} and {:?}: best outcome {:.6} bits, bound {:.6} bits",
                a.coeffs(),
                b.coeffs(),
                rep.predicted + rep.max_deviation,
                rep.predicted
            )
        });
    }
    neither
        .notes
        .push(format!("strictly below the bound in {strict} of {trials} pairs"));
    neither
        .notes
        .push(format!("bound exceeded in {violations} of {trials} pairs"));
    neither.notes.push(format!(
        "probability-weighted capacity above the smaller resource capacity in {average_excess} of {trials} pairs"
    ));
    Ok([both, one, neither])
}

fn fidelity_suites(config: &SuiteConfig) -> Result<[Acc; 2]> {
    let mut rng = sampler(config.seed, 8);
    let mut pure = Acc::new(PURE_FIDELITY);
    for trial in 0..scaled(config.trials, 2) {
        let s = rng.state::<f64>(2, 2);
        let bloch = teleportation_fidelity_mixed(&DensityMatrix::from_pure(&s))?;
        let expected = teleportation_fidelity_pure(concurrence_two_qubit(&s)?);
        pure.record((bloch - expected).abs(), || format!("trial {trial}"));
    }

    let mut werner = Acc::new(WERNER_FIDELITY);
    let bell = DensityMatrix::from_pure(&PureBipartiteState::<f64>::bell());
    let noise = DensityMatrix::maximally_mixed(4);
    for p in [0.0, 0.25, 1.0 / 3.0, 0.5, 1.0] {
        let rho = bell.mix(p, &noise)?;
        let residual = (teleportation_fidelity_mixed(&rho)? - (1.0 + p) / 2.0).abs();
        werner.record(residual, || format!("p = {p}"));
    }
    Ok([pure, werner])
}

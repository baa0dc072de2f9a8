use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use redswap::measures::{concurrence, dense_coding_capacity_pure, teleportation_fidelity_pure};
use redswap::network::{best_path, parse_network, simulate_path, Metric, NetworkGraph, PathSimulation, StateDocument};
use redswap::suite::{run_all, SuiteConfig, VerifyReport};
use redswap::swap::{swap_once, verify_qubit_relation, verify_swap_fidelity_relation, MeasurementBasis};
use redswap::{Error, Result, State};

use crate::render::{json, num, opt, table};
use crate::Format;

pub struct Output {
    pub text: String,
    pub violation: bool,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse<'a, T: Deserialize<'a>>(path: &Path, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn exceeds(x: Option<f64>, tol: f64) -> bool {
    x.is_some_and(|r| r.is_nan() || r > tol)
}

pub fn verify(config: &SuiteConfig, format: Format) -> Result<Output> {
    let report = run_all(config)?;
    let text = match format {
        Format::Json => json(&VerifyJson {
            passed: report.passed(),
            report: &report,
        }),
        Format::Text => verify_text(&report),
    };
    Ok(Output {
        text,
        violation: !report.passed(),
    })
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    passed: bool,
    #[serde(flatten)]
    report: &'a VerifyReport,
}

fn verify_text(report: &VerifyReport) -> String {
    let c = &report.config;
    let mut out = format!(
        "relation suites: seed {}, {} trials, tolerance {}\n\n",
        c.seed,
        c.trials,
        num(c.tolerance)
    );
    let rows: Vec<Vec<String>> = report
        .relations
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.cases.to_string(),
                num(r.max_residual),
                if r.passed { "ok" } else { "FAIL" }.into(),
            ]
        })
        .collect();
    out.push_str(&table(&["relation", "cases", "max residual", "status"], &rows));
    for r in &report.relations {
        for note in &r.notes {
            let _ = writeln!(out, "note: {}: {note}", r.name);
        }
    }
    for r in report.failures() {
        let _ = writeln!(
            out,
            "violation: {}: max residual {} at {}; reproduce with --seed {} --trials {}",
            r.name,
            num(r.max_residual),
            r.worst_case.as_deref().unwrap_or("?"),
            c.seed,
            c.trials
        );
    }
    let _ = writeln!(
        out,
        "{}",
        if report.passed() {
            "all relations hold"
        } else {
            "some relations failed"
        }
    );
    out
}

#[derive(Deserialize, Debug, Clone, Copy, Serialize)]
#[serde(deny_unknown_fields)]
struct BasisDoc {
    n: f64,
    m: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SwapFile {
    states: Vec<StateDocument>,
    #[serde(default)]
    basis: Option<BasisDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainFile {
    states: Vec<StateDocument>,
    #[serde(default)]
    params: Option<Vec<BasisDoc>>,
}

/// Flag values override the file; a missing value falls back to the file,
/// then to 1.
fn merge(flags: (Option<f64>, Option<f64>), file: Option<BasisDoc>) -> (BasisDoc, bool) {
    let n = flags.0.or(file.map(|b| b.n));
    let m = flags.1.or(file.map(|b| b.m));
    let defaulted = n.is_none() || m.is_none();
    (
        BasisDoc {
            n: n.unwrap_or(1.0),
            m: m.unwrap_or(1.0),
        },
        defaulted,
    )
}

#[derive(Serialize)]
struct SwapRow {
    r: usize,
    h: usize,
    probability: f64,
    concurrence: Option<f64>,
    fidelity: Option<f64>,
    capacity: Option<f64>,
    concurrence_residual: Option<f64>,
    fidelity_residual: Option<f64>,
}

#[derive(Serialize)]
struct SwapReport {
    basis: String,
    n: Option<f64>,
    m: Option<f64>,
    notes: Vec<String>,
    total_probability: f64,
    outcomes: Vec<SwapRow>,
    max_residual: Option<f64>,
}

fn load_states(path: &Path, docs: &[StateDocument]) -> Result<Vec<State>> {
    docs.iter()
        .enumerate()
        .map(|(k, d)| d.to_state(&format!("{}: states[{k}]", path.display())))
        .collect()
}

pub fn swap(path: &Path, flags: (Option<f64>, Option<f64>), tol: f64, format: Format) -> Result<Output> {
    let text = read(path)?;
    let file: SwapFile = parse(path, &text)?;
    let states = load_states(path, &file.states)?;
    let [s12, s23] = states.as_slice() else {
        return Err(Error::Parse(format!("{}: expected exactly two states", path.display())));
    };
    let d = s12.dim_right();
    let mut notes = Vec::new();
    let (basis, n, m) = if d == 2 {
        let (b, defaulted) = merge(flags, file.basis);
        if defaulted {
            notes.push(format!(
                "basis parameters not fully given; using n = {}, m = {}",
                num(b.n),
                num(b.m)
            ));
        }
        (MeasurementBasis::general(b.n, b.m)?, Some(b.n), Some(b.m))
    } else {
        if flags.0.is_some() || flags.1.is_some() || file.basis.is_some() {
            return Err(Error::InvalidParameter(format!(
                "basis parameters apply to qubit nodes; node 2 holds {d}-level systems"
            )));
        }
        notes.push(format!("{d}-level node measured in the Bell basis"));
        (MeasurementBasis::bell(d)?, None, None)
    };
    let qubits = s12.dim_left() == 2 && s23.dim_right() == 2 && d == 2;
    let (conc_rel, fid_rel) = match (qubits, n, m) {
        (true, Some(n), Some(m)) => (
            Some(verify_qubit_relation(s12, s23, n, m)?),
            Some(verify_swap_fidelity_relation(s12, s23, n, m)?),
        ),
        _ => (None, None),
    };
    let residual_at = |rel: &Option<redswap::swap::RelationReport<f64>>, r: usize, h: usize| {
        rel.as_ref()
            .and_then(|rep| rep.entries.iter().find(|e| e.outcome == [(r, h)]).map(|e| e.residual))
    };

    let outcomes = swap_once(s12, s23, &basis)?;
    let rows: Vec<SwapRow> = outcomes
        .iter()
        .map(|o| {
            let (r, h) = o.outcome_indices[0];
            let c = o.state.as_ref().map(concurrence);
            SwapRow {
                r,
                h,
                probability: o.probability,
                concurrence: c,
                fidelity: if qubits {
                    c.map(teleportation_fidelity_pure)
                } else {
                    None
                },
                capacity: o.state.as_ref().and_then(|s| dense_coding_capacity_pure(s).ok()),
                concurrence_residual: residual_at(&conc_rel, r, h),
                fidelity_residual: residual_at(&fid_rel, r, h),
            }
        })
        .collect();
    let max_residual = rows
        .iter()
        .flat_map(|r| [r.concurrence_residual, r.fidelity_residual])
        .flatten()
        .reduce(f64::max);
    let report = SwapReport {
        basis: if d == 2 { "general qubit" } else { "Bell" }.into(),
        n,
        m,
        notes,
        total_probability: outcomes.iter().map(|o| o.probability).sum(),
        outcomes: rows,
        max_residual,
    };
    let text = match format {
        Format::Json => json(&report),
        Format::Text => swap_text(&report),
    };
    Ok(Output {
        text,
        violation: exceeds(max_residual, tol),
    })
}

fn swap_text(rep: &SwapReport) -> String {
    let mut out = match (rep.n, rep.m) {
        (Some(n), Some(m)) => format!("basis: {}, n = {}, m = {}\n", rep.basis, num(n), num(m)),
        _ => format!("basis: {}\n", rep.basis),
    };
    for note in &rep.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out.push('\n');
    let rows: Vec<Vec<String>> = rep
        .outcomes
        .iter()
        .map(|o| {
            vec![
                format!("({}, {})", o.r, o.h),
                num(o.probability),
                opt(o.concurrence),
                opt(o.fidelity),
                opt(o.capacity),
                opt(o.concurrence_residual),
                opt(o.fidelity_residual),
            ]
        })
        .collect();
    out.push_str(&table(
        &[
            "(r, h)",
            "probability",
            "concurrence",
            "fidelity",
            "capacity",
            "C residual",
            "F residual",
        ],
        &rows,
    ));
    let _ = writeln!(out, "\ntotal probability: {}", num(rep.total_probability));
    let _ = writeln!(out, "max residual: {}", opt(rep.max_residual));
    out
}

#[derive(Serialize)]
struct ChainReport<'a> {
    links: usize,
    notes: Vec<String>,
    simulation: &'a PathSimulation<f64>,
}

pub fn chain(path: &Path, flags: (Option<f64>, Option<f64>), tol: f64, format: Format) -> Result<Output> {
    let text = read(path)?;
    let file: ChainFile = parse(path, &text)?;
    let states = load_states(path, &file.states)?;
    if states.len() < 2 {
        return Err(Error::Parse(format!(
            "{}: a chain needs at least two states",
            path.display()
        )));
    }
    let names: Vec<String> = (1..=states.len() + 1).map(|k| k.to_string()).collect();
    let mut g = NetworkGraph::new(names.iter().cloned())?;
    for (k, s) in states.into_iter().enumerate() {
        g.add_edge(&names[k], &names[k + 1], s, &format!("states[{k}]"))?;
    }
    let d = g.local_dim().expect("chain has links");
    let nodes = names.len() - 2;
    let mut notes = Vec::new();
    let params = if d == 2 {
        let per_node: Vec<Option<BasisDoc>> = match &file.params {
            Some(p) if p.len() != nodes => {
                return Err(Error::Parse(format!(
                    "{}: {nodes} intermediate nodes need {nodes} params, got {}",
                    path.display(),
                    p.len()
                )))
            }
            Some(p) => p.iter().copied().map(Some).collect(),
            None => vec![None; nodes],
        };
        let merged: Vec<(BasisDoc, bool)> = per_node.into_iter().map(|b| merge(flags, b)).collect();
        if merged.iter().any(|(_, defaulted)| *defaulted) {
            notes.push("basis parameters not fully given; missing values default to 1".into());
        }
        merged.into_iter().map(|(b, _)| (b.n, b.m)).collect()
    } else {
        if flags.0.is_some() || flags.1.is_some() || file.params.is_some() {
            return Err(Error::InvalidParameter(format!(
                "basis parameters apply to qubit chains; links are {d}-level"
            )));
        }
        notes.push(format!("{d}-level nodes measured in the Bell basis"));
        Vec::new()
    };
    let sim = simulate_path(&g, &names, &params)?;
    let report = ChainReport {
        links: names.len() - 1,
        notes,
        simulation: &sim,
    };
    let text = match format {
        Format::Json => json(&report),
        Format::Text => {
            let mut out = format!("chain of {} links\n", report.links);
            for note in &report.notes {
                let _ = writeln!(out, "note: {note}");
            }
            out.push('\n');
            out.push_str(&simulation_text(&sim));
            out
        }
    };
    Ok(Output {
        text,
        violation: exceeds(sim.max_residual, tol),
    })
}

fn outcome_label(outcome: &[(usize, usize)]) -> String {
    if outcome.is_empty() {
        return "-".into();
    }
    outcome
        .iter()
        .map(|(r, h)| format!("({r}, {h})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn simulation_text(sim: &PathSimulation<f64>) -> String {
    let mut out = String::new();
    if !sim.params.is_empty() {
        let p: Vec<String> = sim
            .params
            .iter()
            .map(|(n, m)| format!("({}, {})", num(*n), num(*m)))
            .collect();
        let _ = writeln!(out, "basis parameters (n, m): {}", p.join(" "));
    }
    let rows: Vec<Vec<String>> = sim
        .outcomes
        .iter()
        .map(|o| {
            vec![
                outcome_label(&o.outcome),
                num(o.probability),
                opt(o.concurrence),
                opt(o.fidelity),
                opt(o.capacity),
                opt(o.predicted_fidelity_term),
                opt(o.residual),
            ]
        })
        .collect();
    out.push_str(&table(
        &[
            "outcome",
            "probability",
            "concurrence",
            "fidelity",
            "capacity",
            "predicted 3F-2",
            "residual",
        ],
        &rows,
    ));
    let _ = writeln!(out, "\ntotal probability: {}", num(sim.total_probability));
    let _ = writeln!(out, "best fidelity: {}", opt(sim.best_fidelity));
    let _ = writeln!(out, "average fidelity: {}", opt(sim.average_fidelity));
    let _ = writeln!(out, "best capacity: {}", num(sim.best_capacity));
    let _ = writeln!(out, "average capacity: {}", num(sim.average_capacity));
    let _ = writeln!(out, "average concurrence: {}", num(sim.average_concurrence));
    let _ = writeln!(out, "max residual: {}", opt(sim.max_residual));
    out
}

pub fn route(
    path: &Path,
    source: &str,
    target: &str,
    metric: Metric,
    flags: (Option<f64>, Option<f64>),
    tol: f64,
    format: Format,
) -> Result<Output> {
    let text = read(path)?;
    let g: NetworkGraph<f64> = parse_network(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })?;
    let mut report = best_path(&g, source, target, metric)?;
    if flags.0.is_some() || flags.1.is_some() {
        if g.local_dim() != Some(2) {
            return Err(Error::InvalidParameter(
                "basis parameters apply to qubit networks".into(),
            ));
        }
        let (b, _) = merge(flags, None);
        let params = vec![(b.n, b.m); report.path.len() - 2];
        report.simulation = simulate_path(&g, &report.path, &params)?;
    }
    let text = match format {
        Format::Json => json(&report),
        Format::Text => {
            let mut out = format!(
                "route {source} -> {target} by {metric}\npath: {}\n",
                report.path.join(" - ")
            );
            let _ = writeln!(out, "heuristic score: {}\n", num(report.heuristic_score));
            let rows: Vec<Vec<String>> = report
                .edge_scores
                .iter()
                .map(|e| {
                    vec![
                        format!("{} - {}", e.from, e.to),
                        e.label.clone(),
                        num(e.score.concurrence),
                        num(e.score.fidelity_term),
                        num(e.score.capacity),
                    ]
                })
                .collect();
            out.push_str(&table(&["link", "label", "concurrence", "3F-2", "capacity"], &rows));
            out.push('\n');
            out.push_str(&simulation_text(&report.simulation));
            out
        }
    };
    Ok(Output {
        text,
        violation: exceeds(report.simulation.max_residual, tol),
    })
}

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{capacity_from_schmidt, concurrence, teleportation_fidelity_pure};
use crate::network::graph::{Edge, NetworkGraph};
use crate::quantum::{schmidt_decompose, PureBipartiteState};
use crate::scalar::Real;
use crate::swap::{chain_swap_simultaneous_with_bases, MeasurementBasis};

/// What a route maximizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Product of link concurrences, i.e. of the per-link `3F − 2` factors.
    Fidelity,
    /// Smallest link dense-coding capacity along the path.
    Capacity,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Fidelity => "fidelity",
            Metric::Capacity => "capacity",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fidelity" => Ok(Metric::Fidelity),
            "capacity" => Ok(Metric::Capacity),
            other => Err(Error::InvalidParameter(format!("unknown metric `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeScore<T> {
    pub concurrence: T,
    /// `3F − 2` of the link, equal to its concurrence for pure links.
    pub fidelity_term: T,
    pub capacity: T,
}

pub fn score_edge<T: Real>(edge: &Edge<T>) -> EdgeScore<T> {
    let c = concurrence(&edge.resource);
    let d = edge.resource.dim_left();
    EdgeScore {
        concurrence: c,
        fidelity_term: T::lit(3.0) * teleportation_fidelity_pure(c) - T::lit(2.0),
        capacity: capacity_from_schmidt(&schmidt_decompose(&edge.resource), d),
    }
}

/// Links with concurrence at or below this deliver nothing and are pruned.
fn usable<T: Real>(score: &EdgeScore<T>) -> bool {
    score.concurrence > T::norm_tol()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoredEdge<T> {
    pub from: String,
    pub to: String,
    pub label: String,
    pub score: EdgeScore<T>,
}

/// One end-to-end outcome of the simulated path.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathOutcome<T> {
    /// `(r, h)` per intermediate node; empty for a single-link path.
    pub outcome: Vec<(usize, usize)>,
    pub probability: T,
    /// `None` for impossible outcomes.
    pub concurrence: Option<T>,
    /// Qubit paths only: `(2 + C)/3`.
    pub fidelity: Option<T>,
    pub capacity: Option<T>,
    /// Qubit paths only: closed-form `3F − 2` from the links.
    pub predicted_fidelity_term: Option<T>,
    /// `|3F(χ) − 2 − predicted|`.
    pub residual: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSimulation<T> {
    /// General-basis `(n, m)` per intermediate node; empty for Bell-basis
    /// qudit paths.
    pub params: Vec<(T, T)>,
    pub outcomes: Vec<PathOutcome<T>>,
    pub total_probability: T,
    pub best_fidelity: Option<T>,
    pub average_fidelity: Option<T>,
    pub best_capacity: T,
    pub average_capacity: T,
    pub average_concurrence: T,
    pub max_residual: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RouteReport<T> {
    pub metric: Metric,
    pub path: Vec<String>,
    pub edge_scores: Vec<ScoredEdge<T>>,
    /// Product of link concurrences (fidelity) or bottleneck capacity.
    pub heuristic_score: T,
    pub simulation: PathSimulation<T>,
}

#[derive(Clone, Debug)]
struct Label<T> {
    cost: T,
    path: Vec<usize>,
}

/// Cost first (within `tol`), then hop count, then node names in order.
fn better<T: Real>(g: &NetworkGraph<T>, a: &Label<T>, b: &Label<T>, tol: T) -> bool {
    if (a.cost - b.cost).abs() > tol {
        return a.cost < b.cost;
    }
    match a.path.len().cmp(&b.path.len()) {
        Ordering::Equal => a.path.iter().map(|&v| g.name(v)).lt(b.path.iter().map(|&v| g.name(v))),
        o => o == Ordering::Less,
    }
}

/// Dijkstra over non-negative edge costs with the tie-breaking of [`better`].
fn search<T: Real>(
    g: &NetworkGraph<T>,
    source: usize,
    target: usize,
    cost: impl Fn(&Edge<T>) -> Option<T>,
) -> Option<Vec<usize>> {
    let n = g.nodes().len();
    let tol = T::lit(1e-12);
    let mut best: Vec<Option<Label<T>>> = vec![None; n];
    let mut done = vec![false; n];
    best[source] = Some(Label {
        cost: T::zero(),
        path: vec![source],
    });
    loop {
        let mut pick: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(l) = &best[v] {
                if pick.is_none_or(|p| better(g, l, best[p].as_ref().expect("picked"), tol)) {
                    pick = Some(v);
                }
            }
        }
        let u = pick?;
        if u == target {
            return best[u].take().map(|l| l.path);
        }
        done[u] = true;
        let here = best[u].clone().expect("picked");
        for e in g.incident(u) {
            let v = e.other(u);
            if done[v] {
                continue;
            }
            let Some(w) = cost(e) else { continue };
            let mut path = here.path.clone();
            path.push(v);
            let cand = Label {
                cost: here.cost + w,
                path,
            };
            if best[v].as_ref().is_none_or(|cur| better(g, &cand, cur, tol)) {
                best[v] = Some(cand);
            }
        }
    }
}

/// Largest `b` such that source and target are joined through usable links
/// of capacity at least `b`.
fn bottleneck<T: Real>(g: &NetworkGraph<T>, scores: &[EdgeScore<T>], source: usize, target: usize) -> Option<T> {
    let mut order: Vec<usize> = (0..g.edges().len()).filter(|&k| usable(&scores[k])).collect();
    order.sort_by(|&x, &y| {
        scores[y]
            .capacity
            .partial_cmp(&scores[x].capacity)
            .unwrap_or(Ordering::Equal)
    });
    let mut parent: Vec<usize> = (0..g.nodes().len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for k in order {
        let e = &g.edges()[k];
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        parent[ra] = rb;
        if find(&mut parent, source) == find(&mut parent, target) {
            return Some(scores[k].capacity);
        }
    }
    None
}

/// A selected path with its link scores, before simulation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RouteChoice<T> {
    pub path: Vec<String>,
    pub edge_scores: Vec<ScoredEdge<T>>,
    pub heuristic_score: T,
}

/// Chooses the path from `source` to `target` that maximizes `metric` over
/// links with non-zero concurrence, then simulates it with Bell-type
/// measurements at every intermediate node. Ties go to fewer hops, then to
/// the lexicographically smaller sequence of node names.
pub fn best_path<T: Real>(g: &NetworkGraph<T>, source: &str, target: &str, metric: Metric) -> Result<RouteReport<T>> {
    let choice = choose_path(g, source, target, metric)?;
    let simulation = simulate_path(g, &choice.path, &[])?;
    Ok(RouteReport {
        metric,
        path: choice.path,
        edge_scores: choice.edge_scores,
        heuristic_score: choice.heuristic_score,
        simulation,
    })
}

/// Path selection alone, as used by [`best_path`].
pub fn choose_path<T: Real>(g: &NetworkGraph<T>, source: &str, target: &str, metric: Metric) -> Result<RouteChoice<T>> {
    let s = g.index_of(source)?;
    let t = g.index_of(target)?;
    if s == t {
        return Err(Error::InvalidParameter("source and target must differ".into()));
    }
    let scores: Vec<EdgeScore<T>> = g.edges().iter().map(score_edge).collect();
    let score_of = |e: &Edge<T>| {
        let k = g
            .edges()
            .iter()
            .position(|x| std::ptr::eq(x, e))
            .expect("edge of this graph");
        scores[k]
    };
    let unreachable = || Error::Unreachable {
        from: source.to_string(),
        to: target.to_string(),
    };
    let path = match metric {
        Metric::Fidelity => search(g, s, t, |e| {
            let sc = score_of(e);
            usable(&sc).then(|| -sc.concurrence.min(T::one()).ln())
        }),
        Metric::Capacity => {
            let floor = bottleneck(g, &scores, s, t).ok_or_else(unreachable)?;
            let tol = T::lit(1e-12);
            search(g, s, t, |e| {
                let sc = score_of(e);
                (usable(&sc) && sc.capacity >= floor - tol).then(T::zero)
            })
        }
    }
    .ok_or_else(unreachable)?;

    let names: Vec<String> = path.iter().map(|&v| g.name(v).to_string()).collect();
    let edge_scores: Vec<ScoredEdge<T>> = path
        .windows(2)
        .map(|w| {
            let e = g.edge_between(w[0], w[1]).expect("path follows edges");
            ScoredEdge {
                from: g.name(w[0]).to_string(),
                to: g.name(w[1]).to_string(),
                label: e.label.clone(),
                score: score_of(e),
            }
        })
        .collect();
    let heuristic_score = match metric {
        Metric::Fidelity => edge_scores.iter().fold(T::one(), |acc, e| acc * e.score.concurrence),
        Metric::Capacity => edge_scores.iter().map(|e| e.score.capacity).fold(T::infinity(), T::min),
    };
    Ok(RouteChoice {
        path: names,
        edge_scores,
        heuristic_score,
    })
}

/// Exact end-to-end simulation along `path`. Qubit paths measure intermediate
/// node `k` in the general basis with `params[k]` (all `(1, 1)` when `params`
/// is empty); qudit paths use the Bell basis and take no parameters.
pub fn simulate_path<T: Real>(g: &NetworkGraph<T>, path: &[String], params: &[(T, T)]) -> Result<PathSimulation<T>> {
    if path.len() < 2 {
        return Err(Error::InvalidParameter("a path needs at least two nodes".into()));
    }
    let idx = path.iter().map(|n| g.index_of(n)).collect::<Result<Vec<_>>>()?;
    let links = idx
        .windows(2)
        .map(|w| {
            g.edge_between(w[0], w[1])
                .map(|e| e.oriented_from(w[0]))
                .ok_or_else(|| Error::InvalidNetwork(format!("no link between {} and {}", g.name(w[0]), g.name(w[1]))))
        })
        .collect::<Result<Vec<PureBipartiteState<T>>>>()?;
    let d = links[0].dim_left();
    let g_count = links.len() - 1;
    let qubit = d == 2;
    let params: Vec<(T, T)> = if !qubit {
        if !params.is_empty() {
            return Err(Error::InvalidParameter(
                "basis parameters apply to qubit paths only".into(),
            ));
        }
        Vec::new()
    } else if params.is_empty() {
        vec![(T::one(), T::one()); g_count]
    } else if params.len() == g_count {
        params.to_vec()
    } else {
        return Err(Error::InvalidParameter(format!(
            "{g_count} intermediate nodes need {g_count} parameter pairs, got {}",
            params.len()
        )));
    };

    let link_c: Vec<T> = links.iter().map(concurrence).collect();
    let raw = if g_count == 0 {
        vec![(Vec::new(), T::one(), Some(links[0].clone()), T::one())]
    } else {
        let bases = if qubit {
            params
                .iter()
                .map(|&(n, m)| MeasurementBasis::general(n, m))
                .collect::<Result<Vec<_>>>()?
        } else {
            vec![MeasurementBasis::bell(d)?; g_count]
        };
        chain_swap_simultaneous_with_bases(&links, &bases)?
            .into_iter()
            .map(|o| {
                let f_product = o
                    .outcome_indices
                    .iter()
                    .zip(&params)
                    .fold(T::one(), |acc, (&(_, h), &(n, m))| acc * if h == 0 { n } else { m });
                let scale = f_product / (T::lit(2.0).powi(g_count as i32) * o.normalization);
                (o.outcome_indices, o.probability, o.state, scale)
            })
            .collect()
    };
    let link_product = link_c.iter().fold(T::one(), |acc, &c| acc * c);

    let mut outcomes = Vec::with_capacity(raw.len());
    for (outcome, probability, state, scale) in raw {
        let (c, cap) = match &state {
            Some(s) => (
                Some(concurrence(s)),
                Some(capacity_from_schmidt(&schmidt_decompose(s), d)),
            ),
            None => (None, None),
        };
        let (fidelity, predicted, residual) = match (qubit, c) {
            (true, Some(c)) => {
                let predicted = scale * link_product;
                let f = teleportation_fidelity_pure(c);
                (
                    Some(f),
                    Some(predicted),
                    Some((T::lit(3.0) * f - T::lit(2.0) - predicted).abs()),
                )
            }
            _ => (None, None, None),
        };
        outcomes.push(PathOutcome {
            outcome,
            probability,
            concurrence: c,
            fidelity,
            capacity: cap,
            predicted_fidelity_term: predicted,
            residual,
        });
    }

    let weighted = |f: fn(&PathOutcome<T>) -> Option<T>| -> T {
        outcomes.iter().filter_map(|o| f(o).map(|x| o.probability * x)).sum()
    };
    let best = |f: fn(&PathOutcome<T>) -> Option<T>| -> Option<T> { outcomes.iter().filter_map(f).reduce(T::max) };
    Ok(PathSimulation {
        total_probability: outcomes.iter().map(|o| o.probability).sum(),
        best_fidelity: best(|o| o.fidelity),
        average_fidelity: qubit.then(|| weighted(|o| o.fidelity)),
        best_capacity: best(|o| o.capacity).unwrap_or(T::zero()),
        average_capacity: weighted(|o| o.capacity),
        average_concurrence: weighted(|o| o.concurrence),
        max_residual: best(|o| o.residual),
        params,
        outcomes,
    })
}

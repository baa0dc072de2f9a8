use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quantum::PureBipartiteState;
use crate::scalar::Real;

/// Largest `|‖ψ‖² − 1|` accepted from a document before renormalizing.
pub const LOAD_NORM_TOLERANCE: f64 = 1e-4;

/// A pure state as written in files: `dims = [rows, cols]` and row-major
/// `amp` entries as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub dims: [usize; 2],
    pub amp: Vec<Vec<[f64; 2]>>,
}

impl StateDocument {
    pub fn from_state<T: Real>(s: &PureBipartiteState<T>) -> Self {
        let amp = s.amp();
        Self {
            dims: [amp.rows(), amp.cols()],
            amp: (0..amp.rows())
                .map(|i| {
                    (0..amp.cols())
                        .map(|j| [amp[(i, j)].re.to_f64_lossy(), amp[(i, j)].im.to_f64_lossy()])
                        .collect()
                })
                .collect(),
        }
    }

    /// Builds the state, accepting norms within [`LOAD_NORM_TOLERANCE`] of 1
    /// and renormalizing them. `at` names the location for error messages.
    pub fn to_state<T: Real>(&self, at: &str) -> Result<PureBipartiteState<T>> {
        let [rows, cols] = self.dims;
        if self.amp.len() != rows || self.amp.iter().any(|row| row.len() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "{at}: dims {rows}x{cols} do not match the shape of amp"
            )));
        }
        if rows < 2 || cols < 2 {
            return Err(Error::DimensionMismatch(format!(
                "{at}: subsystems need dimension >= 2"
            )));
        }
        if self.amp.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse(format!("{at}: non-finite amplitude")));
        }
        let norm_sqr: f64 = self.amp.iter().flatten().map(|[re, im]| re * re + im * im).sum();
        if norm_sqr == 0.0 {
            return Err(Error::Parse(format!("{at}: {}", Error::NotNormalizable)));
        }
        if (norm_sqr - 1.0).abs() > LOAD_NORM_TOLERANCE {
            return Err(Error::Parse(format!("{at}: {}", Error::NotNormalized { norm_sqr })));
        }
        let m = CMatrix::from_fn(rows, cols, |i, j| {
            let [re, im] = self.amp[i][j];
            Complex::new(T::lit(re), T::lit(im))
        });
        PureBipartiteState::normalized(m).map_err(|e| Error::Parse(format!("{at}: {e}")))
    }
}

/// An edge's resource: an inline state or the name of an entry in the
/// document's `states` table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ResourceDocument {
    Inline(StateDocument),
    Named(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub endpoint_a: String,
    pub endpoint_b: String,
    pub resource: ResourceDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeDocument>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, StateDocument>,
}

/// A link between two nodes. Rows of the resource's amplitude matrix belong
/// to `a`, columns to `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge<T> {
    pub a: usize,
    pub b: usize,
    pub resource: PureBipartiteState<T>,
    pub label: String,
}

impl<T: Real> Edge<T> {
    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }

    /// The resource with rows on `from`'s side.
    pub fn oriented_from(&self, from: usize) -> PureBipartiteState<T> {
        if from == self.a {
            self.resource.clone()
        } else {
            self.resource.swapped_parties()
        }
    }
}

/// Nodes joined by pure entangled links, all of the same local dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkGraph<T> {
    nodes: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<Edge<T>>,
    dim: Option<usize>,
}

impl<T: Real> NetworkGraph<T> {
    pub fn new<S: Into<String>>(nodes: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut graph = Self {
            nodes: Vec::new(),
            index: BTreeMap::new(),
            edges: Vec::new(),
            dim: None,
        };
        for name in nodes {
            let name = name.into();
            if name.is_empty() {
                return Err(Error::InvalidNetwork("node names must be non-empty".into()));
            }
            if graph.index.insert(name.clone(), graph.nodes.len()).is_some() {
                return Err(Error::InvalidNetwork(format!("node `{name}` listed twice")));
            }
            graph.nodes.push(name);
        }
        Ok(graph)
    }

    pub fn add_edge(&mut self, a: &str, b: &str, resource: PureBipartiteState<T>, label: &str) -> Result<()> {
        let at = format!("edge `{label}` ({a} - {b})");
        let ia = self
            .index_of(a)
            .map_err(|_| Error::UnknownNode(format!("{at}: `{a}`")))?;
        let ib = self
            .index_of(b)
            .map_err(|_| Error::UnknownNode(format!("{at}: `{b}`")))?;
        if ia == ib {
            return Err(Error::InvalidNetwork(format!("{at}: self-loop")));
        }
        let (dl, dr) = (resource.dim_left(), resource.dim_right());
        if dl != dr {
            return Err(Error::InvalidNetwork(format!(
                "{at}: resource is {dl}x{dr}, links need equal local dimensions"
            )));
        }
        match self.dim {
            Some(d) if d != dl => {
                return Err(Error::InvalidNetwork(format!(
                    "{at}: {dl}-level link in a network of {d}-level links"
                )))
            }
            _ => self.dim = Some(dl),
        }
        if self.edge_between(ia, ib).is_some() {
            return Err(Error::InvalidNetwork(format!(
                "{at}: duplicate link between {a} and {b}"
            )));
        }
        self.edges.push(Edge {
            a: ia,
            b: ib,
            resource,
            label: label.to_string(),
        });
        Ok(())
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn name(&self, v: usize) -> &str {
        &self.nodes[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Local dimension of every link; `None` for a network without links.
    pub fn local_dim(&self) -> Option<usize> {
        self.dim
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<&Edge<T>> {
        self.edges
            .iter()
            .find(|e| (e.a == u && e.b == v) || (e.a == v && e.b == u))
    }

    pub fn incident(&self, v: usize) -> impl Iterator<Item = &Edge<T>> {
        self.edges.iter().filter(move |e| e.a == v || e.b == v)
    }

    pub fn to_document(&self) -> NetworkDocument {
        NetworkDocument {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    endpoint_a: self.nodes[e.a].clone(),
                    endpoint_b: self.nodes[e.b].clone(),
                    resource: ResourceDocument::Inline(StateDocument::from_state(&e.resource)),
                    label: Some(e.label.clone()),
                })
                .collect(),
            states: BTreeMap::new(),
        }
    }
}

/// Validates a parsed document into a graph. Unlabelled edges are named
/// `e<index>`.
pub fn load_network<T: Real>(doc: &NetworkDocument) -> Result<NetworkGraph<T>> {
    let mut g = NetworkGraph::new(doc.nodes.iter().cloned())?;
    for (k, e) in doc.edges.iter().enumerate() {
        let label = e.label.clone().unwrap_or_else(|| format!("e{k}"));
        let at = format!("edges[{k}] `{label}`");
        let resource = match &e.resource {
            ResourceDocument::Inline(s) => s.to_state(&at)?,
            ResourceDocument::Named(name) => doc
                .states
                .get(name)
                .ok_or_else(|| Error::InvalidNetwork(format!("{at}: no state named `{name}`")))?
                .to_state(&format!("{at} (state `{name}`)"))?,
        };
        g.add_edge(&e.endpoint_a, &e.endpoint_b, resource, &label)?;
    }
    Ok(g)
}

/// Parses and validates a network from JSON text.
pub fn parse_network<T: Real>(json: &str) -> Result<NetworkGraph<T>> {
    let doc: NetworkDocument = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    load_network(&doc)
}

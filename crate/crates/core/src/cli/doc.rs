//! JSON graph documents.

use serde::{Deserialize, Serialize};

use crate::graph::{Dart, GraphBuilder, MarkedMetricGraph};
use crate::rational::{fmt_rational, parse_rational};

use super::syntax::{format_word, parse_word};
use super::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub id: String,
    pub from: String,
    pub to: String,
    /// `p/q`, an integer or a finite decimal.
    pub length: String,
    /// Word read by the edge; derived from the marking when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDocument>,
    pub basepoint: String,
    /// One petal per generator, as edge ids with `-` marking reversed traversal.
    pub marking: Vec<Vec<String>>,
}

impl GraphDocument {
    /// Canonical document: vertices and edges sorted by id, reduced `p/q` lengths.
    pub fn from_graph(g: &MarkedMetricGraph) -> GraphDocument {
        let mut vertices: Vec<String> = g.vertex_names().to_vec();
        vertices.sort();
        let mut edges: Vec<EdgeDocument> = g
            .edges()
            .iter()
            .map(|e| EdgeDocument {
                id: e.name.clone(),
                from: g.vertex_name(e.origin).to_string(),
                to: g.vertex_name(e.terminus).to_string(),
                length: fmt_rational(&e.length),
                label: Some(format_word(&e.label)),
            })
            .collect();
        edges.sort_by(|x, y| x.id.cmp(&y.id));
        let marking = g.marking().iter().map(|m| m.darts.iter().map(|&d| dart_token(g, d)).collect()).collect();
        GraphDocument { rank: g.rank(), vertices, edges, basepoint: g.vertex_name(g.basepoint()).to_string(), marking }
    }

    pub fn to_graph(&self) -> Result<MarkedMetricGraph, CliError> {
        let mut b = GraphBuilder::new(self.rank);
        for v in &self.vertices {
            b = b.vertex(v);
        }
        for e in &self.edges {
            let length = parse_rational(&e.length).map_err(|err| CliError::Invalid(format!("edge {}: {err}", e.id)))?;
            let label = match &e.label {
                Some(s) => {
                    Some(parse_word(s, self.rank).map_err(|err| CliError::Invalid(format!("edge {}: {err}", e.id)))?)
                }
                None => None,
            };
            b = b.edge(&e.id, &e.from, &e.to, length, label);
        }
        b = b.basepoint(&self.basepoint);
        for petal in &self.marking {
            let steps = petal
                .iter()
                .map(|t| match t.strip_prefix('-') {
                    Some(n) => (n.to_string(), true),
                    None => (t.clone(), false),
                })
                .collect();
            b = b.petal_steps(steps);
        }
        b.build().map_err(|e| CliError::Invalid(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<GraphDocument, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("malformed graph document: {e}")))
    }
}

fn dart_token(g: &MarkedMetricGraph, d: Dart) -> String {
    let name = &g.edge(d.edge()).name;
    if d.is_reversed() {
        format!("-{name}")
    } else {
        name.clone()
    }
}

pub fn read_graph(path: &str) -> Result<MarkedMetricGraph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{path}: {e}")))?;
    GraphDocument::parse(&text)?.to_graph()
}

pub fn graph_to_json(g: &MarkedMetricGraph) -> String {
    GraphDocument::from_graph(g).to_json()
}

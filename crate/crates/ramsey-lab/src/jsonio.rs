//! JSON encodings shared by the CLI: the edge-list graph form
//! {"n", "edges", "types"?, "pattern"?} and the report serializations.
//! Rationals are always emitted as "p/q" strings so output can be piped back
//! in without loss.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arrow::{ArrowResult, ColouringCertificate, Decision, MinMonoReport};
use crate::balance::BalanceCertificate;
use crate::density::DensityReport;
use crate::family::{BalanceVerdict, FamilyMember};
use crate::graph::{EdgeId, Graph, GraphError};
use crate::graph6::{emit_graph6, parse_graph6, Graph6Error};
use crate::moments::UpperTailReport;
use crate::ratio::format_ratio;
use crate::suen::SuenReport;
use crate::typed::{TypedError, TypedGraph};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown key {0:?} in graph object")]
    UnknownKey(String),
    #[error("missing field {0:?}")]
    MissingField(&'static str),
    #[error("field {0:?} has the wrong shape")]
    BadField(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
    #[error(transparent)]
    Typed(#[from] TypedError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// A graph parsed from the wire: edge list plus optional typing data.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInput {
    pub graph: Graph,
    pub types: Option<Vec<EdgeId>>,
    pub pattern: Option<Graph>,
}

impl GraphInput {
    /// Requires both `types` and `pattern` and assembles the typed graph.
    pub fn into_typed(self) -> Result<TypedGraph, JsonError> {
        let types = self.types.ok_or(JsonError::MissingField("types"))?;
        let pattern = self.pattern.ok_or(JsonError::MissingField("pattern"))?;
        Ok(TypedGraph::new(self.graph, pattern, types)?)
    }
}

fn as_usize(v: &Value, field: &'static str) -> Result<usize, JsonError> {
    v.as_u64().map(|x| x as usize).ok_or(JsonError::BadField(field))
}

/// Parses the JSON edge-list form. Unknown keys are rejected.
pub fn parse_graph_json(text: &str) -> Result<GraphInput, JsonError> {
    let value: Value = serde_json::from_str(text)?;
    let obj = value.as_object().ok_or(JsonError::BadField("graph object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "n" | "edges" | "types" | "pattern") {
            return Err(JsonError::UnknownKey(key.clone()));
        }
    }
    let n = as_usize(obj.get("n").ok_or(JsonError::MissingField("n"))?, "n")?;
    let edges_val = obj.get("edges").ok_or(JsonError::MissingField("edges"))?;
    let mut edges = Vec::new();
    for pair in edges_val.as_array().ok_or(JsonError::BadField("edges"))? {
        let pair = pair.as_array().ok_or(JsonError::BadField("edges"))?;
        if pair.len() != 2 {
            return Err(JsonError::BadField("edges"));
        }
        edges.push((as_usize(&pair[0], "edges")?, as_usize(&pair[1], "edges")?));
    }
    let graph = Graph::from_edges(n, &edges)?;
    let types = match obj.get("types") {
        Some(v) => Some(
            v.as_array()
                .ok_or(JsonError::BadField("types"))?
                .iter()
                .map(|t| as_usize(t, "types").map(EdgeId))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        None => None,
    };
    let pattern = match obj.get("pattern") {
        Some(v) => Some(parse_graph6(v.as_str().ok_or(JsonError::BadField("pattern"))?)?),
        None => None,
    };
    Ok(GraphInput { graph, types, pattern })
}

/// Parses a graph argument: `@path` loads a JSON file, anything else is a
/// graph6 string.
pub fn parse_graph_spec(spec: &str) -> Result<GraphInput, JsonError> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| JsonError::Io { path: path.to_string(), message: e.to_string() })?;
        parse_graph_json(&text)
    } else {
        Ok(GraphInput { graph: parse_graph6(spec)?, types: None, pattern: None })
    }
}

pub fn graph_json(g: &Graph) -> Value {
    json!({
        "n": g.vertex_count(),
        "edges": g.edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
    })
}

pub fn typed_graph_json(g: &TypedGraph) -> Value {
    let mut obj = graph_json(g.graph());
    let map = obj.as_object_mut().unwrap();
    map.insert("types".into(), json!(g.typemap().iter().map(|t| t.0).collect::<Vec<_>>()));
    map.insert("pattern".into(), json!(emit_graph6(g.pattern())));
    obj
}

fn edge_ids_json(edges: &[EdgeId]) -> Value {
    json!(edges.iter().map(|e| e.0).collect::<Vec<_>>())
}

pub fn density_report_json(r: &DensityReport) -> Value {
    json!({
        "value": format_ratio(&r.value),
        "maximizers": r.maximizers.iter().map(|m| edge_ids_json(m)).collect::<Vec<_>>(),
        "unique": r.unique,
    })
}

pub fn balance_certificate_json(c: &BalanceCertificate) -> Value {
    let weights: Map<String, Value> = c
        .weightfn
        .weights()
        .iter()
        .enumerate()
        .map(|(i, w)| (i.to_string(), json!(format_ratio(w))))
        .collect();
    let residuals: Map<String, Value> = c
        .residuals
        .iter()
        .map(|(e, r)| (e.0.to_string(), json!(format_ratio(r))))
        .collect();
    let tight: Map<String, Value> =
        c.tight_subgraphs.iter().map(|(e, h)| (e.0.to_string(), edge_ids_json(h))).collect();
    json!({
        "weights": weights,
        "residuals": residuals,
        "tight": tight,
        "m2_hf": format_ratio(&c.m2_hf),
        "m2_f": format_ratio(&c.m2_f),
    })
}

pub fn colouring_json(c: &ColouringCertificate) -> Value {
    let map: Map<String, Value> = c
        .colouring
        .iter()
        .enumerate()
        .map(|(e, &col)| (e.to_string(), json!(col)))
        .collect();
    Value::Object(map)
}

pub fn arrow_result_json(r: &ArrowResult) -> Value {
    let (arrows, certificate, indeterminate) = match &r.decision {
        Decision::Arrows => (json!(true), Value::Null, json!(false)),
        Decision::DoesNotArrow(cert) => (json!(false), colouring_json(cert), json!(false)),
        Decision::Indeterminate { budget } => {
            (Value::Null, Value::Null, json!({ "budget": budget }))
        }
    };
    json!({
        "arrows": arrows,
        "certificate": certificate,
        "indeterminate": indeterminate,
        "nodes": r.stats.nodes,
        "copies_per_colour": r.stats.copies_per_colour,
    })
}

pub fn min_mono_json(r: &MinMonoReport) -> Value {
    json!({
        "min_total": r.min_total,
        "per_colour": r.per_colour,
        "colouring": colouring_json(&r.colouring),
    })
}

pub fn suen_report_json(r: &SuenReport) -> Value {
    json!({
        "mu": r.mu,
        "big_delta": r.big_delta,
        "small_delta": r.small_delta,
        "bound": r.bound,
    })
}

pub fn tail_report_json(r: &UpperTailReport) -> Value {
    json!({
        "expectation": format_ratio(&r.expectation),
        "variance": format_ratio(&r.variance),
        "chebyshev": format_ratio(&r.chebyshev),
        "min_subgraph": edge_ids_json(&r.min_subgraph),
        "min_value": r.min_value,
    })
}

pub fn family_member_json(m: &FamilyMember) -> Value {
    let attachments: Map<String, Value> =
        m.attachments.iter().map(|(e, emb)| (e.0.to_string(), json!(emb))).collect();
    json!({
        "graph6": emit_graph6(&m.graph),
        "core": m.core,
        "attachment_edge": m.attachment.0,
        "attachments": attachments,
    })
}

pub fn balance_verdict_json(v: &BalanceVerdict) -> Value {
    json!({
        "balanced": v.balanced,
        "partial": v.partial,
        "m2_asym": format_ratio(&v.m2_asym),
        "violations": v.violations.iter().map(|viol| json!({
            "member": viol.member,
            "vertices": viol.vertices,
            "edges": edge_ids_json(&viol.edges),
            "ratio": format_ratio(&viol.ratio),
            "equality_shape": viol.equality_shape,
        })).collect::<Vec<_>>(),
        "equality_cases": v.equality_cases.iter().map(|(m, edges)| json!({
            "member": m,
            "edges": edge_ids_json(edges),
        })).collect::<Vec<_>>(),
    })
}

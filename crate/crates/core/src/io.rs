//! Map file format:
//! `{ "vertices": v, "edges": [[u, w, sign], ...], "rotation": [[dart, ...], ...] }`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::{EmbeddedGraph, MapError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown field `{0}` (use lenient mode to ignore)")]
    UnknownField(String),
    #[error("expected a JSON object")]
    NotAnObject,
    #[error("vertex count {0} disagrees with {1} rotation lists")]
    VertexCount(usize, usize),
    #[error("edge {0}: {1}")]
    BadEdge(usize, String),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub vertices: usize,
    pub edges: Vec<[i64; 3]>,
    pub rotation: Vec<Vec<usize>>,
}

const FIELDS: [&str; 3] = ["vertices", "edges", "rotation"];

impl MapFile {
    pub fn from_graph(g: &EmbeddedGraph) -> Self {
        let edges = (0..g.edge_count())
            .map(|e| {
                let (u, w) = g.endpoints(e);
                [u as i64, w as i64, g.sign(e) as i64]
            })
            .collect();
        let rotation = g.rotations().iter().map(|r| r.iter().map(|&d| d as usize).collect()).collect();
        MapFile { vertices: g.vertex_count(), edges, rotation }
    }

    pub fn parse(text: &str, lenient: bool) -> Result<Self, ParseError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        Self::from_value(value, lenient)
    }

    pub fn from_value(value: serde_json::Value, lenient: bool) -> Result<Self, ParseError> {
        let obj = value.as_object().ok_or(ParseError::NotAnObject)?;
        if !lenient {
            if let Some(k) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
                return Err(ParseError::UnknownField(k.clone()));
            }
        }
        let mut obj = obj.clone();
        obj.retain(|k, _| FIELDS.contains(&k.as_str()));
        Ok(serde_json::from_value(serde_json::Value::Object(obj))?)
    }

    pub fn to_graph(&self, require_simple: bool) -> Result<EmbeddedGraph, ParseError> {
        if self.vertices != self.rotation.len() {
            return Err(ParseError::VertexCount(self.vertices, self.rotation.len()));
        }
        let mut sign = Vec::with_capacity(self.edges.len());
        for (i, &[_, _, s]) in self.edges.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(ParseError::BadEdge(i, format!("sign {s} is not +1 or -1")));
            }
            sign.push(s as i8);
        }
        let rot = self
            .rotation
            .iter()
            .map(|r| r.iter().map(|&d| u32::try_from(d).unwrap_or(u32::MAX)).collect())
            .collect();
        let g = EmbeddedGraph::from_parts(rot, sign, require_simple)?;
        for (i, &[u, w, _]) in self.edges.iter().enumerate() {
            let (a, b) = g.endpoints(i);
            if u != a as i64 || w != b as i64 {
                return Err(MapError::EndpointMismatch(i).into());
            }
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map file serializes")
    }
}

pub fn read_graph(text: &str, lenient: bool, require_simple: bool) -> Result<EmbeddedGraph, ParseError> {
    MapFile::parse(text, lenient)?.to_graph(require_simple)
}

pub fn write_graph(g: &EmbeddedGraph) -> String {
    MapFile::from_graph(g).to_json()
}

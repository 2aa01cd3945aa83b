//! Edge contraction, vertex splitting and restriction to subgraphs.

use thiserror::Error;

use crate::map::{EmbeddedGraph, Faces, MapError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("edge {0} is not contractible")]
    NotContractible(usize),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("vertex {0} has fewer than 2 kept edges")]
    DegreeTooLow(usize),
    #[error("kept edge set is empty")]
    EmptySubgraph,
}

/// Why an edge cannot be contracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Obstruction {
    /// A side of the edge is not a triangle, or both sides are the same face.
    NotTwoTriangles,
    /// The two facial triangles share their apex.
    SameApex,
    /// The endpoints have a common neighbor other than the two apexes, so the
    /// edge lies on a nonfacial 3-cycle.
    NonfacialTriangle,
    /// The result would have fewer than 3 vertices.
    TooSmall,
}

/// The third vertex of the triangle on side `o` of edge `e`, if that side is
/// a triangular face.
fn apex(g: &EmbeddedGraph, faces: &Faces, e: usize, o: i8) -> Option<usize> {
    let w = &faces.walks[faces.face_of(2 * e, o)];
    if w.len() != 3 {
        return None;
    }
    let (x, y) = g.endpoints(e);
    w.states.iter().map(|s| g.vertex_of(s.0 as usize)).find(|&z| z != x && z != y)
}

/// Checks the contraction precondition for `e`.
pub fn contraction_obstruction(g: &EmbeddedGraph, faces: &Faces, e: usize) -> Option<Obstruction> {
    let (f1, f2) = faces.sides(e);
    if f1 == f2 {
        return Some(Obstruction::NotTwoTriangles);
    }
    let (Some(z1), Some(z2)) = (apex(g, faces, e, 1), apex(g, faces, e, -1)) else {
        return Some(Obstruction::NotTwoTriangles);
    };
    if z1 == z2 {
        return Some(Obstruction::SameApex);
    }
    let (x, y) = g.endpoints(e);
    let mut common = 0;
    let mut nx = vec![false; g.vertex_count()];
    for w in g.neighbors(x) {
        nx[w] = true;
    }
    for w in g.neighbors(y) {
        if nx[w] {
            common += 1;
            if w != z1 && w != z2 {
                return Some(Obstruction::NonfacialTriangle);
            }
        }
    }
    debug_assert_eq!(common, 2);
    if g.vertex_count() < 4 {
        return Some(Obstruction::TooSmall);
    }
    None
}

pub fn contractible_edges(g: &EmbeddedGraph) -> Vec<usize> {
    let faces = g.trace_faces();
    contractible_edges_with(g, &faces)
}

pub fn contractible_edges_with(g: &EmbeddedGraph, faces: &Faces) -> Vec<usize> {
    (0..g.edge_count()).filter(|&e| contraction_obstruction(g, faces, e).is_none()).collect()
}

pub fn contract_edge(g: &EmbeddedGraph, e: usize) -> Result<EmbeddedGraph, SurgeryError> {
    let faces = g.trace_faces();
    if e >= g.edge_count() || contraction_obstruction(g, &faces, e).is_some() {
        return Err(SurgeryError::NotContractible(e));
    }
    Ok(contract_unchecked(g, e))
}

/// Contract `e`, assuming [`contraction_obstruction`] returned `None`.
pub fn contract_unchecked(g0: &EmbeddedGraph, e: usize) -> EmbeddedGraph {
    let (x, y) = g0.endpoints(e);
    let mut g = g0.clone();
    if g.sign(e) < 0 {
        g.flip_vertex(y);
    }
    let (a, b) = (2 * e, 2 * e + 1);
    let (q2, p1) = (g.next(a), g.prev(a));
    let (c1, c2) = (g.next(b), g.prev(b));
    let (z1, z2) = (g.head(c1), g.head(c2));
    let (ce1, ce2) = (c1 >> 1, c2 >> 1);

    let mut merged: Vec<u32> = Vec::with_capacity(g.degree(x) + g.degree(y) - 4);
    let mut d = q2;
    loop {
        merged.push(d as u32);
        if d == p1 {
            break;
        }
        d = g.next(d);
    }
    let mut d = g.next(c1);
    while d != c2 {
        merged.push(d as u32);
        d = g.next(d);
    }

    let dead = |edge: usize| edge == e || edge == ce1 || edge == ce2;
    let mut new_edge = vec![u32::MAX; g.edge_count()];
    let mut sign = Vec::with_capacity(g.edge_count() - 3);
    for old in 0..g.edge_count() {
        if !dead(old) {
            new_edge[old] = sign.len() as u32;
            sign.push(g.sign(old));
        }
    }
    let map_dart = |d: u32| 2 * new_edge[(d >> 1) as usize] + (d & 1);
    let mut rot = Vec::with_capacity(g.vertex_count() - 1);
    for v in 0..g.vertex_count() {
        if v == y {
            continue;
        }
        let src: &[u32] = if v == x { &merged } else { g.rotation(v) };
        let dropped = |d: u32| {
            (v == z1 && d as usize == c1 ^ 1) || (v == z2 && d as usize == c2 ^ 1)
        };
        rot.push(src.iter().copied().filter(|&d| !dropped(d)).map(map_dart).collect());
    }
    EmbeddedGraph::from_parts(rot, sign, false).expect("contraction of a contractible edge")
}

/// Split `v` along the cut darts `p1` and `q2`. The old vertex keeps the
/// forward arc from `q2` to `p1`; the new vertex (index `v_count`) takes the
/// darts strictly between `p1` and `q2`. Returns the new graph and the id of
/// the new edge joining the two halves, which is the old edge count.
pub fn split_vertex(g: &EmbeddedGraph, v: usize, p1: usize, q2: usize) -> Result<(EmbeddedGraph, usize), SurgeryError> {
    if v >= g.vertex_count() || p1 >= g.dart_count() || q2 >= g.dart_count() {
        return Err(SurgeryError::InvalidSplit("vertex or dart out of range".into()));
    }
    if g.vertex_of(p1) != v || g.vertex_of(q2) != v {
        return Err(SurgeryError::InvalidSplit("cut darts must leave the split vertex".into()));
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    let (ne, nc1, nc2) = (m, m + 1, m + 2);
    let (a, b) = (2 * ne as u32, 2 * ne as u32 + 1);
    let (c1, c1p) = (2 * nc1 as u32, 2 * nc1 as u32 + 1);
    let (c2, c2p) = (2 * nc2 as u32, 2 * nc2 as u32 + 1);
    let (z1, z2) = (g.head(p1), g.head(q2));

    let mut xrot = vec![a];
    let mut d = q2;
    loop {
        xrot.push(d as u32);
        if d == p1 {
            break;
        }
        d = g.next(d);
    }
    let mut yrot = vec![b, c1];
    let mut d = g.next(p1);
    while d != q2 {
        yrot.push(d as u32);
        d = g.next(d);
    }
    yrot.push(c2);

    let s1 = g.dart_sign(p1);
    let s2 = g.dart_sign(q2);
    let mut rot: Vec<Vec<u32>> = g.rotations().to_vec();
    rot[v] = xrot;
    rot.push(yrot);
    let insert = |r: &mut Vec<u32>, anchor: u32, dart: u32, after: bool| {
        let i = r.iter().position(|&x| x == anchor).expect("anchor dart present");
        r.insert(if after { i + 1 } else { i }, dart);
    };
    insert(&mut rot[z1], (p1 ^ 1) as u32, c1p, s1 < 0);
    insert(&mut rot[z2], (q2 ^ 1) as u32, c2p, s2 > 0);
    let mut sign = g.signs().to_vec();
    sign.extend([1, s1, s2]);
    debug_assert_eq!(rot.len(), n + 1);
    match EmbeddedGraph::from_parts(rot, sign, true) {
        Ok(h) => Ok((h, ne)),
        Err(MapError::NotSimple(msg)) => Err(SurgeryError::InvalidSplit(msg)),
        Err(other) => Err(SurgeryError::InvalidSplit(other.to_string())),
    }
}

/// All valid splits of `g`, as `(vertex, p1, q2)`.
pub fn all_splits(g: &EmbeddedGraph) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        for &p1 in g.rotation(v) {
            for &q2 in g.rotation(v) {
                if p1 != q2 && split_vertex(g, v, p1 as usize, q2 as usize).is_ok() {
                    out.push((v, p1 as usize, q2 as usize));
                }
            }
        }
    }
    out
}

/// A subgraph with the embedding inherited from its parent.
#[derive(Debug, Clone)]
pub struct SubgraphEmbedding<'a> {
    pub parent: &'a EmbeddedGraph,
    pub faces: Faces,
    pub kept: Vec<bool>,
    /// Parent rotation filtered to kept darts.
    pub induced_rotation: Vec<Vec<u32>>,
    /// Group id of each parent face.
    pub face_group: Vec<usize>,
    /// Parent faces of each group, ascending.
    pub groups: Vec<Vec<usize>>,
}

impl SubgraphEmbedding<'_> {
    pub fn kept_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.kept.iter().enumerate().filter(|x| *x.1).map(|x| x.0)
    }

    pub fn kept_degree(&self, v: usize) -> usize {
        self.induced_rotation[v].len()
    }
}

pub fn restrict_to_subgraph<'a>(
    g: &'a EmbeddedGraph,
    kept_edges: &[usize],
    strict: bool,
) -> Result<SubgraphEmbedding<'a>, SurgeryError> {
    if kept_edges.is_empty() {
        return Err(SurgeryError::EmptySubgraph);
    }
    let mut kept = vec![false; g.edge_count()];
    for &e in kept_edges {
        kept[e] = true;
    }
    let induced_rotation: Vec<Vec<u32>> =
        g.rotations().iter().map(|r| r.iter().copied().filter(|&d| kept[(d >> 1) as usize]).collect()).collect();
    if strict {
        if let Some(v) = induced_rotation.iter().position(|r| r.len() == 1) {
            return Err(SurgeryError::DegreeTooLow(v));
        }
    }
    let faces = g.trace_faces();
    let mut parent: Vec<usize> = (0..faces.count()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in (0..g.edge_count()).filter(|&e| !kept[e]) {
        let (f1, f2) = faces.sides(e);
        let (r1, r2) = (find(&mut parent, f1), find(&mut parent, f2));
        if r1 != r2 {
            parent[r1.max(r2)] = r1.min(r2);
        }
    }
    let mut id = vec![usize::MAX; faces.count()];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut face_group = vec![0; faces.count()];
    for f in 0..faces.count() {
        let r = find(&mut parent, f);
        if id[r] == usize::MAX {
            id[r] = groups.len();
            groups.push(Vec::new());
        }
        face_group[f] = id[r];
        groups[id[r]].push(f);
    }
    Ok(SubgraphEmbedding { parent: g, faces, kept, induced_rotation, face_group, groups })
}

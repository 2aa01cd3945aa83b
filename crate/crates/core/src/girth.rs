//! Superfaces and girth inequalities.
//!
//! A superface is a face of a subgraph `K` of `G` (no vertices of degree 0
//! or 1 in `K`) whose complement still contains a face of `G`. It is stored
//! as the set of `G`-faces it contains plus the edges of `G` interior to it;
//! everything else is derived from those two sets.
//!
//! Euler characteristics are counted over open cells: interior vertices,
//! interior edges and contained faces. For a superface with disjoint boundary
//! cycles this is the Euler characteristic of its closure. In general it is
//! the Euler characteristic of the closure after the vertex splitting
//! normalization, which [`normalize`] performs explicitly as a cross-check.

use std::collections::{HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::map::{EmbeddedGraph, FaceWalk, Faces};
use crate::surgery::split_vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GirthError {
    #[error("freedom count is {found}, expected {alpha}")]
    PreconditionFGNotAlpha { found: i64, alpha: i64 },
    #[error("graph too large for superface enumeration: {0}")]
    TooLarge(String),
    #[error("genus cap {cap} exceeds the genus {genus} of the surface")]
    GenusCapTooLarge { cap: i64, genus: i64 },
    #[error("edge set is not a cycle")]
    NotACycle,
    #[error("walk does not bound a disc")]
    NotPlanarType,
}

fn bits64(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

fn bits128(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

#[inline]
fn sidx(d: usize, o: i8) -> usize {
    2 * d + usize::from(o < 0)
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

fn union(p: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(p, a), find(p, b));
    if ra != rb {
        p[ra.max(rb)] = ra.min(rb);
    }
}

/// Boundary walks of the region made of the faces with `in_u` true, glued
/// across the edges with `interior` true. A walk steps along a boundary edge
/// and then turns through interior darts until it meets the next boundary
/// dart.
fn boundary_walks(
    g: &EmbeddedGraph,
    faces: &Faces,
    in_u: impl Fn(usize) -> bool,
    interior: impl Fn(usize) -> bool,
) -> Vec<FaceWalk> {
    let mut seen = vec![false; 2 * g.dart_count()];
    let mut walks = Vec::new();
    for e in 0..g.edge_count() {
        if interior(e) {
            continue;
        }
        for o0 in [1i8, -1] {
            let d0 = 2 * e;
            if seen[sidx(d0, o0)] || !in_u(faces.face_of(d0, o0)) {
                continue;
            }
            let mut states = Vec::new();
            let (mut d, mut o) = (d0, o0);
            loop {
                seen[sidx(d, o)] = true;
                let (md, mo) = g.mirror_state(d, o);
                seen[sidx(md, mo)] = true;
                states.push((d as u32, o));
                let o2 = o * g.sign(d >> 1);
                let mut r = g.step_rot(d ^ 1, o2);
                while interior(r >> 1) {
                    r = g.step_rot(r, o2);
                }
                d = r;
                o = o2;
                if (d, o) == (d0, o0) {
                    break;
                }
                assert!(states.len() <= 2 * g.dart_count(), "boundary walk does not close");
            }
            walks.push(FaceWalk { states });
        }
    }
    walks
}

/// A face of a subgraph, realized inside the ambient map.
#[derive(Debug, Clone, Serialize)]
pub struct Superface {
    /// Ambient faces contained in the region.
    pub faces: Vec<usize>,
    /// Ambient edges with the region on both sides and not in the subgraph.
    pub interior_edges: Vec<usize>,
    pub walks: Vec<FaceWalk>,
    /// Nontriangular ambient faces inside.
    pub holes: Vec<usize>,
    /// Σ (|c| − 3) over the holes.
    pub hole_excess: i64,
    pub interior_vertices: usize,
    /// Euler characteristic of the normalized closure.
    pub chi: i64,
    pub orientable: bool,
    /// Twice the reduced genus.
    pub reduced_genus_x2: i64,
    pub dense: bool,
    pub balanced: bool,
    pub simple: bool,
    /// Faces of each component of the complement of the closure.
    pub complement: Vec<Vec<usize>>,
    /// f of the closure graph.
    pub f_closure: i64,
    /// f of the graph of edges and vertices not in the open region.
    pub f_exterior: i64,
    /// f of the closure graph of each complement component.
    pub f_components: Vec<i64>,
    #[serde(skip)]
    pub face_mask: u64,
    #[serde(skip)]
    pub interior_mask: u128,
}

impl Superface {
    pub fn boundary_count(&self) -> usize {
        self.walks.len()
    }

    pub fn boundary_lengths(&self) -> Vec<usize> {
        self.walks.iter().map(|w| w.len()).collect()
    }

    pub fn reduced_genus(&self) -> f64 {
        self.reduced_genus_x2 as f64 / 2.0
    }

    /// Handles if orientable, crosscaps otherwise.
    pub fn genus(&self) -> i64 {
        if self.orientable {
            self.reduced_genus_x2 / 2
        } else {
            self.reduced_genus_x2
        }
    }

    pub fn is_disc(&self) -> bool {
        self.walks.len() == 1 && self.reduced_genus_x2 == 0
    }

    /// Σ (|d_k| − 3) over the boundary walks.
    pub fn lhs(&self) -> i64 {
        self.walks.iter().map(|w| w.len() as i64 - 3).sum()
    }

    /// Σ_{I(U)} (|c_k| − 3) − 6 (g_r(U) + s − 1).
    ///
    /// This is the right side that makes the inequality equivalent to
    /// `f(G_W) >= α` for every α. Subtracting a further `α − 6` gives a
    /// different condition whenever α ≠ 6.
    pub fn rhs(&self) -> i64 {
        self.hole_excess - 3 * self.reduced_genus_x2 - 6 * (self.walks.len() as i64 - 1)
    }

    pub fn satisfies_girth(&self) -> bool {
        self.lhs() >= self.rhs()
    }

    pub fn is_critical(&self) -> bool {
        self.lhs() == self.rhs()
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.walks.iter().flat_map(|w| w.edges()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A vertex and edge subset of the ambient graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeSubgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl EdgeSubgraph {
    pub fn freedom(&self) -> i64 {
        3 * self.vertices.len() as i64 - self.edges.len() as i64
    }
}

/// Precomputed incidence masks for one map. Limited to 64 vertices, 64
/// faces and 128 edges.
pub struct Ambient<'g> {
    pub graph: &'g EmbeddedGraph,
    pub faces: Faces,
    sides: Vec<(usize, usize)>,
    face_edges: Vec<u128>,
    face_verts: Vec<u64>,
    vert_edges: Vec<u128>,
    vert_faces: Vec<u64>,
    all_faces: u64,
    all_edges: u128,
}

impl<'g> Ambient<'g> {
    pub fn new(g: &'g EmbeddedGraph) -> Result<Self, GirthError> {
        let faces = g.trace_faces();
        let (n, m, f) = (g.vertex_count(), g.edge_count(), faces.count());
        if n > 64 || m > 128 || f > 64 {
            return Err(GirthError::TooLarge(format!("{n} vertices, {m} edges, {f} faces")));
        }
        let sides: Vec<_> = (0..m).map(|e| faces.sides(e)).collect();
        let mut face_edges = vec![0u128; f];
        let mut face_verts = vec![0u64; f];
        let mut vert_faces = vec![0u64; n];
        for (i, w) in faces.walks.iter().enumerate() {
            for &(d, _) in &w.states {
                let v = g.vertex_of(d as usize);
                face_edges[i] |= 1 << (d >> 1);
                face_verts[i] |= 1 << v;
                vert_faces[v] |= 1 << i;
            }
        }
        let mut vert_edges = vec![0u128; n];
        for e in 0..m {
            let (a, b) = g.endpoints(e);
            vert_edges[a] |= 1 << e;
            vert_edges[b] |= 1 << e;
        }
        let all_faces = if f == 64 { u64::MAX } else { (1u64 << f) - 1 };
        let all_edges = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
        Ok(Ambient { graph: g, faces, sides, face_edges, face_verts, vert_edges, vert_faces, all_faces, all_edges })
    }

    fn closure_edges(&self, fm: u64) -> u128 {
        bits64(fm).fold(0, |a, f| a | self.face_edges[f])
    }

    fn closure_verts(&self, fm: u64) -> u64 {
        bits64(fm).fold(0, |a, f| a | self.face_verts[f])
    }

    /// The region made of faces `fm` glued across edges `im`. Every edge in
    /// `im` must have both sides in `fm`.
    pub fn region(&self, fm: u64, im: u128) -> Superface {
        let g = self.graph;
        let n = g.vertex_count();
        let walks = boundary_walks(g, &self.faces, |f| fm >> f & 1 == 1, |e| im >> e & 1 == 1);
        let s = walks.len() as i64;
        let interior_vertices = (0..n).filter(|&v| self.vert_edges[v] & !im == 0).count();
        let nf = fm.count_ones() as i64;
        let ni = im.count_ones() as i64;
        let chi = interior_vertices as i64 - ni + nf;
        let holes: Vec<usize> = bits64(fm).filter(|&f| self.faces.walks[f].len() != 3).collect();
        let hole_excess = holes.iter().map(|&f| self.faces.walks[f].len() as i64 - 3).sum();

        let ce = self.closure_edges(fm);
        let cv = self.closure_verts(fm);
        let f_closure = 3 * cv.count_ones() as i64 - ce.count_ones() as i64;
        let f_exterior = 3 * (n - interior_vertices) as i64 - (g.edge_count() as i64 - ni);

        // complement components
        let nfaces = self.faces.count();
        let mut p: Vec<usize> = (0..nfaces).collect();
        for e in bits128(self.all_edges & !ce) {
            let (a, b) = self.sides[e];
            union(&mut p, a, b);
        }
        for v in (0..n).filter(|&v| cv >> v & 1 == 0) {
            let mut it = bits64(self.vert_faces[v]);
            if let Some(first) = it.next() {
                for f in it {
                    union(&mut p, first, f);
                }
            }
        }
        let mut comp_masks: Vec<(usize, u64)> = Vec::new();
        for f in bits64(self.all_faces & !fm) {
            let r = find(&mut p, f);
            match comp_masks.iter_mut().find(|c| c.0 == r) {
                Some(c) => c.1 |= 1 << f,
                None => comp_masks.push((r, 1 << f)),
            }
        }
        let f_components = comp_masks
            .iter()
            .map(|&(_, m)| 3 * self.closure_verts(m).count_ones() as i64 - self.closure_edges(m).count_ones() as i64)
            .collect();
        let complement = comp_masks.iter().map(|&(_, m)| bits64(m).collect()).collect();

        let mut seen = vec![false; n];
        let mut simple = true;
        'walks: for w in &walks {
            for &(d, _) in &w.states {
                let v = g.vertex_of(d as usize);
                if seen[v] {
                    simple = false;
                    break 'walks;
                }
                seen[v] = true;
            }
        }

        Superface {
            faces: bits64(fm).collect(),
            interior_edges: bits128(im).collect(),
            walks,
            holes,
            hole_excess,
            interior_vertices,
            chi,
            orientable: self.orientable(fm, im),
            reduced_genus_x2: 2 - chi - s,
            dense: fm == self.all_faces,
            balanced: comp_masks.len() == 1,
            simple,
            complement,
            f_closure,
            f_exterior,
            f_components,
            face_mask: fm,
            interior_mask: im,
        }
    }

    /// Try to orient the faces of the region coherently across interior
    /// edges: neighbors must run along a shared edge in opposite directions.
    fn orientable(&self, fm: u64, im: u128) -> bool {
        let nf = self.faces.count();
        let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); nf];
        for e in bits128(im) {
            let (f1, f2) = self.sides[e];
            let d1: i8 = if self.faces.is_forward(2 * e, 1) { 1 } else { -1 };
            let d2: i8 = if self.faces.is_forward(2 * e, -1) { 1 } else { -1 };
            let rel = -d1 * d2;
            if f1 == f2 {
                if rel != 1 {
                    return false;
                }
                continue;
            }
            adj[f1].push((f2, rel));
            adj[f2].push((f1, rel));
        }
        let mut t = vec![0i8; nf];
        for start in bits64(fm) {
            if t[start] != 0 {
                continue;
            }
            t[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(f) = queue.pop_front() {
                for &(h, rel) in &adj[f] {
                    let want = t[f] * rel;
                    if t[h] == 0 {
                        t[h] = want;
                        queue.push_back(h);
                    } else if t[h] != want {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Face groups of the subgraph `kept` (edge mask), glued across the
    /// other edges.
    fn groups(&self, kept: u128) -> Vec<u64> {
        let nf = self.faces.count();
        let mut p: Vec<usize> = (0..nf).collect();
        for e in bits128(self.all_edges & !kept) {
            let (a, b) = self.sides[e];
            union(&mut p, a, b);
        }
        let mut out: Vec<(usize, u64)> = Vec::new();
        for f in 0..nf {
            let r = find(&mut p, f);
            match out.iter_mut().find(|c| c.0 == r) {
                Some(c) => c.1 |= 1 << f,
                None => out.push((r, 1 << f)),
            }
        }
        out.into_iter().map(|c| c.1).collect()
    }

    fn key_of_group(&self, gm: u64, kept: u128) -> (u64, u128) {
        (gm, self.closure_edges(gm) & !kept)
    }

    /// Every face of the subgraph with edge set `kept`, including a dense
    /// one whose complement holds no face of `G`.
    pub fn regions_of(&self, kept: &[usize]) -> Vec<Superface> {
        let km = kept.iter().fold(0u128, |a, &e| a | 1 << e);
        self.groups(km)
            .into_iter()
            .map(|gm| {
                let (fm, im) = self.key_of_group(gm, km);
                self.region(fm, im)
            })
            .collect()
    }

    /// Superfaces that are faces of the subgraph with edge set `kept`.
    /// Vertices of degree 1 in `kept` are allowed here; callers that need a
    /// proper carrier should check degrees first.
    pub fn superfaces_of(&self, kept: &[usize]) -> Vec<Superface> {
        self.regions_of(kept).into_iter().filter(|u| !u.dense).collect()
    }

    /// Keys (face mask, interior edge mask) of all superfaces, sorted.
    pub fn superface_keys(&self) -> Vec<(u64, u128)> {
        let g = self.graph;
        let m = g.edge_count();
        let ends: Vec<(usize, usize)> = (0..m).map(|e| g.endpoints(e)).collect();
        let mut kdeg = vec![0usize; g.vertex_count()];
        let mut rem: Vec<usize> = (0..g.vertex_count()).map(|v| g.degree(v)).collect();
        let mut keys = HashSet::new();
        self.search(0, 0, &ends, &mut kdeg, &mut rem, &mut keys);
        let mut keys: Vec<_> = keys.into_iter().collect();
        keys.sort_unstable();
        keys
    }

    fn search(
        &self,
        i: usize,
        kept: u128,
        ends: &[(usize, usize)],
        kdeg: &mut [usize],
        rem: &mut [usize],
        keys: &mut HashSet<(u64, u128)>,
    ) {
        if i == ends.len() {
            if kept != 0 {
                for gm in self.groups(kept) {
                    if gm != self.all_faces {
                        keys.insert(self.key_of_group(gm, kept));
                    }
                }
            }
            return;
        }
        let (a, b) = ends[i];
        rem[a] -= 1;
        rem[b] -= 1;
        // a vertex with exactly one kept edge and nothing left to decide is dead
        let dead = |kd: &[usize], rm: &[usize]| (kd[a] == 1 && rm[a] == 0) || (kd[b] == 1 && rm[b] == 0);
        if !dead(kdeg, rem) {
            self.search(i + 1, kept, ends, kdeg, rem, keys);
        }
        kdeg[a] += 1;
        kdeg[b] += 1;
        if !dead(kdeg, rem) {
            self.search(i + 1, kept | 1 << i, ends, kdeg, rem, keys);
        }
        kdeg[a] -= 1;
        kdeg[b] -= 1;
        rem[a] += 1;
        rem[b] += 1;
    }

    pub fn all_superfaces(&self) -> Vec<Superface> {
        self.superface_keys().into_iter().map(|(f, i)| self.region(f, i)).collect()
    }

    /// The complement of the closure of a balanced superface, as a region.
    pub fn complement_region(&self, u: &Superface) -> Option<Superface> {
        if !u.balanced {
            return None;
        }
        let ce = self.closure_edges(u.face_mask);
        Some(self.region(self.all_faces & !u.face_mask, self.all_edges & !ce))
    }

    /// Closure graph of a region: the edges and vertices of its contained faces.
    pub fn interior_graph(&self, u: &Superface) -> EdgeSubgraph {
        EdgeSubgraph {
            vertices: bits64(self.closure_verts(u.face_mask)).collect(),
            edges: bits128(self.closure_edges(u.face_mask)).collect(),
        }
    }

    /// Edges and vertices that do not meet the open region.
    pub fn exterior_graph(&self, u: &Superface) -> EdgeSubgraph {
        let im = u.interior_mask;
        EdgeSubgraph {
            vertices: (0..self.graph.vertex_count()).filter(|&v| self.vert_edges[v] & !im != 0).collect(),
            edges: bits128(self.all_edges & !im).collect(),
        }
    }
}

/// Result of the explicit vertex splitting normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub reduced_genus_x2: i64,
    /// Sorted boundary walk lengths after normalization.
    pub lengths: Vec<usize>,
    pub splits: usize,
    /// Euler characteristic of the closure of the normalized region.
    pub closure_chi: i64,
}

/// Split repeated boundary vertices of `u` until its boundary walks are
/// disjoint cycles, then count the closure directly. With `rng`, the corner
/// to split is chosen at random each round.
pub fn normalize<R: Rng>(g: &EmbeddedGraph, u: &Superface, mut rng: Option<&mut R>) -> Normalization {
    let mut h = g.clone();
    let mut interior = vec![false; h.edge_count()];
    for &e in &u.interior_edges {
        interior[e] = true;
    }
    let faces = h.trace_faces();
    let mut outside = vec![false; 2 * h.dart_count()];
    let in_u0: HashSet<usize> = u.faces.iter().copied().collect();
    for d in 0..h.dart_count() {
        for o in [1i8, -1] {
            outside[sidx(d, o)] = !in_u0.contains(&faces.face_of(d, o));
        }
    }
    let mut want: Vec<usize> = u.boundary_lengths();
    want.sort_unstable();
    let mut splits = 0;
    loop {
        let faces = h.trace_faces();
        let in_u: Vec<bool> = faces.walks.iter().map(|w| w.states.iter().all(|&(d, o)| !outside[sidx(d as usize, o)])).collect();
        let walks = boundary_walks(&h, &faces, |f| in_u[f], |e| interior[e]);
        let mut lengths: Vec<usize> = walks.iter().map(|w| w.len()).collect();
        lengths.sort_unstable();
        assert_eq!(lengths, want, "normalization changed boundary lengths");

        let mut count = vec![0usize; h.vertex_count()];
        for w in &walks {
            for &(d, _) in &w.states {
                count[h.vertex_of(d as usize)] += 1;
            }
        }
        let mut corners = Vec::new();
        for (k, w) in walks.iter().enumerate() {
            for i in 0..w.len() {
                if count[h.vertex_of(w.states[i].0 as usize)] > 1 {
                    corners.push((k, i));
                }
            }
        }
        if corners.is_empty() {
            let mut cv = vec![false; h.vertex_count()];
            let mut ce = vec![false; h.edge_count()];
            let mut nf = 0i64;
            for (f, w) in faces.walks.iter().enumerate() {
                if !in_u[f] {
                    continue;
                }
                nf += 1;
                for &(d, _) in &w.states {
                    cv[h.vertex_of(d as usize)] = true;
                    ce[(d >> 1) as usize] = true;
                }
            }
            let chi = cv.iter().filter(|&&x| x).count() as i64 - ce.iter().filter(|&&x| x).count() as i64 + nf;
            return Normalization {
                reduced_genus_x2: 2 - chi - walks.len() as i64,
                lengths,
                splits,
                closure_chi: chi,
            };
        }
        let (k, i) = match rng.as_deref_mut() {
            Some(r) => *corners.choose(r).expect("nonempty"),
            None => corners[0],
        };
        let w = &walks[k].states;
        let (d, o) = (w[i].0 as usize, w[i].1);
        let pd = w[(i + w.len() - 1) % w.len()].0 as usize;
        let v = h.vertex_of(d);
        let (inc, out) = (pd ^ 1, d);
        assert_ne!(inc, out, "boundary walk reverses along an edge");
        let (p1, q2) = if o > 0 { (inc, out) } else { (out, inc) };
        let (h2, ne) = split_vertex(&h, v, p1, q2).expect("normalizing split is valid");
        h = h2;
        interior.extend([false; 3]);
        outside.resize(2 * h.dart_count(), false);
        for dd in [2 * ne, 2 * ne + 1] {
            for oo in [1i8, -1] {
                outside[sidx(dd, oo)] = true;
            }
        }
        splits += 1;
    }
}

/// One checked inequality.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub superface: Superface,
    pub lhs: i64,
    pub rhs: i64,
    pub critical: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GirthReport {
    pub satisfied: bool,
    /// Number of inequalities evaluated.
    pub checked: usize,
    /// Violated or critical inequalities.
    pub witnesses: Vec<Witness>,
    /// Indices into `witnesses` where equality holds.
    pub critical: Vec<usize>,
    /// Inequalities whose verdict disagreed with the freedom count of the
    /// exterior or complement graph. Always zero unless something is broken.
    pub cross_check_failures: usize,
}

impl GirthReport {
    fn new() -> Self {
        GirthReport { satisfied: true, checked: 0, witnesses: Vec::new(), critical: Vec::new(), cross_check_failures: 0 }
    }

    fn record(&mut self, u: &Superface, lhs: i64, rhs: i64) {
        self.checked += 1;
        if lhs < rhs {
            self.satisfied = false;
        }
        if lhs <= rhs {
            if lhs == rhs {
                self.critical.push(self.witnesses.len());
            }
            self.witnesses.push(Witness { superface: u.clone(), lhs, rhs, critical: lhs == rhs });
        }
    }
}

fn require_alpha(g: &EmbeddedGraph, alpha: i64) -> Result<(), GirthError> {
    let f = g.freedom();
    if f != alpha {
        return Err(GirthError::PreconditionFGNotAlpha { found: f, alpha });
    }
    Ok(())
}

/// A closed walk bounding an open disc of its own subgraph.
#[derive(Debug, Clone, Serialize)]
pub struct PlanarWalk {
    pub walk: FaceWalk,
    pub disc: Superface,
    pub holes: Vec<usize>,
}

impl PlanarWalk {
    pub fn from_superface(u: &Superface) -> Result<Self, GirthError> {
        if !u.is_disc() {
            return Err(GirthError::NotPlanarType);
        }
        Ok(PlanarWalk { walk: u.walks[0].clone(), disc: u.clone(), holes: u.holes.clone() })
    }

    /// |c| − 3
    pub fn lhs(&self) -> i64 {
        self.walk.len() as i64 - 3
    }

    /// Σ (|c_k| − 3) over the holes inside.
    pub fn rhs(&self) -> i64 {
        self.disc.hole_excess
    }
}

/// Planar type walks whose disc contains a hole.
pub fn planar_walks(amb: &Ambient) -> Vec<PlanarWalk> {
    amb.all_superfaces()
        .iter()
        .filter(|u| u.is_disc() && !u.holes.is_empty())
        .map(|u| PlanarWalk::from_superface(u).expect("disc"))
        .collect()
}

/// Check `|c| − 3 >= Σ (|c_k| − 3)` over planar type walks with a hole, and
/// compare every verdict with `f(Ext) >= α`.
pub fn planar_girth_check(g: &EmbeddedGraph, alpha: i64) -> Result<GirthReport, GirthError> {
    require_alpha(g, alpha)?;
    let amb = Ambient::new(g)?;
    let mut rep = GirthReport::new();
    for w in planar_walks(&amb) {
        let (lhs, rhs) = (w.lhs(), w.rhs());
        let ext = amb.exterior_graph(&w.disc).freedom();
        if lhs - rhs != ext - alpha {
            rep.cross_check_failures += 1;
        }
        rep.record(&w.disc, lhs, rhs);
    }
    Ok(rep)
}

/// Check the higher genus girth inequality on every balanced superface of
/// genus at most `cap`. Each verdict is compared with `f(Ext) >= α`, and for
/// simple superfaces also with `f(G_W) >= α` on the complement.
pub fn higher_genus_girth_check(g: &EmbeddedGraph, alpha: i64, cap: i64) -> Result<GirthReport, GirthError> {
    require_alpha(g, alpha)?;
    let genus = g.surface().genus;
    if cap > genus {
        return Err(GirthError::GenusCapTooLarge { cap, genus });
    }
    let amb = Ambient::new(g)?;
    let mut rep = GirthReport::new();
    for u in amb.all_superfaces() {
        if !u.balanced || u.genus() > cap {
            continue;
        }
        let (lhs, rhs) = (u.lhs(), u.rhs());
        let mut ok = lhs - rhs == u.f_exterior - alpha;
        if u.simple {
            ok &= (lhs >= rhs) == (u.f_components[0] >= alpha);
        }
        if !ok {
            rep.cross_check_failures += 1;
        }
        rep.record(&u, lhs, rhs);
    }
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct SuperfaceSparsity {
    pub holds: bool,
    pub checked: usize,
    /// A superface whose closure has freedom below α.
    pub witness: Option<Superface>,
}

/// `f(G_U) >= α` for every superface `U`.
pub fn superface_sparsity_check(g: &EmbeddedGraph, alpha: i64) -> Result<SuperfaceSparsity, GirthError> {
    require_alpha(g, alpha)?;
    let amb = Ambient::new(g)?;
    let mut checked = 0;
    for (fm, im) in amb.superface_keys() {
        checked += 1;
        let u = amb.region(fm, im);
        if u.f_closure < alpha {
            return Ok(SuperfaceSparsity { holds: false, checked, witness: Some(u) });
        }
    }
    Ok(SuperfaceSparsity { holds: true, checked, witness: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleClass {
    pub essential: bool,
    /// Some side is a disc containing only triangular faces.
    pub planar: bool,
}

/// Classify a cycle given by its edges. A side counts as a disc only if its
/// single boundary walk runs once around the cycle; a one-sided cycle has a
/// disc complement whose boundary runs twice around it.
pub fn is_essential_cycle(g: &EmbeddedGraph, cycle: &[usize]) -> Result<CycleClass, GirthError> {
    let amb = Ambient::new(g)?;
    classify_cycle(&amb, cycle)
}

pub fn classify_cycle(amb: &Ambient, cycle: &[usize]) -> Result<CycleClass, GirthError> {
    let g = amb.graph;
    let mut deg = vec![0usize; g.vertex_count()];
    let mut p: Vec<usize> = (0..g.vertex_count()).collect();
    for &e in cycle {
        if e >= g.edge_count() {
            return Err(GirthError::NotACycle);
        }
        let (a, b) = g.endpoints(e);
        deg[a] += 1;
        deg[b] += 1;
        union(&mut p, a, b);
    }
    let vs: Vec<usize> = (0..g.vertex_count()).filter(|&v| deg[v] > 0).collect();
    let mut dedup = cycle.to_vec();
    dedup.sort_unstable();
    dedup.dedup();
    if cycle.len() < 3
        || dedup.len() != cycle.len()
        || vs.iter().any(|&v| deg[v] != 2)
        || vs.iter().any(|&v| find(&mut p, v) != find(&mut p, vs[0]))
    {
        return Err(GirthError::NotACycle);
    }
    let km = cycle.iter().fold(0u128, |a, &e| a | 1 << e);
    let mut class = CycleClass { essential: true, planar: false };
    for gm in amb.groups(km) {
        let (fm, im) = amb.key_of_group(gm, km);
        let r = amb.region(fm, im);
        if r.is_disc() && r.walks[0].len() == cycle.len() {
            class.essential = false;
            class.planar |= r.holes.is_empty();
        }
    }
    Ok(class)
}

/// All 3-cycles of the graph, as sorted edge triples.
pub fn three_cycles(g: &EmbeddedGraph) -> Vec<[usize; 3]> {
    let n = g.vertex_count();
    let mut edge = vec![vec![usize::MAX; n]; n];
    for e in 0..g.edge_count() {
        let (a, b) = g.endpoints(e);
        edge[a][b] = e;
        edge[b][a] = e;
    }
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if edge[a][b] == usize::MAX {
                continue;
            }
            for c in b + 1..n {
                if edge[a][c] != usize::MAX && edge[b][c] != usize::MAX {
                    out.push([edge[a][b], edge[a][c], edge[b][c]]);
                }
            }
        }
    }
    out
}

/// Edges between two distinct triangular faces that lie on an essential
/// 3-cycle or on a boundary walk of a critical superface containing a hole.
pub fn critical_edges(g: &EmbeddedGraph, alpha: i64) -> Result<Vec<usize>, GirthError> {
    require_alpha(g, alpha)?;
    let amb = Ambient::new(g)?;
    let two_triangles = |e: usize| {
        let (f1, f2) = amb.sides[e];
        f1 != f2 && amb.faces.walks[f1].len() == 3 && amb.faces.walks[f2].len() == 3
    };
    let mut mark = vec![false; g.edge_count()];
    for t in three_cycles(g) {
        if classify_cycle(&amb, &t)?.essential {
            for e in t {
                mark[e] = true;
            }
        }
    }
    for u in amb.all_superfaces() {
        if !u.holes.is_empty() && u.is_critical() {
            for e in u.boundary_edges() {
                mark[e] = true;
            }
        }
    }
    Ok((0..g.edge_count()).filter(|&e| mark[e] && two_triangles(e)).collect())
}

//! Freedom counts, (3, α)-sparsity and the face-count identity.
//!
//! A graph is (3, α)-sparse when every subgraph with enough vertices has
//! `3v - e >= α`, and tight when in addition `3v - e = α` globally. The
//! relevant subgraphs are those with at least 1 vertex for `α <= 3`, 2 for
//! `α` in {4, 5} and 3 for `α = 6`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::map::EmbeddedGraph;

/// Plain undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Graph { n, edges }
    }

    pub fn from_embedded(g: &EmbeddedGraph) -> Self {
        Graph { n: g.vertex_count(), edges: g.edge_list() }
    }

    pub fn freedom(&self) -> i64 {
        freedom(self.n, self.edges.len())
    }

    /// Subgraph induced on `vs`, relabeled to `0..vs.len()` in the given order.
    pub fn induced(&self, vs: &[usize]) -> Graph {
        let mut idx = vec![usize::MAX; self.n];
        for (i, &v) in vs.iter().enumerate() {
            idx[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| idx[a] != usize::MAX && idx[b] != usize::MAX)
            .map(|&(a, b)| (idx[a], idx[b]))
            .collect();
        Graph { n: vs.len(), edges }
    }

    pub fn edges_within(&self, vs: &[usize]) -> usize {
        let mut inside = vec![false; self.n];
        for &v in vs {
            inside[v] = true;
        }
        self.edges.iter().filter(|&&(a, b)| inside[a] && inside[b]).count()
    }
}

pub fn freedom(v: usize, e: usize) -> i64 {
    3 * v as i64 - e as i64
}

/// Smallest vertex count of a subgraph on which the bound `f >= α` is imposed.
pub fn min_relevant_vertices(alpha: i64) -> usize {
    match alpha {
        ..=3 => 1,
        4 | 5 => 2,
        _ => 3,
    }
}

/// Whether a subgraph with `v` vertices and `e` edges breaks the α bound.
pub fn violates(v: usize, e: usize, alpha: i64) -> bool {
    v >= min_relevant_vertices(alpha) && freedom(v, e) < alpha
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SparsityVerdict {
    pub sparse: bool,
    /// Inclusion-minimal violating vertex set, sorted, when not sparse.
    pub violating: Option<Vec<usize>>,
}

/// Out-degree bounded orientation maintained by augmenting paths.
#[derive(Clone)]
struct Orienter {
    cap: Vec<usize>,
    out: Vec<usize>,
    /// (tail, head) per edge; `usize::MAX` tail marks a removed edge
    arcs: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
}

impl Orienter {
    fn new(cap: Vec<usize>) -> Self {
        let n = cap.len();
        Orienter { cap, out: vec![0; n], arcs: Vec::new(), incident: vec![Vec::new(); n] }
    }

    /// Search along arcs from `s` for another vertex with spare capacity and
    /// reverse the path to it, moving one unit of out-degree off `s`. On
    /// failure `reach` holds everything reachable.
    fn augment(&mut self, s: usize, reach: &mut Vec<usize>) -> bool {
        let n = self.cap.len();
        let mut via = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        reach.push(s);
        while let Some(a) = queue.pop_front() {
            for &e in &self.incident[a] {
                let (t, h) = self.arcs[e];
                if t != a || seen[h] {
                    continue;
                }
                seen[h] = true;
                via[h] = e;
                reach.push(h);
                if self.out[h] < self.cap[h] {
                    let mut x = h;
                    while x != s {
                        let e = via[x];
                        let (t, h) = self.arcs[e];
                        self.arcs[e] = (h, t);
                        self.out[t] -= 1;
                        self.out[h] += 1;
                        x = t;
                    }
                    return true;
                }
                queue.push_back(h);
            }
        }
        false
    }

    fn blocked(mut reach: Vec<usize>) -> Vec<usize> {
        reach.sort_unstable();
        reach.dedup();
        reach
    }

    /// Insert edge `xy`; on failure return the saturated set that blocks it.
    fn insert(&mut self, x: usize, y: usize) -> Result<usize, Vec<usize>> {
        let mut reach = Vec::new();
        let tail = if self.out[x] < self.cap[x] || self.augment(x, &mut reach) {
            x
        } else if self.out[y] < self.cap[y] || self.augment(y, &mut reach) {
            y
        } else {
            return Err(Self::blocked(reach));
        };
        let head = if tail == x { y } else { x };
        let id = self.arcs.len();
        self.arcs.push((tail, head));
        self.out[tail] += 1;
        self.incident[x].push(id);
        self.incident[y].push(id);
        Ok(id)
    }

    fn remove(&mut self, id: usize) {
        let (t, _) = self.arcs[id];
        self.out[t] -= 1;
        self.arcs[id].0 = usize::MAX;
    }

    /// Lower the capacity of `x`, pushing surplus out-degree elsewhere.
    fn lower_cap(&mut self, x: usize, cap: usize) -> Result<(), Vec<usize>> {
        self.cap[x] = cap;
        while self.out[x] > cap {
            let mut reach = Vec::new();
            if !self.augment(x, &mut reach) {
                return Err(Self::blocked(reach));
            }
        }
        Ok(())
    }
}

/// Some violating vertex set of `g` for the α bound, not necessarily minimal.
fn find_violation(g: &Graph, alpha: i64) -> Option<Vec<usize>> {
    assert!((0..=6).contains(&alpha), "alpha must lie in 0..=6");
    if g.n >= min_relevant_vertices(alpha) && g.freedom() < alpha {
        return Some((0..g.n).collect());
    }
    let mut base = Orienter::new(vec![3; g.n]);
    for &(a, b) in &g.edges {
        if let Err(r) = base.insert(a, b) {
            return Some(r);
        }
    }
    if alpha < 6 {
        // α extra copies of each edge
        for &(u, v) in &g.edges {
            let mut o = base.clone();
            for _ in 0..alpha {
                if let Err(r) = o.insert(u, v) {
                    return Some(r);
                }
            }
        }
        return None;
    }
    // α = 6: for each edge uv and vertex w next to it, G - uv must orient
    // with u, v at out-degree 0 and w at most 2.
    let mut adj = vec![Vec::new(); g.n];
    for &(a, b) in &g.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        let mut o = base.clone();
        o.remove(i);
        if let Err(r) = o.lower_cap(u, 0).and_then(|_| o.lower_cap(v, 0)) {
            return Some(r);
        }
        let mut ws: Vec<usize> = adj[u].iter().chain(&adj[v]).copied().filter(|&w| w != u && w != v).collect();
        ws.sort_unstable();
        ws.dedup();
        for w in ws {
            if o.out[w] <= 2 {
                continue;
            }
            let mut p = o.clone();
            if let Err(r) = p.lower_cap(w, 2) {
                return Some(r);
            }
        }
    }
    None
}

fn shrink(g: &Graph, mut set: Vec<usize>, alpha: i64) -> Vec<usize> {
    'outer: loop {
        debug_assert!(violates(set.len(), g.edges_within(&set), alpha));
        for i in 0..set.len() {
            let rest: Vec<usize> = set.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
            if let Some(sub) = find_violation(&g.induced(&rest), alpha) {
                set = sub.into_iter().map(|k| rest[k]).collect();
                set.sort_unstable();
                continue 'outer;
            }
        }
        return set;
    }
}

/// Decide (3, α)-sparsity for `α` in `0..=6` by orientation tests.
pub fn is_sparse(g: &Graph, alpha: i64) -> SparsityVerdict {
    match find_violation(g, alpha) {
        None => SparsityVerdict { sparse: true, violating: None },
        Some(set) => SparsityVerdict { sparse: false, violating: Some(shrink(g, set, alpha)) },
    }
}

/// Sparsity without a certificate.
pub fn is_sparse_fast(g: &Graph, alpha: i64) -> bool {
    find_violation(g, alpha).is_none()
}

pub fn is_tight(g: &Graph, alpha: i64) -> bool {
    g.freedom() == alpha && is_sparse_fast(g, alpha)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error("freedom count is {found}, expected {alpha}")]
    PreconditionFGNotAlpha { found: i64, alpha: i64 },
}

/// Both evaluations of the face-count identity.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct IdentityReport {
    /// Σ (k − 3) f_k over face degrees k
    pub face_lhs: i64,
    /// α + 3μg − 6
    pub face_rhs: i64,
    /// Σ (|c| − 3) over nontriangular face walks
    pub walk_lhs: i64,
    /// 6 g_r + f(G) − 6
    pub walk_rhs: i64,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.face_lhs == self.face_rhs && self.walk_lhs == self.walk_rhs
    }
}

pub fn face_count_identity(g: &EmbeddedGraph, alpha: i64) -> Result<IdentityReport, IdentityError> {
    let f = g.freedom();
    if f != alpha {
        return Err(IdentityError::PreconditionFGNotAlpha { found: f, alpha });
    }
    let faces = g.trace_faces();
    let s = g.surface_with_faces(faces.count());
    let mut hist = std::collections::BTreeMap::new();
    for l in faces.lengths() {
        *hist.entry(l as i64).or_insert(0i64) += 1;
    }
    let face_lhs = hist.iter().map(|(k, fk)| (k - 3) * fk).sum();
    let walk_lhs = faces.walks.iter().filter(|w| w.len() != 3).map(|w| w.len() as i64 - 3).sum();
    Ok(IdentityReport {
        face_lhs,
        face_rhs: alpha + 3 * s.mu() * s.genus - 6,
        walk_lhs,
        walk_rhs: 3 * s.reduced_genus_x2() + f - 6,
    })
}

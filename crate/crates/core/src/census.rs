//! Family membership, contraction-minimality and exhaustive censuses.
//!
//! Members are generated by gluing polygons. For a target surface, vertex
//! count and face-size multiset, the search places a root polygon of the
//! largest size and then repeatedly takes the first unglued side and glues
//! it either to another unglued side or to side 0 of a fresh polygon.
//! Every simple map with those parameters arises this way. Duplicates are
//! removed by canonical code.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use thiserror::Error;

use crate::girth::{higher_genus_girth_check, planar_girth_check, GirthError};
use crate::io::MapFile;
use crate::map::{signature, EmbeddedGraph, SurfaceClass};
use crate::sparsity::{is_sparse, min_relevant_vertices, Graph};
use crate::surgery::{all_splits, contraction_obstruction, contract_unchecked, split_vertex, Obstruction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("inconsistent family: {0}")]
    BadFamily(String),
    #[error("graph is not a member of the family")]
    NotAMember,
    #[error("node budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Girth(#[from] GirthError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyKind {
    Triangulation,
    /// Exactly these nontriangular face sizes.
    Partial { holes: Vec<usize> },
    GirthPlanar,
    GirthGenus { cap: i64 },
    Tight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    #[serde(serialize_with = "ser_surface")]
    pub surface: SurfaceClass,
    pub kind: FamilyKind,
    pub alpha: i64,
    /// Restricts enumeration to these hole multisets, if set.
    pub hole_filter: Option<HoleFilter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HoleFilter {
    /// Number of nontriangular faces.
    Count(usize),
    Multiset(Vec<usize>),
}

fn ser_surface<S: serde::Serializer>(s: &SurfaceClass, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&s.name())
}

fn sorted_desc(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

impl FamilySpec {
    pub fn triangulations(surface: SurfaceClass) -> Self {
        FamilySpec { alpha: 3 * surface.euler_char, surface, kind: FamilyKind::Triangulation, hole_filter: None }
    }

    pub fn partial(surface: SurfaceClass, holes: Vec<usize>) -> Self {
        let excess: i64 = holes.iter().map(|&k| k as i64 - 3).sum();
        FamilySpec {
            alpha: excess + 3 * surface.euler_char,
            surface,
            kind: FamilyKind::Partial { holes: sorted_desc(holes) },
            hole_filter: None,
        }
    }

    pub fn tight(surface: SurfaceClass, alpha: i64) -> Self {
        FamilySpec { surface, kind: FamilyKind::Tight, alpha, hole_filter: None }
    }

    pub fn girth_planar(surface: SurfaceClass, alpha: i64) -> Self {
        FamilySpec { surface, kind: FamilyKind::GirthPlanar, alpha, hole_filter: None }
    }

    pub fn girth_genus(surface: SurfaceClass, alpha: i64, cap: i64) -> Self {
        FamilySpec { surface, kind: FamilyKind::GirthGenus { cap }, alpha, hole_filter: None }
    }

    pub fn with_holes(mut self, filter: HoleFilter) -> Self {
        self.hole_filter = Some(filter);
        self
    }

    /// Short human name such as `F(T2,6)` or `T(P2;5,4)`.
    pub fn label(&self) -> String {
        let m = self.surface.name();
        let base = match &self.kind {
            FamilyKind::Triangulation => format!("T({m})"),
            FamilyKind::Partial { holes } => {
                let h: Vec<String> = holes.iter().map(|k| k.to_string()).collect();
                format!("T({m};{})", h.join(","))
            }
            FamilyKind::GirthPlanar => format!("G_pl({m},{})", self.alpha),
            FamilyKind::GirthGenus { cap } => format!("G_{cap}({m},{})", self.alpha),
            FamilyKind::Tight => format!("F({m},{})", self.alpha),
        };
        match &self.hole_filter {
            None => base,
            Some(HoleFilter::Count(n)) => format!("{base} with {n} holes"),
            Some(HoleFilter::Multiset(h)) => format!("{base} with holes {h:?}"),
        }
    }

    /// Σ (k − 3) over hole sizes forced by the face-count identity.
    pub fn hole_excess(&self) -> i64 {
        self.alpha - 3 * self.surface.euler_char
    }

    pub fn validate(&self) -> Result<(), CensusError> {
        let d = self.hole_excess();
        if d < 0 {
            return Err(CensusError::BadFamily(format!("α = {} is too small for {}", self.alpha, self.surface.name())));
        }
        match &self.kind {
            FamilyKind::Triangulation if d != 0 => {
                return Err(CensusError::BadFamily("triangulations need α = 3χ".into()));
            }
            FamilyKind::Partial { holes } => {
                if holes.iter().any(|&k| k < 4) || holes.iter().map(|&k| k as i64 - 3).sum::<i64>() != d {
                    return Err(CensusError::BadFamily("hole sizes disagree with α".into()));
                }
            }
            FamilyKind::GirthGenus { cap } if *cap < 0 || *cap > self.surface.genus => {
                return Err(CensusError::BadFamily(format!("genus cap {cap} out of range")));
            }
            _ => {}
        }
        if !(0..=6).contains(&self.alpha) && matches!(self.kind, FamilyKind::Tight) {
            return Err(CensusError::BadFamily("tight families need α in 0..=6".into()));
        }
        Ok(())
    }

    /// Hole multisets (descending) allowed by the family and filter.
    pub fn hole_multisets(&self) -> Vec<Vec<usize>> {
        let all = match &self.kind {
            FamilyKind::Partial { holes } => vec![holes.clone()],
            FamilyKind::Triangulation => vec![vec![]],
            _ => partitions(self.hole_excess().max(0) as usize).into_iter().map(|p| p.iter().map(|x| x + 3).collect()).collect(),
        };
        all.into_iter()
            .filter(|h: &Vec<usize>| match &self.hole_filter {
                None => true,
                Some(HoleFilter::Count(n)) => h.len() == *n,
                Some(HoleFilter::Multiset(m)) => sorted_desc(m.clone()) == *h,
            })
            .collect()
    }
}

/// Partitions of `n` into positive parts, each in descending order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Sizes of the nontriangular faces, descending.
pub fn hole_sizes(g: &EmbeddedGraph) -> Vec<usize> {
    sorted_desc(g.trace_faces().lengths().into_iter().filter(|&l| l != 3).collect())
}

/// Full face-size multiset, descending.
pub fn face_sizes(g: &EmbeddedGraph) -> Vec<usize> {
    sorted_desc(g.trace_faces().lengths())
}

/// Why a graph is outside a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum Exclusion {
    NonSimple,
    WrongSurface { found: String },
    FaceMismatch { holes: Vec<usize> },
    Freedom { found: i64 },
    Sparsity { violating: Vec<usize> },
    Girth,
}

impl std::fmt::Display for Exclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exclusion::NonSimple => write!(f, "not simple"),
            Exclusion::WrongSurface { found } => write!(f, "embedded in {found}"),
            Exclusion::FaceMismatch { holes } => write!(f, "nontriangular faces {holes:?} do not match"),
            Exclusion::Freedom { found } => write!(f, "f(G) = {found}"),
            Exclusion::Sparsity { violating } => write!(f, "vertex set {violating:?} breaks the sparsity count"),
            Exclusion::Girth => write!(f, "a girth inequality fails"),
        }
    }
}

pub fn membership(g: &EmbeddedGraph, fam: &FamilySpec) -> Result<Option<Exclusion>, CensusError> {
    if !g.is_simple() {
        return Ok(Some(Exclusion::NonSimple));
    }
    let faces = g.trace_faces();
    let s = g.surface_with_faces(faces.count());
    if s != fam.surface {
        return Ok(Some(Exclusion::WrongSurface { found: s.name() }));
    }
    let holes = sorted_desc(faces.lengths().into_iter().filter(|&l| l != 3).collect());
    match &fam.kind {
        FamilyKind::Triangulation if !holes.is_empty() => return Ok(Some(Exclusion::FaceMismatch { holes })),
        FamilyKind::Partial { holes: want } if *want != holes => return Ok(Some(Exclusion::FaceMismatch { holes })),
        FamilyKind::Triangulation | FamilyKind::Partial { .. } => return Ok(None),
        _ => {}
    }
    if let Some(filter) = &fam.hole_filter {
        let ok = match filter {
            HoleFilter::Count(n) => holes.len() == *n,
            HoleFilter::Multiset(m) => sorted_desc(m.clone()) == holes,
        };
        if !ok {
            return Ok(Some(Exclusion::FaceMismatch { holes }));
        }
    }
    let f = g.freedom();
    if f != fam.alpha {
        return Ok(Some(Exclusion::Freedom { found: f }));
    }
    match &fam.kind {
        FamilyKind::Tight => {
            let verdict = is_sparse(&Graph::from_embedded(g), fam.alpha);
            Ok(verdict.violating.map(|violating| Exclusion::Sparsity { violating }))
        }
        FamilyKind::GirthPlanar => Ok((!planar_girth_check(g, fam.alpha)?.satisfied).then_some(Exclusion::Girth)),
        FamilyKind::GirthGenus { cap } => {
            Ok((!higher_genus_girth_check(g, fam.alpha, *cap)?.satisfied).then_some(Exclusion::Girth))
        }
        _ => unreachable!(),
    }
}

pub fn member_of(g: &EmbeddedGraph, fam: &FamilySpec) -> Result<bool, CensusError> {
    Ok(membership(g, fam)?.is_none())
}

/// Verdict for one edge in a minimality check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum EdgeVerdict {
    /// Not on two distinct facial triangles, for instance a hole boundary.
    NotBetweenTriangles,
    /// Contraction would not give a simple graph.
    NonSimple,
    /// Fewer than 4 vertices.
    TooSmall,
    /// G/e exists but leaves the family.
    Leaves(Exclusion),
    /// G/e is still in the family.
    Contracts,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalityReport {
    pub minimal: bool,
    pub edges: Vec<EdgeVerdict>,
}

pub fn contraction_minimality(g: &EmbeddedGraph, fam: &FamilySpec) -> Result<MinimalityReport, CensusError> {
    if !member_of(g, fam)? {
        return Err(CensusError::NotAMember);
    }
    let faces = g.trace_faces();
    let mut edges = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        let v = match contraction_obstruction(g, &faces, e) {
            Some(Obstruction::NotTwoTriangles) => EdgeVerdict::NotBetweenTriangles,
            Some(Obstruction::SameApex | Obstruction::NonfacialTriangle) => EdgeVerdict::NonSimple,
            Some(Obstruction::TooSmall) => EdgeVerdict::TooSmall,
            None => match membership(&contract_unchecked(g, e), fam)? {
                None => EdgeVerdict::Contracts,
                Some(x) => EdgeVerdict::Leaves(x),
            },
        };
        edges.push(v);
    }
    Ok(MinimalityReport { minimal: !edges.contains(&EdgeVerdict::Contracts), edges })
}

pub fn is_contraction_minimal(g: &EmbeddedGraph, fam: &FamilySpec) -> Result<bool, CensusError> {
    Ok(contraction_minimality(g, fam)?.minimal)
}

// ---------------------------------------------------------------------------
// polygon gluing

/// Which unglued side is processed next and how the root is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GenerationOrder {
    /// Root at a largest face; glue the lowest-numbered open side.
    FirstSide,
    /// Root at a smallest face; glue the highest-numbered open side.
    LastSide,
}

#[derive(Debug, Clone)]
pub struct GlueParams {
    pub surface: SurfaceClass,
    pub vertices: usize,
    /// Face sizes, any order.
    pub faces: Vec<usize>,
    pub min_degree: usize,
    /// Prune when the closed part already breaks `3v − e >= α`.
    pub sparsity_alpha: Option<i64>,
    pub order: GenerationOrder,
}

impl GlueParams {
    /// Face sizes for `v` vertices with the given holes on the surface, if
    /// the Euler count allows them.
    pub fn faces_for(surface: &SurfaceClass, v: usize, holes: &[usize]) -> Option<Vec<usize>> {
        // e = 3(v − χ) − Σ(k − 3) and f = e − v + χ
        let excess: i64 = holes.iter().map(|&k| k as i64 - 3).sum();
        let e = 3 * (v as i64 - surface.euler_char) - excess;
        let f = e - v as i64 + surface.euler_char;
        let tri = f - holes.len() as i64;
        if e <= 0 || tri < 0 {
            return None;
        }
        let mut out = holes.to_vec();
        out.extend(std::iter::repeat(3).take(tri as usize));
        Some(out)
    }
}

const OPEN: u16 = u16::MAX;

#[derive(Clone)]
struct GlueState {
    poly_base: Vec<u16>,
    poly_size: Vec<u16>,
    side_poly: Vec<u16>,
    partner: Vec<u16>,
    twisted: Vec<bool>,
    parent: Vec<u16>,
    /// per root: unglued side ends at its corners
    ends: Vec<u16>,
    /// per root: corner count
    corners: Vec<u16>,
    /// remaining polygons per distinct size
    remaining: Vec<u16>,
    twists: usize,
}

struct Search<'a> {
    p: &'a GlueParams,
    sizes: Vec<usize>,
    budget: u64,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
    found: &'a Mutex<BTreeMap<Vec<u32>, EmbeddedGraph>>,
}

impl GlueState {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let gp = self.parent[self.parent[x] as usize];
            self.parent[x] = gp;
            x = gp as usize;
        }
        x
    }

    fn start(&self, s: usize) -> usize {
        s
    }

    fn end(&self, s: usize) -> usize {
        let p = self.side_poly[s] as usize;
        let (b, k) = (self.poly_base[p] as usize, self.poly_size[p] as usize);
        b + (s - b + 1) % k
    }

    fn add_polygon(&mut self, k: usize) -> usize {
        let base = self.partner.len();
        let id = self.poly_size.len() as u16;
        self.poly_base.push(base as u16);
        self.poly_size.push(k as u16);
        for i in 0..k {
            self.side_poly.push(id);
            self.partner.push(OPEN);
            self.twisted.push(false);
            self.parent.push((base + i) as u16);
            self.ends.push(2);
            self.corners.push(1);
        }
        base
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo as u16;
        self.ends[lo] += self.ends[hi];
        self.corners[lo] += self.corners[hi];
    }

    /// Glue side `s` to side `t`. Untwisted means the sides run in opposite
    /// directions, as in an oriented gluing.
    fn glue(&mut self, s: usize, t: usize, twisted: bool) {
        self.partner[s] = t as u16;
        self.partner[t] = s as u16;
        self.twisted[s] = twisted;
        self.twisted[t] = twisted;
        if twisted {
            self.twists += 1;
        }
        for c in [self.start(s), self.end(s), self.start(t), self.end(t)] {
            let r = self.find(c);
            self.ends[r] -= 1;
        }
        let (s0, s1, t0, t1) = (self.start(s), self.end(s), self.start(t), self.end(t));
        if twisted {
            self.union(s0, t0);
            self.union(s1, t1);
        } else {
            self.union(s0, t1);
            self.union(s1, t0);
        }
    }
}

impl Search<'_> {
    fn open_side(&self, st: &GlueState) -> Option<usize> {
        let mut it = (0..st.partner.len()).filter(|&s| st.partner[s] == OPEN);
        match self.p.order {
            GenerationOrder::FirstSide => it.next(),
            GenerationOrder::LastSide => it.last(),
        }
    }

    /// Permanent obstructions: loops, parallel edges, too many closed
    /// vertices, closed vertices of bad degree, dense closed part.
    fn viable(&self, st: &mut GlueState) -> bool {
        let n = st.partner.len();
        let v = self.p.vertices;
        let mut pairs: Vec<(u16, u16, bool)> = Vec::with_capacity(n);
        for s in 0..n {
            let t = st.partner[s];
            if t != OPEN && (t as usize) < s {
                continue;
            }
            let (a, b) = (st.find(st.start(s)), st.find(st.end(s)));
            if a == b {
                return false;
            }
            pairs.push((a.min(b) as u16, a.max(b) as u16, t != OPEN));
        }
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            // two sides with the same ends, at least one already an edge
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 && (w[0].2 || w[1].2) {
                return false;
            }
        }
        let mut closed = 0;
        let mut open_classes = 0;
        let mut is_closed = vec![false; n];
        for c in 0..n {
            if st.parent[c] as usize != c {
                continue;
            }
            if st.ends[c] == 0 {
                let d = st.corners[c] as usize;
                if d < self.p.min_degree || d + 1 > v {
                    return false;
                }
                closed += 1;
                is_closed[c] = true;
            } else {
                open_classes += 1;
            }
        }
        if closed > v || (closed == v && open_classes > 0) {
            return false;
        }
        if let Some(alpha) = self.p.sparsity_alpha {
            if closed >= min_relevant_vertices(alpha) {
                let inner = pairs.iter().filter(|p| p.2 && is_closed[p.0 as usize] && is_closed[p.1 as usize]).count();
                if 3 * closed as i64 - (inner as i64) < alpha {
                    return false;
                }
            }
        }
        true
    }

    fn run(&self, st: &mut GlueState) {
        if self.stop.load(Ordering::Relaxed) {
            return;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            self.stop.store(true, Ordering::Relaxed);
            return;
        }
        let Some(s) = self.open_side(st) else {
            if st.remaining.iter().all(|&r| r == 0) {
                self.complete(st);
            }
            return;
        };
        let twist_options: &[bool] = if self.p.surface.orientable { &[false] } else { &[false, true] };
        for t in 0..st.partner.len() {
            if t == s || st.partner[t] != OPEN {
                continue;
            }
            for &tw in twist_options {
                let mut child = st.clone();
                child.glue(s, t, tw);
                if self.viable(&mut child) {
                    self.run(&mut child);
                }
            }
        }
        for i in 0..self.sizes.len() {
            if st.remaining[i] == 0 {
                continue;
            }
            let mut child = st.clone();
            child.remaining[i] -= 1;
            let b = child.add_polygon(self.sizes[i]);
            child.glue(s, b, false);
            if self.viable(&mut child) {
                self.run(&mut child);
            }
        }
    }

    fn complete(&self, st: &mut GlueState) {
        if !self.p.surface.orientable && st.twists == 0 {
            return;
        }
        let Some(g) = build_from_gluing(st) else { return };
        if g.vertex_count() != self.p.vertices || g.surface() != self.p.surface {
            return;
        }
        debug_assert_eq!(face_sizes(&g), sorted_desc(self.p.faces.clone()));
        let code = g.canonical_code().0;
        self.found.lock().expect("result lock").entry(code).or_insert(g);
    }
}

/// Turn a complete gluing into a signed rotation system. Each vertex is a
/// cycle of polygon corners; walking around it we track whether the current
/// polygon's orientation agrees with the vertex orientation, and an edge is
/// negative when the polygon on one of its sides disagrees at exactly one end.
fn build_from_gluing(st: &mut GlueState) -> Option<EmbeddedGraph> {
    let n = st.partner.len();
    let mut edge_of = vec![usize::MAX; n];
    let mut m = 0;
    for s in 0..n {
        let t = st.partner[s] as usize;
        if s < t {
            edge_of[s] = m;
            edge_of[t] = m;
            m += 1;
        }
    }
    // dart for (side, at its start?)
    let dart = |st: &GlueState, s: usize, at_start: bool| -> u32 {
        let t = st.partner[s] as usize;
        let e = edge_of[s] as u32;
        let lower_start = if s < t {
            at_start
        } else if st.twisted[s] {
            at_start
        } else {
            !at_start
        };
        if lower_start {
            2 * e
        } else {
            2 * e + 1
        }
    };
    let mut vid = vec![usize::MAX; n];
    let mut tau = vec![0i8; n];
    let mut rot: Vec<Vec<u32>> = Vec::new();
    for c0 in 0..n {
        if vid[c0] != usize::MAX {
            continue;
        }
        let id = rot.len();
        let mut r = Vec::new();
        let (mut c, mut t) = (c0, 1i8);
        loop {
            vid[c] = id;
            tau[c] = t;
            let p = st.side_poly[c] as usize;
            let (b, k) = (st.poly_base[p] as usize, st.poly_size[p] as usize);
            let prev_side = b + (c - b + k - 1) % k;
            // corner c sits between side c (leaving) and prev_side (arriving)
            let (first, first_at_start, second, second_at_start) =
                if t > 0 { (c, true, prev_side, false) } else { (prev_side, false, c, true) };
            r.push(dart(st, first, first_at_start));
            let g2 = st.partner[second] as usize;
            let at_start_of_g2 = if st.twisted[second] { second_at_start } else { !second_at_start };
            if at_start_of_g2 {
                c = g2;
                t = 1;
            } else {
                c = st.end(g2);
                t = -1;
            }
            if c == c0 {
                if t != 1 {
                    return None;
                }
                break;
            }
            if vid[c] != usize::MAX {
                return None;
            }
        }
        rot.push(r);
    }
    let mut sign = vec![1i8; m];
    for s in 0..n {
        if (st.partner[s] as usize) > s {
            sign[edge_of[s]] = tau[st.start(s)] * tau[st.end(s)];
        }
    }
    EmbeddedGraph::from_parts(rot, sign, true).ok()
}

/// Outcome of one gluing search.
pub struct GlueOutcome {
    pub graphs: Vec<EmbeddedGraph>,
    pub nodes: u64,
    pub exhaustive: bool,
}

/// All simple maps with the given parameters, sorted by canonical code.
pub fn glue_maps(p: &GlueParams, budget: u64, threads: usize) -> GlueOutcome {
    let mut sizes: Vec<usize> = p.faces.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut root = GlueState {
        poly_base: vec![],
        poly_size: vec![],
        side_poly: vec![],
        partner: vec![],
        twisted: vec![],
        parent: vec![],
        ends: vec![],
        corners: vec![],
        remaining: sizes.iter().map(|&k| p.faces.iter().filter(|&&x| x == k).count() as u16).collect(),
        twists: 0,
    };
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let found = Mutex::new(BTreeMap::new());
    if p.faces.is_empty() {
        return GlueOutcome { graphs: vec![], nodes: 0, exhaustive: true };
    }
    let ri = match p.order {
        GenerationOrder::FirstSide => sizes.len() - 1,
        GenerationOrder::LastSide => 0,
    };
    root.remaining[ri] -= 1;
    root.add_polygon(sizes[ri]);
    let search = Search { p, sizes: sizes.clone(), budget, nodes: &nodes, stop: &stop, found: &found };

    if threads <= 1 {
        search.run(&mut root);
    } else {
        // expand the top of the tree breadth-first, then share out subtrees
        let mut frontier = vec![root];
        while frontier.len() < 4 * threads {
            let mut next = Vec::new();
            let mut expanded = false;
            for mut st in frontier {
                // counted here, as `run` would have counted it
                nodes.fetch_add(1, Ordering::Relaxed);
                match search.open_side(&st) {
                    None => {
                        if st.remaining.iter().all(|&r| r == 0) {
                            search.complete(&mut st);
                        }
                    }
                    Some(s) => {
                        expanded = true;
                        next.extend(children(&search, &st, s));
                    }
                }
            }
            frontier = next;
            if !expanded || frontier.is_empty() {
                break;
            }
        }
        let work = Mutex::new(frontier.into_iter().enumerate().collect::<Vec<_>>());
        std::thread::scope(|scope| {
            for _ in 0..threads {
                scope.spawn(|| loop {
                    let item = work.lock().expect("work lock").pop();
                    let Some((_, mut st)) = item else { break };
                    search.run(&mut st);
                });
            }
        });
    }
    let exhaustive = !stop.load(Ordering::Relaxed);
    // the first graph found per code depends on scheduling; the canonical
    // form does not
    let graphs = found.into_inner().expect("result lock").into_values().map(|g| g.canonical_form()).collect();
    let nodes = nodes.load(Ordering::Relaxed);
    GlueOutcome { graphs, nodes: if exhaustive { nodes } else { nodes.min(budget) }, exhaustive }
}

fn children(search: &Search, st: &GlueState, s: usize) -> Vec<GlueState> {
    let mut out = Vec::new();
    let twist_options: &[bool] = if search.p.surface.orientable { &[false] } else { &[false, true] };
    for t in 0..st.partner.len() {
        if t == s || st.partner[t] != OPEN {
            continue;
        }
        for &tw in twist_options {
            let mut child = st.clone();
            child.glue(s, t, tw);
            if search.viable(&mut child) {
                out.push(child);
            }
        }
    }
    for i in 0..search.sizes.len() {
        if st.remaining[i] == 0 {
            continue;
        }
        let mut child = st.clone();
        child.remaining[i] -= 1;
        let b = child.add_polygon(search.sizes[i]);
        child.glue(s, b, false);
        if search.viable(&mut child) {
            out.push(child);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// census

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    pub code: String,
    pub vertices: usize,
    pub edges: usize,
    pub holes: Vec<usize>,
    pub faces: Vec<usize>,
    pub signature: String,
    pub edge_verdicts: Vec<EdgeVerdict>,
    pub graph: MapFile,
    #[serde(skip)]
    pub map: EmbeddedGraph,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusResult {
    pub family: FamilySpec,
    pub search_bound: usize,
    pub exhaustive: bool,
    pub nodes: u64,
    /// Members found, minimal or not, per completed vertex count.
    pub members_by_vertices: BTreeMap<usize, usize>,
    pub minimal: Vec<CensusEntry>,
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub max_vertices: usize,
    pub budget_nodes: u64,
    pub threads: usize,
    pub order: GenerationOrder,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { max_vertices: 8, budget_nodes: u64::MAX, threads: 1, order: GenerationOrder::FirstSide }
    }
}

pub fn entry_for(g: &EmbeddedGraph, verdicts: Vec<EdgeVerdict>) -> CensusEntry {
    CensusEntry {
        code: g.canonical_code().to_hex(),
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        holes: hole_sizes(g),
        faces: face_sizes(g),
        signature: g.degree_signature(),
        edge_verdicts: verdicts,
        graph: MapFile::from_graph(g),
        map: g.clone(),
    }
}

/// Every member of the family with exactly `v` vertices, sorted by code.
pub fn members_with_vertices(fam: &FamilySpec, v: usize, opts: &CensusOptions) -> Result<(Vec<EmbeddedGraph>, u64, bool), CensusError> {
    fam.validate()?;
    let mut out = Vec::new();
    let mut nodes = 0;
    let mut exhaustive = true;
    let sparsity_alpha = matches!(fam.kind, FamilyKind::Tight).then_some(fam.alpha);
    let min_degree = if v > 3 && !matches!(fam.kind, FamilyKind::Triangulation | FamilyKind::Partial { .. }) {
        // a vertex of degree below 3 leaves G − x with f < α
        3
    } else {
        2
    };
    for holes in fam.hole_multisets() {
        let Some(faces) = GlueParams::faces_for(&fam.surface, v, &holes) else { continue };
        let params = GlueParams {
            surface: fam.surface,
            vertices: v,
            faces,
            min_degree: if holes.is_empty() && v > 3 { 3 } else { min_degree },
            sparsity_alpha,
            order: opts.order,
        };
        let left = opts.budget_nodes.saturating_sub(nodes);
        let res = glue_maps(&params, left, opts.threads);
        nodes += res.nodes;
        exhaustive &= res.exhaustive;
        for g in res.graphs {
            if member_of(&g, fam)? {
                out.push(g);
            }
        }
        if !exhaustive {
            break;
        }
    }
    out.sort_by_cached_key(|g| g.canonical_code().0);
    Ok((out, nodes, exhaustive))
}

pub fn enumerate_minimal(fam: &FamilySpec, opts: &CensusOptions) -> Result<CensusResult, CensusError> {
    fam.validate()?;
    if opts.max_vertices < 3 {
        return Err(CensusError::BadFamily("max vertices must be at least 3".into()));
    }
    let mut members_by_vertices = BTreeMap::new();
    let mut minimal = Vec::new();
    let mut nodes = 0;
    let mut exhaustive = true;
    let mut search_bound = opts.max_vertices;
    for v in 3..=opts.max_vertices {
        let sub = CensusOptions { budget_nodes: opts.budget_nodes.saturating_sub(nodes), ..opts.clone() };
        let (members, n, ex) = members_with_vertices(fam, v, &sub)?;
        nodes += n;
        if !ex {
            // partial levels depend on search order, so they are dropped
            exhaustive = false;
            search_bound = v - 1;
            break;
        }
        members_by_vertices.insert(v, members.len());
        for g in members {
            let rep = contraction_minimality(&g, fam)?;
            if rep.minimal {
                minimal.push(entry_for(&g, rep.edges));
            }
        }
    }
    minimal.sort_by(|a, b| a.map.canonical_code().cmp(&b.map.canonical_code()));
    Ok(CensusResult { family: fam.clone(), search_bound, exhaustive, nodes, members_by_vertices, minimal })
}

/// Members reachable from `g` by at most `depth` vertex splits, `g` included.
pub fn expand_from_minimal(g: &EmbeddedGraph, fam: &FamilySpec, depth: usize, budget: usize) -> Result<Vec<EmbeddedGraph>, CensusError> {
    if !member_of(g, fam)? {
        return Err(CensusError::NotAMember);
    }
    let mut seen: BTreeMap<Vec<u32>, EmbeddedGraph> = BTreeMap::new();
    seen.insert(g.canonical_code().0, g.clone());
    let mut layer = vec![g.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for h in &layer {
            for (v, p1, q2) in all_splits(h) {
                let (s, _) = split_vertex(h, v, p1, q2).expect("listed split is valid");
                let code = s.canonical_code().0;
                if seen.contains_key(&code) || !member_of(&s, fam)? {
                    continue;
                }
                if seen.len() >= budget {
                    return Err(CensusError::BudgetExceeded(budget as u64));
                }
                seen.insert(code, s.clone());
                next.push(s);
            }
        }
        layer = next;
    }
    Ok(seen.into_values().collect())
}

/// Signature string of a degree multiset, re-exported for callers that
/// compare against tables.
pub fn signature_of(degrees: &[usize]) -> String {
    signature(degrees)
}

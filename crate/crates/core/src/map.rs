//! Signed rotation systems.
//!
//! Edge `i` owns darts `2i` and `2i + 1`; the partner of a dart is `d ^ 1`.
//! Dart `2i` leaves the first endpoint of the edge. Each vertex carries a
//! cyclic order of the darts leaving it, and each edge carries a sign. A
//! negative edge reverses the local orientation when crossed.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("partner table is not a fixed-point-free involution at dart {0}")]
    NonInvolution(usize),
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("dart {0} is missing from, repeated in, or out of range of the rotation tables")]
    DanglingDart(usize),
    #[error("sign of dart {0} must be +1 or -1 and agree with its partner")]
    BadSign(usize),
    #[error("edge {0} endpoints disagree with the rotation tables")]
    EndpointMismatch(usize),
    #[error("graph needs at least one vertex")]
    Empty,
}

/// Raw tables for [`EmbeddedGraph::build`]. Darts are arbitrary ids `0..n`;
/// `sign` is indexed by dart and must agree across partners.
#[derive(Debug, Clone)]
pub struct MapTables {
    pub rotation: Vec<Vec<usize>>,
    pub partner: Vec<usize>,
    pub sign: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmbeddedGraph {
    rot: Vec<Vec<u32>>,
    vert: Vec<u32>,
    pos: Vec<u32>,
    sign: Vec<i8>,
    simple: bool,
}

/// A face boundary walk as a cyclic list of (dart, local orientation) states.
/// Each state leaves the origin of its dart.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FaceWalk {
    pub states: Vec<(u32, i8)>,
}

impl FaceWalk {
    /// Length with 1-sided edges counted twice.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn darts(&self) -> Vec<u32> {
        self.states.iter().map(|s| s.0).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.states.iter().map(|s| (s.0 >> 1) as usize)
    }
}

#[derive(Debug, Clone)]
pub struct Faces {
    pub walks: Vec<FaceWalk>,
    state_face: Vec<u32>,
    forward: Vec<bool>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.walks.len()
    }

    /// Face containing the state `(d, o)`.
    pub fn face_of(&self, d: usize, o: i8) -> usize {
        self.state_face[state_index(d, o)] as usize
    }

    /// The two faces on either side of edge `e` (possibly equal).
    pub fn sides(&self, e: usize) -> (usize, usize) {
        (self.face_of(2 * e, 1), self.face_of(2 * e, -1))
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.walks.iter().map(|w| w.len()).collect()
    }

    /// True if `(d, o)` lies on the stored walk of its face rather than on
    /// the reversed walk.
    pub fn is_forward(&self, d: usize, o: i8) -> bool {
        self.forward[state_index(d, o)]
    }
}

#[inline]
fn state_index(d: usize, o: i8) -> usize {
    2 * d + usize::from(o < 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurfaceClass {
    pub euler_char: i64,
    pub orientable: bool,
    /// Handles if orientable, cross-caps otherwise.
    pub genus: i64,
}

impl SurfaceClass {
    pub fn sphere() -> Self {
        SurfaceClass { euler_char: 2, orientable: true, genus: 0 }
    }

    pub fn projective_plane() -> Self {
        SurfaceClass { euler_char: 1, orientable: false, genus: 1 }
    }

    pub fn torus() -> Self {
        SurfaceClass { euler_char: 0, orientable: true, genus: 1 }
    }

    pub fn klein_bottle() -> Self {
        SurfaceClass { euler_char: 0, orientable: false, genus: 2 }
    }

    pub fn from_genus(orientable: bool, genus: i64) -> Self {
        let euler_char = if orientable { 2 - 2 * genus } else { 2 - genus };
        SurfaceClass { euler_char, orientable, genus }
    }

    pub fn mu(&self) -> i64 {
        if self.orientable {
            2
        } else {
            1
        }
    }

    /// Twice the reduced genus, `2 - χ`.
    pub fn reduced_genus_x2(&self) -> i64 {
        2 - self.euler_char
    }

    pub fn reduced_genus(&self) -> f64 {
        self.reduced_genus_x2() as f64 / 2.0
    }

    pub fn name(&self) -> String {
        match (self.orientable, self.genus) {
            (true, 0) => "S2".into(),
            (false, 1) => "P2".into(),
            (true, 1) => "T2".into(),
            (false, 2) => "K2".into(),
            (true, g) => format!("or:{g}"),
            (false, k) => format!("nor:{k}"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "S2" => return Some(Self::sphere()),
            "P2" => return Some(Self::projective_plane()),
            "T2" => return Some(Self::torus()),
            "K2" => return Some(Self::klein_bottle()),
            _ => {}
        }
        let (kind, g) = s.split_once(':')?;
        let g: i64 = g.parse().ok()?;
        match kind {
            "or" if g >= 0 => Some(Self::from_genus(true, g)),
            "nor" if g >= 1 => Some(Self::from_genus(false, g)),
            _ => None,
        }
    }
}

/// Canonical code: equal codes iff the maps are isomorphic, mirror images
/// included.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(pub Vec<u32>);

impl CanonicalCode {
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|x| x.to_be_bytes()).collect()
    }

    /// Hex string with one byte per entry when every entry fits, which is
    /// always the case at census sizes; wide entries fall back to 8 digits.
    pub fn to_hex(&self) -> String {
        let wide = self.0.iter().any(|&x| x > 0xff);
        let mut s = String::with_capacity(self.0.len() * 2 + 1);
        if wide {
            s.push('w');
            for x in &self.0 {
                s.push_str(&format!("{x:08x}"));
            }
        } else {
            for x in &self.0 {
                s.push_str(&format!("{x:02x}"));
            }
        }
        s
    }
}

impl EmbeddedGraph {
    /// Validate general tables. Darts are renumbered so that the two darts of
    /// each edge are adjacent ids, edges ordered by their smaller original dart.
    pub fn build(t: &MapTables, require_simple: bool) -> Result<Self, MapError> {
        let n = t.partner.len();
        for (d, &p) in t.partner.iter().enumerate() {
            if p >= n || p == d || t.partner[p] != d {
                return Err(MapError::NonInvolution(d));
            }
        }
        if t.sign.len() != n {
            return Err(MapError::BadSign(t.sign.len().min(n)));
        }
        let mut relabel = vec![usize::MAX; n];
        let mut next_id = 0;
        for d in 0..n {
            if relabel[d] == usize::MAX {
                let p = t.partner[d];
                if t.sign[d] != t.sign[p] || (t.sign[d] != 1 && t.sign[d] != -1) {
                    return Err(MapError::BadSign(d));
                }
                relabel[d] = next_id;
                relabel[p] = next_id + 1;
                next_id += 2;
            }
        }
        let mut sign = vec![1i8; n / 2];
        for d in 0..n {
            sign[relabel[d] >> 1] = t.sign[d];
        }
        let mut rot = Vec::with_capacity(t.rotation.len());
        for r in &t.rotation {
            let mut out = Vec::with_capacity(r.len());
            for &d in r {
                if d >= n {
                    return Err(MapError::DanglingDart(d));
                }
                out.push(relabel[d] as u32);
            }
            rot.push(out);
        }
        Self::from_parts(rot, sign, require_simple)
    }

    /// Build from a rotation over darts `2i, 2i+1` and per-edge signs.
    pub fn from_parts(rot: Vec<Vec<u32>>, sign: Vec<i8>, require_simple: bool) -> Result<Self, MapError> {
        let g = Self::assemble(rot, sign)?;
        if !g.is_connected() {
            return Err(MapError::DisconnectedGraph);
        }
        if require_simple {
            if let Some(msg) = g.simplicity_defect() {
                return Err(MapError::NotSimple(msg));
            }
        }
        Ok(g)
    }

    fn assemble(rot: Vec<Vec<u32>>, sign: Vec<i8>) -> Result<Self, MapError> {
        if rot.is_empty() {
            return Err(MapError::Empty);
        }
        let nd = 2 * sign.len();
        for (e, &s) in sign.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(MapError::BadSign(2 * e));
            }
        }
        let mut vert = vec![u32::MAX; nd];
        let mut pos = vec![0u32; nd];
        for (v, r) in rot.iter().enumerate() {
            for (i, &d) in r.iter().enumerate() {
                let d = d as usize;
                if d >= nd || vert[d] != u32::MAX {
                    return Err(MapError::DanglingDart(d));
                }
                vert[d] = v as u32;
                pos[d] = i as u32;
            }
        }
        if let Some(d) = vert.iter().position(|&v| v == u32::MAX) {
            return Err(MapError::DanglingDart(d));
        }
        let simple = (0..sign.len()).all(|e| vert[2 * e] != vert[2 * e + 1]) && {
            let mut seen = std::collections::HashSet::new();
            (0..sign.len()).all(|e| {
                let (a, b) = (vert[2 * e], vert[2 * e + 1]);
                seen.insert((a.min(b), a.max(b)))
            })
        };
        Ok(EmbeddedGraph { rot, vert, pos, sign, simple })
    }

    fn simplicity_defect(&self) -> Option<String> {
        let mut seen = std::collections::HashMap::new();
        for e in 0..self.edge_count() {
            let (a, b) = self.endpoints(e);
            if a == b {
                return Some(format!("edge {e} is a loop at vertex {a}"));
            }
            if let Some(f) = seen.insert((a.min(b), a.max(b)), e) {
                return Some(format!("edges {f} and {e} are parallel"));
            }
        }
        None
    }

    pub fn vertex_count(&self) -> usize {
        self.rot.len()
    }

    pub fn edge_count(&self) -> usize {
        self.sign.len()
    }

    pub fn dart_count(&self) -> usize {
        self.vert.len()
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn rotation(&self, v: usize) -> &[u32] {
        &self.rot[v]
    }

    pub fn rotations(&self) -> &[Vec<u32>] {
        &self.rot
    }

    pub fn signs(&self) -> &[i8] {
        &self.sign
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn vertex_of(&self, d: usize) -> usize {
        self.vert[d] as usize
    }

    pub fn position(&self, d: usize) -> usize {
        self.pos[d] as usize
    }

    pub fn sign(&self, e: usize) -> i8 {
        self.sign[e]
    }

    pub fn dart_sign(&self, d: usize) -> i8 {
        self.sign[d >> 1]
    }

    /// Endpoints `(origin of 2e, origin of 2e+1)`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        (self.vert[2 * e] as usize, self.vert[2 * e + 1] as usize)
    }

    /// Vertex at the far end of dart `d`.
    pub fn head(&self, d: usize) -> usize {
        self.vert[d ^ 1] as usize
    }

    pub fn next(&self, d: usize) -> usize {
        let r = &self.rot[self.vert[d] as usize];
        r[(self.pos[d] as usize + 1) % r.len()] as usize
    }

    pub fn prev(&self, d: usize) -> usize {
        let r = &self.rot[self.vert[d] as usize];
        r[(self.pos[d] as usize + r.len() - 1) % r.len()] as usize
    }

    /// `next` if `o = +1`, `prev` otherwise.
    pub fn step_rot(&self, d: usize, o: i8) -> usize {
        if o > 0 {
            self.next(d)
        } else {
            self.prev(d)
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rot[v].iter().map(move |&d| self.head(d as usize))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        (0..self.edge_count()).map(|e| self.endpoints(e)).collect()
    }

    pub fn freedom(&self) -> i64 {
        3 * self.vertex_count() as i64 - self.edge_count() as i64
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// One face-tracing step.
    #[inline]
    pub fn face_step(&self, d: usize, o: i8) -> (usize, i8) {
        let p = d ^ 1;
        let o2 = o * self.sign[d >> 1];
        (self.step_rot(p, o2), o2)
    }

    /// The same edge side traversed in the opposite direction.
    #[inline]
    pub fn mirror_state(&self, d: usize, o: i8) -> (usize, i8) {
        (d ^ 1, -o * self.sign[d >> 1])
    }

    pub fn trace_faces(&self) -> Faces {
        let nd = self.dart_count();
        let mut state_face = vec![u32::MAX; 2 * nd];
        let mut forward = vec![false; 2 * nd];
        let mut walks = Vec::new();
        for d0 in 0..nd {
            for o0 in [1i8, -1] {
                if state_face[state_index(d0, o0)] != u32::MAX {
                    continue;
                }
                let id = walks.len() as u32;
                let mut states = Vec::new();
                let (mut d, mut o) = (d0, o0);
                loop {
                    state_face[state_index(d, o)] = id;
                    forward[state_index(d, o)] = true;
                    let (md, mo) = self.mirror_state(d, o);
                    state_face[state_index(md, mo)] = id;
                    states.push((d as u32, o));
                    let (nd2, no) = self.face_step(d, o);
                    d = nd2;
                    o = no;
                    if d == d0 && o == o0 {
                        break;
                    }
                }
                walks.push(FaceWalk { states });
            }
        }
        if nd == 0 {
            // an isolated vertex on the sphere: one face with empty boundary
            walks.push(FaceWalk { states: Vec::new() });
        }
        Faces { walks, state_face, forward }
    }

    /// Vertex flips that make every sign +1, if they exist.
    pub fn orientation_flips(&self) -> Option<Vec<i8>> {
        let n = self.vertex_count();
        let mut flip = vec![0i8; n];
        flip[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &d in &self.rot[v] {
                let d = d as usize;
                let w = self.head(d);
                let want = flip[v] * self.dart_sign(d);
                if flip[w] == 0 {
                    flip[w] = want;
                    queue.push_back(w);
                } else if flip[w] != want {
                    return None;
                }
            }
        }
        Some(flip)
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation_flips().is_some()
    }

    pub fn surface(&self) -> SurfaceClass {
        self.surface_with_faces(self.trace_faces().count())
    }

    pub fn surface_with_faces(&self, f: usize) -> SurfaceClass {
        let chi = self.vertex_count() as i64 - self.edge_count() as i64 + f as i64;
        let orientable = self.is_orientable();
        let genus = if orientable { (2 - chi) / 2 } else { 2 - chi };
        SurfaceClass { euler_char: chi, orientable, genus }
    }

    /// Reverse the rotation at `v` and negate the signs of its edges.
    /// Loops keep their sign.
    pub fn flip_vertex(&mut self, v: usize) {
        self.rot[v].reverse();
        let len = self.rot[v].len();
        for i in 0..len {
            let d = self.rot[v][i] as usize;
            self.pos[d] = i as u32;
        }
        let mut touched = Vec::with_capacity(len);
        for &d in &self.rot[v] {
            touched.push((d >> 1) as usize);
        }
        touched.sort_unstable();
        for w in touched.chunk_by(|a, b| a == b) {
            if w.len() == 1 {
                self.sign[w[0]] = -self.sign[w[0]];
            }
        }
    }

    /// Mirror image: every rotation reversed.
    pub fn mirrored(&self) -> Self {
        let rot = self.rot.iter().map(|r| r.iter().rev().copied().collect()).collect();
        Self::assemble(rot, self.sign.clone()).expect("mirror of a valid map")
    }

    /// Relabel vertices by `vperm[old] = new` and edges by `eperm[old] = new`,
    /// optionally swapping the two darts of some edges and rotating each
    /// vertex's cyclic list.
    pub fn relabeled(&self, vperm: &[usize], eperm: &[usize], swap: &[bool], shift: &[usize]) -> Self {
        let map_dart = |d: usize| -> u32 {
            let e = d >> 1;
            let side = (d & 1) ^ usize::from(swap[e]);
            (2 * eperm[e] + side) as u32
        };
        let mut rot = vec![Vec::new(); self.vertex_count()];
        for (v, r) in self.rot.iter().enumerate() {
            let k = if r.is_empty() { 0 } else { shift[v] % r.len() };
            let mut out: Vec<u32> = r.iter().map(|&d| map_dart(d as usize)).collect();
            out.rotate_left(k);
            rot[vperm[v]] = out;
        }
        let mut sign = vec![1; self.edge_count()];
        for e in 0..self.edge_count() {
            sign[eperm[e]] = self.sign[e];
        }
        Self::assemble(rot, sign).expect("relabeling of a valid map")
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        let mut best: Option<Vec<u32>> = None;
        let mut buf = Vec::new();
        let mut scratch = CanonScratch::new(self.vertex_count());
        for d in 0..self.dart_count() {
            for o in [1i8, -1] {
                if self.encode_from(d, o, best.as_deref(), &mut buf, &mut scratch) {
                    best = Some(buf.clone());
                }
            }
        }
        let mut code = vec![self.vertex_count() as u32, self.edge_count() as u32];
        if let Some(b) = best {
            code.extend(b);
        }
        CanonicalCode(code)
    }

    /// Rebuild a map from its canonical code. Vertices are numbered in BFS
    /// order and each rotation starts at the entry dart, so the result is a
    /// canonical representative of the isomorphism class.
    pub fn from_canonical_code(code: &CanonicalCode) -> Result<Self, MapError> {
        let c = &code.0;
        let bad = || MapError::DanglingDart(usize::MAX);
        let (n, m) = (*c.first().ok_or(MapError::Empty)? as usize, *c.get(1).ok_or(bad())? as usize);
        if c.len() == 2 && m == 0 && n == 1 {
            return Self::from_parts(vec![vec![]], vec![], false);
        }
        // rows[u] = (neighbor label, position at neighbor, negative)
        let mut rows: Vec<Vec<(usize, usize, bool)>> = Vec::with_capacity(n);
        let mut i = 2;
        for _ in 0..n {
            let deg = *c.get(i).ok_or(bad())? as usize;
            i += 1;
            let mut row = Vec::with_capacity(deg);
            for _ in 0..deg {
                let t = c.get(i..i + 3).ok_or(bad())?;
                row.push((t[0] as usize, t[1] as usize, t[2] == 1));
                i += 3;
            }
            rows.push(row);
        }
        if i != c.len() {
            return Err(bad());
        }
        let mut rot: Vec<Vec<u32>> = rows.iter().map(|r| vec![u32::MAX; r.len()]).collect();
        let mut sign = Vec::with_capacity(m);
        for u in 0..n {
            for j in 0..rows[u].len() {
                if rot[u][j] != u32::MAX {
                    continue;
                }
                let (w, k, neg) = rows[u][j];
                if w >= n || k >= rows[w].len() || rot[w][k] != u32::MAX || rows[w][k].0 != u || rows[w][k].1 != j {
                    return Err(bad());
                }
                let e = sign.len() as u32;
                rot[u][j] = 2 * e;
                rot[w][k] = 2 * e + 1;
                sign.push(if neg { -1 } else { 1 });
            }
        }
        if sign.len() != m {
            return Err(bad());
        }
        Self::from_parts(rot, sign, false)
    }

    /// The canonical representative of this map's isomorphism class.
    pub fn canonical_form(&self) -> Self {
        Self::from_canonical_code(&self.canonical_code()).expect("canonical code decodes")
    }

    /// Encode the BFS labelling from state `(d0, o0)`. Returns true if the
    /// result is strictly smaller than `best`; aborts early otherwise.
    fn encode_from(&self, d0: usize, o0: i8, best: Option<&[u32]>, out: &mut Vec<u32>, s: &mut CanonScratch) -> bool {
        out.clear();
        s.reset();
        let v0 = self.vertex_of(d0);
        s.label[v0] = 0;
        s.entry[v0] = d0 as u32;
        s.orient[v0] = o0;
        s.order.push(v0 as u32);
        let mut less = best.is_none();
        let mut i = 0;
        while i < s.order.len() {
            let u = s.order[i] as usize;
            i += 1;
            let deg = self.degree(u);
            let ou = s.orient[u];
            let mut d = s.entry[u] as usize;
            let mut row_start = out.len();
            out.push(deg as u32);
            for _ in 0..deg {
                let w = self.head(d);
                let sg = self.dart_sign(d);
                if s.label[w] == u32::MAX {
                    s.label[w] = s.order.len() as u32;
                    s.entry[w] = (d ^ 1) as u32;
                    s.orient[w] = ou * sg;
                    s.order.push(w as u32);
                }
                let r = self.rot[w].len();
                let p = self.position(d ^ 1) as isize - self.position(s.entry[w] as usize) as isize;
                let local = if s.orient[w] > 0 { p } else { -p }.rem_euclid(r as isize) as u32;
                let ns = ou * sg * s.orient[w];
                out.push(s.label[w]);
                out.push(local);
                out.push(u32::from(ns < 0));
                d = self.step_rot(d, ou);
            }
            if !less {
                let b = best.unwrap();
                while row_start < out.len() {
                    match out[row_start].cmp(&b[row_start]) {
                        std::cmp::Ordering::Less => {
                            less = true;
                            break;
                        }
                        std::cmp::Ordering::Greater => return false,
                        std::cmp::Ordering::Equal => row_start += 1,
                    }
                }
            }
        }
        less
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.edge_count() == other.edge_count()
            && self.canonical_code() == other.canonical_code()
    }

    /// Sorted multiset of vertex degrees, largest first.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.vertex_count()).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Degree signature such as `6^3 5^2 4^2`.
    pub fn degree_signature(&self) -> String {
        signature(&self.degree_sequence())
    }
}

/// Run-length signature of a multiset given in descending order.
pub fn signature(desc: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < desc.len() {
        let mut j = i;
        while j < desc.len() && desc[j] == desc[i] {
            j += 1;
        }
        parts.push(format!("{}^{}", desc[i], j - i));
        i = j;
    }
    parts.join(" ")
}

struct CanonScratch {
    label: Vec<u32>,
    entry: Vec<u32>,
    orient: Vec<i8>,
    order: Vec<u32>,
}

impl CanonScratch {
    fn new(n: usize) -> Self {
        CanonScratch { label: vec![u32::MAX; n], entry: vec![0; n], orient: vec![0; n], order: Vec::with_capacity(n) }
    }

    fn reset(&mut self) {
        self.label.fill(u32::MAX);
        self.order.clear();
    }
}

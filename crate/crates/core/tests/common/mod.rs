#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use surfmap::EmbeddedGraph;

/// Random connected simple graph on `n` vertices with about `extra` edges
/// beyond a spanning tree.
pub fn random_simple_graph(rng: &mut impl Rng, n: usize, extra: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let key = (a.min(b), a.max(b));
        if a != b && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == key) {
            edges.push((a, b));
        }
    }
    edges
}

/// Random signed rotation system on a random connected simple graph.
pub fn random_map(rng: &mut impl Rng, n: usize, extra: usize, signed: bool) -> EmbeddedGraph {
    let edges = random_simple_graph(rng, n, extra);
    let mut rot = vec![Vec::new(); n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        rot[a].push(2 * e as u32);
        rot[b].push(2 * e as u32 + 1);
    }
    for r in &mut rot {
        r.shuffle(rng);
    }
    let sign = edges.iter().map(|_| if signed && rng.gen_bool(0.3) { -1 } else { 1 }).collect();
    EmbeddedGraph::from_parts(rot, sign, true).unwrap()
}

/// Random relabeling with random dart swaps and rotation shifts, optionally
/// mirrored and with random vertex flips.
pub fn scramble(rng: &mut impl Rng, g: &EmbeddedGraph, mirror: bool) -> EmbeddedGraph {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut vperm: Vec<usize> = (0..n).collect();
    vperm.shuffle(rng);
    let mut eperm: Vec<usize> = (0..m).collect();
    eperm.shuffle(rng);
    let swap: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.5)).collect();
    let shift: Vec<usize> = (0..n).map(|_| rng.gen_range(0..64)).collect();
    let mut h = g.relabeled(&vperm, &eperm, &swap, &shift);
    for v in 0..n {
        if rng.gen_bool(0.3) {
            h.flip_vertex(v);
        }
    }
    if mirror {
        h = h.mirrored();
    }
    h
}

/// Number of connected components of the orientation double cover:
/// vertex `(v, s)` is joined to `(w, s * sign)` along each edge.
pub fn double_cover_components(g: &EmbeddedGraph) -> usize {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in 0..g.edge_count() {
        let (u, w) = g.endpoints(e);
        for s in 0..2 {
            let t = if g.sign(e) > 0 { s } else { 1 - s };
            let a = find(&mut parent, 2 * u + s);
            let b = find(&mut parent, 2 * w + t);
            parent[a] = b;
        }
    }
    (0..2 * n).filter(|&x| find(&mut parent, x) == x).count()
}

/// Face count by an independent permutation computation on the double
/// cover: darts `(d, s)` with the orientable face permutation.
pub fn cover_face_count(g: &EmbeddedGraph) -> usize {
    let nd = g.dart_count();
    if nd == 0 {
        return 2;
    }
    // cover dart (d, s): leaves (vertex_of(d), s)
    let idx = |d: usize, s: usize| 2 * d + s;
    let mut seen = vec![false; 2 * nd];
    let mut faces = 0;
    for start in 0..2 * nd {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            let (d, s) = (x / 2, x % 2);
            let t = if g.dart_sign(d) > 0 { s } else { 1 - s };
            let p = d ^ 1;
            let nxt = if t == 0 { g.next(p) } else { g.prev(p) };
            x = idx(nxt, t);
        }
    }
    faces
}

pub mod graphs;

/// Reference sparsity test: every vertex subset of the relevant size obeys
/// `e(X) <= 3|X| - α` (subsets of at least 3 vertices for α = 6, all subsets
/// for α <= 3). Returns a violating subset as a bitmask.
pub fn brute_violation(n: usize, edges: &[(usize, usize)], alpha: i64) -> Option<u32> {
    let min = match alpha {
        6 => 3,
        4 | 5 => 2,
        _ => 1,
    };
    let masks: Vec<u32> = edges.iter().map(|&(a, b)| (1u32 << a) | (1u32 << b)).collect();
    for x in 1u32..(1u32 << n) {
        let k = x.count_ones() as i64;
        if (k as usize) < min {
            continue;
        }
        let e = masks.iter().filter(|&&m| m & x == m).count() as i64;
        if e > 3 * k - alpha {
            return Some(x);
        }
    }
    None
}

pub fn brute_sparse(n: usize, edges: &[(usize, usize)], alpha: i64) -> bool {
    brute_violation(n, edges, alpha).is_none()
}

pub fn brute_tight(n: usize, edges: &[(usize, usize)], alpha: i64) -> bool {
    3 * n as i64 - edges.len() as i64 == alpha && brute_sparse(n, edges, alpha)
}

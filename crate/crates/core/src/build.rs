//! Constructors for simple maps from neighbor orders or triangle lists, and a
//! few standard examples.

use std::collections::HashMap;

use crate::map::{EmbeddedGraph, MapError};

/// Simple map from per-vertex cyclic neighbor orders and a sign function.
/// Edge ids follow the first appearance of `{u, w}` scanning vertices in order.
pub fn from_neighbor_orders(orders: &[Vec<usize>], sign: impl Fn(usize, usize) -> i8) -> Result<EmbeddedGraph, MapError> {
    let mut edge_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut signs = Vec::new();
    let mut rot = vec![Vec::new(); orders.len()];
    for (u, ord) in orders.iter().enumerate() {
        for &w in ord {
            let key = (u.min(w), u.max(w));
            let e = *edge_of.entry(key).or_insert_with(|| {
                signs.push(sign(key.0, key.1));
                signs.len() - 1
            });
            let d = if u == key.0 { 2 * e } else { 2 * e + 1 };
            rot[u].push(d as u32);
        }
    }
    EmbeddedGraph::from_parts(rot, signs, true)
}

/// Simple map from the triangles of a closed surface triangulation, either
/// orientable or not. Fails if some vertex link is not a single cycle.
pub fn from_triangles(n: usize, tris: &[[usize; 3]]) -> Result<EmbeddedGraph, MapError> {
    let mut link: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); n];
    for t in tris {
        for i in 0..3 {
            let (a, b, c) = (t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
            link[a].entry(b).or_default().push(c);
            link[a].entry(c).or_default().push(b);
        }
    }
    let mut orders = Vec::with_capacity(n);
    for (v, l) in link.iter().enumerate() {
        let start = *l.keys().min().ok_or(MapError::DanglingDart(v))?;
        if l.values().any(|x| x.len() != 2) {
            return Err(MapError::NotSimple(format!("link of vertex {v} is not a cycle")));
        }
        let mut ord = vec![start];
        let mut prev = start;
        let mut cur = l[&start][0].min(l[&start][1]);
        while cur != start {
            ord.push(cur);
            let nb = &l[&cur];
            let nxt = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = nxt;
        }
        if ord.len() != l.len() {
            return Err(MapError::NotSimple(format!("link of vertex {v} is pinched")));
        }
        orders.push(ord);
    }
    let pos: Vec<HashMap<usize, usize>> =
        orders.iter().map(|o| o.iter().enumerate().map(|(i, &w)| (w, i)).collect()).collect();
    let after = |u: usize, w: usize| {
        let o = &orders[u];
        o[(pos[u][&w] + 1) % o.len()]
    };
    let before = |u: usize, w: usize| {
        let o = &orders[u];
        o[(pos[u][&w] + o.len() - 1) % o.len()]
    };
    from_neighbor_orders(&orders, |u, w| if after(u, w) == before(w, u) { 1 } else { -1 })
}

pub fn k3_sphere() -> EmbeddedGraph {
    from_neighbor_orders(&[vec![1, 2], vec![2, 0], vec![0, 1]], |_, _| 1).unwrap()
}

/// K3 with one negative edge: a single hexagonal face in the projective plane.
pub fn k3_projective() -> EmbeddedGraph {
    from_neighbor_orders(&[vec![1, 2], vec![2, 0], vec![0, 1]], |u, w| if (u, w) == (0, 1) { -1 } else { 1 }).unwrap()
}

pub fn tetrahedron() -> EmbeddedGraph {
    from_triangles(4, &[[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]).unwrap()
}

pub fn octahedron() -> EmbeddedGraph {
    // poles 0, 5; equator 1..=4
    let mut t = Vec::new();
    for i in 0..4 {
        let (a, b) = (1 + i, 1 + (i + 1) % 4);
        t.push([0, a, b]);
        t.push([5, b, a]);
    }
    from_triangles(6, &t).unwrap()
}

/// Bipyramid over a triangle: poles 0 and 4.
pub fn bipyramid() -> EmbeddedGraph {
    let mut t = Vec::new();
    for i in 0..3 {
        let (a, b) = (1 + i, 1 + (i + 1) % 3);
        t.push([0, a, b]);
        t.push([4, b, a]);
    }
    from_triangles(5, &t).unwrap()
}

/// K7 on the torus: rotation at `i` is `i+1, i+3, i+2, i+6, i+4, i+5 (mod 7)`.
pub fn k7_torus() -> EmbeddedGraph {
    let orders: Vec<Vec<usize>> = (0..7).map(|i| [1, 3, 2, 6, 4, 5].iter().map(|k| (i + k) % 7).collect()).collect();
    from_neighbor_orders(&orders, |_, _| 1).unwrap()
}

/// K6 on the projective plane (the antipodal quotient of the icosahedron).
pub fn k6_projective() -> EmbeddedGraph {
    from_triangles(
        6,
        &[[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1], [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]],
    )
    .unwrap()
}

/// Two K5's sharing an edge, with the shared edge removed.
pub fn double_banana_edges() -> (usize, Vec<(usize, usize)>) {
    let mut e = Vec::new();
    for block in [[0usize, 1, 2, 3, 4], [0, 1, 5, 6, 7]] {
        for i in 0..5 {
            for j in i + 1..5 {
                let (a, b) = (block[i], block[j]);
                if (a, b) != (0, 1) && !e.contains(&(a, b)) {
                    e.push((a, b));
                }
            }
        }
    }
    (8, e)
}

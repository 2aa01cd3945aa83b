//! DOT and SVG renderings of a map.

use std::fmt::Write;

use surfmap::EmbeddedGraph;

pub fn face_vertices(g: &EmbeddedGraph) -> Vec<Vec<usize>> {
    g.trace_faces().walks.iter().map(|w| w.darts().iter().map(|&d| g.vertex_of(d as usize)).collect()).collect()
}

/// Undirected DOT graph. Negative edges are dashed; each face is a record
/// node listing its boundary walk.
pub fn to_dot(g: &EmbeddedGraph, name: &str) -> String {
    let s = g.surface();
    let mut out = String::new();
    writeln!(out, "graph \"{name}\" {{").unwrap();
    writeln!(
        out,
        "  // surface {} with {} vertices, {} edges, {} faces",
        s.name(),
        g.vertex_count(),
        g.edge_count(),
        g.trace_faces().count()
    )
    .unwrap();
    for v in 0..g.vertex_count() {
        writeln!(out, "  v{v} [label=\"{v}\"];").unwrap();
    }
    for e in 0..g.edge_count() {
        let (a, b) = g.endpoints(e);
        let style = if g.sign(e) < 0 { ", style=dashed" } else { "" };
        writeln!(out, "  v{a} -- v{b} [label=\"e{e}\"{style}];").unwrap();
    }
    for (i, walk) in face_vertices(g).iter().enumerate() {
        let seq: Vec<String> = walk.iter().map(|v| v.to_string()).collect();
        writeln!(out, "  f{i} [shape=record, style=dotted, label=\"{{face {i}|length {}|{}}}\"];", walk.len(), seq.join(" "))
            .unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Debug)]
pub struct UnsupportedSurface(pub String);

impl std::fmt::Display for UnsupportedSurface {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "no fundamental polygon layout for {} (reduced genus above 1)", self.0)
    }
}

impl std::error::Error for UnsupportedSurface {}

fn segments_cross(p: [f64; 2], q: [f64; 2], r: [f64; 2], s: [f64; 2]) -> Option<[f64; 2]> {
    let d = (q[0] - p[0]) * (s[1] - r[1]) - (q[1] - p[1]) * (s[0] - r[0]);
    if d.abs() < 1e-12 {
        return None;
    }
    let t = ((r[0] - p[0]) * (s[1] - r[1]) - (r[1] - p[1]) * (s[0] - r[0])) / d;
    let u = ((r[0] - p[0]) * (q[1] - p[1]) - (r[1] - p[1]) * (q[0] - p[0])) / d;
    let inside = |x: f64| x > 1e-9 && x < 1.0 - 1e-9;
    (inside(t) && inside(u)).then(|| [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])])
}

/// Fundamental polygon drawing for surfaces of reduced genus at most 1: a
/// disc for the sphere and projective plane, a square for the torus and
/// Klein bottle. Vertices sit on a circle inside the polygon and every edge
/// is drawn once as a segment; crossings are marked.
pub fn to_svg(g: &EmbeddedGraph) -> Result<String, UnsupportedSurface> {
    let s = g.surface();
    if s.reduced_genus_x2() > 2 {
        return Err(UnsupportedSurface(s.name()));
    }
    let size = 400.0;
    let c = size / 2.0;
    let n = g.vertex_count();
    let pos: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            [c + 0.6 * c * a.cos(), c + 0.6 * c * a.sin()]
        })
        .collect();
    let mut out = String::new();
    writeln!(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">")
        .unwrap();
    writeln!(out, "<title>{} with {} vertices and {} edges</title>", s.name(), n, g.edge_count()).unwrap();
    let frame = 10.0;
    match s.name().as_str() {
        "S2" => {
            writeln!(out, "<circle cx=\"{c}\" cy=\"{c}\" r=\"{}\" fill=\"none\" stroke=\"#999\"/>", c - frame).unwrap();
        }
        "P2" => {
            writeln!(out, "<circle cx=\"{c}\" cy=\"{c}\" r=\"{}\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"8 4\"/>", c - frame)
                .unwrap();
            writeln!(out, "<text x=\"{frame}\" y=\"{}\" font-size=\"11\">antipodal boundary points identified</text>", size - 2.0)
                .unwrap();
        }
        name => {
            let (lo, hi) = (frame, size - frame);
            writeln!(out, "<rect x=\"{lo}\" y=\"{lo}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999\"/>", hi - lo, hi - lo)
                .unwrap();
            let note = if name == "T2" { "opposite sides identified, same direction" } else { "vertical sides identified, horizontal sides reversed" };
            writeln!(out, "<text x=\"{frame}\" y=\"{}\" font-size=\"11\">{note}</text>", size - 1.0).unwrap();
        }
    }
    for e in 0..g.edge_count() {
        let (a, b) = g.endpoints(e);
        let dash = if g.sign(e) < 0 { " stroke-dasharray=\"4 3\"" } else { "" };
        writeln!(
            out,
            "<line data-edge=\"{e}\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"{dash}/>",
            pos[a][0], pos[a][1], pos[b][0], pos[b][1]
        )
        .unwrap();
    }
    let edges: Vec<(usize, usize)> = (0..g.edge_count()).map(|e| g.endpoints(e)).collect();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = edges[i];
            let (x, y) = edges[j];
            if a == x || a == y || b == x || b == y {
                continue;
            }
            if let Some(p) = segments_cross(pos[a], pos[b], pos[x], pos[y]) {
                writeln!(out, "<circle class=\"crossing\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"red\"/>", p[0], p[1]).unwrap();
            }
        }
    }
    for (v, p) in pos.iter().enumerate() {
        writeln!(out, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"9\" fill=\"white\" stroke=\"black\"/>", p[0], p[1]).unwrap();
        writeln!(out, "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"middle\">{v}</text>", p[0], p[1] + 3.5).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

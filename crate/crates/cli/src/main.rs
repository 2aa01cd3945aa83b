//! `surfmap`: check, enumerate, transform and export embedded graphs.
//!
//! JSON goes to stdout and a human summary to stderr. Exit code 0 means the
//! run succeeded and every requested property holds, 1 means a property is
//! false, 2 means a usage or input error.

mod export;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use surfmap::census::{
    contraction_minimality, enumerate_minimal, hole_sizes, membership, CensusOptions, FamilySpec, HoleFilter,
};
use surfmap::io::{read_graph, MapFile};
use surfmap::rigidity::generic_rank_probe;
use surfmap::sparsity::{face_count_identity, Graph};
use surfmap::surgery::{contract_edge, contraction_obstruction, split_vertex};
use surfmap::{EmbeddedGraph, SurfaceClass};

#[derive(Parser)]
#[command(name = "surfmap", version, about = "Embedded graphs on surfaces")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Surface, freedom, faces and family membership of a map file.
    Check {
        file: PathBuf,
        #[command(flatten)]
        family: FamilyArgs,
        /// Evaluate the face-count identity with α = f(G).
        #[arg(long)]
        identity: bool,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Face walks of a map file.
    Faces {
        file: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Contraction-minimal members of a family up to a vertex bound.
    Enumerate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 7)]
        max_vertices: usize,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write index.jsonl and one map file per graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contract an edge lying on two facial triangles.
    Contract {
        file: PathBuf,
        #[arg(long)]
        edge: usize,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Split a vertex at two darts of its rotation.
    Split {
        file: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        p1: usize,
        #[arg(long)]
        q2: usize,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Canonical code and canonical representative.
    Canon {
        file: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Randomized generic 3-rigidity probe of a map or census file.
    Probe {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        input: InputArgs,
    },
    /// DOT, SVG or JSON rendering of a map or census file.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Output file, or directory for a census.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Ignore unknown fields in map files.
    #[arg(long)]
    lenient: bool,
    /// Refuse superface searches on graphs with more edges than this.
    #[arg(long, default_value_t = 40)]
    max_subgraph_edges: usize,
}

#[derive(Args, Clone)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Vec<FamilyArg>,
    /// S2, P2, T2, K2, or:g or nor:k. Defaults to the map's own surface.
    #[arg(long, value_parser = parse_surface)]
    surface: Option<SurfaceClass>,
    #[arg(long)]
    alpha: Option<i64>,
    #[arg(long)]
    genus_cap: Option<i64>,
    /// Number of nontriangular faces.
    #[arg(long, conflicts_with = "hole_multiset")]
    holes: Option<usize>,
    /// Nontriangular face sizes as size:count pairs, e.g. 4:2,5:1.
    #[arg(long, value_parser = parse_multiset)]
    hole_multiset: Option<HoleSizes>,
}

/// Hole sizes, largest first.
#[derive(Clone)]
struct HoleSizes(Vec<usize>);

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum FamilyArg {
    Triangulation,
    Partial,
    GirthPlanar,
    GirthGenus,
    Tight6,
    Tight3,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Dot,
    Svg,
    Json,
}

fn parse_surface(s: &str) -> Result<SurfaceClass, String> {
    SurfaceClass::parse(s).ok_or_else(|| format!("unknown surface {s:?}; use S2, P2, T2, K2, or:g or nor:k"))
}

fn parse_multiset(s: &str) -> Result<HoleSizes, String> {
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.is_empty()) {
        let (k, n) = part.split_once(':').ok_or_else(|| format!("expected size:count, got {part:?}"))?;
        let k: usize = k.trim().parse().map_err(|_| format!("bad size {k:?}"))?;
        let n: usize = n.trim().parse().map_err(|_| format!("bad count {n:?}"))?;
        if k < 4 {
            return Err(format!("hole size {k} is below 4"));
        }
        out.extend(std::iter::repeat(k).take(n));
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(HoleSizes(out))
}

impl FamilyArgs {
    fn specs(&self, surface: SurfaceClass) -> Result<Vec<FamilySpec>> {
        let surface = self.surface.unwrap_or(surface);
        let mut out = Vec::new();
        for &f in &self.family {
            let mut spec = match f {
                FamilyArg::Triangulation => FamilySpec::triangulations(surface),
                FamilyArg::Partial => {
                    let holes = self.hole_multiset.clone().context("--family partial needs --hole-multiset")?.0;
                    FamilySpec::partial(surface, holes)
                }
                FamilyArg::GirthPlanar => FamilySpec::girth_planar(surface, self.alpha.unwrap_or(6)),
                FamilyArg::GirthGenus => {
                    FamilySpec::girth_genus(surface, self.alpha.unwrap_or(6), self.genus_cap.unwrap_or(surface.genus))
                }
                FamilyArg::Tight6 => FamilySpec::tight(surface, 6),
                FamilyArg::Tight3 => FamilySpec::tight(surface, 3),
            };
            if let Some(a) = self.alpha {
                if matches!(f, FamilyArg::Tight6 | FamilyArg::Tight3) && a != spec.alpha {
                    bail!("--alpha {a} contradicts the family");
                }
            }
            if f != FamilyArg::Partial {
                if let Some(n) = self.holes {
                    spec = spec.with_holes(HoleFilter::Count(n));
                }
                if let Some(m) = &self.hole_multiset {
                    spec = spec.with_holes(HoleFilter::Multiset(m.0.clone()));
                }
            }
            spec.validate()?;
            out.push(spec);
        }
        Ok(out)
    }
}

fn is_girth(spec: &FamilySpec) -> bool {
    matches!(spec.kind, surfmap::census::FamilyKind::GirthPlanar | surfmap::census::FamilyKind::GirthGenus { .. })
}

fn load(path: &Path, input: &InputArgs) -> Result<EmbeddedGraph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    read_graph(&text, input.lenient, true).with_context(|| format!("parsing {}", path.display()))
}

/// Write a result to stdout. A closed pipe ends the process quietly.
fn out(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = writeln!(stdout, "{text}").and_then(|_| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

fn emit(v: &Value) {
    out(&serde_json::to_string_pretty(v).expect("JSON value serializes"));
}

fn summary(g: &EmbeddedGraph) -> Value {
    let faces = g.trace_faces();
    let s = g.surface_with_faces(faces.count());
    let mut sizes = faces.lengths();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    json!({
        "surface": s.name(),
        "orientable": s.orientable,
        "genus": s.genus,
        "euler_char": s.euler_char,
        "cellular": true,
        "simple": g.is_simple(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "freedom": g.freedom(),
        "faces": sizes,
        "signature": g.degree_signature(),
        "code": g.canonical_code().to_hex(),
    })
}

fn check(file: &Path, fam: &FamilyArgs, identity: bool, input: &InputArgs) -> Result<u8> {
    let g = load(file, input)?;
    let mut report = summary(&g);
    let mut ok = true;
    eprintln!(
        "{}: {} vertices, {} edges, {} faces on {}, f = {}",
        file.display(),
        g.vertex_count(),
        g.edge_count(),
        report["faces"].as_array().map_or(0, |a| a.len()),
        g.surface().name(),
        g.freedom()
    );
    if identity {
        let id = face_count_identity(&g, g.freedom())?;
        eprintln!("face-count identity: {} = {} ({})", id.face_lhs, id.face_rhs, if id.holds() { "holds" } else { "FAILS" });
        ok &= id.holds();
        report["identity"] = json!({
            "lhs": id.face_lhs,
            "rhs": id.face_rhs,
            "walk_lhs": id.walk_lhs,
            "walk_rhs": id.walk_rhs,
            "holds": id.holds(),
        });
    }
    let mut verdicts = Vec::new();
    for spec in fam.specs(g.surface())? {
        if is_girth(&spec) && g.edge_count() > input.max_subgraph_edges {
            bail!("{} edges exceed --max-subgraph-edges {}", g.edge_count(), input.max_subgraph_edges);
        }
        let excl = membership(&g, &spec)?;
        let mut v = json!({ "family": spec, "label": spec.label(), "member": excl.is_none(), "exclusion": excl });
        let name = spec.label();
        if excl.is_none() {
            let rep = contraction_minimality(&g, &spec)?;
            eprintln!("{name}: member, {}contraction-minimal", if rep.minimal { "" } else { "not " });
            v["minimal"] = json!(rep.minimal);
            v["edges"] = serde_json::to_value(&rep.edges)?;
        } else {
            eprintln!("{name}: not a member, {}", excl.as_ref().unwrap());
            ok = false;
        }
        verdicts.push(v);
    }
    report["families"] = Value::Array(verdicts);
    emit(&report);
    Ok(if ok { 0 } else { 1 })
}

fn faces(file: &Path, input: &InputArgs) -> Result<u8> {
    let g = load(file, input)?;
    let f = g.trace_faces();
    let walks: Vec<Value> = f
        .walks
        .iter()
        .zip(export::face_vertices(&g))
        .enumerate()
        .map(|(i, (w, vs))| json!({ "face": i, "length": w.len(), "vertices": vs, "darts": w.darts(), "edges": w.edges().collect::<Vec<_>>() }))
        .collect();
    eprintln!("{} faces on {}", walks.len(), g.surface().name());
    emit(&json!({ "surface": g.surface().name(), "faces": walks }));
    Ok(0)
}

fn enumerate(fam: &FamilyArgs, max_vertices: usize, budget: Option<u64>, threads: usize, out: Option<&Path>) -> Result<u8> {
    let surface = fam.surface.context("enumerate needs --surface")?;
    let specs = fam.specs(surface)?;
    let [spec] = specs.as_slice() else { bail!("enumerate takes exactly one --family") };
    if is_girth(spec) {
        eprintln!("note: girth families run a superface search on every member; this is slow");
    }
    let opts = CensusOptions { max_vertices, budget_nodes: budget.unwrap_or(u64::MAX), threads: threads.max(1), ..Default::default() };
    let res = enumerate_minimal(spec, &opts)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut index = String::new();
        for (i, e) in res.minimal.iter().enumerate() {
            let name = format!("min-{:03}.json", i + 1);
            std::fs::write(dir.join(&name), e.graph.to_json())?;
            let line = json!({
                "file": name, "code": e.code, "v": e.vertices, "e": e.edges,
                "signature": e.signature, "faces": e.faces,
            });
            index.push_str(&serde_json::to_string(&line)?);
            index.push('\n');
        }
        std::fs::write(dir.join("index.jsonl"), index)?;
    }
    eprintln!(
        "{} contraction-minimal graphs up to {} vertices ({}); members per vertex count: {:?}",
        res.minimal.len(),
        res.search_bound,
        if res.exhaustive { "exhaustive" } else { "NOT exhaustive, node budget exceeded" },
        res.members_by_vertices
    );
    for e in &res.minimal {
        eprintln!("  v={} e={} {} holes {:?}", e.vertices, e.edges, e.signature, hole_sizes(&e.map));
    }
    emit(&serde_json::to_value(&res)?);
    Ok(if res.exhaustive { 0 } else { 1 })
}

fn contract(file: &Path, edge: usize, input: &InputArgs) -> Result<u8> {
    let g = load(file, input)?;
    if edge >= g.edge_count() {
        bail!("edge {edge} out of range (the map has {} edges)", g.edge_count());
    }
    if let Some(obs) = contraction_obstruction(&g, &g.trace_faces(), edge) {
        eprintln!("edge {edge} is not contractible: {obs:?}");
        emit(&json!({ "contractible": false, "edge": edge, "obstruction": obs }));
        return Ok(1);
    }
    let h = contract_edge(&g, edge)?;
    eprintln!("contracted edge {edge}: {} vertices, {} edges, f = {}", h.vertex_count(), h.edge_count(), h.freedom());
    out(&MapFile::from_graph(&h).to_json());
    Ok(0)
}

fn split(file: &Path, vertex: usize, p1: usize, q2: usize, input: &InputArgs) -> Result<u8> {
    let g = load(file, input)?;
    if vertex >= g.vertex_count() {
        bail!("vertex {vertex} out of range");
    }
    let (h, n) = split_vertex(&g, vertex, p1, q2)?;
    eprintln!("split vertex {vertex} into {vertex} and {n}: f = {}", h.freedom());
    out(&MapFile::from_graph(&h).to_json());
    Ok(0)
}

fn canon(file: &Path, input: &InputArgs) -> Result<u8> {
    let g = load(file, input)?;
    let code = g.canonical_code();
    eprintln!("canonical code has {} words", code.0.len());
    emit(&json!({
        "code": code.to_hex(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "signature": g.degree_signature(),
        "canonical_map": MapFile::from_graph(&g.canonical_form()),
    }));
    Ok(0)
}

/// Maps in a file: a single map file, or every graph of a census result.
fn load_many(path: &Path, input: &InputArgs) -> Result<Vec<(String, EmbeddedGraph)>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(list) = value.get("minimal").and_then(Value::as_array) {
        let mut out = Vec::new();
        for (i, e) in list.iter().enumerate() {
            let payload = e.get("graph").with_context(|| format!("census entry {i} has no graph"))?;
            let g = MapFile::from_value(payload.clone(), input.lenient)?.to_graph(true)?;
            out.push((format!("min-{:03}", i + 1), g));
        }
        return Ok(out);
    }
    let g = MapFile::from_value(value, input.lenient)?.to_graph(true)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("map").to_string();
    Ok(vec![(stem, g)])
}

fn probe(file: &Path, trials: usize, seed: u64, input: &InputArgs) -> Result<u8> {
    let graphs = load_many(file, input)?;
    let mut all = true;
    let mut out = Vec::new();
    for (name, g) in &graphs {
        if g.vertex_count() < 3 {
            bail!("{name}: the probe needs at least 3 vertices");
        }
        let p = generic_rank_probe(&Graph::from_embedded(g), trials, seed);
        eprintln!(
            "{name}: rank {} of {} ({})",
            p.rank,
            p.bound,
            if p.minimally_rigid { "minimally rigid" } else { "not shown minimally rigid" }
        );
        all &= p.minimally_rigid;
        out.push(json!({ "name": name, "code": g.canonical_code().to_hex(), "probe": p }));
    }
    emit(&json!({ "all_minimally_rigid": all, "graphs": out }));
    Ok(if all { 0 } else { 1 })
}

fn export_file(file: &Path, format: Format, out: Option<&Path>, input: &InputArgs) -> Result<u8> {
    let graphs = load_many(file, input)?;
    let ext = match format {
        Format::Dot => "dot",
        Format::Svg => "svg",
        Format::Json => "json",
    };
    let mut rendered = Vec::new();
    for (name, g) in &graphs {
        let text = match format {
            Format::Dot => export::to_dot(g, name),
            Format::Svg => export::to_svg(g)?,
            Format::Json => MapFile::from_graph(g).to_json(),
        };
        rendered.push((name.clone(), g.canonical_code().to_hex(), text));
    }
    let mut written = Vec::new();
    match out {
        Some(path) if graphs.len() > 1 || path.is_dir() => {
            std::fs::create_dir_all(path)?;
            for (name, code, text) in &rendered {
                let p = path.join(format!("{name}.{ext}"));
                std::fs::write(&p, text)?;
                written.push(json!({ "name": name, "code": code, "path": p.display().to_string() }));
            }
            eprintln!("wrote {} {ext} files to {}", written.len(), path.display());
            emit(&json!({ "format": ext, "files": written }));
        }
        Some(path) => {
            let (name, code, text) = &rendered[0];
            std::fs::write(path, text)?;
            eprintln!("wrote {}", path.display());
            emit(&json!({ "format": ext, "files": [{ "name": name, "code": code, "path": path.display().to_string() }] }));
        }
        None => {
            let items: Vec<Value> =
                rendered.iter().map(|(name, code, text)| json!({ "name": name, "code": code, "content": text })).collect();
            eprintln!("rendered {} {ext} document(s)", items.len());
            emit(&json!({ "format": ext, "documents": items }));
        }
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.verb {
        Verb::Check { file, family, identity, input } => check(file, family, *identity, input),
        Verb::Faces { file, input } => faces(file, input),
        Verb::Enumerate { family, max_vertices, budget_nodes, threads, out } => {
            enumerate(family, *max_vertices, *budget_nodes, *threads, out.as_deref())
        }
        Verb::Contract { file, edge, input } => contract(file, *edge, input),
        Verb::Split { file, vertex, p1, q2, input } => split(file, *vertex, *p1, *q2, input),
        Verb::Canon { file, input } => canon(file, input),
        Verb::Probe { file, trials, seed, input } => probe(file, *trials, *seed, input),
        Verb::Export { file, format, out, input } => export_file(file, *format, out.as_deref(), input),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

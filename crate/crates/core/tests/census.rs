mod common;

use std::collections::{BTreeMap, BTreeSet};

use surfmap::build::{k3_sphere, k6_projective, k7_torus, octahedron, tetrahedron};
use surfmap::census::*;
use surfmap::girth::critical_edges;
use surfmap::{EmbeddedGraph, SurfaceClass};

fn sorted_desc(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

type Bucket = (String, usize, Vec<usize>);

/// Every signed rotation system of every connected simple graph on 3..=n
/// vertices, bucketed by surface, vertex count and face sizes. Surfaces with
/// negative Euler characteristic are dropped.
fn brute_force_maps(n: usize) -> BTreeMap<Bucket, BTreeSet<Vec<u32>>> {
    let mut out: BTreeMap<Bucket, BTreeSet<Vec<u32>>> = BTreeMap::new();
    for level in common::graphs::all_graphs(n).into_iter().skip(2) {
        for adj in level {
            let nv = adj.0.len();
            let edges = adj.edges();
            let mut darts = vec![Vec::new(); nv];
            for (k, &(a, b)) in edges.iter().enumerate() {
                darts[a].push(2 * k as u32);
                darts[b].push(2 * k as u32 + 1);
            }
            if darts.iter().any(|d| d.is_empty()) {
                continue;
            }
            // spanning tree edges keep sign +1
            let mut tree = vec![false; edges.len()];
            let mut reached = vec![false; nv];
            reached[0] = true;
            let mut stack = vec![0];
            while let Some(u) = stack.pop() {
                for (k, &(a, b)) in edges.iter().enumerate() {
                    let w = if a == u { b } else if b == u { a } else { continue };
                    if !reached[w] {
                        reached[w] = true;
                        tree[k] = true;
                        stack.push(w);
                    }
                }
            }
            if reached.iter().any(|r| !r) {
                continue;
            }
            let free: Vec<usize> = (0..edges.len()).filter(|&k| !tree[k]).collect();
            let choices: Vec<Vec<Vec<u32>>> = darts
                .iter()
                .map(|d| permutations(&d[1..]).into_iter().map(|mut p| {
                    p.insert(0, d[0]);
                    p
                }).collect())
                .collect();
            let mut idx = vec![0usize; nv];
            loop {
                let rot: Vec<Vec<u32>> = (0..nv).map(|v| choices[v][idx[v]].clone()).collect();
                for mask in 0u32..(1 << free.len()) {
                    let mut sign = vec![1i8; edges.len()];
                    for (i, &k) in free.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            sign[k] = -1;
                        }
                    }
                    let g = EmbeddedGraph::from_parts(rot.clone(), sign, true).unwrap();
                    let faces = g.trace_faces();
                    if nv as i64 - edges.len() as i64 + faces.count() as i64 >= 0 {
                        let key = (g.surface_with_faces(faces.count()).name(), nv, sorted_desc(faces.lengths()));
                        out.entry(key).or_default().insert(g.canonical_code().0);
                    }
                }
                // odometer over rotation choices
                let mut v = 0;
                while v < nv {
                    idx[v] += 1;
                    if idx[v] < choices[v].len() {
                        break;
                    }
                    idx[v] = 0;
                    v += 1;
                }
                if v == nv {
                    break;
                }
            }
        }
    }
    out
}

fn glue_codes(surface: SurfaceClass, v: usize, faces: Vec<usize>, order: GenerationOrder, threads: usize) -> BTreeSet<Vec<u32>> {
    let p = GlueParams { surface, vertices: v, faces, min_degree: 1, sparsity_alpha: None, order };
    let out = glue_maps(&p, u64::MAX, threads);
    assert!(out.exhaustive);
    out.graphs.iter().map(|g| g.canonical_code().0).collect()
}

#[test]
fn gluing_matches_brute_force_on_small_maps() {
    let oracle = brute_force_maps(5);
    let mut compared = 0;
    for ((name, v, faces), codes) in &oracle {
        let surface = SurfaceClass::parse(name).unwrap();
        for order in [GenerationOrder::FirstSide, GenerationOrder::LastSide] {
            let got = glue_codes(surface, *v, faces.clone(), order, 1);
            assert_eq!(&got, codes, "{name} v={v} faces={faces:?} {order:?}");
        }
        compared += codes.len();
    }
    // every surface with χ >= 0 shows up
    for s in ["S2", "P2", "T2", "K2"] {
        assert!(oracle.keys().any(|k| k.0 == s), "{s}");
    }
    assert!(compared > 300, "{compared}");
}

#[test]
fn partitions_of_six_give_eleven_torus_multisets() {
    let fam = FamilySpec::tight(SurfaceClass::torus(), 6);
    let sets = fam.hole_multisets();
    assert_eq!(sets.len(), 11);
    assert!(sets.contains(&vec![9]));
    assert!(sets.contains(&vec![8, 4]));
    assert!(sets.contains(&vec![4; 6]));
    assert_eq!(partitions(4).len(), 5);
}

#[test]
fn sphere_triangulation_counts() {
    let fam = FamilySpec::triangulations(SurfaceClass::sphere());
    let opts = CensusOptions { max_vertices: 8, ..Default::default() };
    let res = enumerate_minimal(&fam, &opts).unwrap();
    assert!(res.exhaustive);
    let counts: Vec<usize> = res.members_by_vertices.values().copied().collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 5, 14]);
    assert_eq!(res.minimal.len(), 1);
    assert_eq!(res.minimal[0].map.canonical_code(), k3_sphere().canonical_code());
}

#[test]
fn projective_triangulation_counts() {
    let fam = FamilySpec::triangulations(SurfaceClass::projective_plane());
    let opts = CensusOptions { max_vertices: 8, ..Default::default() };
    let res = enumerate_minimal(&fam, &opts).unwrap();
    assert_eq!(res.members_by_vertices[&6], 1);
    assert_eq!(res.members_by_vertices[&7], 3);
    assert_eq!(res.members_by_vertices[&8], 16);
    let sigs: BTreeSet<String> = res.minimal.iter().map(|e| e.signature.clone()).collect();
    assert_eq!(sigs, BTreeSet::from(["5^6".to_string(), "6^4 4^3".to_string()]));
    assert!(res.minimal.iter().any(|e| e.map.is_isomorphic(&k6_projective())));
}

#[test]
fn generation_orders_and_threads_agree() {
    let cases = [
        (FamilySpec::tight(SurfaceClass::projective_plane(), 6), 6),
        (FamilySpec::tight(SurfaceClass::torus(), 3).with_holes(HoleFilter::Count(1)), 7),
        (FamilySpec::tight(SurfaceClass::torus(), 6), 6),
        (FamilySpec::triangulations(SurfaceClass::klein_bottle()), 8),
    ];
    for (fam, v) in cases {
        let codes = |order, threads| {
            let opts = CensusOptions { order, threads, ..Default::default() };
            let (m, _, ex) = members_with_vertices(&fam, v, &opts).unwrap();
            assert!(ex);
            m.iter().map(|g| g.canonical_code().to_hex()).collect::<Vec<_>>()
        };
        let base = codes(GenerationOrder::FirstSide, 1);
        assert!(!base.is_empty());
        assert_eq!(codes(GenerationOrder::LastSide, 1), base);
        assert_eq!(codes(GenerationOrder::FirstSide, 3), base);
    }
}

#[test]
fn membership_examples() {
    let sphere = SurfaceClass::sphere();
    assert!(member_of(&k3_sphere(), &FamilySpec::triangulations(sphere)).unwrap());
    assert!(member_of(&octahedron(), &FamilySpec::tight(sphere, 6)).unwrap());
    let k7 = FamilySpec::tight(SurfaceClass::torus(), 6);
    assert_eq!(membership(&k7_torus(), &k7).unwrap(), Some(Exclusion::Freedom { found: 0 }));
    let wrong = FamilySpec::triangulations(SurfaceClass::torus());
    assert!(matches!(membership(&k3_sphere(), &wrong).unwrap(), Some(Exclusion::WrongSurface { .. })));
    assert!(FamilySpec::partial(SurfaceClass::torus(), vec![9]).validate().is_ok());
    assert_eq!(FamilySpec::partial(SurfaceClass::torus(), vec![9]).alpha, 6);
    assert!(FamilySpec::tight(SurfaceClass::sphere(), 3).validate().is_err());
}

#[test]
fn octahedron_is_not_minimal_and_k3_is() {
    let fam = FamilySpec::tight(SurfaceClass::sphere(), 6);
    let rep = contraction_minimality(&octahedron(), &fam).unwrap();
    assert!(!rep.minimal);
    assert!(rep.edges.iter().all(|v| *v == EdgeVerdict::Contracts));
    let rep = contraction_minimality(&k3_sphere(), &fam).unwrap();
    assert!(rep.minimal);
    assert!(!rep.edges.contains(&EdgeVerdict::Contracts));
    assert_eq!(contraction_minimality(&k7_torus(), &fam).unwrap_err(), CensusError::NotAMember);
}

#[test]
fn k7_is_an_irreducible_torus_triangulation() {
    let fam = FamilySpec::triangulations(SurfaceClass::torus());
    let rep = contraction_minimality(&k7_torus(), &fam).unwrap();
    assert!(rep.minimal);
    assert!(rep.edges.iter().all(|v| *v == EdgeVerdict::NonSimple));
}

#[test]
fn minimal_edges_are_critical_or_on_holes() {
    let cases = [
        (FamilySpec::tight(SurfaceClass::projective_plane(), 6), 7),
        (FamilySpec::tight(SurfaceClass::torus(), 6).with_holes(HoleFilter::Count(1)), 6),
        (FamilySpec::tight(SurfaceClass::torus(), 3).with_holes(HoleFilter::Count(1)), 7),
    ];
    for (fam, maxv) in cases {
        let res = enumerate_minimal(&fam, &CensusOptions { max_vertices: maxv, ..Default::default() }).unwrap();
        assert!(!res.minimal.is_empty());
        for entry in &res.minimal {
            let g = &entry.map;
            let faces = g.trace_faces();
            let mut covered: BTreeSet<usize> = critical_edges(g, fam.alpha).unwrap().into_iter().collect();
            for w in faces.walks.iter().filter(|w| w.len() != 3) {
                covered.extend(w.edges());
            }
            assert_eq!(covered.len(), g.edge_count(), "{}", entry.signature);
        }
    }
}

#[test]
fn census_entries_are_members_and_unique() {
    let fam = FamilySpec::tight(SurfaceClass::projective_plane(), 6);
    let res = enumerate_minimal(&fam, &CensusOptions { max_vertices: 7, ..Default::default() }).unwrap();
    let codes: BTreeSet<&String> = res.minimal.iter().map(|e| &e.code).collect();
    assert_eq!(codes.len(), res.minimal.len());
    for e in &res.minimal {
        assert!(member_of(&e.map, &fam).unwrap());
        assert!(is_contraction_minimal(&e.map, &fam).unwrap());
        assert_eq!(e.graph.to_graph(true).unwrap().canonical_code().to_hex(), e.code);
        let excess: usize = e.holes.iter().map(|k| k - 3).sum();
        assert_eq!(excess, 3);
    }
    let json = serde_json::to_value(&res).unwrap();
    assert_eq!(json["minimal"].as_array().unwrap().len(), res.minimal.len());
}

#[test]
fn budget_marks_the_census_non_exhaustive() {
    let fam = FamilySpec::tight(SurfaceClass::projective_plane(), 6);
    let res = enumerate_minimal(&fam, &CensusOptions { max_vertices: 8, budget_nodes: 1000, ..Default::default() }).unwrap();
    assert!(!res.exhaustive);
}

#[test]
fn expanding_k3_reaches_every_small_sphere_triangulation() {
    let fam = FamilySpec::triangulations(SurfaceClass::sphere());
    let one = expand_from_minimal(&k3_sphere(), &fam, 1, 1000).unwrap();
    assert_eq!(one.len(), 2);
    assert!(one.iter().any(|g| g.is_isomorphic(&tetrahedron())));
    let all = expand_from_minimal(&k3_sphere(), &fam, 4, 1000).unwrap();
    // 1 + 1 + 1 + 2 + 5 triangulations on 3..=7 vertices
    assert_eq!(all.len(), 10);
    let res = enumerate_minimal(&fam, &CensusOptions { max_vertices: 7, ..Default::default() }).unwrap();
    assert_eq!(res.members_by_vertices.values().sum::<usize>(), 10);
    assert_eq!(expand_from_minimal(&k3_sphere(), &fam, 4, 5).unwrap_err(), CensusError::BudgetExceeded(5));
}

#[test]
fn expansion_preserves_freedom() {
    let fam = FamilySpec::tight(SurfaceClass::projective_plane(), 6);
    let res = enumerate_minimal(&fam, &CensusOptions { max_vertices: 5, ..Default::default() }).unwrap();
    for e in &res.minimal {
        for g in expand_from_minimal(&e.map, &fam, 2, 10_000).unwrap() {
            assert_eq!(g.freedom(), 6);
        }
    }
}

#[test]
fn census_json_is_identical_across_thread_counts() {
    let fam = FamilySpec::tight(SurfaceClass::torus(), 6).with_holes(HoleFilter::Count(1));
    let run = |threads| {
        let opts = CensusOptions { max_vertices: 7, threads, ..Default::default() };
        serde_json::to_string(&enumerate_minimal(&fam, &opts).unwrap()).unwrap()
    };
    let one = run(1);
    assert_eq!(run(2), one);
    assert_eq!(run(4), one);
}

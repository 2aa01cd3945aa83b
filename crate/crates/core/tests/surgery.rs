mod common;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfmap::build::{bipyramid, k3_sphere, k7_torus, octahedron, tetrahedron};
use surfmap::surgery::{
    all_splits, contract_edge, contractible_edges, restrict_to_subgraph, split_vertex, SurgeryError,
};
use surfmap::EmbeddedGraph;

#[test]
fn k3_has_no_contractible_edge() {
    assert!(contractible_edges(&k3_sphere()).is_empty());
    assert!(matches!(contract_edge(&k3_sphere(), 0), Err(SurgeryError::NotContractible(0))));
}

#[test]
fn tetrahedron_contracts_to_k3() {
    let g = tetrahedron();
    assert_eq!(contractible_edges(&g).len(), 6);
    let h = contract_edge(&g, 0).unwrap();
    assert!(h.is_isomorphic(&k3_sphere()));
}

#[test]
fn octahedron_contracts_to_bipyramid() {
    let g = octahedron();
    assert_eq!(contractible_edges(&g), (0..12).collect::<Vec<_>>());
    let target = bipyramid().canonical_code();
    for e in 0..12 {
        let h = contract_edge(&g, e).unwrap();
        assert_eq!(h.canonical_code(), target);
        assert_eq!(h.surface(), g.surface());
        assert_eq!(h.trace_faces().count(), g.trace_faces().count() - 2);
    }
}

#[test]
fn nonfacial_triangle_blocks_contraction() {
    let g = bipyramid();
    // equator edges lie on the equator 3-cycle
    for e in 0..g.edge_count() {
        let (x, y) = g.endpoints(e);
        let equator = x != 0 && x != 4 && y != 0 && y != 4;
        assert_eq!(contract_edge(&g, e).is_err(), equator, "edge {e}");
    }
}

#[test]
fn bipyramid_splits_to_octahedron() {
    let g = bipyramid();
    let target = octahedron().canonical_code();
    let hit = all_splits(&g).into_iter().any(|(v, p, q)| split_vertex(&g, v, p, q).unwrap().0.canonical_code() == target);
    assert!(hit);
}

#[test]
fn coincident_cut_darts_make_parallel_edges() {
    let g = tetrahedron();
    let d = g.rotation(0)[0] as usize;
    assert!(matches!(split_vertex(&g, 0, d, d), Err(SurgeryError::InvalidSplit(_))));
    assert!(split_vertex(&g, 0, d, g.rotation(1)[0] as usize).is_err());
}

fn random_split(rng: &mut impl Rng, g: &EmbeddedGraph) -> Option<(EmbeddedGraph, usize)> {
    let v = rng.gen_range(0..g.vertex_count());
    let r = g.rotation(v);
    if r.len() < 2 {
        return None;
    }
    let mut pick: Vec<u32> = r.to_vec();
    pick.shuffle(rng);
    split_vertex(g, v, pick[0] as usize, pick[1] as usize).ok()
}

#[test]
fn split_then_contract_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 500 {
        let n = rng.gen_range(3..9);
        let (extra, signed) = (rng.gen_range(0..2 * n), rng.gen_bool(0.5));
        let g = common::random_map(&mut rng, n, extra, signed);
        let Some((h, e)) = random_split(&mut rng, &g) else { continue };
        assert_eq!(h.freedom(), g.freedom());
        assert_eq!(h.surface(), g.surface());
        assert_eq!(h.trace_faces().count(), g.trace_faces().count() + 2);
        assert!(contractible_edges(&h).contains(&e));
        let back = contract_edge(&h, e).unwrap();
        assert!(back.is_isomorphic(&g));
        done += 1;
    }
}

#[test]
fn contraction_preserves_surface_on_split_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut g = k7_torus();
    for _ in 0..30 {
        if let Some((h, _)) = random_split(&mut rng, &g) {
            g = h;
        }
    }
    let s = g.surface();
    for e in contractible_edges(&g) {
        let h = contract_edge(&g, e).unwrap();
        assert_eq!(h.surface(), s);
        assert_eq!(h.vertex_count(), g.vertex_count() - 1);
        assert_eq!(h.edge_count(), g.edge_count() - 3);
        assert!(h.is_simple());
    }
}

#[test]
fn restriction_groups() {
    let g = k7_torus();
    let all: Vec<usize> = (0..21).collect();
    let k = restrict_to_subgraph(&g, &all, true).unwrap();
    assert_eq!(k.groups.len(), 14);

    let minus: Vec<usize> = (1..21).collect();
    let k = restrict_to_subgraph(&g, &minus, true).unwrap();
    assert_eq!(k.groups.len(), 13);
    let (f1, f2) = k.faces.sides(0);
    assert_eq!(k.face_group[f1], k.face_group[f2]);
    let quad: usize = k.groups[k.face_group[f1]].iter().map(|&f| k.faces.walks[f].len()).sum::<usize>() - 2;
    assert_eq!(quad, 4);
}

fn edge_between(g: &EmbeddedGraph, a: usize, b: usize) -> usize {
    (0..g.edge_count()).find(|&e| {
        let (x, y) = g.endpoints(e);
        (x, y) == (a, b) || (x, y) == (b, a)
    })
    .unwrap()
}

#[test]
fn three_cycles_on_k7() {
    let g = k7_torus();
    let faces = g.trace_faces();
    let mut facial = 0;
    let mut essential = 0;
    for a in 0..7 {
        for b in a + 1..7 {
            for c in b + 1..7 {
                let es = [edge_between(&g, a, b), edge_between(&g, b, c), edge_between(&g, a, c)];
                let k = restrict_to_subgraph(&g, &es, true).unwrap();
                match k.groups.len() {
                    1 => essential += 1,
                    2 => {
                        facial += 1;
                        assert!(k.groups.iter().any(|gr| gr.len() == 1));
                    }
                    n => panic!("{n} groups"),
                }
            }
        }
    }
    assert_eq!(facial, faces.count());
    assert_eq!(facial + essential, 35);
    assert!(matches!(restrict_to_subgraph(&g, &[0], true), Err(SurgeryError::DegreeTooLow(_))));
}

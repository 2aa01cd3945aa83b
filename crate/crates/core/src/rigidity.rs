//! Randomized generic 3-rigidity probe over a prime field.
//!
//! The rigidity matrix has one row per edge uw with p(u) − p(w) in the
//! columns of u and p(w) − p(u) in those of w. Its rank at a random point
//! of F_p^{3v} equals the generic rank unless the point is a root of a
//! nonzero minor, which for a minor of size r happens with probability at
//! most r/p.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::census::CensusResult;
use crate::sparsity::Graph;

/// 2^61 − 1.
pub const PRIME: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

fn pow(mut a: u64, mut k: u64) -> u64 {
    let mut r = 1;
    while k > 0 {
        if k & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        k >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, PRIME - 2)
}

/// Rank of a dense matrix over F_p, destroying it.
pub fn rank_mod_p(rows: &mut [Vec<u64>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let iv = inv(rows[rank][col]);
        for x in rows[rank][col..].iter_mut() {
            *x = mul(*x, iv);
        }
        let (top, rest) = rows.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest.iter_mut() {
            let f = row[col];
            if f == 0 {
                continue;
            }
            for c in col..ncols {
                row[c] = sub(row[c], mul(f, pivot[c]));
            }
        }
        rank += 1;
    }
    rank
}

pub fn rigidity_matrix(g: &Graph, p: &[[u64; 3]]) -> Vec<Vec<u64>> {
    g.edges
        .iter()
        .map(|&(u, w)| {
            let mut row = vec![0u64; 3 * g.n];
            for k in 0..3 {
                row[3 * u + k] = sub(p[u][k], p[w][k]);
                row[3 * w + k] = sub(p[w][k], p[u][k]);
            }
            row
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityProbe {
    pub vertices: usize,
    pub edges: usize,
    pub rank: usize,
    /// min(e, 3v − 6), the largest rank possible.
    pub bound: usize,
    pub trials: usize,
    pub seed: u64,
    pub minimally_rigid: bool,
    /// Upper bound on the chance that the generic rank exceeds `rank`.
    pub failure_probability: f64,
}

/// Configuration for one trial. Each trial has its own stream, so results
/// do not depend on how trials are scheduled.
pub fn configuration(n: usize, seed: u64, trial: usize) -> Vec<[u64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    (0..n).map(|_| [rng.gen_range(0..PRIME), rng.gen_range(0..PRIME), rng.gen_range(0..PRIME)]).collect()
}

pub fn generic_rank_probe(g: &Graph, trials: usize, seed: u64) -> RigidityProbe {
    assert!(g.n >= 3, "rigidity probe needs at least 3 vertices");
    let bound = g.edges.len().min(3 * g.n - 6);
    let mut rank = 0;
    for t in 0..trials.max(1) {
        let p = configuration(g.n, seed, t);
        rank = rank.max(rank_mod_p(&mut rigidity_matrix(g, &p)));
        if rank == bound {
            break;
        }
    }
    let full = g.edges.len() == 3 * g.n - 6 && rank == bound;
    let failure_probability = if rank == bound { 0.0 } else { (bound as f64 / PRIME as f64).powi(trials.max(1) as i32) };
    RigidityProbe {
        vertices: g.n,
        edges: g.edges.len(),
        rank,
        bound,
        trials: trials.max(1),
        seed,
        minimally_rigid: full,
        failure_probability,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusProbe {
    pub code: String,
    pub signature: String,
    pub probe: RigidityProbe,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusProbeReport {
    pub all_minimally_rigid: bool,
    /// Codes whose probe fell short of 3v − 6. This is evidence only.
    pub short: Vec<String>,
    pub graphs: Vec<CensusProbe>,
}

pub fn probe_census(res: &CensusResult, trials: usize, seed: u64) -> CensusProbeReport {
    let graphs: Vec<CensusProbe> = res
        .minimal
        .iter()
        .map(|e| CensusProbe {
            code: e.code.clone(),
            signature: e.signature.clone(),
            probe: generic_rank_probe(&Graph::from_embedded(&e.map), trials, seed),
        })
        .collect();
    let short: Vec<String> = graphs.iter().filter(|p| !p.probe.minimally_rigid).map(|p| p.code.clone()).collect();
    CensusProbeReport { all_minimally_rigid: short.is_empty(), short, graphs }
}

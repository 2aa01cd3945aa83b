//! All simple graphs up to isomorphism, by vertex augmentation and
//! canonical-form deduplication.

use std::collections::HashSet;

use canonical_form::Canonize;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Adj(pub Vec<u16>);

impl Canonize for Adj {
    fn size(&self) -> usize {
        self.0.len()
    }

    fn apply_morphism(&self, perm: &[usize]) -> Self {
        let mut out = vec![0u16; self.0.len()];
        for (i, &row) in self.0.iter().enumerate() {
            let mut m = 0u16;
            let mut r = row;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                r &= r - 1;
                m |= 1 << perm[j];
            }
            out[perm[i]] = m;
        }
        Adj(out)
    }

    fn invariant_neighborhood(&self, u: usize) -> impl Iterator<Item = (usize, u64)> {
        let row = self.0[u];
        (0..self.0.len()).filter(move |&j| row >> j & 1 == 1).map(|j| (j, 0))
    }
}

impl Adj {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for (i, &row) in self.0.iter().enumerate() {
            for j in i + 1..self.0.len() {
                if row >> j & 1 == 1 {
                    e.push((i, j));
                }
            }
        }
        e
    }
}

/// Graphs on exactly `n` vertices, one per isomorphism class, for each `n`
/// in `1..=max_n`.
pub fn all_graphs(max_n: usize) -> Vec<Vec<Adj>> {
    let mut levels: Vec<Vec<Adj>> = vec![vec![Adj(vec![0])]];
    for n in 2..=max_n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for p in &levels[n - 2] {
            let min_deg = p.0.iter().map(|r| r.count_ones()).min().unwrap_or(0);
            for s in 0u16..(1 << (n - 1)) {
                let k = s.count_ones();
                // the new vertex must have minimum degree in the child
                if k > min_deg + 1 {
                    continue;
                }
                let mut rows = p.0.clone();
                for (j, row) in rows.iter_mut().enumerate() {
                    if s >> j & 1 == 1 {
                        *row |= 1 << (n - 1);
                    }
                }
                rows.push(s);
                if rows.iter().map(|r| r.count_ones()).min().unwrap() < k {
                    continue;
                }
                let c = Adj(rows).canonical();
                if seen.insert(c.clone()) {
                    next.push(c);
                }
            }
        }
        next.sort();
        levels.push(next);
    }
    levels
}

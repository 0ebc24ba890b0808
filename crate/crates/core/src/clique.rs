//! Counting and listing cliques contained in a vertex subset `B`, plus the
//! extremal parameters `ω(G[B])` and `α_B(G)`.

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::bitset::Bitset;
use crate::graph::{Graph, VertexSet, WeightMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliqueError {
    #[error("more than {cap} cliques in B")]
    CapExceeded { cap: usize },
}

/// `counts[i]` is the number of `i`-cliques of `G` inside `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueCountVector {
    counts: Vec<BigUint>,
}

impl CliqueCountVector {
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `ω(G[B])`.
    pub fn clique_number(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn into_signed(self) -> Vec<BigInt> {
        self.counts.into_iter().map(BigInt::from).collect()
    }
}

/// `G[B]` with local ids `0..|B|` (local `k` is `b.members()[k]`).
pub(crate) struct Restricted {
    pub rows: Vec<Bitset>,
}

impl Restricted {
    pub fn new(g: &Graph, b: &VertexSet) -> Self {
        let m = b.members();
        let rows = m
            .iter()
            .map(|&u| Bitset::from_iter_with_capacity(m.len(), (0..m.len()).filter(|&k| g.has_edge(u, m[k]))))
            .collect();
        Restricted { rows }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Repeatedly removes a minimum-degree vertex (lowest id on ties).
    fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut deg: Vec<usize> = self.rows.iter().map(Bitset::len).collect();
        let mut alive = Bitset::full(n);
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = alive.iter().min_by_key(|&v| (deg[v], v)).unwrap();
            alive.remove(v);
            order.push(v);
            for u in self.rows[v].iter() {
                if alive.contains(u) {
                    deg[u] -= 1;
                }
            }
        }
        order
    }

    /// Each vertex's neighbours that come later in the degeneracy order.
    fn forward_rows(&self) -> Vec<Bitset> {
        let order = self.degeneracy_order();
        let mut later = Bitset::full(self.len());
        let mut fwd = vec![Bitset::new(self.len()); self.len()];
        for v in order {
            later.remove(v);
            fwd[v] = self.rows[v].intersection(&later);
        }
        fwd
    }
}

fn count_extensions(cand: &Bitset, depth: usize, fwd: &[Bitset], counts: &mut Vec<u128>) {
    if counts.len() <= depth + 1 {
        counts.push(0);
    }
    counts[depth + 1] += cand.len() as u128;
    for u in cand.iter() {
        let next = cand.intersection(&fwd[u]);
        if !next.is_empty() {
            count_extensions(&next, depth + 1, fwd, counts);
        }
    }
}

/// Exact `c_i(B)` for every `i`, by extending cliques along a degeneracy
/// ordering of `G[B]`.
pub fn clique_counts(g: &Graph, b: &VertexSet) -> CliqueCountVector {
    let r = Restricted::new(g, b);
    let mut counts = vec![1u128];
    if r.len() > 0 {
        let fwd = r.forward_rows();
        count_extensions(&Bitset::full(r.len()), 0, &fwd, &mut counts);
    }
    CliqueCountVector {
        counts: counts.into_iter().map(BigUint::from).collect(),
    }
}

/// `Σ_{K ⊆ B clique, |K| = i} Π_{v ∈ K} w(v)` for every `i`.
/// Weights must be defined on every member of `b`.
pub(crate) fn weighted_clique_sums(g: &Graph, b: &VertexSet, w: &WeightMap) -> Vec<BigUint> {
    let r = Restricted::new(g, b);
    let weights: Vec<BigUint> = b
        .members()
        .iter()
        .map(|&v| BigUint::from(w.get(v).expect("weight validated by caller")))
        .collect();
    let mut sums = vec![BigUint::from(1u8)];
    if r.len() > 0 {
        let fwd = r.forward_rows();
        weighted_extensions(
            &Bitset::full(r.len()),
            &BigUint::from(1u8),
            0,
            &fwd,
            &weights,
            &mut sums,
        );
    }
    sums
}

fn weighted_extensions(
    cand: &Bitset,
    product: &BigUint,
    depth: usize,
    fwd: &[Bitset],
    weights: &[BigUint],
    sums: &mut Vec<BigUint>,
) {
    if sums.len() <= depth + 1 {
        sums.push(BigUint::default());
    }
    for u in cand.iter() {
        let p = product * &weights[u];
        sums[depth + 1] += &p;
        let next = cand.intersection(&fwd[u]);
        if !next.is_empty() {
            weighted_extensions(&next, &p, depth + 1, fwd, weights, sums);
        }
    }
}

/// Every clique inside `b`, the empty clique included, ordered by size and
/// then lexicographically. Fails once more than `cap` cliques are found.
pub fn enumerate_cliques(g: &Graph, b: &VertexSet, cap: usize) -> Result<Vec<VertexSet>, CliqueError> {
    fn dfs(
        g: &Graph,
        b: &[usize],
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<VertexSet>,
        cap: usize,
    ) -> Result<(), CliqueError> {
        for i in start..b.len() {
            let v = b[i];
            if current.iter().all(|&u| g.has_edge(u, v)) {
                current.push(v);
                if out.len() == cap {
                    return Err(CliqueError::CapExceeded { cap });
                }
                out.push(VertexSet::new(g.n(), current.iter().copied()).unwrap());
                dfs(g, b, i + 1, current, out, cap)?;
                current.pop();
            }
        }
        Ok(())
    }
    if cap == 0 {
        return Err(CliqueError::CapExceeded { cap });
    }
    let mut out = vec![VertexSet::empty(g.n())];
    dfs(g, b.members(), 0, &mut Vec::new(), &mut out, cap)?;
    out.sort_by(|x, y| (x.len(), x.members()).cmp(&(y.len(), y.members())));
    Ok(out)
}

/// `ω(G[B])`, zero for empty `b`.
pub fn omega_b(g: &Graph, b: &VertexSet) -> usize {
    clique_counts(g, b).clique_number()
}

/// `α_B(G)`: a maximum clique of the complement of `G[B]`.
pub fn alpha_b(g: &Graph, b: &VertexSet) -> usize {
    let r = Restricted::new(g, b);
    let n = r.len();
    let complement: Vec<Bitset> = (0..n)
        .map(|v| {
            let mut row = Bitset::full(n);
            row.difference_with(&r.rows[v]);
            row.remove(v);
            row
        })
        .collect();
    max_clique_size(&complement)
}

/// Branch and bound with a greedy colouring bound.
fn max_clique_size(rows: &[Bitset]) -> usize {
    fn colour_order(rows: &[Bitset], cand: &Bitset) -> Vec<(usize, usize)> {
        let mut uncoloured = cand.clone();
        let mut out = Vec::with_capacity(cand.len());
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut avail = uncoloured.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail.difference_with(&rows[v]);
                uncoloured.remove(v);
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(rows: &[Bitset], mut cand: Bitset, size: usize, best: &mut usize) {
        let order = colour_order(rows, &cand);
        for &(v, colour) in order.iter().rev() {
            if size + colour <= *best {
                return;
            }
            let next = cand.intersection(&rows[v]);
            if next.is_empty() {
                *best = (*best).max(size + 1);
            } else {
                expand(rows, next, size + 1, best);
            }
            cand.remove(v);
        }
    }

    let mut best = 0;
    if !rows.is_empty() {
        expand(rows, Bitset::full(rows.len()), 0, &mut best);
    }
    best
}

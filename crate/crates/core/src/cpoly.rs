//! The `B`-restricted clique polynomial `C_B(G;x)`, built three independent
//! ways (direct counting, vertex-deletion recurrence, edge-deletion
//! recurrence), its weighted form, and the union/join identities.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::clique::{clique_counts, weighted_clique_sums};
use crate::graph::{Graph, GraphError, VertexSet, WeightMap};
use crate::poly::IntPolynomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CpolyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("expected a polynomial with constant term 1, got {0}")]
    ConstantTerm(IntPolynomial),
}

/// Which construction produces `C_B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Vertex,
    Edge,
}

pub fn cpoly(g: &Graph, b: &VertexSet, method: Method) -> IntPolynomial {
    match method {
        Method::Direct => cpoly_direct(g, b),
        Method::Vertex => cpoly_vertex_recurrence(g, b),
        Method::Edge => cpoly_edge_recurrence(g, b),
    }
}

/// `Σ_i c_i(B) x^i` from exact clique counts.
pub fn cpoly_direct(g: &Graph, b: &VertexSet) -> IntPolynomial {
    IntPolynomial::new(clique_counts(g, b).into_signed())
}

/// The two pieces of one vertex-deletion step: `C_B(G) = first + x·second`.
/// For `v ∉ B` the second piece is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexStep {
    /// `C_{B∖{v}}(G−v)`.
    pub without_v: IntPolynomial,
    /// `C_{B∩N(v)}(G[N(v)])`.
    pub through_v: IntPolynomial,
}

impl VertexStep {
    pub fn combine(&self) -> IntPolynomial {
        &self.without_v + &self.through_v.multiply_by_x_power(1)
    }
}

/// One edge-deletion step: `C_B(G) = first + x²·second`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeStep {
    /// `C_B(G−uv)`.
    pub without_uv: IntPolynomial,
    /// `C_{B∩N(u)∩N(v)}(G[N(u)∩N(v)])`, zero when an endpoint lies outside `B`.
    pub through_uv: IntPolynomial,
}

impl EdgeStep {
    pub fn combine(&self) -> IntPolynomial {
        &self.without_uv + &self.through_uv.multiply_by_x_power(2)
    }
}

type Memo = HashMap<Vec<u64>, IntPolynomial>;

/// Restricts `b` to the survivors of a vertex deletion.
fn remap_set(b: &VertexSet, remap: &[Option<usize>], new_n: usize) -> VertexSet {
    VertexSet::new(new_n, b.members().iter().filter_map(|&v| remap[v])).unwrap()
}

/// `b ∩ s` re-expressed in the ids of `G[s]`.
fn restrict_set(b: &VertexSet, old_ids: &[usize]) -> VertexSet {
    VertexSet::new(
        old_ids.len(),
        old_ids
            .iter()
            .enumerate()
            .filter(|(_, &v)| b.contains(v))
            .map(|(i, _)| i),
    )
    .unwrap()
}

/// Expands `C_B(G)` at vertex `v` with the given sub-solver.
fn vertex_step_with(
    g: &Graph,
    b: &VertexSet,
    v: usize,
    solve: &mut impl FnMut(&Graph, &VertexSet) -> IntPolynomial,
) -> Result<VertexStep, GraphError> {
    let (minus_v, remap) = g.delete_vertex(v)?;
    let rest = remap_set(b, &remap, minus_v.n());
    let without_v = solve(&minus_v, &rest);
    let through_v = if b.contains(v) {
        let nbrs = VertexSet::from_bitset(g.n(), g.neighbors(v));
        let (link, old) = g.induced_subgraph(&nbrs)?;
        solve(&link, &restrict_set(b, &old))
    } else {
        IntPolynomial::zero()
    };
    Ok(VertexStep { without_v, through_v })
}

/// A single vertex-deletion step at `v`, with both pieces computed directly.
pub fn vertex_step(g: &Graph, b: &VertexSet, v: usize) -> Result<VertexStep, GraphError> {
    vertex_step_with(g, b, v, &mut |h, s| cpoly_direct(h, s))
}

/// A single edge-deletion step at `uv`, with both pieces computed directly.
pub fn edge_step(g: &Graph, b: &VertexSet, u: usize, v: usize) -> Result<EdgeStep, GraphError> {
    edge_step_with(g, b, u, v, &mut |h, s| cpoly_direct(h, s))
}

fn edge_step_with(
    g: &Graph,
    b: &VertexSet,
    u: usize,
    v: usize,
    solve: &mut impl FnMut(&Graph, &VertexSet) -> IntPolynomial,
) -> Result<EdgeStep, GraphError> {
    let minus = g.delete_edge(u, v)?;
    let without_uv = solve(&minus, b);
    // A clique inside B cannot use an endpoint outside B.
    let through_uv = if b.contains(u) && b.contains(v) {
        let common = VertexSet::from_bitset(g.n(), &g.neighbors(u).intersection(g.neighbors(v)));
        let (link, old) = g.induced_subgraph(&common)?;
        solve(&link, &restrict_set(b, &old))
    } else {
        IntPolynomial::zero()
    };
    Ok(EdgeStep { without_uv, through_uv })
}

/// Memo key: the labelled adjacency matrix of `G[B]`, on which `C_B` depends.
fn memo_key(g: &Graph, b: &VertexSet) -> Vec<u64> {
    g.induced_subgraph(b).expect("b ⊆ V(g)").0.adjacency_key()
}

/// `C_B` by the vertex-deletion recurrence. Vertices outside `B` are deleted
/// first (lowest id first), which leaves `C_B` unchanged; then the pivot is a
/// maximum-degree vertex of `G[B]`, lowest id on ties.
pub fn cpoly_vertex_recurrence(g: &Graph, b: &VertexSet) -> IntPolynomial {
    fn rec(g: &Graph, b: &VertexSet, memo: &mut Memo) -> IntPolynomial {
        if b.is_empty() {
            return IntPolynomial::one();
        }
        if let Some(v) = (0..g.n()).find(|&v| !b.contains(v)) {
            let (minus_v, remap) = g.delete_vertex(v).unwrap();
            return rec(&minus_v, &remap_set(b, &remap, minus_v.n()), memo);
        }
        let key = g.adjacency_key();
        if let Some(p) = memo.get(&key) {
            return p.clone();
        }
        let pivot = (0..g.n()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap();
        let step = vertex_step_with(g, b, pivot, &mut |h, s| rec(h, s, memo)).unwrap();
        let p = step.combine();
        memo.insert(key, p.clone());
        p
    }
    rec(g, b, &mut Memo::new())
}

/// `C_B` by the edge-deletion recurrence. Edges inside `B` are removed one at
/// a time (lexicographically first); once `G[B]` is edgeless the polynomial
/// is `1 + |B|x`.
pub fn cpoly_edge_recurrence(g: &Graph, b: &VertexSet) -> IntPolynomial {
    fn rec(g: &Graph, b: &VertexSet, memo: &mut Memo) -> IntPolynomial {
        let inside = g.edges().find(|&(u, v)| b.contains(u) && b.contains(v));
        let Some((u, v)) = inside else {
            return IntPolynomial::from_i64s(&[1, b.len() as i64]);
        };
        let key = memo_key(g, b);
        if let Some(p) = memo.get(&key) {
            return p.clone();
        }
        let step = edge_step_with(g, b, u, v, &mut |h, s| rec(h, s, memo)).unwrap();
        let p = step.combine();
        memo.insert(key, p.clone());
        p
    }
    rec(g, b, &mut Memo::new())
}

/// The weighted clique polynomial: the coefficient of `x^i` sums
/// `Π_{v∈K} w(v)` over the `i`-cliques `K ⊆ B`.
pub fn cpoly_weighted(g: &Graph, b: &VertexSet, w: &WeightMap) -> Result<IntPolynomial, CpolyError> {
    w.validate_for(b)?;
    Ok(IntPolynomial::new(
        weighted_clique_sums(g, b, w).into_iter().map(BigInt::from).collect(),
    ))
}

fn check_clique_shape(p: &IntPolynomial) -> Result<(), CpolyError> {
    if p.constant_term().is_one() {
        Ok(())
    } else {
        Err(CpolyError::ConstantTerm(p.clone()))
    }
}

/// `C(G ⊔ H) = C(G) + C(H) − 1`.
pub fn union_poly(p: &IntPolynomial, q: &IntPolynomial) -> Result<IntPolynomial, CpolyError> {
    check_clique_shape(p)?;
    check_clique_shape(q)?;
    Ok((p + q).add_constant(&BigInt::from(-1)))
}

/// `C(G ∨ H) = C(G)·C(H)`.
pub fn join_poly(p: &IntPolynomial, q: &IntPolynomial) -> Result<IntPolynomial, CpolyError> {
    check_clique_shape(p)?;
    check_clique_shape(q)?;
    Ok(p * q)
}

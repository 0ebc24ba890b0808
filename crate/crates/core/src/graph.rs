//! Simple undirected graphs over dense vertex ids, vertex subsets, weights,
//! text formats, standard families and the structural mutations used by the
//! recurrences and the blow-up construction.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bitset::Bitset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: expected two vertex tokens, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("line {line}: self-loop on vertex '{token}'")]
    SelfLoop { line: usize, token: String },
    #[error("line {line}: invalid weight '{token}' (expected a positive integer)")]
    BadWeight { line: usize, token: String },
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {0}-{1} is not present")]
    MissingEdge(usize, usize),
    #[error("vertex set is not a clique")]
    NotAClique,
    #[error("vertex {0} has no weight")]
    MissingWeight(usize),
    #[error("vertex {0} carries a weight but is not in B")]
    StrayWeight(usize),
    #[error("weight of vertex {0} must be at least 1")]
    ZeroWeight(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("random regular sampling gave up after {0} attempts")]
    AttemptsExhausted(usize),
}

/// A finite simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    rows: Vec<Bitset>,
    labels: Option<Vec<String>>,
}

/// A subset of the vertices of some host graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct VertexSet {
    members: Vec<usize>,
    host_n: usize,
}

/// Positive integer weights on the members of a designated vertex set.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeightMap {
    weights: BTreeMap<usize, u64>,
}

/// Result of [`Graph::blow_up`].
#[derive(Clone, Debug)]
pub struct BlowUp {
    pub graph: Graph,
    /// The union of all clusters.
    pub b: VertexSet,
    /// `clusters[v]` lists the new ids replacing original vertex `v`
    /// (a single id for vertices outside B).
    pub clusters: Vec<Vec<usize>>,
}

/// Which standard family [`generate`] builds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Complete {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    /// `K_{1,leaves}`.
    Star {
        leaves: usize,
    },
    Petersen,
    Gnp {
        n: usize,
        p: f64,
        seed: u64,
    },
    RandomRegular {
        n: usize,
        d: usize,
        seed: u64,
        max_attempts: usize,
    },
}

pub const DEFAULT_REGULAR_ATTEMPTS: usize = 10_000;

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(host_n: usize, members: I) -> Result<Self, GraphError> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&v) = members.iter().find(|&&v| v >= host_n) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: host_n });
        }
        members.sort_unstable();
        members.dedup();
        Ok(VertexSet { members, host_n })
    }

    pub fn empty(host_n: usize) -> Self {
        VertexSet {
            members: Vec::new(),
            host_n,
        }
    }

    pub fn full(host_n: usize) -> Self {
        VertexSet {
            members: (0..host_n).collect(),
            host_n,
        }
    }

    pub fn from_bitset(host_n: usize, bits: &Bitset) -> Self {
        VertexSet {
            members: bits.iter().collect(),
            host_n,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn host_n(&self) -> usize {
        self.host_n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn to_bitset(&self) -> Bitset {
        Bitset::from_iter_with_capacity(self.host_n, self.members.iter().copied())
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }

    /// All subsets of `0..n` in bitmask order. Only for tiny `n`.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
        assert!(n < usize::BITS as usize);
        (0usize..1 << n).map(move |mask| VertexSet {
            members: (0..n).filter(|&v| mask >> v & 1 == 1).collect(),
            host_n: n,
        })
    }

    /// Renders members using the host graph's tokens, one per line.
    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = String::new();
        for &v in &self.members {
            let _ = writeln!(out, "{}", g.token(v));
        }
        out
    }
}

impl WeightMap {
    pub fn new<I: IntoIterator<Item = (usize, u64)>>(entries: I) -> Self {
        WeightMap {
            weights: entries.into_iter().collect(),
        }
    }

    /// Weight 1 on every member of `b`.
    pub fn ones(b: &VertexSet) -> Self {
        Self::new(b.members().iter().map(|&v| (v, 1)))
    }

    pub fn get(&self, v: usize) -> Option<u64> {
        self.weights.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.weights.iter().map(|(&v, &w)| (v, w))
    }

    /// Checks that the domain is exactly `b` and every weight is positive.
    pub fn validate_for(&self, b: &VertexSet) -> Result<(), GraphError> {
        for &v in b.members() {
            match self.weights.get(&v) {
                None => return Err(GraphError::MissingWeight(v)),
                Some(0) => return Err(GraphError::ZeroWeight(v)),
                Some(_) => {}
            }
        }
        if let Some(&v) = self.weights.keys().find(|&&v| !b.contains(v)) {
            return Err(GraphError::StrayWeight(v));
        }
        Ok(())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            rows: vec![Bitset::new(n); n],
            labels: None,
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop {
                    line: 0,
                    token: u.to_string(),
                });
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// The graph on `n` vertices whose edge set is given by bits of `mask`
    /// over the pairs `(u, v)`, `u < v`, in lexicographic order (`n ≤ 11`).
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        assert!(n * n.saturating_sub(1) / 2 <= 64, "edge mask covers at most 64 pairs");
        let mut g = Graph::empty(n);
        for (i, (u, v)) in pairs(n).enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
        self
    }

    /// The external token for `v`: its label, or its decimal id.
    pub fn token(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Bitset::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.rows[u].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        let m = s.members();
        m.iter()
            .enumerate()
            .all(|(i, &u)| m[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        let m = s.members();
        m.iter()
            .enumerate()
            .all(|(i, &u)| m[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for (u, v) in pairs(self.n) {
            if !self.has_edge(u, v) {
                g.add_edge(u, v);
            }
        }
        g.labels = self.labels.clone();
        g
    }

    /// `G - v`. The remap sends old ids to new ids (`None` for `v`).
    pub fn delete_vertex(&self, v: usize) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
        self.check_vertex(v)?;
        let keep = VertexSet {
            members: (0..self.n).filter(|&u| u != v).collect(),
            host_n: self.n,
        };
        let (g, _) = self.induced_subgraph(&keep)?;
        let remap = (0..self.n)
            .map(|u| match u.cmp(&v) {
                std::cmp::Ordering::Less => Some(u),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(u - 1),
            })
            .collect();
        Ok((g, remap))
    }

    /// `G - uv`.
    pub fn delete_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        let mut g = self.clone();
        g.rows[u].remove(v);
        g.rows[v].remove(u);
        Ok(g)
    }

    /// `G[s]` with dense reindexing; the second value lists the original id
    /// of each new vertex.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        if let Some(&v) = s.members().iter().find(|&&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        let old = s.members().to_vec();
        let mut g = Graph::empty(old.len());
        for (i, &a) in old.iter().enumerate() {
            for (j, &b) in old.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g.labels = self
            .labels
            .as_ref()
            .map(|l| old.iter().map(|&v| l[v].clone()).collect());
        Ok((g, old))
    }

    /// `G ⊔ H`; the vertices of `h` are offset by `self.n()`.
    pub fn disjoint_union(&self, h: &Graph) -> Graph {
        let mut g = Graph::empty(self.n + h.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in h.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }

    /// `G ∨ H`: the disjoint union plus every edge between the two sides.
    pub fn join(&self, h: &Graph) -> Graph {
        let mut g = self.disjoint_union(h);
        for u in 0..self.n {
            for v in 0..h.n {
                g.add_edge(u, self.n + v);
            }
        }
        g
    }

    /// Replaces each `v ∈ b` by an independent cluster of `w(v)` copies.
    /// Copies are adjacent exactly when their originals are, so an edge inside
    /// `b` becomes a complete bipartite graph between clusters and edges
    /// leaving `b` are inherited by every copy.
    pub fn blow_up(&self, b: &VertexSet, w: &WeightMap) -> Result<BlowUp, GraphError> {
        if let Some(&v) = b.members().iter().find(|&&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        w.validate_for(b)?;
        let mut clusters = Vec::with_capacity(self.n);
        let mut origin = Vec::new();
        for v in 0..self.n {
            let size = w.get(v).unwrap_or(1) as usize;
            let start = origin.len();
            origin.extend(std::iter::repeat_n(v, size));
            clusters.push((start..start + size).collect::<Vec<_>>());
        }
        let total = origin.len();
        let mut g = Graph::empty(total);
        for (u, v) in self.edges() {
            for &a in &clusters[u] {
                for &c in &clusters[v] {
                    g.add_edge(a, c);
                }
            }
        }
        let new_b = VertexSet::new(total, b.members().iter().flat_map(|&v| clusters[v].iter().copied()))?;
        Ok(BlowUp {
            graph: g,
            b: new_b,
            clusters,
        })
    }

    /// `N_B(v) = N(v) ∩ B`.
    pub fn n_b_of_vertex(&self, b: &VertexSet, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(VertexSet {
            members: b.members().iter().copied().filter(|&u| self.has_edge(v, u)).collect(),
            host_n: self.n,
        })
    }

    /// `N_B(K)`, the common `B`-neighbourhood of a clique `K`; `B` when `K = ∅`.
    pub fn n_b_of_clique(&self, b: &VertexSet, k: &VertexSet) -> Result<VertexSet, GraphError> {
        if let Some(&v) = k.members().iter().find(|&&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        if !self.is_clique(k) {
            return Err(GraphError::NotAClique);
        }
        Ok(VertexSet {
            members: b
                .members()
                .iter()
                .copied()
                .filter(|&u| k.members().iter().all(|&x| self.has_edge(x, u)))
                .collect(),
            host_n: self.n,
        })
    }

    /// Edge-list text that [`parse_edge_list`] reads back into an identical
    /// graph. Vertex declarations (single-token lines) are emitted first when
    /// the edges alone would not reproduce the vertex order.
    pub fn to_edge_list(&self) -> String {
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        for (u, v) in self.edges() {
            for x in [u, v] {
                if !seen[x] {
                    seen[x] = true;
                    order.push(x);
                }
            }
        }
        let mut out = String::new();
        let ordered = order.len() == self.n && order.iter().enumerate().all(|(i, &v)| i == v);
        if !ordered {
            for v in 0..self.n {
                let _ = writeln!(out, "{}", self.token(v));
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", self.token(u), self.token(v));
        }
        out
    }

    /// Canonical labelled key: the adjacency rows as raw words.
    pub(crate) fn adjacency_key(&self) -> Vec<u64> {
        let mut key = Vec::with_capacity(1 + self.n * self.rows.first().map_or(0, |r| r.words().len()));
        key.push(self.n as u64);
        for r in &self.rows {
            key.extend_from_slice(r.words());
        }
        key
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// Lines with comments, blank lines and a leading byte-order mark removed,
/// paired with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    text.split('\n').enumerate().filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line).trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

/// Parses `token token` lines into a graph. Ids are assigned in order of
/// first appearance and tokens are kept as labels. A line holding a single
/// token declares a vertex without edges.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |tok: &str| -> usize {
        *ids.entry(tok.to_string()).or_insert_with(|| {
            labels.push(tok.to_string());
            labels.len() - 1
        })
    };
    for (line, toks) in content_lines(text) {
        match toks.as_slice() {
            [a] => {
                intern(a);
            }
            [a, b] => {
                if a == b {
                    return Err(GraphError::SelfLoop {
                        line,
                        token: a.to_string(),
                    });
                }
                let u = intern(a);
                let v = intern(b);
                edges.push((u, v));
            }
            _ => {
                return Err(GraphError::MalformedLine {
                    line,
                    found: toks.len(),
                })
            }
        }
    }
    let mut g = Graph::empty(labels.len());
    for (u, v) in edges {
        g.add_edge(u, v);
    }
    Ok(g.with_labels(labels))
}

fn resolve_token(g: &Graph, tok: &str) -> Result<usize, GraphError> {
    let found = match g.labels() {
        Some(labels) => labels.iter().position(|l| l == tok),
        None => tok.parse::<usize>().ok().filter(|&v| v < g.n()),
    };
    found.ok_or_else(|| GraphError::UnknownVertex(tok.to_string()))
}

/// Parses whitespace-separated vertex tokens of `g`.
pub fn parse_vertex_set(text: &str, g: &Graph) -> Result<VertexSet, GraphError> {
    let mut members = Vec::new();
    for (_, toks) in content_lines(text) {
        for tok in toks {
            members.push(resolve_token(g, tok)?);
        }
    }
    VertexSet::new(g.n(), members)
}

/// Parses `token weight` lines.
pub fn parse_weights(text: &str, g: &Graph) -> Result<WeightMap, GraphError> {
    let mut weights = BTreeMap::new();
    for (line, toks) in content_lines(text) {
        let [tok, wt] = toks.as_slice() else {
            return Err(GraphError::MalformedLine {
                line,
                found: toks.len(),
            });
        };
        let v = resolve_token(g, tok)?;
        let w: u64 = wt
            .parse()
            .ok()
            .filter(|&w| w >= 1)
            .ok_or_else(|| GraphError::BadWeight {
                line,
                token: wt.to_string(),
            })?;
        weights.insert(v, w);
    }
    Ok(WeightMap { weights })
}

/// Builds a member of a standard family. Randomised families are
/// deterministic in their seed.
pub fn generate(family: Family) -> Result<Graph, GraphError> {
    let invalid = |msg: &str| Err(GraphError::InvalidParameters(msg.to_string()));
    match family {
        Family::Complete { n } => Graph::from_edges(n, pairs(n)),
        Family::Cycle { n } => {
            if n < 3 {
                return invalid("a cycle needs at least 3 vertices");
            }
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        Family::Star { leaves } => Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))),
        Family::Petersen => {
            let outer = (0..5).map(|i| (i, (i + 1) % 5));
            let spokes = (0..5).map(|i| (i, i + 5));
            let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
            Graph::from_edges(10, outer.chain(spokes).chain(inner))
        }
        Family::Gnp { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return invalid("edge probability must lie in [0, 1]");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::empty(n);
            for (u, v) in pairs(n) {
                if rng.gen_bool(p) {
                    g.add_edge(u, v);
                }
            }
            Ok(g)
        }
        Family::RandomRegular {
            n,
            d,
            seed,
            max_attempts,
        } => random_regular(n, d, seed, max_attempts),
    }
}

/// Pairing-model sampler: match `n·d` half-edges uniformly and reject any
/// outcome with a loop or a repeated edge.
fn random_regular(n: usize, d: usize, seed: u64, max_attempts: usize) -> Result<Graph, GraphError> {
    if !(n * d).is_multiple_of(2) {
        return Err(GraphError::InvalidParameters("n·d must be even".into()));
    }
    if d >= n && !(n == 0 && d == 0) {
        return Err(GraphError::InvalidParameters("degree must be below n".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..max_attempts {
        points.shuffle(&mut rng);
        let mut g = Graph::empty(n);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || g.has_edge(u, v) {
                continue 'attempt;
            }
            g.add_edge(u, v);
        }
        return Ok(g);
    }
    Err(GraphError::AttemptsExhausted(max_attempts))
}

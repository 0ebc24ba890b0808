//! Adjacency spectra of regular graphs and the spectral certificates checked
//! against them: the expander mixing lemma, Tanner's neighbourhood bound and
//! the spectral bound on cliques inside `B`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::clique::clique_counts;
use crate::graph::{Graph, VertexSet};

pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("the graph has no vertices")]
    EmptyGraph,
    #[error("graph is not regular; (n,d,λ) bounds apply only to regular graphs")]
    NotRegular,
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("the vertex subset must be nonempty")]
    EmptySubset,
}

/// All adjacency eigenvalues, descending, by cyclic Jacobi rotations.
/// Iterates until the off-diagonal Frobenius norm drops below `1e-12·n`.
pub fn eigenvalues(g: &Graph) -> Result<Vec<f64>, SpectralError> {
    let n = g.n();
    if n == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    let mut a = vec![vec![0.0f64; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    let threshold = 1e-12 * n as f64;
    let off_norm = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for (i, row) in a.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    s += x * x;
                }
            }
        }
        s.sqrt()
    };
    let mut converged = off_norm(&a) < threshold;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] != 0.0 {
                    rotate(&mut a, p, q);
                }
            }
        }
        converged = off_norm(&a) < threshold;
    }
    if !converged {
        return Err(SpectralError::NoConvergence(MAX_SWEEPS));
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// Applies the rotation that annihilates `a[p][q]`.
fn rotate(a: &mut [Vec<f64>], p: usize, q: usize) {
    let apq = a[p][q];
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for row in a.iter_mut() {
        let (akp, akq) = (row[p], row[q]);
        row[p] = c * akp - s * akq;
        row[q] = s * akp + c * akq;
    }
    let (lo, hi) = a.split_at_mut(p.max(q));
    let (row_min, row_max) = (&mut lo[p.min(q)], &mut hi[0]);
    let (row_p, row_q) = if p < q { (row_min, row_max) } else { (row_max, row_min) };
    for (apk, aqk) in row_p.iter_mut().zip(row_q.iter_mut()) {
        let (x, y) = (*apk, *aqk);
        *apk = c * x - s * y;
        *aqk = s * x + c * y;
    }
    a[p][q] = 0.0;
    a[q][p] = 0.0;
}

/// The `(n, d, λ)` parameters of a regular graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralProfile {
    pub n: usize,
    pub d: usize,
    /// `max_{i≥2} |λ_i|`.
    pub lambda: f64,
    pub eigenvalues: Vec<f64>,
}

pub fn spectral_profile(g: &Graph) -> Result<SpectralProfile, SpectralError> {
    if g.n() == 0 {
        return Err(SpectralError::EmptyGraph);
    }
    let d = g.regular_degree().ok_or(SpectralError::NotRegular)?;
    let eigenvalues = eigenvalues(g)?;
    let lambda = eigenvalues[1..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(SpectralProfile {
        n: g.n(),
        d,
        lambda,
        eigenvalues,
    })
}

/// Left-hand side of a bound row.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundValue {
    Exact(BigInt),
    Float(f64),
}

impl BoundValue {
    pub fn as_f64(&self) -> f64 {
        match self {
            BoundValue::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            BoundValue::Float(x) => *x,
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BoundValue::Exact(v) => s.serialize_str(&v.to_string()),
            BoundValue::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{v}"),
            BoundValue::Float(x) => write!(f, "{x:.6}"),
        }
    }
}

/// One checked inequality `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub identifier: String,
    pub lhs: BoundValue,
    pub rhs: f64,
    pub satisfied: bool,
    pub slack: f64,
}

impl BoundRow {
    /// `satisfied ⇔ lhs ≤ rhs + 1e-9·max(1, |rhs|)`.
    pub fn new(identifier: impl Into<String>, lhs: BoundValue, rhs: f64) -> Self {
        Self::with_tolerance(identifier, lhs, rhs, 1e-9 * rhs.abs().max(1.0))
    }

    pub fn with_tolerance(identifier: impl Into<String>, lhs: BoundValue, rhs: f64, tol: f64) -> Self {
        let l = lhs.as_f64();
        BoundRow {
            identifier: identifier.into(),
            satisfied: l <= rhs + tol,
            slack: rhs - l,
            lhs,
            rhs,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(|r| !r.satisfied)
    }

    /// Aligned columns: identifier, lhs, rhs, slack, status.
    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.identifier.len()).max().unwrap_or(0).max(10);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>16}  {:>16}  {:>14}  status",
            "identifier", "lhs", "rhs", "slack"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>16}  {:>16.6}  {:>14.6}  {}",
                r.identifier,
                r.lhs.to_string(),
                r.rhs,
                r.slack,
                if r.satisfied { "ok" } else { "VIOLATED" }
            );
        }
        out
    }
}

/// How `e(X, Y)` treats edges with both endpoints in `X ∩ Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeCount {
    /// Ordered adjacent pairs in `X × Y`; an edge inside `X ∩ Y` counts twice.
    OrderedPairs,
    /// Edges with one endpoint in `X` and the other in `Y`, each once.
    Undirected,
}

pub fn edges_between(g: &Graph, x: &VertexSet, y: &VertexSet, convention: EdgeCount) -> usize {
    match convention {
        EdgeCount::OrderedPairs => {
            let yb = y.to_bitset();
            x.members().iter().map(|&v| g.neighbors(v).intersection_len(&yb)).sum()
        }
        EdgeCount::Undirected => g
            .edges()
            .filter(|&(u, v)| (x.contains(u) && y.contains(v)) || (x.contains(v) && y.contains(u)))
            .count(),
    }
}

/// `|e(X,Y) − d|X||Y|/n| ≤ λ√(|X||Y|)` with ordered-pair counting.
pub fn eml_check(g: &Graph, x: &VertexSet, y: &VertexSet) -> Result<BoundRow, SpectralError> {
    Ok(eml_check_with(&spectral_profile(g)?, g, x, y))
}

/// As [`eml_check`], reusing a computed profile.
pub fn eml_check_with(profile: &SpectralProfile, g: &Graph, x: &VertexSet, y: &VertexSet) -> BoundRow {
    let e = edges_between(g, x, y, EdgeCount::OrderedPairs) as f64;
    let (sx, sy) = (x.len() as f64, y.len() as f64);
    let expected = profile.d as f64 * sx * sy / profile.n as f64;
    BoundRow::new(
        format!("eml |X|={} |Y|={} e={}", x.len(), y.len(), e),
        BoundValue::Float((e - expected).abs()),
        profile.lambda * (sx * sy).sqrt(),
    )
}

/// Whether `N(S)` includes `S` itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Neighbourhood {
    /// `⋃_{v∈S} N(v)`.
    Open,
    /// `S ∪ ⋃_{v∈S} N(v)`.
    Closed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TannerCheck {
    /// `n(1 − (λ²/d²)(1−b)/b)` with `b = |S|/n`; may be nonpositive.
    pub bound: f64,
    pub open_size: usize,
    pub closed_size: usize,
    /// The first convention (open, then closed) under which the bound holds.
    pub convention: Option<Neighbourhood>,
    pub row: BoundRow,
}

pub fn tanner_bound(g: &Graph, s: &VertexSet) -> Result<TannerCheck, SpectralError> {
    tanner_bound_with(&spectral_profile(g)?, g, s)
}

pub fn tanner_bound_with(profile: &SpectralProfile, g: &Graph, s: &VertexSet) -> Result<TannerCheck, SpectralError> {
    if s.is_empty() {
        return Err(SpectralError::EmptySubset);
    }
    let n = profile.n as f64;
    let b = s.len() as f64 / n;
    let ratio = if profile.d == 0 {
        f64::INFINITY
    } else {
        profile.lambda.powi(2) / (profile.d as f64).powi(2)
    };
    let shrink = if b == 1.0 { 0.0 } else { ratio * (1.0 - b) / b };
    let bound = n * (1.0 - shrink);
    let mut open = crate::bitset::Bitset::new(profile.n);
    for &v in s.members() {
        open.union_with(g.neighbors(v));
    }
    let open_size = open.len();
    open.union_with(&s.to_bitset());
    let closed_size = open.len();
    let tol = 1e-9 * n;
    let row_for = |conv: Neighbourhood, size: usize| {
        BoundRow::with_tolerance(
            format!(
                "tanner |S|={} {}",
                s.len(),
                match conv {
                    Neighbourhood::Open => "open",
                    Neighbourhood::Closed => "closed",
                }
            ),
            BoundValue::Float(bound),
            size as f64,
            tol,
        )
    };
    let open_row = row_for(Neighbourhood::Open, open_size);
    let closed_row = row_for(Neighbourhood::Closed, closed_size);
    let (convention, row) = if open_row.satisfied {
        (Some(Neighbourhood::Open), open_row)
    } else if closed_row.satisfied {
        (Some(Neighbourhood::Closed), closed_row)
    } else {
        (None, open_row)
    };
    Ok(TannerCheck {
        bound,
        open_size,
        closed_size,
        convention,
        row,
    })
}

/// Rows `c_i(B) ≤ (m/i!)(dθ_B)^{i−1}` for `2 ≤ i ≤ ω(G[B])`, where
/// `θ_B = m/n + λ/d`, followed by the per-vertex premise
/// `max_{v∈B} |N_B(v)| ≤ dθ_B`. Empty for empty `b`.
pub fn clique_bound_report(g: &Graph, b: &VertexSet) -> Result<BoundReport, SpectralError> {
    Ok(clique_bound_report_with(&spectral_profile(g)?, g, b))
}

pub fn clique_bound_report_with(profile: &SpectralProfile, g: &Graph, b: &VertexSet) -> BoundReport {
    if b.is_empty() {
        return BoundReport::default();
    }
    let m = b.len() as f64;
    // dθ_B, written without dividing by d.
    let d_theta = profile.d as f64 * m / profile.n as f64 + profile.lambda;
    let counts = clique_counts(g, b);
    let mut rows = Vec::new();
    for (i, c) in counts.counts().iter().enumerate().skip(2) {
        let rhs = (2..=i).fold(m, |acc, j| acc * d_theta / j as f64);
        rows.push(BoundRow::new(
            format!("c_{i}"),
            BoundValue::Exact(c.clone().into()),
            rhs,
        ));
    }
    let bb = b.to_bitset();
    let max_deg = b
        .members()
        .iter()
        .map(|&v| g.neighbors(v).intersection_len(&bb))
        .max()
        .unwrap_or(0);
    rows.push(BoundRow::new(
        "premise max|N_B(v)|",
        BoundValue::Exact(max_deg.into()),
        d_theta,
    ));
    BoundReport { rows }
}

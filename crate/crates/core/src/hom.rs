//! Surjective homomorphisms with a prescribed image of `B`, found by
//! exhaustive backtracking, and the root-comparison criterion they are
//! audited against.

use std::fs;
use std::io;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::Bitset;
use crate::cpoly::{cpoly_direct, cpoly_weighted};
use crate::graph::{Graph, VertexSet, WeightMap};
use crate::roots::{dyadic_tolerance, RootResult, ZetaCache, DEFAULT_PRECISION_BITS};
use crate::spectral::{BoundReport, BoundRow, BoundValue};

/// Roots closer than this are never ordered.
pub const SEPARATION_BITS: u32 = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("source graph has {n} vertices, above the search cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("search limit exceeded after {nodes} nodes")]
    LimitExceeded { nodes: u64 },
    #[error("B-sets must be nonempty")]
    EmptyB,
}

/// `map[v] = f(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomMapping(pub Vec<usize>);

impl HomMapping {
    /// The preimage `f^{-1}(x)` of every target vertex.
    pub fn fibers(&self, target_n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); target_n];
        for (v, &x) in self.0.iter().enumerate() {
            out[x].push(v);
        }
        out
    }
}

/// Every constraint a candidate mapping violates; empty lists mean it holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomCheck {
    /// Set when the map is not defined on exactly `V(G)`.
    pub wrong_length: bool,
    /// Source vertices mapped outside `V(H)`.
    pub out_of_range: Vec<usize>,
    /// Edges of `G` whose image is not an edge of `H`.
    pub broken_edges: Vec<(usize, usize)>,
    /// Target vertices never hit.
    pub uncovered: Vec<usize>,
    /// `f(B_G)`, compared against `B_H`.
    pub b_image: Vec<usize>,
    pub b_image_matches: bool,
}

impl HomCheck {
    pub fn passed(&self) -> bool {
        !self.wrong_length
            && self.out_of_range.is_empty()
            && self.broken_edges.is_empty()
            && self.uncovered.is_empty()
            && self.b_image_matches
    }
}

/// Checks edge preservation, surjectivity onto `V(H)` and `f(B_G) = B_H`.
pub fn verify_hom(g: &Graph, h: &Graph, f: &HomMapping, b_g: &VertexSet, b_h: &VertexSet) -> HomCheck {
    let map = &f.0;
    let mut check = HomCheck {
        wrong_length: map.len() != g.n(),
        ..Default::default()
    };
    check.out_of_range = (0..map.len()).filter(|&v| map[v] >= h.n()).collect();
    if check.wrong_length || !check.out_of_range.is_empty() {
        return check;
    }
    check.broken_edges = g.edges().filter(|&(u, v)| !h.has_edge(map[u], map[v])).collect();
    let mut hit = vec![false; h.n()];
    for &x in map {
        hit[x] = true;
    }
    check.uncovered = (0..h.n()).filter(|&x| !hit[x]).collect();
    let image = VertexSet::new(h.n(), b_g.members().iter().map(|&v| map[v])).unwrap();
    check.b_image_matches = image.members() == b_h.members();
    check.b_image = image.members().to_vec();
    check
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest source graph the searcher accepts.
    pub max_source_vertices: usize,
    /// Assignment attempts before giving up.
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_source_vertices: 10,
            max_nodes: 50_000_000,
            max_time: None,
        }
    }
}

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    order: Vec<usize>,
    in_bg: Vec<bool>,
    in_bh: Vec<bool>,
    bh_bits: Bitset,
    all_h: Bitset,
    assign: Vec<Option<usize>>,
    cover: Vec<usize>,
    b_cover: Vec<usize>,
    uncovered: usize,
    uncovered_bh: usize,
    uncovered_rest: usize,
    left_b: usize,
    left_rest: usize,
    nodes: u64,
    limits: SearchLimits,
    started: Instant,
}

impl Search<'_> {
    fn feasible(&self) -> bool {
        self.left_b + self.left_rest >= self.uncovered
            && self.left_b >= self.uncovered_bh
            && self.left_rest >= self.uncovered_rest
    }

    fn place(&mut self, v: usize, x: usize) {
        self.assign[v] = Some(x);
        if self.cover[x] == 0 {
            self.uncovered -= 1;
            if !self.in_bh[x] {
                self.uncovered_rest -= 1;
            }
        }
        self.cover[x] += 1;
        if self.in_bg[v] {
            self.left_b -= 1;
            if self.b_cover[x] == 0 {
                self.uncovered_bh -= 1;
            }
            self.b_cover[x] += 1;
        } else {
            self.left_rest -= 1;
        }
    }

    fn unplace(&mut self, v: usize, x: usize) {
        self.assign[v] = None;
        self.cover[x] -= 1;
        if self.cover[x] == 0 {
            self.uncovered += 1;
            if !self.in_bh[x] {
                self.uncovered_rest += 1;
            }
        }
        if self.in_bg[v] {
            self.left_b += 1;
            self.b_cover[x] -= 1;
            if self.b_cover[x] == 0 {
                self.uncovered_bh += 1;
            }
        } else {
            self.left_rest += 1;
        }
    }

    fn candidates(&self, v: usize) -> Bitset {
        let mut c = if self.in_bg[v] {
            self.bh_bits.clone()
        } else {
            self.all_h.clone()
        };
        for u in self.g.neighbors(v).iter() {
            if let Some(x) = self.assign[u] {
                c.intersect_with(self.h.neighbors(x));
            }
        }
        c
    }

    fn run(&mut self, depth: usize) -> Result<bool, HomError> {
        if depth == self.order.len() {
            return Ok(self.uncovered == 0 && self.uncovered_bh == 0);
        }
        let v = self.order[depth];
        for x in self.candidates(v).iter() {
            self.nodes += 1;
            if self.nodes > self.limits.max_nodes {
                return Err(HomError::LimitExceeded { nodes: self.nodes - 1 });
            }
            if self.nodes.is_multiple_of(4096) {
                if let Some(t) = self.limits.max_time {
                    if self.started.elapsed() > t {
                        return Err(HomError::LimitExceeded { nodes: self.nodes });
                    }
                }
            }
            self.place(v, x);
            if self.feasible() && self.run(depth + 1)? {
                return Ok(true);
            }
            self.unplace(v, x);
        }
        Ok(false)
    }
}

/// A surjective homomorphism `G → H` with `f(B_G) = B_H`, or `None` once the
/// whole search space has been ruled out. Source vertices are assigned by
/// descending degree, lowest id first on ties.
pub fn find_surjective_hom(
    g: &Graph,
    h: &Graph,
    b_g: &VertexSet,
    b_h: &VertexSet,
    limits: &SearchLimits,
) -> Result<Option<HomMapping>, HomError> {
    if g.n() > limits.max_source_vertices {
        return Err(HomError::TooLarge {
            n: g.n(),
            cap: limits.max_source_vertices,
        });
    }
    // A zero budget settles nothing, even instances decidable without search.
    if limits.max_nodes == 0 {
        return Err(HomError::LimitExceeded { nodes: 0 });
    }
    if h.n() > g.n() || b_h.len() > b_g.len() {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let in_bg: Vec<bool> = (0..g.n()).map(|v| b_g.contains(v)).collect();
    let in_bh: Vec<bool> = (0..h.n()).map(|x| b_h.contains(x)).collect();
    let mut s = Search {
        g,
        h,
        order,
        bh_bits: b_h.to_bitset(),
        all_h: Bitset::full(h.n()),
        assign: vec![None; g.n()],
        cover: vec![0; h.n()],
        b_cover: vec![0; h.n()],
        uncovered: h.n(),
        uncovered_bh: b_h.len(),
        uncovered_rest: h.n() - b_h.len(),
        left_b: b_g.len(),
        left_rest: g.n() - b_g.len(),
        in_bg,
        in_bh,
        nodes: 0,
        limits: *limits,
        started: Instant::now(),
    };
    if !s.feasible() {
        return Ok(None);
    }
    if s.run(0)? {
        Ok(Some(HomMapping(s.assign.iter().map(|x| x.unwrap()).collect())))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `ζ_G(B_G) < ζ_H(B_H)` with separated enclosures: no qualifying
    /// homomorphism exists.
    NoHomCertified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionVerdict {
    pub zeta_g: RootResult,
    pub zeta_h: RootResult,
    pub verdict: Verdict,
    /// `ζ_H − ζ_G` in double precision.
    pub margin: f64,
}

/// Compares `ζ_G(B_G)` with `ζ_H(B_H)`; certifies non-existence only when the
/// `G` enclosure lies below the `H` enclosure by more than `2^-50`.
pub fn criterion(g: &Graph, b_g: &VertexSet, h: &Graph, b_h: &VertexSet) -> Result<CriterionVerdict, HomError> {
    let mut cache = ZetaCache::new(DEFAULT_PRECISION_BITS);
    criterion_cached(&mut cache, g, b_g, h, b_h)
}

pub fn criterion_cached(
    cache: &mut ZetaCache,
    g: &Graph,
    b_g: &VertexSet,
    h: &Graph,
    b_h: &VertexSet,
) -> Result<CriterionVerdict, HomError> {
    if b_g.is_empty() || b_h.is_empty() {
        return Err(HomError::EmptyB);
    }
    let zeta_g = cache.of(g, b_g);
    let zeta_h = cache.of(h, b_h);
    Ok(verdict_from(zeta_g, zeta_h))
}

fn verdict_from(zeta_g: RootResult, zeta_h: RootResult) -> CriterionVerdict {
    let certified = zeta_g.definitely_below(&zeta_h, &dyadic_tolerance(SEPARATION_BITS));
    let margin = zeta_h.float_value().unwrap_or(f64::NAN) - zeta_g.float_value().unwrap_or(f64::NAN);
    CriterionVerdict {
        zeta_g,
        zeta_h,
        verdict: if certified {
            Verdict::NoHomCertified
        } else {
            Verdict::Inconclusive
        },
        margin,
    }
}

/// One `(G, B_G, H, B_H)` case for [`monotonicity_audit`].
#[derive(Clone, Debug)]
pub struct AuditInstance {
    pub id: String,
    pub g: Graph,
    pub b_g: VertexSet,
    pub h: Graph,
    pub b_h: VertexSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    /// A qualifying homomorphism exists and `ζ_G(B_G) ≥ ζ_H(B_H)`.
    Satisfied,
    /// A qualifying homomorphism exists but the roots (or the fiber-weighted
    /// blow-up identity) contradict `ζ_G(B_G) ≥ ζ_H(B_H)`.
    Violated,
    /// No qualifying homomorphism; nothing to check.
    NoHomomorphism,
    /// The search hit its limits.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditRow {
    pub id: String,
    pub status: AuditStatus,
    /// Present whenever both B-sets are nonempty, found or not.
    pub verdict: Option<CriterionVerdict>,
    pub mapping: Option<HomMapping>,
    /// Weighted-polynomial identity on `H` blown up by fiber sizes
    /// `|f^{-1}(x) ∩ B_G|`.
    pub blow_up_identity: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
    /// One `ζ_H ≤ ζ_G` row per instance with a qualifying homomorphism.
    pub bounds: BoundReport,
}

impl AuditReport {
    pub fn count(&self, status: AuditStatus) -> usize {
        self.rows.iter().filter(|r| r.status == status).count()
    }
}

fn audit_one(inst: &AuditInstance, limits: &SearchLimits, cache: &mut ZetaCache) -> AuditRow {
    let verdict = (!inst.b_g.is_empty() && !inst.b_h.is_empty())
        .then(|| verdict_from(cache.of(&inst.g, &inst.b_g), cache.of(&inst.h, &inst.b_h)));
    let mut row = AuditRow {
        id: inst.id.clone(),
        status: AuditStatus::NoHomomorphism,
        verdict,
        mapping: None,
        blow_up_identity: None,
    };
    let found = match find_surjective_hom(&inst.g, &inst.h, &inst.b_g, &inst.b_h, limits) {
        Err(_) => {
            row.status = AuditStatus::Skipped;
            return row;
        }
        Ok(None) => return row,
        Ok(Some(f)) => f,
    };
    let weights = WeightMap::new(
        found
            .fibers(inst.h.n())
            .iter()
            .enumerate()
            .filter(|(x, _)| inst.b_h.contains(*x))
            .map(|(x, fiber)| (x, fiber.iter().filter(|&&v| inst.b_g.contains(v)).count() as u64)),
    );
    let identity = inst.h.blow_up(&inst.b_h, &weights).ok().and_then(|bu| {
        let weighted = cpoly_weighted(&inst.h, &inst.b_h, &weights).ok()?;
        Some(cpoly_direct(&bu.graph, &bu.b) == weighted)
    });
    let zeta_g = cache.of(&inst.g, &inst.b_g);
    let zeta_h = cache.of(&inst.h, &inst.b_h);
    let holds = !zeta_g.definitely_below(&zeta_h, &dyadic_tolerance(SEPARATION_BITS));
    row.status = if holds && identity == Some(true) {
        AuditStatus::Satisfied
    } else {
        AuditStatus::Violated
    };
    row.blow_up_identity = identity;
    row.mapping = Some(found);
    row
}

/// Runs every instance (in parallel, results in corpus order). Rows with a
/// qualifying homomorphism check `ζ_G(B_G) ≥ ζ_H(B_H)`; violated rows are
/// written to `dump_dir` when one is given.
pub fn monotonicity_audit(
    corpus: &[AuditInstance],
    limits: &SearchLimits,
    dump_dir: Option<&Path>,
) -> io::Result<AuditReport> {
    let rows: Vec<AuditRow> = corpus
        .par_iter()
        .map_init(
            || ZetaCache::new(DEFAULT_PRECISION_BITS),
            |cache, inst| audit_one(inst, limits, cache),
        )
        .collect();
    let mut bounds = BoundReport::default();
    for (inst, row) in corpus.iter().zip(&rows) {
        if row.mapping.is_none() {
            continue;
        }
        let (lhs, rhs) = match &row.verdict {
            Some(v) => (
                v.zeta_h.float_value().unwrap_or(f64::NEG_INFINITY),
                v.zeta_g.float_value().unwrap_or(f64::NEG_INFINITY),
            ),
            None => (f64::NEG_INFINITY, f64::NEG_INFINITY),
        };
        let mut b = BoundRow::new(row.id.clone(), BoundValue::Float(lhs), rhs);
        b.satisfied = row.status == AuditStatus::Satisfied;
        bounds.rows.push(b);
        if row.status == AuditStatus::Violated {
            if let Some(dir) = dump_dir {
                dump_instance(dir, inst, row)?;
            }
        }
    }
    Ok(AuditReport { rows, bounds })
}

/// Writes `g.edges`, `h.edges`, `b_g.txt`, `b_h.txt` and `verdict.json` into
/// `dir/<id>/`.
pub fn dump_instance(dir: &Path, inst: &AuditInstance, row: &AuditRow) -> io::Result<()> {
    let case = dir.join(sanitize(&inst.id));
    fs::create_dir_all(&case)?;
    fs::write(case.join("g.edges"), inst.g.to_edge_list())?;
    fs::write(case.join("h.edges"), inst.h.to_edge_list())?;
    fs::write(case.join("b_g.txt"), inst.b_g.to_text(&inst.g))?;
    fs::write(case.join("b_h.txt"), inst.b_h.to_text(&inst.h))?;
    let json = serde_json::to_string_pretty(row).map_err(io::Error::other)?;
    fs::write(case.join("verdict.json"), json + "\n")
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

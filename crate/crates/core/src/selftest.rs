//! End-to-end invariant suites over exhaustive and seeded corpora.
//!
//! Every suite is a pure function of `(scale, seed)`; the JSON summary
//! carries no timings so repeated runs are byte-identical.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cpoly::{cpoly, cpoly_direct, cpoly_weighted, join_poly, union_poly, vertex_step, Method};
use crate::graph::{
    generate, parse_edge_list, parse_vertex_set, Family, Graph, VertexSet, WeightMap, DEFAULT_REGULAR_ATTEMPTS,
};
use crate::hom::{
    criterion, find_surjective_hom, monotonicity_audit, AuditInstance, AuditStatus, SearchLimits, Verdict,
};
use crate::poly::Rational;
use crate::roots::{dyadic_tolerance, RootResult, ZetaCache, DEFAULT_PRECISION_BITS};
use crate::spectral::{clique_bound_report, eml_check_with, spectral_profile, tanner_bound_with, Neighbourhood};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    /// Only the worked triangle example.
    #[serde(rename = "paper-examples")]
    WorkedExample,
    /// Reduced corpora, a few seconds.
    Small,
    /// The full acceptance-sized corpora.
    Full,
}

impl std::str::FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper-examples" => Ok(Scale::WorkedExample),
            "small" => Ok(Scale::Small),
            "full" => Ok(Scale::Full),
            other => Err(format!(
                "unknown scale {other:?} (expected paper-examples, small or full)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
    pub note: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestSummary {
    pub scale: Scale,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteSummary>,
}

impl SelftestSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes") + "\n"
    }

    /// One line per suite, with wall time.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = write!(
                out,
                "{:<14} {:>4}  {:>8} cases  {:>4} failures  {:>8.2}s",
                s.name,
                if s.passed() { "PASS" } else { "FAIL" },
                s.cases,
                s.failures,
                s.elapsed.as_secs_f64()
            );
            if let Some(n) = &s.note {
                let _ = write!(out, "  {n}");
            }
            out.push('\n');
            if let Some(f) = &s.first_failure {
                let _ = writeln!(out, "    first failure: {f}");
            }
        }
        let _ = writeln!(
            out,
            "{}",
            if self.passed {
                "all suites passed"
            } else {
                "some suites failed"
            }
        );
        out
    }
}

struct Tally {
    cases: u64,
    failures: u64,
    first_failure: Option<String>,
    note: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failures: 0,
            first_failure: None,
            note: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

fn timed(name: &str, f: impl FnOnce() -> Tally) -> SuiteSummary {
    let start = Instant::now();
    let t = f();
    SuiteSummary {
        name: name.to_string(),
        cases: t.cases,
        failures: t.failures,
        first_failure: t.first_failure,
        note: t.note,
        elapsed: start.elapsed(),
    }
}

/// Runs every suite the scale selects.
pub fn run(scale: Scale, seed: u64) -> SelftestSummary {
    let mut suites = vec![timed("worked-example", worked_example)];
    if scale != Scale::WorkedExample {
        let full = scale == Scale::Full;
        let n = if full { 5 } else { 4 };
        suites.push(timed("recurrences", || recurrences(n)));
        suites.push(timed("roots", || roots_interval(n, if full { 300 } else { 30 }, seed)));
        suites.push(timed("monotonicity", || monotonicity(n)));
        suites.push(timed("identities", || identities(if full { 200 } else { 40 }, seed)));
        suites.push(timed("spectral", spectral_fixtures));
        suites.push(timed("eml-tanner", || eml_tanner(if full { 500 } else { 100 }, seed)));
        suites.push(timed("clique-bound", clique_bound));
        let (g_max, h_max, pairs) = if full { (5, 4, 200) } else { (4, 3, 40) };
        suites.push(timed("hom", || hom_suite(g_max, h_max, pairs, seed)));
    }
    let passed = suites.iter().all(SuiteSummary::passed);
    SelftestSummary {
        scale,
        seed,
        passed,
        suites,
    }
}

/// Independent RNG stream per suite.
fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Every labelled graph on `n` vertices, in edge-mask order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    (0..1u64 << pairs).map(move |m| Graph::from_edge_mask(n, m))
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> VertexSet {
    VertexSet::new(n, (0..n).filter(|_| rng.gen_bool(0.5))).unwrap()
}

fn random_nonempty_subset(rng: &mut ChaCha8Rng, n: usize) -> VertexSet {
    loop {
        let s = random_subset(rng, n);
        if !s.is_empty() {
            return s;
        }
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    generate(Family::Gnp { n, p, seed: rng.gen() }).unwrap()
}

/// `count` graphs `G(12, p)` with `p ∈ [0.1, 0.9]` and a random nonempty `B`.
pub fn seeded_gnp_corpus(count: usize, seed: u64) -> Vec<(Graph, VertexSet)> {
    let mut rng = rng_for(seed, 1);
    (0..count)
        .map(|_| {
            let p = rng.gen_range(0.1..0.9);
            let g = random_graph(&mut rng, 12, p);
            let b = random_nonempty_subset(&mut rng, 12);
            (g, b)
        })
        .collect()
}

fn worked_example() -> Tally {
    let mut t = Tally::new();
    let g = parse_edge_list("a b\nb c\na c\n").unwrap();
    let b = parse_vertex_set("a b", &g).unwrap();
    for m in [Method::Direct, Method::Vertex, Method::Edge] {
        let p = cpoly(&g, &b, m).to_string();
        t.check(p == "1 + 2*x + x^2", || format!("{m:?} gave {p}"));
    }
    let step = vertex_step(&g, &b, 0).unwrap();
    let text = format!("({}) + ({})", step.without_v, step.through_v.multiply_by_x_power(1));
    t.check(text == "(1 + x) + (x + x^2)", || {
        format!("decomposition rendered as {text}")
    });
    t.check(step.combine().to_string() == "1 + 2*x + x^2", || {
        "decomposition does not recombine".into()
    });
    t
}

fn recurrences(n: usize) -> Tally {
    let graphs: Vec<Graph> = all_graphs(n).collect();
    let tallies: Vec<Tally> = graphs
        .par_iter()
        .enumerate()
        .map(|(mask, g)| {
            let mut t = Tally::new();
            for b in VertexSet::all_subsets(n) {
                let d = cpoly(g, &b, Method::Direct);
                let v = cpoly(g, &b, Method::Vertex);
                let e = cpoly(g, &b, Method::Edge);
                t.check(d == v && d == e, || {
                    format!("mask {mask} B {:?}: {d} / {v} / {e}", b.members())
                });
            }
            t
        })
        .collect();
    let mut t = Tally::new();
    tallies.into_iter().for_each(|x| t.absorb(x));
    t
}

fn root_lower_limit() -> Rational {
    Rational::from_integer((-1).into()) - dyadic_tolerance(50)
}

fn roots_interval(n: usize, gnp: usize, seed: u64) -> Tally {
    let lo = root_lower_limit();
    let hi = Rational::from_integer(0.into());
    let mut t = Tally::new();
    let mut cache = ZetaCache::new(DEFAULT_PRECISION_BITS);
    for (mask, g) in all_graphs(n).enumerate() {
        for b in VertexSet::all_subsets(n).filter(|b| !b.is_empty()) {
            let z = cache.of(&g, &b);
            t.check(z.has_root() && z.within(&lo, &hi), || {
                format!("mask {mask} B {:?}: {z:?}", b.members())
            });
        }
    }
    for (i, (g, b)) in seeded_gnp_corpus(gnp, seed).iter().enumerate() {
        let z = cache.of(g, b);
        t.check(z.has_root() && z.within(&lo, &hi), || format!("G(12,p) #{i}: {z:?}"));
    }
    t
}

/// `ζ` for every graph on `n` vertices (edge-mask order) and every `B`
/// (bitmask order).
fn zeta_table(n: usize) -> Vec<Vec<RootResult>> {
    let graphs: Vec<Graph> = all_graphs(n).collect();
    graphs
        .par_iter()
        .map_init(
            || ZetaCache::new(DEFAULT_PRECISION_BITS),
            |cache, g| VertexSet::all_subsets(n).map(|b| cache.of(g, &b)).collect(),
        )
        .collect()
}

fn monotonicity(n: usize) -> Tally {
    let table = zeta_table(n);
    let sep = dyadic_tolerance(50);
    let pair_index: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut subset = Tally::new();
    let mut spanning = Tally::new();
    for (mask, row) in table.iter().enumerate() {
        for (bmask, z) in row.iter().enumerate() {
            for v in (0..n).filter(|v| bmask >> v & 1 == 1) {
                let smaller = &row[bmask & !(1 << v)];
                subset.check(!z.definitely_below(smaller, &sep), || {
                    format!("mask {mask}: B {bmask:#b} below B minus vertex {v}")
                });
            }
            for (bit, &(u, v)) in pair_index.iter().enumerate() {
                if mask >> bit & 1 == 1 && bmask >> u & 1 == 1 && bmask >> v & 1 == 1 {
                    let sparser = &table[mask & !(1 << bit)][bmask];
                    spanning.check(!sparser.definitely_below(z, &sep), || {
                        format!("mask {mask} B {bmask:#b}: deleting {u}{v} lowered the root")
                    });
                }
            }
        }
    }
    let note = format!("subset {} spanning {}", subset.cases, spanning.cases);
    subset.absorb(spanning);
    subset.note = Some(note);
    subset
}

fn identities(count: usize, seed: u64) -> Tally {
    let mut rng = rng_for(seed, 2);
    let mut t = Tally::new();
    for i in 0..count {
        let (ng, nh) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let g = random_graph(&mut rng, ng, 0.5);
        let h = random_graph(&mut rng, nh, 0.5);
        let (pg, ph) = (
            cpoly_direct(&g, &VertexSet::full(g.n())),
            cpoly_direct(&h, &VertexSet::full(h.n())),
        );
        let u = g.disjoint_union(&h);
        let j = g.join(&h);
        t.check(
            cpoly_direct(&u, &VertexSet::full(u.n())) == union_poly(&pg, &ph).unwrap(),
            || format!("union pair #{i}"),
        );
        t.check(
            cpoly_direct(&j, &VertexSet::full(j.n())) == join_poly(&pg, &ph).unwrap(),
            || format!("join pair #{i}"),
        );
    }
    for i in 0..count {
        let n = rng.gen_range(1..=6);
        let g = random_graph(&mut rng, n, 0.5);
        let b = random_subset(&mut rng, n);
        let w = WeightMap::new(b.members().iter().map(|&v| (v, rng.gen_range(1..=3))));
        let bu = g.blow_up(&b, &w).unwrap();
        t.check(
            cpoly_direct(&bu.graph, &bu.b) == cpoly_weighted(&g, &b, &w).unwrap(),
            || format!("blow-up triple #{i}"),
        );
    }
    t
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn spectral_fixtures() -> Tally {
    let mut t = Tally::new();
    let petersen = generate(Family::Petersen).unwrap();
    let eig = spectral_profile(&petersen).unwrap().eigenvalues;
    let expected = [3.0, 1.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0];
    t.check(eig.iter().zip(expected).all(|(a, b)| close(*a, b, 1e-8)), || {
        format!("Petersen spectrum {eig:?}")
    });
    for n in 3..=8 {
        let k = generate(Family::Complete { n }).unwrap();
        let lambda = spectral_profile(&k).unwrap().lambda;
        t.check(close(lambda, 1.0, 1e-8), || format!("lambda(K_{n}) = {lambda}"));
    }
    let zp = crate::roots::zeta_of(&petersen, &VertexSet::full(10))
        .float_value()
        .unwrap_or(f64::NAN);
    t.check(close(zp, (-10.0 + 40f64.sqrt()) / 30.0, 1e-12), || {
        format!("zeta(Petersen) = {zp}")
    });
    let c5 = generate(Family::Cycle { n: 5 }).unwrap();
    let zc = crate::roots::zeta_of(&c5, &VertexSet::full(5))
        .float_value()
        .unwrap_or(f64::NAN);
    t.check(close(zc, (-5.0 + 5f64.sqrt()) / 10.0, 1e-12), || {
        format!("zeta(C_5) = {zc}")
    });
    t
}

/// Petersen followed by two random 4-regular graphs on 12 vertices.
pub fn eml_graphs(seed: u64) -> Vec<Graph> {
    let mut rng = rng_for(seed, 3);
    let mut out = vec![generate(Family::Petersen).unwrap()];
    for _ in 0..2 {
        let family = Family::RandomRegular {
            n: 12,
            d: 4,
            seed: rng.gen(),
            max_attempts: DEFAULT_REGULAR_ATTEMPTS,
        };
        out.push(generate(family).unwrap());
    }
    out
}

fn eml_tanner(pairs: usize, seed: u64) -> Tally {
    let mut t = Tally::new();
    let mut rng = rng_for(seed, 4);
    for (gi, g) in eml_graphs(seed).iter().enumerate() {
        let profile = spectral_profile(g).unwrap();
        for i in 0..pairs {
            let x = random_subset(&mut rng, g.n());
            let y = random_subset(&mut rng, g.n());
            let row = eml_check_with(&profile, g, &x, &y);
            t.check(row.satisfied, || format!("graph {gi} pair #{i}: {row:?}"));
        }
    }
    let petersen = generate(Family::Petersen).unwrap();
    let profile = spectral_profile(&petersen).unwrap();
    let (mut open, mut closed) = (0, 0);
    for s in VertexSet::all_subsets(10).filter(|s| !s.is_empty()) {
        let check = tanner_bound_with(&profile, &petersen, &s).unwrap();
        match check.convention {
            Some(Neighbourhood::Open) => open += 1,
            Some(Neighbourhood::Closed) => closed += 1,
            None => {}
        }
        t.check(check.convention.is_some(), || {
            format!("tanner S {:?}: {:?}", s.members(), check.row)
        });
    }
    t.note = Some(format!("tanner open {open} closed {closed}"));
    t
}

/// `K_4..K_8`, Petersen and `C_4..C_10`.
pub fn certified_families() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = (4..=8)
        .map(|n| (format!("K_{n}"), generate(Family::Complete { n }).unwrap()))
        .collect();
    out.push(("Petersen".into(), generate(Family::Petersen).unwrap()));
    out.extend((4..=10).map(|n| (format!("C_{n}"), generate(Family::Cycle { n }).unwrap())));
    out
}

fn clique_bound() -> Tally {
    let mut t = Tally::new();
    for (name, g) in certified_families() {
        let report = clique_bound_report(&g, &VertexSet::full(g.n())).unwrap();
        for row in &report.rows {
            t.check(row.satisfied, || {
                format!("{name} {}: {} > {}", row.identifier, row.lhs, row.rhs)
            });
        }
    }
    t
}

/// All pairs with `1 ≤ |V(G)| ≤ g_max`, `1 ≤ |V(H)| ≤ h_max`, `B = V` on
/// both sides.
pub fn exhaustive_hom_corpus(g_max: usize, h_max: usize) -> Vec<AuditInstance> {
    let mut out = Vec::new();
    for ng in 1..=g_max {
        for (gm, g) in all_graphs(ng).enumerate() {
            for nh in 1..=h_max {
                for (hm, h) in all_graphs(nh).enumerate() {
                    out.push(AuditInstance {
                        id: format!("g{ng}-{gm}_h{nh}-{hm}"),
                        b_g: VertexSet::full(ng),
                        b_h: VertexSet::full(nh),
                        g: g.clone(),
                        h,
                    });
                }
            }
        }
    }
    out
}

/// Pairs with nonempty B-sets, at least one of them proper. Even-numbered
/// pairs are planted: `G` is built over a random surjection onto `H` so that a
/// qualifying homomorphism exists. Odd-numbered pairs are unconstrained.
pub fn seeded_proper_hom_corpus(count: usize, g_max: usize, h_max: usize, seed: u64) -> Vec<AuditInstance> {
    let mut rng = rng_for(seed, 5);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let i = out.len();
        let nh = rng.gen_range(1..=h_max);
        let ng = rng.gen_range(nh.max(2)..=g_max);
        let h = random_graph(&mut rng, nh, 0.6);
        let inst = if i % 2 == 0 {
            let mut f: Vec<usize> = (0..nh).chain((nh..ng).map(|_| rng.gen_range(0..nh))).collect();
            f.shuffle(&mut rng);
            let edges: Vec<(usize, usize)> = (0..ng)
                .flat_map(|u| (u + 1..ng).map(move |v| (u, v)))
                .filter(|&(u, v)| h.has_edge(f[u], f[v]))
                .collect();
            let edges: Vec<(usize, usize)> = edges.into_iter().filter(|_| rng.gen_bool(0.7)).collect();
            let g = Graph::from_edges(ng, edges).unwrap();
            let b_h = random_nonempty_subset(&mut rng, nh);
            // one representative per B_H vertex, plus random extra preimages
            let mut b_g: Vec<usize> = Vec::new();
            for &x in b_h.members() {
                let fiber: Vec<usize> = (0..ng).filter(|&v| f[v] == x).collect();
                b_g.push(*fiber.choose(&mut rng).unwrap());
                b_g.extend(fiber.into_iter().filter(|_| rng.gen_bool(0.5)));
            }
            AuditInstance {
                id: format!("planted-{i}"),
                b_g: VertexSet::new(ng, b_g).unwrap(),
                b_h,
                g,
                h,
            }
        } else {
            let g = random_graph(&mut rng, ng, 0.6);
            let b_g = random_nonempty_subset(&mut rng, ng);
            let b_h = random_nonempty_subset(&mut rng, nh);
            AuditInstance {
                id: format!("random-{i}"),
                g,
                h,
                b_g,
                b_h,
            }
        };
        if inst.b_g.len() < ng || inst.b_h.len() < nh {
            out.push(inst);
        }
    }
    out
}

fn hom_suite(g_max: usize, h_max: usize, pairs: usize, seed: u64) -> Tally {
    let mut t = Tally::new();
    let mut corpus = exhaustive_hom_corpus(g_max, h_max);
    corpus.extend(seeded_proper_hom_corpus(pairs, g_max, h_max, seed));
    let limits = SearchLimits::default();
    let report = monotonicity_audit(&corpus, &limits, None).expect("no dump directory");
    for row in &report.rows {
        t.check(row.status != AuditStatus::Violated, || {
            format!("audit violated on {}", row.id)
        });
        let certified = row
            .verdict
            .as_ref()
            .is_some_and(|v| v.verdict == Verdict::NoHomCertified);
        if certified {
            t.check(row.status == AuditStatus::NoHomomorphism, || {
                format!("criterion certified {} but search reported {:?}", row.id, row.status)
            });
        }
    }
    let k3 = generate(Family::Complete { n: 3 }).unwrap();
    let c5 = generate(Family::Cycle { n: 5 }).unwrap();
    let (v3, v5) = (VertexSet::full(3), VertexSet::full(5));
    let no = criterion(&k3, &v3, &c5, &v5).unwrap();
    let none = find_surjective_hom(&k3, &c5, &v3, &v5, &limits);
    t.check(no.verdict == Verdict::NoHomCertified && none == Ok(None), || {
        "K_3 -> C_5 fixture".into()
    });
    let yes = criterion(&c5, &v5, &k3, &v3).unwrap();
    let found = find_surjective_hom(&c5, &k3, &v5, &v3, &limits);
    t.check(
        yes.verdict == Verdict::Inconclusive && matches!(found, Ok(Some(_))),
        || "C_5 -> K_3 fixture".into(),
    );
    t.note = Some(format!(
        "satisfied {} no-hom {} skipped {}",
        report.count(AuditStatus::Satisfied),
        report.count(AuditStatus::NoHomomorphism),
        report.count(AuditStatus::Skipped)
    ));
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_scale_passes() {
        let s = run(Scale::WorkedExample, 0);
        assert!(s.passed, "{}", s.to_text());
        assert_eq!(s.suites.len(), 1);
    }

    #[test]
    fn small_scale_passes_and_is_deterministic() {
        let a = run(Scale::Small, 7);
        assert!(a.passed, "{}", a.to_text());
        assert_eq!(a.to_json(), run(Scale::Small, 7).to_json());
    }

    #[test]
    fn scale_parses() {
        assert_eq!("full".parse::<Scale>(), Ok(Scale::Full));
        assert!("huge".parse::<Scale>().is_err());
    }

    #[test]
    fn corpus_shapes() {
        assert_eq!(all_graphs(4).count(), 64);
        assert_eq!(exhaustive_hom_corpus(3, 2).len(), (1 + 2 + 8) * (1 + 2));
        for inst in seeded_proper_hom_corpus(30, 5, 4, 1) {
            assert!(!inst.b_g.is_empty() && !inst.b_h.is_empty());
            assert!(inst.b_g.len() < inst.g.n() || inst.b_h.len() < inst.h.n());
        }
    }

    #[test]
    fn planted_pairs_have_homomorphisms() {
        let lim = SearchLimits::default();
        for inst in seeded_proper_hom_corpus(20, 5, 4, 3).iter().step_by(2) {
            let f = find_surjective_hom(&inst.g, &inst.h, &inst.b_g, &inst.b_h, &lim).unwrap();
            assert!(f.is_some(), "{}", inst.id);
        }
    }
}

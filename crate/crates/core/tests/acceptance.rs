//! Acceptance suite: one PASS/FAIL line per criterion, exit status nonzero if
//! any criterion fails. Runs with a custom harness so the lines always print.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bclique::cpoly::{cpoly, cpoly_direct, cpoly_weighted, join_poly, union_poly, vertex_step, Method};
use bclique::graph::{generate, parse_edge_list, parse_vertex_set, Family, Graph, VertexSet, WeightMap};
use bclique::hom::{criterion, find_surjective_hom, monotonicity_audit, AuditStatus, SearchLimits, Verdict};
use bclique::poly::{IntPolynomial, Rational};
use bclique::roots::{dyadic_tolerance, zeta_of, RootResult, ZetaCache, DEFAULT_PRECISION_BITS};
use bclique::selftest::{
    self, all_graphs, eml_graphs, exhaustive_hom_corpus, seeded_gnp_corpus, seeded_proper_hom_corpus, Scale,
};
use bclique::spectral::{clique_bound_report, eml_check_with, spectral_profile, tanner_bound_with, Neighbourhood};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

/// Counts of weighted cliques inside `b`, by extending cliques one higher
/// vertex at a time. Unit weights give plain clique counts.
fn brute_weighted(g: &Graph, b: &VertexSet, w: impl Fn(usize) -> u64) -> IntPolynomial {
    fn extend(
        g: &Graph,
        members: &[usize],
        clique: &mut Vec<usize>,
        start: usize,
        weight: u64,
        w: &dyn Fn(usize) -> u64,
        out: &mut Vec<u64>,
    ) {
        if out.len() <= clique.len() {
            out.push(0);
        }
        out[clique.len()] += weight;
        for i in start..members.len() {
            let v = members[i];
            if clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
                extend(g, members, clique, i + 1, weight * w(v), w, out);
                clique.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(g, b.members(), &mut Vec::new(), 0, 1, &w, &mut out);
    IntPolynomial::from_i64s(&out.iter().map(|&c| c as i64).collect::<Vec<_>>())
}

fn brute(g: &Graph, b: &VertexSet) -> IntPolynomial {
    brute_weighted(g, b, |_| 1)
}

fn full(g: &Graph) -> VertexSet {
    VertexSet::full(g.n())
}

fn within_time(ok: bool, start: Instant, limit: Duration, detail: String) -> Outcome {
    let t = start.elapsed();
    outcome(
        ok && t < limit,
        format!("{detail}; {:.2}s (limit {}s)", t.as_secs_f64(), limit.as_secs()),
    )
}

fn c1_worked_example() -> Outcome {
    let start = Instant::now();
    let g = parse_edge_list("a b\nb c\na c\n").unwrap();
    let b = parse_vertex_set("a b", &g).unwrap();
    let rendered: Vec<String> = [Method::Direct, Method::Vertex, Method::Edge]
        .iter()
        .map(|&m| cpoly(&g, &b, m).to_string())
        .collect();
    let step = vertex_step(&g, &b, 0).unwrap();
    let decomposition = format!("({}) + ({})", step.without_v, step.through_v.multiply_by_x_power(1));
    let ok = rendered.iter().all(|p| p == "1 + 2*x + x^2")
        && decomposition == "(1 + x) + (x + x^2)"
        && brute(&g, &b).to_string() == "1 + 2*x + x^2";
    within_time(
        ok,
        start,
        Duration::from_secs(1),
        format!("{} | {decomposition}", rendered.join(" | ")),
    )
}

fn c2_recurrences() -> Outcome {
    let start = Instant::now();
    let (mut pass, mut total) = (0, 0);
    for g in all_graphs(5) {
        for b in VertexSet::all_subsets(5) {
            total += 1;
            let d = cpoly(&g, &b, Method::Direct);
            if d == cpoly(&g, &b, Method::Vertex) && d == cpoly(&g, &b, Method::Edge) && d == brute(&g, &b) {
                pass += 1;
            }
        }
    }
    within_time(
        pass == 32_768 && total == 32_768,
        start,
        Duration::from_secs(60),
        format!("{pass}/{total} equal"),
    )
}

fn c3_root_interval() -> Outcome {
    let lo = Rational::from_integer((-1).into()) - dyadic_tolerance(50);
    let hi = Rational::from_integer(0.into());
    let mut cache = ZetaCache::new(DEFAULT_PRECISION_BITS);
    let (mut bad, mut total) = (0, 0);
    let mut check = |z: RootResult, p: &IntPolynomial| {
        total += 1;
        // The enclosure must straddle a root: a sign change, or an exact zero.
        let brackets_root = match (z.lower(), z.upper()) {
            (Some(a), Some(b)) if a == b => p.eval_rational(a) == Rational::from_integer(0.into()),
            (Some(a), Some(b)) => {
                p.sign_at(a) != p.sign_at(b) || p.derivative().sign_at(a) != p.derivative().sign_at(b)
            }
            _ => false,
        };
        if !(z.has_root() && z.within(&lo, &hi) && brackets_root) {
            bad += 1;
        }
    };
    for g in all_graphs(5) {
        for b in VertexSet::all_subsets(5).filter(|b| !b.is_empty()) {
            let p = cpoly_direct(&g, &b);
            check(cache.get(&p).unwrap(), &p);
        }
    }
    for (g, b) in seeded_gnp_corpus(300, SEED) {
        let p = cpoly_direct(&g, &b);
        check(cache.get(&p).unwrap(), &p);
    }
    outcome(bad == 0, format!("{bad} violations over {total} nonempty instances"))
}

fn c4_monotonicity() -> Outcome {
    let start = Instant::now();
    let sep = dyadic_tolerance(50);
    let mut cache = ZetaCache::new(DEFAULT_PRECISION_BITS);
    let graphs: Vec<Graph> = all_graphs(5).collect();
    let table: Vec<Vec<RootResult>> = graphs
        .iter()
        .map(|g| VertexSet::all_subsets(5).map(|b| cache.of(g, &b)).collect())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
    let (mut subset_cases, mut subset_bad, mut span_cases, mut span_bad) = (0, 0, 0, 0);
    for (mask, row) in table.iter().enumerate() {
        for bmask in 0..32usize {
            // every B' ⊆ B
            let mut sub = bmask;
            loop {
                subset_cases += 1;
                if row[bmask].definitely_below(&row[sub], &sep) {
                    subset_bad += 1;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & bmask;
            }
            for (bit, &(u, v)) in pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 && bmask >> u & 1 == 1 && bmask >> v & 1 == 1 {
                    span_cases += 1;
                    if table[mask & !(1 << bit)][bmask].definitely_below(&row[bmask], &sep) {
                        span_bad += 1;
                    }
                }
            }
        }
    }
    within_time(
        subset_bad == 0 && span_bad == 0,
        start,
        Duration::from_secs(300),
        format!("subset {subset_bad}/{subset_cases} violations, spanning {span_bad}/{span_cases} violations"),
    )
}

fn c5_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x5eed);
    let gnp = |rng: &mut ChaCha8Rng, n: usize| {
        generate(Family::Gnp {
            n,
            p: 0.5,
            seed: rng.gen(),
        })
        .unwrap()
    };
    let (mut union_bad, mut join_bad, mut blow_bad) = (0, 0, 0);
    for _ in 0..200 {
        let (ng, nh) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let g = gnp(&mut rng, ng);
        let h = gnp(&mut rng, nh);
        let (pg, ph) = (brute(&g, &full(&g)), brute(&h, &full(&h)));
        let u = g.disjoint_union(&h);
        let j = g.join(&h);
        let (bu, bj) = (brute(&u, &full(&u)), brute(&j, &full(&j)));
        if union_poly(&pg, &ph).unwrap() != bu || cpoly_direct(&u, &full(&u)) != bu {
            union_bad += 1;
        }
        if join_poly(&pg, &ph).unwrap() != bj || cpoly_direct(&j, &full(&j)) != bj {
            join_bad += 1;
        }
    }
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let g = gnp(&mut rng, n);
        let b = VertexSet::new(n, (0..n).filter(|_| rng.gen_bool(0.5))).unwrap();
        let w = WeightMap::new(b.members().iter().map(|&v| (v, rng.gen_range(1..=3u64))));
        let blown = g.blow_up(&b, &w).unwrap();
        let oracle = brute_weighted(&g, &b, |v| w.get(v).unwrap());
        if brute(&blown.graph, &blown.b) != oracle || cpoly_weighted(&g, &b, &w).unwrap() != oracle {
            blow_bad += 1;
        }
    }
    outcome(
        union_bad + join_bad + blow_bad == 0,
        format!("union {union_bad}/200, join {join_bad}/200, blow-up {blow_bad}/200 mismatches"),
    )
}

fn c6_spectral() -> Outcome {
    let mut fails = Vec::new();
    let petersen = generate(Family::Petersen).unwrap();
    let eig = spectral_profile(&petersen).unwrap().eigenvalues;
    let want = [3.0, 1.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0];
    if eig.len() != 10 || eig.iter().zip(want).any(|(a, b)| (a - b).abs() > 1e-8) {
        fails.push(format!("Petersen spectrum {eig:?}"));
    }
    for n in 3..=8 {
        let l = spectral_profile(&generate(Family::Complete { n }).unwrap())
            .unwrap()
            .lambda;
        if (l - 1.0).abs() > 1e-8 {
            fails.push(format!("lambda(K_{n}) = {l}"));
        }
    }
    let zp = zeta_of(&petersen, &full(&petersen)).float_value().unwrap();
    let zp_err = (zp - (-10.0 + 40f64.sqrt()) / 30.0).abs();
    let c5 = generate(Family::Cycle { n: 5 }).unwrap();
    let zc = zeta_of(&c5, &full(&c5)).float_value().unwrap();
    let zc_err = (zc - (-5.0 + 5f64.sqrt()) / 10.0).abs();
    if zp_err > 1e-12 {
        fails.push(format!("zeta(Petersen) off by {zp_err:e}"));
    }
    if zc_err > 1e-12 {
        fails.push(format!("zeta(C_5) off by {zc_err:e}"));
    }
    let detail = if fails.is_empty() {
        format!("zeta errors {zp_err:.1e} / {zc_err:.1e}")
    } else {
        fails.join("; ")
    };
    outcome(fails.is_empty(), detail)
}

fn c7_eml_tanner() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xe31);
    let mut eml_bad = 0;
    let graphs = eml_graphs(SEED);
    for g in &graphs {
        let profile = spectral_profile(g).unwrap();
        for _ in 0..500 {
            let x = VertexSet::new(g.n(), (0..g.n()).filter(|_| rng.gen_bool(0.5))).unwrap();
            let y = VertexSet::new(g.n(), (0..g.n()).filter(|_| rng.gen_bool(0.5))).unwrap();
            if !eml_check_with(&profile, g, &x, &y).satisfied {
                eml_bad += 1;
            }
        }
    }
    let petersen = &graphs[0];
    let profile = spectral_profile(petersen).unwrap();
    let (mut open, mut closed, mut tanner_bad) = (0, 0, 0);
    for s in VertexSet::all_subsets(10).filter(|s| !s.is_empty()) {
        match tanner_bound_with(&profile, petersen, &s).unwrap().convention {
            Some(Neighbourhood::Open) => open += 1,
            Some(Neighbourhood::Closed) => closed += 1,
            None => tanner_bad += 1,
        }
    }
    within_time(
        eml_bad == 0 && tanner_bad == 0,
        start,
        Duration::from_secs(60),
        format!(
            "EML {eml_bad}/1500 violations; Tanner {tanner_bad}/1023 violations (open {open}, closed {closed}; empty S has no bound)"
        ),
    )
}

fn c8_clique_bound() -> Outcome {
    let (mut rows, mut bad) = (0, Vec::new());
    for (name, g) in selftest::certified_families() {
        let report = clique_bound_report(&g, &full(&g)).unwrap();
        rows += report.rows.len();
        bad.extend(report.violations().map(|r| format!("{name} {}", r.identifier)));
    }
    let detail = if bad.is_empty() {
        format!("0 violated of {rows} rows")
    } else {
        format!("{} violated of {rows} rows: {}", bad.len(), bad.join(", "))
    };
    outcome(bad.is_empty(), detail)
}

/// Every map `V(G) → V(H)`, checked with plain loops.
fn brute_hom_exists(g: &Graph, h: &Graph, b_g: &VertexSet, b_h: &VertexSet) -> bool {
    let (n, k) = (g.n(), h.n());
    (0..k.pow(n as u32)).any(|mut code| {
        let f: Vec<usize> = (0..n)
            .map(|_| {
                let x = code % k;
                code /= k;
                x
            })
            .collect();
        let edges = g.edges().all(|(u, v)| h.has_edge(f[u], f[v]));
        let onto = (0..k).all(|x| f.contains(&x));
        let image: Vec<usize> = {
            let mut i: Vec<usize> = b_g.members().iter().map(|&v| f[v]).collect();
            i.sort();
            i.dedup();
            i
        };
        edges && onto && image == b_h.members()
    })
}

fn c9_homomorphisms() -> Outcome {
    let start = Instant::now();
    let mut corpus = exhaustive_hom_corpus(5, 4);
    let exhaustive = corpus.len();
    corpus.extend(seeded_proper_hom_corpus(200, 5, 4, SEED));
    let limits = SearchLimits::default();
    let report = monotonicity_audit(&corpus, &limits, None).unwrap();
    let violated = report.count(AuditStatus::Violated);
    let skipped = report.count(AuditStatus::Skipped);
    let (mut certified, mut unsound) = (0, 0);
    for (inst, row) in corpus.iter().zip(&report.rows) {
        if row
            .verdict
            .as_ref()
            .is_some_and(|v| v.verdict == Verdict::NoHomCertified)
        {
            certified += 1;
            if row.status != AuditStatus::NoHomomorphism || brute_hom_exists(&inst.g, &inst.h, &inst.b_g, &inst.b_h) {
                unsound += 1;
            }
        }
    }
    let k3 = generate(Family::Complete { n: 3 }).unwrap();
    let c5 = generate(Family::Cycle { n: 5 }).unwrap();
    let no = criterion(&k3, &full(&k3), &c5, &full(&c5)).unwrap().verdict == Verdict::NoHomCertified
        && find_surjective_hom(&k3, &c5, &full(&k3), &full(&c5), &limits) == Ok(None);
    let yes = criterion(&c5, &full(&c5), &k3, &full(&k3)).unwrap().verdict == Verdict::Inconclusive
        && matches!(
            find_surjective_hom(&c5, &k3, &full(&c5), &full(&k3), &limits),
            Ok(Some(_))
        );
    within_time(
        violated == 0 && skipped == 0 && unsound == 0 && no && yes,
        start,
        Duration::from_secs(600),
        format!(
            "{} instances ({exhaustive} exhaustive): {} with hom, {violated} violated, {skipped} skipped; \
             {certified} certified, {unsound} unsound; fixtures K3->C5 {no}, C5->K3 {yes}",
            corpus.len(),
            report.count(AuditStatus::Satisfied) + violated
        ),
    )
}

fn c10_determinism() -> Outcome {
    let a = selftest::run(Scale::Full, SEED);
    let b = selftest::run(Scale::Full, SEED);
    let (ja, jb) = (a.to_json(), b.to_json());
    outcome(
        ja == jb && a.passed,
        format!("{} bytes, identical {}, suites passed {}", ja.len(), ja == jb, a.passed),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("1 worked example", c1_worked_example),
        ("2 recurrence equivalence", c2_recurrences),
        ("3 root existence and interval", c3_root_interval),
        ("4 monotonicity", c4_monotonicity),
        ("5 union/join/blow-up identities", c5_identities),
        ("6 spectral fixtures", c6_spectral),
        ("7 EML and Tanner", c7_eml_tanner),
        ("8 certified clique-bound families", c8_clique_bound),
        ("9 homomorphism suite", c9_homomorphisms),
        ("10 determinism", c10_determinism),
    ];
    let mut all = true;
    for (name, f) in criteria {
        let o = f();
        all &= o.ok;
        println!(
            "criterion {name}: {} ({})",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

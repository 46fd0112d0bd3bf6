//! The acceptance suite: twelve checks over the corpus, the grid gadgets,
//! the reductions and the oracles.
//!
//! Reports are byte-deterministic for a given profile and seed. Timings are
//! kept apart from the report so that two runs can be compared directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::admissibility::{check_cut_certificate, decide_ca, decide_oa, enumerate_pairings, odd_vertices, attack_orientation, CertificateCheck};
use crate::connectivity::{is_well_balanced, lambda_directed, lambda_undirected, r_value};
use crate::corpus;
use crate::error::{Error, Result};
use crate::eulerian::{check_ff_condition, extend_to_eulerian, ExtensionOutcome};
use crate::graph::{GraphBuilder, MultiGraph, Orientation, VertexId, VertexSet};
use crate::grid::{augmented_grid, separation_exhaustive, separation_structured, verify_three_edge_connected, GridSpec};
use crate::io::Document;
use crate::limits::Limits;
use crate::oracles::{brute_bwbo, brute_cut_admissible_pairing, brute_eulerian_extension, brute_laco, brute_maxcut, brute_wbo_exists};
use crate::reductions::{
    build_ca_instance, build_g1, bwbo_to_laco, check_notbig, edge_connectivity, lift_bwbo_witness, lift_cut,
    maxcut_to_amaxcut, project_laco_witness, random_gadget_sets, AmaxcutInstance, BwboInstance,
};

pub const CORPUS_FILE: &str = "corpus.txt";
pub const OA_NOT_CA_FILE: &str = "oa_not_ca.json";
pub const CORPUS_MAX_VERTICES: usize = 5;
pub const CORPUS_MAX_EDGES: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub profile: Profile,
    pub seed: u64,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    /// Run only these check ids.
    pub only: Option<Vec<u32>>,
    pub fixtures: PathBuf,
    pub limits: Limits,
    /// Drop one padding copy from every grid before checking it.
    pub mutate_grid_padding: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            profile: Profile::Quick,
            seed: 7,
            threads: 0,
            only: None,
            fixtures: default_fixtures_dir(),
            limits: Limits::default(),
            mutate_grid_padding: false,
        }
    }
}

/// The fixtures shipped with this crate.
pub fn default_fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub profile: Profile,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let profile = match self.profile {
            Profile::Quick => "quick",
            Profile::Full => "full",
        };
        let mut s = format!("suite profile={profile} seed={}\n", self.seed);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(s, "[{tag}] {:>2} {}: {}", c.id, c.name, c.details).unwrap();
            if let Some(cx) = &c.counterexample {
                writeln!(s, "       counterexample: {cx}").unwrap();
            }
        }
        let ok = self.checks.iter().filter(|c| c.passed).count();
        writeln!(s, "summary: {ok}/{} passed", self.checks.len()).unwrap();
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One line per check with its wall time.
    pub fn timings(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{:>2} {:<44} {:>9.3} s\n", c.id, c.name, c.elapsed.as_secs_f64()))
            .collect()
    }
}

struct Outcome {
    passed: bool,
    details: String,
    counterexample: Option<String>,
}

impl Outcome {
    fn new(passed: bool, details: String) -> Self {
        Outcome {
            passed,
            details,
            counterexample: None,
        }
    }

    fn with_counterexample(mut self, cx: Option<String>) -> Self {
        self.counterexample = cx;
        self
    }
}

type Check = fn(&Context) -> Result<Outcome>;

pub const CHECKS: [(u32, &str); 12] = [
    (1, "flow-matches-cut-enumeration"),
    (2, "well-balanced-orientation-exists"),
    (3, "cut-admissible-pairing-exists"),
    (4, "cut-admissible-implies-orientation-admissible"),
    (5, "orientation-but-not-cut-admissible-fixture"),
    (6, "grid-three-edge-connectivity"),
    (7, "grid-separation-bound"),
    (8, "maxcut-threshold-equivalences"),
    (9, "dumbbell-reduction-pipeline"),
    (10, "eulerian-extension-matches-search"),
    (11, "bwbo-laco-equivalence"),
    (12, "thread-count-independence"),
];

const RUNNERS: [Check; 12] = [
    check_flow,
    check_wbo,
    check_pairing_exists,
    check_ca_implies_oa,
    check_oa_not_ca,
    check_grid_connectivity,
    check_grid_separation,
    check_maxcut_equivalences,
    check_pipeline,
    check_extension,
    check_bwbo_laco,
    check_thread_independence,
];

struct Context {
    opts: SuiteOptions,
    corpus: Vec<MultiGraph>,
    oa_not_ca: Document,
}

impl Context {
    fn full(&self) -> bool {
        self.opts.profile == Profile::Full
    }

    /// Corpus restricted to four vertices in the quick profile.
    fn corpus(&self) -> &[MultiGraph] {
        if self.full() {
            &self.corpus
        } else {
            let end = self.corpus.partition_point(|g| g.vertex_count() <= 4);
            &self.corpus[..end]
        }
    }
}

fn fixture_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Fixture {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Reads the fixtures and runs the selected checks on a pool of
/// `opts.threads` workers. Missing or corrupt fixtures are errors.
pub fn run_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let corpus_path = opts.fixtures.join(CORPUS_FILE);
    let corpus_text = std::fs::read_to_string(&corpus_path)
        .map_err(|e| fixture_error(&corpus_path, e))?;
    let corpus = corpus::parse_corpus(&corpus_text).map_err(|e| fixture_error(&corpus_path, e))?;
    let oa_path = opts.fixtures.join(OA_NOT_CA_FILE);
    let oa_not_ca = Document::read(&oa_path)
        .map_err(|e| fixture_error(&oa_path, e))?;
    let ctx = Context {
        opts: opts.clone(),
        corpus,
        oa_not_ca,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut checks = Vec::new();
    for (&(id, name), run) in CHECKS.iter().zip(RUNNERS) {
        if opts.only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let outcome = pool.install(|| run(&ctx)).unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let elapsed = start.elapsed();
        log::info!("check {id} {name} took {:.3} s", elapsed.as_secs_f64());
        checks.push(CheckReport {
            id,
            name,
            passed: outcome.passed,
            details: outcome.details,
            counterexample: outcome.counterexample,
            elapsed,
        });
    }
    Ok(SuiteReport {
        profile: opts.profile,
        seed: opts.seed,
        checks,
    })
}

fn first_failure<T: Send>(items: Vec<Option<T>>) -> (usize, Option<T>) {
    let count = items.iter().filter(|x| x.is_some()).count();
    (count, items.into_iter().flatten().next())
}

fn describe(g: &MultiGraph) -> String {
    let edges: Vec<String> = g
        .pairs()
        .iter()
        .map(|p| format!("{}-{}x{}", g.label(p.u), g.label(p.v), p.mult))
        .collect();
    format!("[{}]", edges.join(" "))
}

fn min_cut_by_enumeration(g: &MultiGraph, s: usize, t: usize) -> u64 {
    let n = g.vertex_count();
    (0..1u64 << n)
        .filter(|m| m >> s & 1 == 1 && m >> t & 1 == 0)
        .map(|m| g.cut_size_mask(m))
        .min()
        .unwrap_or(0)
}

fn check_flow(ctx: &Context) -> Result<Outcome> {
    let graphs = ctx.corpus();
    let results: Vec<Result<(u64, Option<String>)>> = graphs
        .par_iter()
        .map(|g| {
            let n = g.vertex_count();
            let mut pairs = 0;
            for s in 0..n {
                for t in 0..n {
                    if s == t {
                        continue;
                    }
                    pairs += 1;
                    let flow = lambda_undirected(g, VertexId(s), VertexId(t))?;
                    let brute = min_cut_by_enumeration(g, s, t);
                    if flow.value != brute || g.cut_size(&flow.side)? != flow.value {
                        return Ok((pairs, Some(format!("{} λ(v{s},v{t}) flow {} cuts {brute}", describe(g), flow.value))));
                    }
                }
            }
            Ok((pairs, None))
        })
        .collect();
    let mut pairs = 0;
    let mut bad = Vec::new();
    for r in results {
        let (p, b) = r?;
        pairs += p;
        bad.push(b);
    }
    let mut details = format!("{} graphs, {pairs} ordered pairs", graphs.len());
    let mut ok = true;
    if ctx.full() {
        let regenerated = corpus::generate(CORPUS_MAX_VERTICES, CORPUS_MAX_EDGES);
        let same = regenerated == ctx.corpus;
        ok &= same;
        write!(details, ", corpus regeneration {}", if same { "matches fixture" } else { "DIFFERS" }).unwrap();
    }
    let (failures, first) = first_failure(bad);
    write!(details, ", {failures} mismatches").unwrap();
    Ok(Outcome::new(ok && failures == 0, details).with_counterexample(first))
}

fn check_wbo(ctx: &Context) -> Result<Outcome> {
    let graphs = ctx.corpus();
    let limits = ctx.opts.limits;
    let bad: Vec<Option<String>> = graphs
        .par_iter()
        .map(|g| match brute_wbo_exists(g, &limits) {
            Ok(d) => match is_well_balanced(g, &d) {
                Ok(w) if w.is_balanced() => None,
                _ => Some(format!("{} returned orientation is not well-balanced", describe(g))),
            },
            Err(e) => Some(format!("{}: {e}", describe(g))),
        })
        .collect();
    let (failures, first) = first_failure(bad);
    Ok(Outcome::new(failures == 0, format!("{} graphs, {failures} failures", graphs.len())).with_counterexample(first))
}

fn check_pairing_exists(ctx: &Context) -> Result<Outcome> {
    let graphs: Vec<&MultiGraph> = ctx.corpus().iter().filter(|g| odd_vertices(g).len() <= 6).collect();
    let limits = ctx.opts.limits;
    let bad: Vec<Option<String>> = graphs
        .par_iter()
        .map(|g| match brute_cut_admissible_pairing(g, &limits) {
            Ok(_) => None,
            Err(e) => Some(format!("{}: {e}", describe(g))),
        })
        .collect();
    let (failures, first) = first_failure(bad);
    Ok(Outcome::new(failures == 0, format!("{} graphs, {failures} failures", graphs.len())).with_counterexample(first))
}

fn check_ca_implies_oa(ctx: &Context) -> Result<Outcome> {
    let graphs = ctx.corpus();
    let limits = ctx.opts.limits;
    let per_graph: Vec<Result<(u64, u64, Option<String>)>> = graphs
        .par_iter()
        .map(|g| {
            let (mut pairs, mut admissible) = (0, 0);
            for f in enumerate_pairings(g) {
                if g.edge_count() + f.graph().edge_count() > limits.oa_max_edges as u64 {
                    continue;
                }
                pairs += 1;
                if decide_ca(g, &f, &limits)?.is_admissible() {
                    admissible += 1;
                    if !decide_oa(g, &f, &limits)?.is_admissible() {
                        return Ok((pairs, admissible, Some(format!("{} with F {}", describe(g), describe(f.graph())))));
                    }
                }
            }
            Ok((pairs, admissible, None))
        })
        .collect();
    let (mut pairs, mut admissible, mut bad) = (0, 0, Vec::new());
    for r in per_graph {
        let (p, a, b) = r?;
        pairs += p;
        admissible += a;
        bad.push(b);
    }
    let (failures, first) = first_failure(bad);
    Ok(Outcome::new(
        failures == 0,
        format!("{pairs} (graph, pairing) pairs, {admissible} cut-admissible, {failures} counterexamples"),
    )
    .with_counterexample(first))
}

fn check_oa_not_ca(ctx: &Context) -> Result<Outcome> {
    let doc = &ctx.oa_not_ca;
    let g = doc.graph()?;
    let f = doc.pairing_for(&g)?;
    let limits = ctx.opts.limits;
    let ca = decide_ca(&g, &f, &limits)?;
    let oa = decide_oa(&g, &f, &limits)?;
    let pinned_set_violates = match doc.set.as_ref() {
        Some(_) => matches!(check_cut_certificate(&g, &f, &doc.set_in(&g)?)?, CertificateCheck::Violation(_)),
        None => true,
    };
    let passed = oa.is_admissible() && !ca.is_admissible() && pinned_set_violates;
    Ok(Outcome::new(
        passed,
        format!(
            "fixture on {} vertices, {} edges: orientation-admissible {}, cut-admissible {}",
            g.vertex_count(),
            g.edge_count(),
            oa.is_admissible(),
            ca.is_admissible()
        ),
    ))
}

fn grid_for_check(ctx: &Context, alpha: u64, beta: u64) -> Result<(MultiGraph, GridSpec)> {
    let (w, spec) = augmented_grid(alpha, beta)?;
    if !ctx.opts.mutate_grid_padding {
        return Ok((w, spec));
    }
    // drop one copy of the first doubled edge
    let mut b = GraphBuilder::with_vertices_of(&w);
    let mut dropped = false;
    for p in w.pairs() {
        let mult = if !dropped && p.mult == 2 {
            dropped = true;
            1
        } else {
            p.mult
        };
        b.add_edge(p.u, p.v, mult)?;
    }
    Ok((b.build(), spec))
}

fn check_grid_connectivity(ctx: &Context) -> Result<Outcome> {
    let limits = ctx.opts.limits;
    let (w, spec) = grid_for_check(ctx, 3, 2)?;
    let small = verify_three_edge_connected(&w, &spec, limits.grid_exhaustive_max_vertices.max(w.vertex_count()));
    let mut ok = small.passed();
    let mut details = match &small.exhaustive {
        Some(e) => format!(
            "(3,2): {} sets, min cut {}, {} tight sets, port characterization {}",
            e.sets_scanned, e.min_cut, e.tight_sets, e.characterization_holds
        ),
        None => "(3,2): exhaustive scan skipped".into(),
    };
    let mut cx = None;
    let alphas: &[u64] = if ctx.full() { &[3, 5, 7] } else { &[3, 5] };
    let betas: &[u64] = if ctx.full() { &[2, 3, 4] } else { &[2, 3] };
    let mut grids = 0;
    for &a in alphas {
        for &b in betas {
            let (w, spec) = grid_for_check(ctx, a, b)?;
            let rep = verify_three_edge_connected(&w, &spec, 0);
            grids += 1;
            if !rep.passed() {
                ok = false;
                cx.get_or_insert(format!(
                    "({a},{b}): min λ {}, degree profile {}",
                    rep.min_lambda, rep.degree_profile_ok
                ));
            }
        }
    }
    if !small.degree_profile_ok {
        cx.get_or_insert("(3,2): degree profile broken".into());
    }
    write!(details, "; {grids} grids flow-certified").unwrap();
    Ok(Outcome::new(ok, details).with_counterexample(cx))
}

fn check_grid_separation(ctx: &Context) -> Result<Outcome> {
    let (w, spec) = augmented_grid(3, 2)?;
    let ex = separation_exhaustive(&w, &spec)?;
    let mut ok = ex.failures == 0 && ex.hypothesis_met > 0;
    let mut details = format!(
        "(3,2): {} sets, {} meet the hypothesis, {} failures",
        ex.sets_checked, ex.hypothesis_met, ex.failures
    );
    let grids: &[(u64, u64)] = if ctx.full() { &[(5, 3), (7, 2)] } else { &[(5, 3)] };
    for &(a, b) in grids {
        let (w, spec) = augmented_grid(a, b)?;
        let rep = separation_structured(&w, &spec)?;
        ok &= rep.failures == 0 && rep.hypothesis_met > 0;
        write!(
            details,
            "; ({a},{b}): {} sets, {} meet the hypothesis, {} failures",
            rep.sets_checked, rep.hypothesis_met, rep.failures
        )
        .unwrap();
    }
    Ok(Outcome::new(ok, details))
}

/// Whether some `X ⊆ V_H ∪ {s}` has `d_{G1}(X + q) − d_H(X ∩ V_H) < M`.
fn g1_has_violating_set(inst: &AmaxcutInstance) -> Result<bool> {
    let g1 = build_g1(inst)?;
    let others: Vec<VertexId> = std::iter::once(g1.s).chain(g1.h_vertices.iter().copied()).collect();
    for mask in 0..1u64 << others.len() {
        let mut x = VertexSet::empty(g1.graph.vertex_count());
        x.insert(g1.q);
        for (i, &v) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                x.insert(v);
            }
        }
        if g1.local_value(inst.graph(), &x)? < g1.constants.big_m as i64 {
            return Ok(true);
        }
    }
    Ok(false)
}

fn check_maxcut_equivalences(ctx: &Context) -> Result<Outcome> {
    let limits = ctx.opts.limits;
    let max_edges = if ctx.full() { 5 } else { 4 };
    let graphs: Vec<MultiGraph> = (2..=4)
        .flat_map(|n| corpus::graphs_on(n, max_edges, false))
        .filter(|g| g.edge_count() >= 3)
        .collect();
    let per_graph: Vec<Result<(u64, Option<String>)>> = graphs
        .par_iter()
        .map(|h| {
            let (best, _) = brute_maxcut(h, &limits)?;
            let mut count = 0;
            for k in 0..=h.edge_count() {
                count += 1;
                let inst = maxcut_to_amaxcut(h, k)?;
                let doubled = brute_maxcut(inst.graph(), &limits)?.0 > inst.threshold();
                let scan = g1_has_violating_set(&inst)?;
                let direct = best > k;
                if direct != doubled || direct != scan {
                    return Ok((
                        count,
                        Some(format!("{} k={k}: maxcut {direct}, doubled {doubled}, intermediate scan {scan}", describe(h))),
                    ));
                }
            }
            Ok((count, None))
        })
        .collect();
    let (mut instances, mut bad) = (0, Vec::new());
    for r in per_graph {
        let (c, b) = r?;
        instances += c;
        bad.push(b);
    }
    let (failures, first) = first_failure(bad);
    Ok(Outcome::new(
        failures == 0,
        format!("{} graphs, {instances} thresholds, {failures} disagreements", graphs.len()),
    )
    .with_counterexample(first))
}

fn dumbbell_instance(k: u64) -> Result<AmaxcutInstance> {
    let h = MultiGraph::from_edges(["a", "b"], [("a", "b", 6)])?;
    AmaxcutInstance::new(h, k)
}

fn check_pipeline(ctx: &Context) -> Result<Outcome> {
    let limits = ctx.opts.limits;
    let mut ok = true;
    let mut notes: Vec<String> = Vec::new();
    let mut cx = None;
    let mut fail = |ok: &mut bool, what: String| {
        *ok = false;
        cx.get_or_insert(what);
    };
    let samples = if ctx.full() { 200 } else { 20 };
    for k in [4u64, 6] {
        let ca = build_ca_instance(&dumbbell_instance(k)?)?;
        let c = ca.constants;
        let g2 = &ca.g2;
        let sum = g2.sum(ca.pairing.graph())?;
        if !sum.is_eulerian() {
            fail(&mut ok, format!("k={k}: G2 + F is not eulerian"));
        }
        if g2.deg(ca.q) != c.big_m {
            fail(&mut ok, format!("k={k}: d(q) = {} ≠ M = {}", g2.deg(ca.q), c.big_m));
        }
        if ca.contract()? != ca.g1.graph {
            fail(&mut ok, format!("k={k}: contraction differs from the intermediate graph"));
        }
        let lambda_qt = lambda_undirected(g2, ca.q, ca.t)?.value;
        if lambda_qt != c.big_m {
            fail(&mut ok, format!("k={k}: λ(q,t) = {lambda_qt} ≠ M"));
        }
        let conn = edge_connectivity(&ca.g1.graph);
        if conn < 4 {
            fail(&mut ok, format!("k={k}: intermediate graph is only {conn}-edge-connected"));
        }
        let notbig = check_notbig(&ca, ctx.opts.seed ^ k, samples)?;
        if notbig.failures > 0 || !notbig.routed {
            fail(&mut ok, format!("k={k}: d_G ≥ d_F fails ({} sets, routed {})", notbig.failures, notbig.routed));
        }
        let mut formula_misses = 0;
        for x in random_gadget_sets(&ca, ctx.opts.seed ^ (k << 8), if ctx.full() { 12 } else { 4 }) {
            if r_value(g2, &x)? != ca.degree_formula(&x) {
                formula_misses += 1;
            }
        }
        if formula_misses > 0 {
            fail(&mut ok, format!("k={k}: demand formula off on {formula_misses} gadget sets"));
        }
        // every selection of {s} ∪ V_H lifted, identity and violation status
        let others = [ca.g1.s, ca.g1.h_vertices[0], ca.g1.h_vertices[1]];
        let mut violating = 0;
        for mask in 0..8u64 {
            let mut x = VertexSet::empty(ca.g1.graph.vertex_count());
            for (i, &v) in others.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x.insert(v);
                }
            }
            let lifted = lift_cut(&ca, &x)?;
            if lifted.g1_value != lifted.g2_value {
                fail(&mut ok, format!("k={k}: lifted values differ on {:?}", x.labels(&ca.g1.graph)));
            }
            let cert = check_cut_certificate(g2, &ca.pairing, &lifted.set)?;
            let violates = matches!(cert, CertificateCheck::Violation(_));
            if violates != lifted.violates(&c) {
                fail(&mut ok, format!("k={k}: certificate disagrees with the lifted value on {:?}", x.labels(&ca.g1.graph)));
            }
            violating += u64::from(violates);
        }
        let maxcut = brute_maxcut(dumbbell_instance(k)?.graph(), &limits)?.0;
        if k == 4 {
            let x = VertexSet::from_labels(&ca.g1.graph, &["s", "a"])?;
            let lifted = lift_cut(&ca, &x)?;
            let margin = lifted.g2_value;
            if margin != 6 || !lifted.violates(&c) {
                fail(&mut ok, format!("k=4: lifted {{s,a}} has margin {margin}"));
            }
            let attack = attack_orientation(g2, &ca.pairing, &lifted.set)?;
            let combined = attack.counterexample.combined();
            let directed = lambda_directed(&attack.counterexample.g_orientation, ca.q, ca.t)?.value;
            if !combined.is_eulerian() || directed > 3 || 2 * directed >= c.big_m {
                fail(&mut ok, format!("k=4: attack gives λ(q,t) = {directed}, eulerian {}", combined.is_eulerian()));
            }
            notes.push(format!(
                "k=4: M={} |V(G2)|={} margin {margin} < {} attack λ(q,t)={directed} < {}; {violating}/8 lifted sets violate",
                c.big_m,
                g2.vertex_count(),
                c.big_m,
                c.big_m / 2
            ));
        } else {
            if maxcut <= k && violating > 0 {
                fail(&mut ok, format!("k={k}: negative seed but {violating} lifted sets violate"));
            }
            notes.push(format!(
                "k={k}: M={} |V(G2)|={} maxcut {maxcut} ≤ {k}, {violating}/8 lifted sets violate",
                c.big_m,
                g2.vertex_count()
            ));
        }
        notes.push(format!(
            "k={k}: {} sets with d_G ≥ d_F, routed {}, G1 {conn}-edge-connected",
            notbig.sets_checked, notbig.routed
        ));
    }
    Ok(Outcome::new(ok, notes.join("; ")).with_counterexample(cx))
}

/// Compares the flow-based extension with exhaustive search for one
/// orientation of `F`. `Ok(Some(true))` marks an infeasible instance whose
/// certificate was verified.
fn extension_agrees(g: &MultiGraph, f_or: &Orientation, limits: &Limits) -> Result<Option<bool>> {
    let fast = extend_to_eulerian(&Arc::new(g.clone()), f_or)?;
    let slow = brute_eulerian_extension(g, f_or, limits)?;
    Ok(match (&fast, &slow) {
        (ExtensionOutcome::Extended(d), Some(_)) => g
            .vertices()
            .all(|v| d.out_degree(v) + f_or.out_degree(v) == d.in_degree(v) + f_or.in_degree(v))
            .then_some(false),
        (ExtensionOutcome::Infeasible(x), None) => (!check_ff_condition(g, f_or, x)?).then_some(true),
        _ => None,
    })
}

/// Every orientation of the pairing, in forward-count order.
fn all_orientations(f: &MultiGraph) -> Vec<Orientation> {
    let arc = Arc::new(f.clone());
    let k = f.pairs().len();
    (0..1u64 << k)
        .map(|mask| {
            let forward = (0..k).map(|i| mask >> i & 1).collect();
            Orientation::new(Arc::clone(&arc), forward).expect("pairing edges are simple")
        })
        .collect()
}

fn check_extension(ctx: &Context) -> Result<Outcome> {
    let limits = ctx.opts.limits;
    // corpus graphs with the low-to-high orientation of each pairing
    let mut jobs: Vec<(MultiGraph, Orientation)> = Vec::new();
    for g in ctx.corpus().iter().filter(|g| g.edge_count() <= 14) {
        for f in enumerate_pairings(g) {
            jobs.push((g.clone(), Orientation::all_forward(Arc::new(f.into_graph()))));
        }
    }
    let canonical = jobs.len();
    // every orientation of every pairing on the pinned fixture and on
    // disconnected graphs, where the extension can fail
    let mut extra: Vec<MultiGraph> = vec![ctx.oa_not_ca.graph()?];
    extra.extend(corpus::graphs_on(4, 4, false).into_iter().filter(|g| !g.is_connected()));
    for g in extra {
        for f in enumerate_pairings(&g) {
            for o in all_orientations(f.graph()) {
                jobs.push((g.clone(), o));
            }
        }
    }
    let results: Vec<Result<Option<bool>>> = jobs
        .par_iter()
        .map(|(g, f)| extension_agrees(g, f, &limits))
        .collect();
    let (mut infeasible, mut bad) = (0, Vec::new());
    for (r, (g, f)) in results.into_iter().zip(&jobs) {
        match r? {
            Some(cert) => {
                infeasible += u64::from(cert);
                bad.push(None);
            }
            None => bad.push(Some(format!("{} with F {}", describe(g), describe(f.graph())))),
        }
    }
    let (failures, first) = first_failure(bad);
    Ok(Outcome::new(
        failures == 0,
        format!(
            "{canonical} canonical and {} exhaustive (graph, pairing orientation) runs, {infeasible} infeasible with verified certificates, {failures} disagreements",
            jobs.len() - canonical
        ),
    )
    .with_counterexample(first))
}

fn bound_vectors(n: usize, max: u64) -> impl Iterator<Item = (Vec<u64>, Vec<u64>)> {
    let base = (max + 1) * (max + 1);
    let total = base.pow(n as u32);
    (0..total).map(move |mut code| {
        let (mut out, mut inn) = (vec![0; n], vec![0; n]);
        for v in 0..n {
            let digit = code % base;
            code /= base;
            out[v] = digit % (max + 1);
            inn[v] = digit / (max + 1);
        }
        (out, inn)
    })
}

fn bwbo_laco_agree(inst: &BwboInstance, limits: &Limits) -> Result<std::result::Result<bool, String>> {
    let left = brute_bwbo(inst, limits)?;
    let laco = bwbo_to_laco(inst)?;
    let right = brute_laco(&laco, limits)?;
    match (&left, &right) {
        (Some(d), Some(d2)) => {
            let lifted = lift_bwbo_witness(inst, &laco, d)?;
            if let Some(miss) = laco.first_unmet(&lifted)? {
                return Ok(Err(format!("lifted witness misses requirement {miss:?}")));
            }
            let back = project_laco_witness(&laco, d2)?;
            if let Some(msg) = inst.bounds_met(&back) {
                return Ok(Err(format!("projected witness: {msg}")));
            }
            if !is_well_balanced(&inst.graph, &back)?.is_balanced() {
                return Ok(Err("projected witness is not well-balanced".into()));
            }
            Ok(Ok(true))
        }
        (None, None) => Ok(Ok(false)),
        _ => Ok(Err(format!("bwbo {} but laco {}", left.is_some(), right.is_some()))),
    }
}

fn check_bwbo_laco(ctx: &Context) -> Result<Outcome> {
    let limits = ctx.opts.limits;
    let max_edges = if ctx.full() { 4 } else { 3 };
    let graphs: Vec<MultiGraph> = (2..=max_edges as usize + 1)
        .flat_map(|n| corpus::graphs_on(n, max_edges, true))
        .filter(|g| g.edge_count() >= 1)
        .collect();
    let jobs: Vec<(usize, Vec<u64>, Vec<u64>)> = graphs
        .iter()
        .enumerate()
        .flat_map(|(i, g)| bound_vectors(g.vertex_count(), 2).map(move |(o, n)| (i, o, n)))
        .collect();
    let results: Vec<Result<std::result::Result<bool, String>>> = jobs
        .par_iter()
        .map(|(i, out, inn)| {
            let inst = BwboInstance::new(graphs[*i].clone(), out.clone(), inn.clone())?;
            Ok(bwbo_laco_agree(&inst, &limits)?.map_err(|e| format!("{} bounds out {out:?} in {inn:?}: {e}", describe(&graphs[*i]))))
        })
        .collect();
    let (mut yes, mut bad) = (0, Vec::new());
    for r in results {
        match r? {
            Ok(found) => {
                yes += u64::from(found);
                bad.push(None);
            }
            Err(e) => bad.push(Some(e)),
        }
    }
    let (failures, first) = first_failure(bad);
    Ok(Outcome::new(
        failures == 0,
        format!(
            "{} graphs, {} bounded instances ({yes} solvable), {failures} disagreements",
            graphs.len(),
            jobs.len()
        ),
    )
    .with_counterexample(first))
}

/// Reruns the parallel and seeded pieces on one and four workers.
fn check_thread_independence(ctx: &Context) -> Result<Outcome> {
    let run = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        pool.install(|| {
            let (w, spec) = augmented_grid(5, 3)?;
            let grid = verify_three_edge_connected(&w, &spec, 0);
            let ca = build_ca_instance(&dumbbell_instance(4)?)?;
            let notbig = check_notbig(&ca, ctx.opts.seed, 16)?;
            let sets: Vec<Vec<usize>> = random_gadget_sets(&ca, ctx.opts.seed, 4)
                .iter()
                .map(|x| x.iter().map(|v| v.0).take(8).collect())
                .collect();
            let wbo: Vec<Vec<u64>> = ctx.corpus()[..ctx.corpus().len().min(200)]
                .par_iter()
                .map(|g| brute_wbo_exists(g, &ctx.opts.limits).map(|d| d.forward_counts().to_vec()))
                .collect::<Result<_>>()?;
            Ok(format!("{grid:?} {notbig:?} {sets:?} {wbo:?}"))
        })
    };
    let one = run(1)?;
    let four = run(4)?;
    Ok(Outcome::new(
        one == four,
        format!("grid flows, sampled sets and oracle witnesses {} across 1 and 4 workers", if one == four { "identical" } else { "DIFFER" }),
    ))
}

/// First pairing that `decide_oa` accepts and `decide_ca` rejects, over the
/// corpus and then six-vertex graphs with up to six edge instances.
pub fn search_oa_not_ca(limits: &Limits) -> Result<Option<crate::oracles::OaNotCa>> {
    let first = crate::oracles::find_oa_not_ca(corpus::generate(CORPUS_MAX_VERTICES, CORPUS_MAX_EDGES), limits)?;
    if first.is_some() {
        return Ok(first);
    }
    crate::oracles::find_oa_not_ca(corpus::graphs_on(6, 6, true), limits)
}

/// The fixture document for a search hit.
pub fn oa_not_ca_document(hit: &crate::oracles::OaNotCa) -> Document {
    Document::from_graph("oa-not-ca", &hit.graph)
        .with_pairing(&hit.pairing)
        .with_set(&hit.graph, &hit.violation.set)
}

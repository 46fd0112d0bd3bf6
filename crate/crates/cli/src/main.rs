use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use wellbalanced::corpus;
use wellbalanced::io::{parse_label_list, Document};
use wellbalanced::oracles::{brute_bwbo, brute_cut_admissible_pairing, brute_laco, brute_maxcut, brute_wbo_exists};
use wellbalanced::reductions::{
    build_ca_instance, build_g1, bwbo_to_laco, lift_bwbo_witness, lift_cut, maxcut_to_amaxcut, project_laco_witness,
    AmaxcutInstance, CaInstance,
};
use wellbalanced::suite::{self, Profile, SuiteOptions};
use wellbalanced::{
    attack_orientation, augmented_grid, check_cut_certificate, decide_ca, decide_oa, extend_to_eulerian,
    lambda_directed, lambda_undirected, r_value, CaDecision, CertificateCheck, Limits, MultiGraph, OaDecision,
    VertexSet,
};

/// Cut conditions, pairings and well-balanced orientations.
///
/// Exit status: 0 for yes/pass, 1 for no/violation, 2 for errors.
#[derive(Parser)]
#[command(name = "wellbalanced", version)]
struct Cli {
    /// Worker threads for flow batteries and searches (0 = all cores).
    #[arg(long, global = true, env = "WELLBALANCED_THREADS", default_value_t = 0)]
    threads: usize,
    /// TOML file overriding the size limits of the exhaustive procedures.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate gadgets and corpora.
    #[command(subcommand)]
    Gen(Gen),
    /// Apply a reduction to an instance.
    #[command(subcommand)]
    Reduce(Reduce),
    /// Translate sets or witnesses forward through a reduction.
    #[command(subcommand)]
    Lift(Lift),
    /// Translate witnesses back through a reduction.
    #[command(subcommand)]
    Project(Project),
    /// Local edge- or arc-connectivity between two vertices.
    Lambda {
        instance: PathBuf,
        s: String,
        t: String,
        /// Orientation file; computes arc-connectivity instead.
        #[arg(long)]
        directed: Option<PathBuf>,
    },
    /// Demand R(X) of a cut.
    Rvalue {
        instance: PathBuf,
        #[arg(long)]
        set: String,
    },
    #[command(subcommand)]
    Check(CheckCmd),
    /// Decide cut- or orientation-admissibility of a pairing.
    #[command(subcommand)]
    Decide(Decide),
    /// Build an eulerian orientation whose restriction fails to be
    /// well-balanced, from a set violating the cut condition.
    Attack {
        graph: PathBuf,
        pairing: PathBuf,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        out: Out,
    },
    /// Complete an orientation of F to an eulerian orientation of G + F.
    ExtendEulerian {
        graph: PathBuf,
        orientation: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Exhaustive solvers.
    Solve {
        #[arg(value_enum)]
        problem: Problem,
        instance: PathBuf,
        /// Exhaustive search (the only method provided).
        #[arg(long, required = true)]
        brute: bool,
        #[command(flatten)]
        out: Out,
    },
    #[command(subcommand)]
    Find(Find),
    /// Run the acceptance suite.
    Suite {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Comma-separated check ids.
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Remove one padding edge from every checked grid.
        #[arg(long)]
        mutate_grid_padding: bool,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Out {
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Gen {
    /// Augmented (α,β)-grid; with --out, the port labels go to `<out>.ports.json`.
    Grid {
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        beta: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Small-graph corpus with checksum header.
    Corpus {
        #[arg(long, default_value_t = suite::CORPUS_MAX_VERTICES)]
        max_vertices: usize,
        #[arg(long, default_value_t = suite::CORPUS_MAX_EDGES)]
        max_edges: u64,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Reduce {
    MaxcutToAmaxcut {
        instance: PathBuf,
        /// Threshold; defaults to the instance's `threshold`.
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        out: Out,
    },
    AmaxcutToG1 {
        instance: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    AmaxcutToCa {
        instance: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    BwboToLaco {
        instance: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Lift {
    /// Lift a selection of `s` and seed vertices to the pairing instance.
    Cut {
        instance: PathBuf,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        out: Out,
    },
    BwboWitness {
        bwbo: PathBuf,
        laco: PathBuf,
        orientation: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum Project {
    LacoWitness {
        laco: PathBuf,
        orientation: PathBuf,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Check the cut condition on one set.
    CaCert {
        graph: PathBuf,
        pairing: PathBuf,
        #[arg(long)]
        set: String,
    },
}

#[derive(Subcommand)]
enum Decide {
    Ca { graph: PathBuf, pairing: PathBuf },
    Oa { graph: PathBuf, pairing: PathBuf },
}

#[derive(Subcommand)]
enum Find {
    /// First cut-admissible pairing.
    CaPairing {
        instance: PathBuf,
        #[command(flatten)]
        out: Out,
    },
    /// Search small graphs for a pairing that is orientation- but not cut-admissible.
    OaNotCa {
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Problem {
    Maxcut,
    Bwbo,
    Laco,
    Wbo,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_limits(path: Option<&Path>) -> Result<Limits> {
    match path {
        None => Ok(Limits::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

fn read(path: &Path) -> Result<Document> {
    Document::read(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &Out, doc: &Document) -> Result<()> {
    match &out.out {
        Some(p) => doc.write(p).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{}", doc.to_text()),
    }
    Ok(())
}

/// Verdict line on stdout, or on stderr when a document went to stdout.
fn verdict(cli: &Cli, to_stderr: bool, text: String, value: serde_json::Value) {
    let line = if cli.json { value.to_string() } else { text };
    if to_stderr {
        eprintln!("{line}");
    } else {
        println!("{line}");
    }
}

fn set_of(g: &MultiGraph, list: &str) -> Result<VertexSet> {
    Ok(VertexSet::from_labels(g, &parse_label_list(list))?)
}

fn amaxcut_from(doc: &Document) -> Result<AmaxcutInstance> {
    let k = doc.threshold.context("instance has no threshold")?;
    Ok(AmaxcutInstance::new(doc.graph()?, k)?)
}

fn seed_document(inst: &AmaxcutInstance) -> serde_json::Value {
    let doc = Document::from_graph("amaxcut", inst.graph());
    json!({
        "vertices": doc.vertices,
        "edges": doc.edges,
        "threshold": inst.threshold(),
    })
}

fn ca_document(ca: &CaInstance) -> Document {
    let c = ca.constants;
    Document::from_graph("ca-instance", &ca.g2)
        .with_pairing(&ca.pairing)
        .with_meta(json!({
            "reduction": "amaxcut-to-ca",
            "n": c.n, "m": c.m, "k": c.k, "M": c.big_m,
            "seed": seed_document(&ca.seed),
        }))
}

/// Rebuilds the pairing instance from its recorded seed and checks it
/// against the file.
fn ca_from(doc: &Document) -> Result<CaInstance> {
    let seed = doc
        .meta
        .as_ref()
        .and_then(|m| m.get("seed"))
        .context("instance carries no seed; produce it with `reduce amaxcut-to-ca`")?;
    let mut seed_doc: Document = serde_json::from_value(json!({
        "version": 1,
        "vertices": seed["vertices"],
        "edges": seed["edges"],
        "threshold": seed["threshold"],
    }))?;
    seed_doc.kind = "amaxcut".into();
    let ca = build_ca_instance(&amaxcut_from(&seed_doc)?)?;
    if doc.graph()? != ca.g2 || doc.pairing_for(&ca.g2)? != ca.pairing {
        bail!("instance does not match the construction from its seed");
    }
    Ok(ca)
}

fn run(cli: &Cli) -> Result<u8> {
    let limits = load_limits(cli.config.as_deref())?;
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global().ok();
    }
    match &cli.command {
        Command::Gen(Gen::Grid { alpha, beta, out }) => {
            let (w, spec) = augmented_grid(*alpha, *beta)?;
            let doc = Document::from_graph("grid", &w).with_meta(json!({"alpha": alpha, "beta": beta}));
            emit(out, &doc)?;
            if let Some(p) = &out.out {
                let lbl = |vs: Vec<wellbalanced::VertexId>| vs.into_iter().map(|v| w.label(v).to_owned()).collect::<Vec<_>>();
                let ports = json!({
                    "L": lbl(spec.l_family(spec.beta)),
                    "P": lbl(spec.p_family(spec.beta)),
                });
                let mut side = p.clone().into_os_string();
                side.push(".ports.json");
                std::fs::write(&side, serde_json::to_string_pretty(&ports)? + "\n")?;
            }
            Ok(0)
        }
        Command::Gen(Gen::Corpus { max_vertices, max_edges, out }) => {
            let text = corpus::write_corpus(&corpus::generate(*max_vertices, *max_edges));
            match &out.out {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Reduce(r) => reduce(cli, r),
        Command::Lift(Lift::Cut { instance, set, out }) => {
            let ca = ca_from(&read(instance)?)?;
            let x = VertexSet::from_labels(&ca.g1.graph, &parse_label_list(set))?;
            let lifted = lift_cut(&ca, &x)?;
            let violates = lifted.violates(&ca.constants);
            let doc = Document::from_graph("lifted-cut", &ca.g2)
                .with_pairing(&ca.pairing)
                .with_set(&ca.g2, &lifted.set)
                .with_meta(json!({
                    "intermediate_value": lifted.g1_value,
                    "value": lifted.g2_value,
                    "M": ca.constants.big_m,
                    "violates": violates,
                }));
            emit(out, &doc)?;
            verdict(
                cli,
                out.out.is_none(),
                format!(
                    "lifted {} vertices: d_G - d_F = {} (intermediate {}), M = {}, {}",
                    lifted.set.len(),
                    lifted.g2_value,
                    lifted.g1_value,
                    ca.constants.big_m,
                    if violates { "violates" } else { "does not violate" }
                ),
                json!({"value": lifted.g2_value, "intermediate_value": lifted.g1_value, "M": ca.constants.big_m, "violates": violates}),
            );
            Ok(0)
        }
        Command::Lift(Lift::BwboWitness { bwbo, laco, orientation, out }) => {
            let inst = read(bwbo)?.bwbo()?;
            let laco = read(laco)?.laco()?;
            let d = read(orientation)?.orientation_of(&Arc::new(inst.graph.clone()))?;
            let lifted = lift_bwbo_witness(&inst, &laco, &d)?;
            emit(out, &Document::from_orientation("orientation", &lifted))?;
            Ok(0)
        }
        Command::Project(Project::LacoWitness { laco, orientation, out }) => {
            let laco = read(laco)?.laco()?;
            let d = read(orientation)?.orientation_of(&Arc::new(laco.graph.clone()))?;
            let back = project_laco_witness(&laco, &d)?;
            emit(out, &Document::from_orientation("orientation", &back))?;
            Ok(0)
        }
        Command::Lambda { instance, s, t, directed } => {
            let g = Arc::new(read(instance)?.graph()?);
            let (sv, tv) = (g.vertex(s)?, g.vertex(t)?);
            let res = match directed {
                Some(p) => lambda_directed(&read(p)?.orientation_of(&g)?, sv, tv)?,
                None => lambda_undirected(&g, sv, tv)?,
            };
            let side = res.side.labels(&g);
            verdict(
                cli,
                false,
                format!("lambda({s}, {t}) = {}\ncut side: {}", res.value, side.join(",")),
                json!({"value": res.value, "side": side}),
            );
            Ok(0)
        }
        Command::Rvalue { instance, set } => {
            let g = read(instance)?.graph()?;
            let r = r_value(&g, &set_of(&g, set)?)?;
            verdict(cli, false, format!("R = {r}"), json!({"r": r}));
            Ok(0)
        }
        Command::Check(CheckCmd::CaCert { graph, pairing, set }) => {
            let g = read(graph)?.graph()?;
            let f = read(pairing)?.pairing_for(&g)?;
            match check_cut_certificate(&g, &f, &set_of(&g, set)?)? {
                CertificateCheck::Satisfied { cut_g, cut_f, r } => {
                    verdict(
                        cli,
                        false,
                        format!("satisfied: d_G = {cut_g}, d_F = {cut_f}, R = {r}"),
                        json!({"satisfied": true, "cut_g": cut_g, "cut_f": cut_f, "r": r}),
                    );
                    Ok(0)
                }
                CertificateCheck::Violation(v) => {
                    verdict(
                        cli,
                        false,
                        format!("violation: d_G = {}, d_F = {}, R = {}", v.cut_g, v.cut_f, v.r),
                        json!({"satisfied": false, "cut_g": v.cut_g, "cut_f": v.cut_f, "r": v.r}),
                    );
                    Ok(1)
                }
            }
        }
        Command::Decide(Decide::Ca { graph, pairing }) => {
            let g = read(graph)?.graph()?;
            let f = read(pairing)?.pairing_for(&g)?;
            match decide_ca(&g, &f, &limits)? {
                CaDecision::CutAdmissible => {
                    verdict(cli, false, "cut-admissible".into(), json!({"admissible": true}));
                    Ok(0)
                }
                CaDecision::Violated(v) => {
                    let set = v.set.labels(&g);
                    verdict(
                        cli,
                        false,
                        format!("violated by {{{}}}: d_G = {}, d_F = {}, R = {}", set.join(","), v.cut_g, v.cut_f, v.r),
                        json!({"admissible": false, "set": set, "cut_g": v.cut_g, "cut_f": v.cut_f, "r": v.r}),
                    );
                    Ok(1)
                }
            }
        }
        Command::Decide(Decide::Oa { graph, pairing }) => {
            let g = read(graph)?.graph()?;
            let f = read(pairing)?.pairing_for(&g)?;
            match decide_oa(&g, &f, &limits)? {
                OaDecision::OrientationAdmissible => {
                    verdict(cli, false, "orientation-admissible".into(), json!({"admissible": true}));
                    Ok(0)
                }
                OaDecision::Counterexample(c) => {
                    let (s, t) = (g.label(c.source), g.label(c.sink));
                    verdict(
                        cli,
                        false,
                        format!("counterexample: lambda({s}, {t}) = {} < {}", c.directed, c.required),
                        json!({"admissible": false, "source": s, "sink": t, "directed": c.directed, "required": c.required}),
                    );
                    Ok(1)
                }
            }
        }
        Command::Attack { graph, pairing, set, out } => {
            let g = read(graph)?.graph()?;
            let f = read(pairing)?.pairing_for(&g)?;
            let a = attack_orientation(&g, &f, &set_of(&g, set)?)?;
            let c = &a.counterexample;
            emit(out, &Document::from_orientation("orientation", &c.combined()))?;
            let (s, t) = (g.label(c.source), g.label(c.sink));
            verdict(
                cli,
                out.out.is_none(),
                format!("lambda({s}, {t}) = {} < {} in the restriction to G", c.directed, c.required),
                json!({"source": s, "sink": t, "directed": c.directed, "required": c.required, "out_cut": a.out_cut}),
            );
            Ok(1)
        }
        Command::ExtendEulerian { graph, orientation, out } => {
            let g = Arc::new(read(graph)?.graph()?);
            let f = read(orientation)?.orientation()?;
            let f = reorder(&g, &f)?;
            match extend_to_eulerian(&g, &f)? {
                wellbalanced::ExtensionOutcome::Extended(d) => {
                    emit(out, &Document::from_orientation("orientation", &d))?;
                    Ok(0)
                }
                wellbalanced::ExtensionOutcome::Infeasible(x) => {
                    let set = x.labels(&g);
                    let doc = Document::new("certificate", g.labels()).with_set(&g, &x);
                    emit(out, &doc)?;
                    verdict(
                        cli,
                        out.out.is_none(),
                        format!("no extension; violating set {{{}}}", set.join(",")),
                        json!({"extended": false, "set": set}),
                    );
                    Ok(1)
                }
            }
        }
        Command::Solve { problem, instance, out, .. } => solve(cli, *problem, instance, out, &limits),
        Command::Find(Find::CaPairing { instance, out }) => {
            let g = read(instance)?.graph()?;
            let f = brute_cut_admissible_pairing(&g, &limits)?;
            emit(out, &Document::from_graph("instance", &g).with_pairing(&f))?;
            Ok(0)
        }
        Command::Find(Find::OaNotCa { out }) => match suite::search_oa_not_ca(&limits)? {
            Some(hit) => {
                emit(out, &suite::oa_not_ca_document(&hit))?;
                Ok(0)
            }
            None => {
                verdict(cli, false, "no instance found".into(), json!({"found": false}));
                Ok(1)
            }
        },
        Command::Suite { quick: _, full, seed, only, fixtures, mutate_grid_padding, out } => {
            let only = only
                .as_deref()
                .map(|s| parse_label_list(s).iter().map(|t| t.parse::<u32>()).collect::<Result<Vec<_>, _>>())
                .transpose()
                .context("--only takes comma-separated check numbers")?;
            let opts = SuiteOptions {
                profile: if *full { Profile::Full } else { Profile::Quick },
                seed: *seed,
                threads: cli.threads,
                only,
                fixtures: fixtures.clone().unwrap_or_else(suite::default_fixtures_dir),
                limits,
                mutate_grid_padding: *mutate_grid_padding,
            };
            let report = suite::run_suite(&opts)?;
            let text = if cli.json { report.to_json() } else { report.to_text() };
            print!("{text}");
            if let Some(p) = out {
                std::fs::write(p, &text)?;
            }
            eprint!("{}", report.timings());
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}

/// Re-expresses an orientation read from a file over the vertex order of `g`.
fn reorder(g: &MultiGraph, f: &wellbalanced::Orientation) -> Result<wellbalanced::Orientation> {
    let fg = f.graph();
    let labels = g.labels().to_vec();
    let arcs = f
        .arcs()
        .map(|(a, b, c)| Ok((g.vertex(fg.label(a))?, g.vertex(fg.label(b))?, c)))
        .collect::<Result<Vec<_>>>()?;
    if fg.vertex_count() != g.vertex_count() {
        bail!("orientation is over {} vertices, graph has {}", fg.vertex_count(), g.vertex_count());
    }
    Ok(wellbalanced::Orientation::from_arcs(&labels, arcs)?)
}

fn reduce(cli: &Cli, r: &Reduce) -> Result<u8> {
    match r {
        Reduce::MaxcutToAmaxcut { instance, k, out } => {
            let doc = read(instance)?;
            let k = k.or(doc.threshold).context("give --k or a threshold in the instance")?;
            let inst = maxcut_to_amaxcut(&doc.graph()?, k)?;
            let mut d = Document::from_graph("amaxcut", inst.graph());
            d.threshold = Some(inst.threshold());
            emit(out, &d)?;
        }
        Reduce::AmaxcutToG1 { instance, out } => {
            let inst = amaxcut_from(&read(instance)?)?;
            let g1 = build_g1(&inst)?;
            let c = g1.constants;
            emit(
                out,
                &Document::from_graph("intermediate", &g1.graph)
                    .with_meta(json!({"n": c.n, "m": c.m, "k": c.k, "M": c.big_m})),
            )?;
        }
        Reduce::AmaxcutToCa { instance, out } => {
            let ca = build_ca_instance(&amaxcut_from(&read(instance)?)?)?;
            emit(out, &ca_document(&ca))?;
            let c = ca.constants;
            verdict(
                cli,
                out.out.is_none(),
                format!(
                    "{} vertices, {} edges, {} pairing edges, M = {}",
                    ca.g2.vertex_count(),
                    ca.g2.edge_count(),
                    ca.pairing.graph().edge_count(),
                    c.big_m
                ),
                json!({"vertices": ca.g2.vertex_count(), "edges": ca.g2.edge_count(), "M": c.big_m}),
            );
        }
        Reduce::BwboToLaco { instance, out } => {
            let inst = read(instance)?.bwbo()?;
            emit(out, &Document::from_laco(&bwbo_to_laco(&inst)?))?;
        }
    }
    Ok(0)
}

fn solve(cli: &Cli, problem: Problem, instance: &Path, out: &Out, limits: &Limits) -> Result<u8> {
    let doc = read(instance)?;
    let found = match problem {
        Problem::Maxcut => {
            let g = doc.graph()?;
            let (value, x) = brute_maxcut(&g, limits)?;
            let positive = doc.threshold.map(|k| value > k);
            emit(out, &Document::new("cut", g.labels()).with_set(&g, &x))?;
            verdict(
                cli,
                out.out.is_none(),
                format!("max cut = {value}"),
                json!({"value": value, "positive": positive}),
            );
            return Ok(if positive == Some(false) { 1 } else { 0 });
        }
        Problem::Bwbo => brute_bwbo(&doc.bwbo()?, limits)?,
        Problem::Laco => brute_laco(&doc.laco()?, limits)?,
        Problem::Wbo => Some(brute_wbo_exists(&doc.graph()?, limits)?),
    };
    match found {
        Some(d) => {
            emit(out, &Document::from_orientation("orientation", &d))?;
            Ok(0)
        }
        None => {
            verdict(cli, false, "no".into(), json!({"found": false}));
            Ok(1)
        }
    }
}

//! `ssnc`: command-line frontend for the second-neighbourhood toolkit.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ssnc_core::certificate::brute_force_snp;
use ssnc_core::completion::{good_completion, trace_completion};
use ssnc_core::dependency::{analyze, is_good_edge};
use ssnc_core::dot::{delta_to_dot, graph_to_dot};
use ssnc_core::format::{parse_graph, read_graph_file, write_graph};
use ssnc_core::generators::{random_instance, search_counterexample, InstanceClass, InstanceSpec};
use ssnc_core::order::{
    classify_vertices, good_median_order_with, median_order_exact_capped, median_order_heuristic, sedimentation,
    sedimentation_class, SedClass, DEFAULT_EXACT_CAP, DEFAULT_SED_BUDGET,
};
use ssnc_core::paths::{find_double_cycles, find_snp_paths, find_two_snp_no_sink_with};
use ssnc_core::stars::{detect_two_stars, run_decomposition};
use ssnc_core::verify::{run_verify, Scale, TARGETS};
use ssnc_core::{Error, Method, OrientedGraph, SnpCertificate, VertexSet};

#[derive(Parser)]
#[command(name = "ssnc", version, about = "Second neighbourhood property toolkit for oriented graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Graph file in the edge-list format; standard input when absent.
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest vertex count solved exactly.
    #[arg(long, global = true, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: usize,

    #[arg(long, global = true)]
    n: Option<usize>,

    #[arg(long, global = true)]
    k: Option<usize>,

    #[arg(long, global = true)]
    seeds: Option<u64>,

    #[arg(long, global = true)]
    quick: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON record per line.
    Structured,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Missing graph, Δ components, blocks and SNP vertices.
    Analyze,
    /// The dependency digraph.
    Delta,
    /// Median order with its feed, good and bad vertices.
    Median,
    /// Sedimentation of a good median order and its stable/periodic class.
    Sed,
    /// A certified SNP vertex from the strongest applicable construction.
    Snp,
    /// Good completion and the certificate it yields.
    Complete,
    /// Construction for digraphs missing two stars.
    TwoStars,
    /// Double cycles, the disjoint-paths construction and the two-SNP search.
    Paths,
    /// Runs a verification suite; `list` prints the targets.
    Verify { target: String },
    /// Writes a random instance, e.g. `missing-matching,n=10,k=3,seed=1`.
    Generate { spec: String },
    /// Looks for a counterexample in an instance class.
    Search { class: String },
}

/// Command result: human text, a structured record stream, and optionally
/// a DOT rendering.
struct Report {
    text: String,
    records: Vec<Value>,
    dot: Option<String>,
    ok: bool,
}

impl Report {
    fn new(text: String, record: Value) -> Self {
        Report { text, records: vec![record], dot: None, ok: true }
    }

    fn with_dot(mut self, dot: String) -> Self {
        self.dot = Some(dot);
        self
    }
}

fn load(cli: &Cli) -> Result<OrientedGraph, Error> {
    match &cli.input {
        Some(p) => read_graph_file(p),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Io(format!("standard input: {e}")))?;
            parse_graph(&s)
        }
    }
}

fn set_list(s: VertexSet) -> Vec<usize> {
    s.to_vec()
}

fn cert_json(c: &SnpCertificate) -> Value {
    serde_json::to_value(c).expect("certificates serialise")
}

fn analyze_cmd(g: &OrientedGraph) -> Report {
    let a = analyze(g);
    let snp = g.snp_vertices();
    let mut t = String::new();
    let missing = g.missing_graph().edges;
    writeln!(t, "vertices: {}  arcs: {}  missing edges: {}", g.n(), g.arc_count(), missing.len()).unwrap();
    writeln!(t, "missing: {missing:?}").unwrap();
    for (i, c) in a.components.iter().enumerate() {
        let edges: Vec<_> = c.nodes.iter().map(|&e| a.delta.nodes[e]).collect();
        writeln!(t, "component {i}: {} K(C) = {} edges {edges:?}", c.shape, c.support).unwrap();
    }
    for b in &a.blocks {
        writeln!(t, "block K(ξ) = {} interval: {}", b.support, b.is_interval).unwrap();
    }
    writeln!(t, "good digraph: {}", a.is_good()).unwrap();
    writeln!(t, "sinks: {}", g.sinks()).unwrap();
    writeln!(t, "SNP vertices: {snp}").unwrap();
    let rec = json!({
        "command": "analyze",
        "n": g.n(),
        "arcs": g.arc_count(),
        "missing": missing,
        "components": a.components.iter().map(|c| json!({
            "shape": c.shape, "support": set_list(c.support),
            "edges": c.nodes.iter().map(|&e| a.delta.nodes[e]).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "blocks": a.blocks.iter().map(|b| json!({"support": set_list(b.support), "interval": b.is_interval})).collect::<Vec<_>>(),
        "good": a.is_good(),
        "sinks": set_list(g.sinks()),
        "snp": set_list(snp),
    });
    Report::new(t, rec).with_dot(graph_to_dot(g, snp))
}

fn delta_cmd(g: &OrientedGraph) -> Result<Report, Error> {
    let a = analyze(g);
    let d = &a.delta;
    let mut t = String::new();
    let mut nodes = Vec::new();
    for (i, &(u, v)) in d.nodes.iter().enumerate() {
        let def = is_good_edge(g, (u, v))?;
        writeln!(t, "node {i} {u}{v}: in {} out {} good {}", d.in_degree(i), d.out_degree(i), d.good[i]).unwrap();
        nodes.push(json!({"edge": [u, v], "in": d.in_degree(i), "out": d.out_degree(i), "good": d.good[i], "good_by_definition": def}));
    }
    for arc in &d.arcs {
        writeln!(t, "{:?} -> {:?} via {:?}", d.nodes[arc.from], d.nodes[arc.to], arc.labellings).unwrap();
    }
    let rec = json!({"command": "delta", "nodes": nodes, "arcs": d.arcs});
    Ok(Report::new(t, rec).with_dot(delta_to_dot(g, &a)))
}

fn median_cmd(g: &OrientedGraph, cli: &Cli) -> Result<Report, Error> {
    let l = if g.n() <= cli.exact_cap { median_order_exact_capped(g, None, cli.exact_cap)? } else { median_order_heuristic(g, cli.seed) };
    let oa = classify_vertices(g, &l.seq)?;
    let f = oa.feed;
    let snp = g.has_snp(f)?;
    let mut t = String::new();
    writeln!(t, "order: {l}").unwrap();
    writeln!(t, "weight: {}  certified: {}", l.weight, l.certified).unwrap();
    writeln!(t, "feed: {f}  |N+| = {}  |N++| = {}  SNP: {snp}", g.out(f).len(), g.second_out(f).len()).unwrap();
    writeln!(t, "good: {}  bad: {}", oa.good, oa.bad).unwrap();
    let rec = json!({
        "command": "median", "order": l.seq, "weight": l.weight, "certified": l.certified, "feed": f,
        "good": set_list(oa.good), "bad": set_list(oa.bad), "feed_snp": snp,
    });
    Ok(Report::new(t, rec).with_dot(graph_to_dot(g, VertexSet::singleton(f))))
}

fn sed_cmd(g: &OrientedGraph, cli: &Cli) -> Result<Report, Error> {
    let a = analyze(g);
    if let Some(b) = a.blocks.iter().find(|b| !b.is_interval) {
        return Err(Error::NotGoodDigraph(format!("K(ξ) = {} is not an interval", b.support)));
    }
    let blocks = a.partition();
    let l = good_median_order_with(g, &blocks, cli.exact_cap)?;
    let next = sedimentation(g, &l, &blocks)?;
    let class = sedimentation_class(g, &l, &blocks, DEFAULT_SED_BUDGET)?;
    let mut t = String::new();
    writeln!(t, "L: {l}  weight {}", l.weight).unwrap();
    writeln!(t, "Sed(L): {next}  weight {}", next.weight).unwrap();
    match &class {
        SedClass::Stable { rank, order } => writeln!(t, "stable at rank {rank}: {order}").unwrap(),
        SedClass::Periodic { cycle, .. } => writeln!(t, "periodic with cycle length {}", cycle.len()).unwrap(),
    }
    let rec = json!({"command": "sed", "order": l.seq, "sed": next.seq, "weight": l.weight, "class": class});
    Ok(Report::new(t, rec).with_dot(graph_to_dot(g, VertexSet::singleton(l.feed()))))
}

type Attempt<'a> = (&'a str, &'a dyn Fn() -> Result<SnpCertificate, Error>);

/// Tries the constructions from the most specific to brute force.
fn snp_cmd(g: &OrientedGraph, cli: &Cli) -> Result<Report, Error> {
    let d = g.with_unit_weights();
    let mut tried = Vec::new();
    let cert = if d.is_tournament() && d.n() <= cli.exact_cap {
        let f = median_order_exact_capped(&d, None, cli.exact_cap)?.feed();
        SnpCertificate::validate(&d, f, Method::MedianFeed)?
    } else {
        let attempts: [Attempt; 3] = [
            ("two-stars", &|| detect_two_stars(&d).and_then(|s| run_decomposition(&d, s.canonical())).map(|t| t.certificate)),
            ("paths", &|| find_snp_paths(&d)),
            ("completion", &|| good_completion(&d).and_then(|c| trace_completion(&d, &c, false)).map(|o| o.certificate)),
        ];
        let mut found = None;
        for (name, f) in attempts {
            match f() {
                Ok(c) => {
                    found = Some(c);
                    break;
                }
                Err(e @ (Error::NotTwoStars | Error::HypothesisFailed(_) | Error::NotGoodDigraph(_))) => {
                    tried.push(json!({"construction": name, "skipped": e.to_string()}));
                }
                Err(e) => return Err(e),
            }
        }
        match found {
            Some(c) => c,
            None => brute_force_snp(&d).ok_or_else(|| Error::HypothesisFailed("no vertex has the SNP".into()))?,
        }
    };
    let ok = cert.holds_in(&d);
    let text = format!("{cert}\n");
    let rec = json!({"command": "snp", "certificate": cert_json(&cert), "skipped": tried, "validated": ok});
    let mut r = Report::new(text, rec).with_dot(graph_to_dot(g, VertexSet::singleton(cert.vertex)));
    r.ok = ok;
    Ok(r)
}

fn complete_cmd(g: &OrientedGraph) -> Result<Report, Error> {
    let c = good_completion(g)?;
    let o = trace_completion(g, &c, false)?;
    let mut t = String::new();
    writeln!(t, "added arcs: {:?}", c.added_arcs()).unwrap();
    writeln!(t, "order of D': {}", o.order.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")).unwrap();
    writeln!(t, "feed: {}  case: {}", o.feed, o.case).unwrap();
    writeln!(t, "{}", o.certificate).unwrap();
    let rec = json!({"command": "complete", "completion": c, "outcome": o});
    Ok(Report::new(t, rec).with_dot(graph_to_dot(&c.completed, VertexSet::singleton(o.certificate.vertex))))
}

fn two_stars_cmd(g: &OrientedGraph) -> Result<Report, Error> {
    let s = detect_two_stars(g)?;
    let dec = s.canonical();
    let tr = run_decomposition(g, dec)?;
    let mut t = String::new();
    writeln!(t, "decompositions: {}", s.decompositions.len()).unwrap();
    writeln!(t, "x = {}  leaves {:?}  y = {}  leaves {:?}  case {}", dec.x, dec.leaves_x, dec.y, dec.leaves_y, dec.case).unwrap();
    writeln!(t, "T adds {:?}", tr.completion_arcs).unwrap();
    writeln!(t, "order: {}  alpha = {}  feed = {}", tr.order.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "), tr.alpha, tr.feed)
        .unwrap();
    writeln!(t, "reoriented {:?}  branch {}", tr.reoriented, tr.branch).unwrap();
    writeln!(t, "{}", tr.certificate).unwrap();
    let rec = json!({"command": "two-stars", "structure": s, "trace": tr});
    Ok(Report::new(t, rec).with_dot(graph_to_dot(g, VertexSet::singleton(tr.certificate.vertex))))
}

fn paths_cmd(g: &OrientedGraph, cli: &Cli) -> Result<Report, Error> {
    let a = analyze(g);
    let dcs = find_double_cycles(g, &a);
    let mut t = String::new();
    for dc in &dcs {
        writeln!(t, "double cycle k = {}: {:?}", dc.k(), dc.triples).unwrap();
    }
    let cert = find_snp_paths(g)?;
    writeln!(t, "{cert}").unwrap();
    let two = match find_two_snp_no_sink_with(g, cli.exact_cap, DEFAULT_SED_BUDGET) {
        Ok(r) => {
            writeln!(t, "second SNP vertex ({}): {} and {}", r.case, r.first.vertex, r.second.vertex).unwrap();
            json!(r)
        }
        Err(e @ (Error::SinkPresent(_) | Error::NotGoodDigraph(_) | Error::HypothesisFailed(_))) => {
            writeln!(t, "two-SNP search not applicable: {e}").unwrap();
            json!({"skipped": e.to_string()})
        }
        Err(e) => return Err(e),
    };
    let rec = json!({"command": "paths", "double_cycles": dcs, "certificate": cert_json(&cert), "two_snp": two});
    Ok(Report::new(t, rec).with_dot(delta_to_dot(g, &a)))
}

fn verify_cmd(target: &str, cli: &Cli) -> Result<Report, Error> {
    if target == "list" {
        let text: String = TARGETS.iter().map(|(id, d)| format!("{id:<30} {d}\n")).collect();
        let records = TARGETS.iter().map(|(id, d)| json!({"target": id, "description": d})).collect();
        return Ok(Report { text, records, dot: None, ok: true });
    }
    let scale = Scale { n: cli.n, k: cli.k, seeds: cli.seeds, quick: cli.quick, seed: cli.seed, exact_cap: cli.exact_cap };
    let recs = run_verify(target, &scale)?;
    let mut text = String::new();
    for r in &recs {
        writeln!(text, "{} {:<55} {} {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.fingerprint, r.values).unwrap();
    }
    let ok = recs.iter().all(|r| r.pass);
    let records = recs.iter().map(|r| serde_json::to_value(r).expect("records serialise")).collect();
    Ok(Report { text, records, dot: None, ok })
}

fn generate_cmd(spec: &str, cli: &Cli) -> Result<Report, Error> {
    let explicit_seed = spec.split(',').any(|kv| kv.trim().starts_with("seed="));
    let mut spec: InstanceSpec = spec.parse()?;
    if !explicit_seed {
        spec.seed = cli.seed;
    }
    let g = random_instance(&spec)?;
    let text = write_graph(&g, &[format!("spec: {spec}")]);
    let rec = json!({"command": "generate", "spec": spec.to_string(), "graph": text});
    Ok(Report::new(text, rec).with_dot(graph_to_dot(&g, VertexSet::EMPTY)))
}

fn search_cmd(class: &str, cli: &Cli) -> Result<Report, Error> {
    let class: InstanceClass = class.parse()?;
    let max_n = cli.n.unwrap_or(if class == InstanceClass::Tournament { 5 } else { 8 });
    let r = search_counterexample(class, max_n, cli.seeds.unwrap_or(if cli.quick { 500 } else { 10_000 }), cli.seed);
    let mut text = format!("{class}: examined {} skipped {} exhaustive {}\n", r.examined, r.skipped, r.exhaustive);
    let ok = r.counterexample.is_none();
    match &r.counterexample {
        Some(g) => {
            writeln!(text, "COUNTEREXAMPLE ({})", r.counterexample_spec.clone().unwrap_or_default()).unwrap();
            text.push_str(&write_graph(g, &[]));
        }
        None => text.push_str("no counterexample\n"),
    }
    let mut rec = serde_json::to_value(&r).expect("reports serialise");
    if let Some(g) = &r.counterexample {
        rec["graph"] = json!(write_graph(g, &[]));
    }
    Ok(Report { text, records: vec![rec], dot: None, ok })
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Verify { target } => verify_cmd(target, cli),
        Command::Generate { spec } => generate_cmd(spec, cli),
        Command::Search { class } => search_cmd(class, cli),
        cmd => {
            let g = load(cli)?;
            match cmd {
                Command::Analyze => Ok(analyze_cmd(&g)),
                Command::Delta => delta_cmd(&g),
                Command::Median => median_cmd(&g, cli),
                Command::Sed => sed_cmd(&g, cli),
                Command::Snp => snp_cmd(&g, cli),
                Command::Complete => complete_cmd(&g),
                Command::TwoStars => two_stars_cmd(&g),
                Command::Paths => paths_cmd(&g, cli),
                _ => unreachable!("handled above"),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            if cli.format == Format::Structured {
                println!("{}", json!({"error": e.to_string()}));
            }
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    match cli.format {
        Format::Text => print!("{}", report.text),
        Format::Structured => {
            for r in &report.records {
                println!("{r}");
            }
        }
        Format::Dot => match &report.dot {
            Some(d) => print!("{d}"),
            None => {
                eprintln!("error: this command has no DOT output");
                return ExitCode::from(2);
            }
        },
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

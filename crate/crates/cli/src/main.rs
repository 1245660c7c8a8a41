use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use resbench::graph::{
    bundled_topologies, enumerate_orbit, induced_subgraph, local_complement, sample_lc_sequences,
    treewidth, Graph, HardwareTopology,
};
use resbench::report::{export, ExportKind};
use resbench::runner::{
    run_benchmark, scores, MethodChoice, MethodScore, ResultSet, RunConfig, TopologySource,
};
use resbench::{Error, Result};

#[derive(Parser)]
#[command(
    name = "resbench",
    version,
    about = "Graph-state entanglement benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect device topologies.
    #[command(subcommand)]
    Topology(TopologyCmd),
    /// Explore the LC orbit of an induced subgraph.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Run a benchmark from a config file and save the result set.
    Run(RunArgs),
    /// Print RES scores of a saved result set.
    Score(ScoreArgs),
    /// Write tables and figures for a saved result set.
    Report(ReportArgs),
}

#[derive(Subcommand)]
enum TopologyCmd {
    /// Check a topology file and print a summary.
    Validate { file: PathBuf },
    /// List the bundled device topologies.
    List,
}

#[derive(Args)]
struct SubgraphArgs {
    /// Bundled topology name or path to a topology file.
    #[arg(long)]
    topology: String,
    /// Hardware qubits, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    qubits: Vec<usize>,
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// Draw random LC sequences and show the graphs they reach.
    Sample {
        #[command(flatten)]
        sub: SubgraphArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sequences; defaults to 2^(n+1).
        #[arg(long)]
        count: Option<usize>,
    },
    /// Enumerate the whole orbit.
    Enumerate {
        #[command(flatten)]
        sub: SubgraphArgs,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mitigate: bool,
    #[arg(long)]
    method: Option<MethodChoice>,
    #[arg(long)]
    shots: Option<usize>,
    /// Result set path; overrides the config. Defaults to results.jsonl.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    resultset: PathBuf,
    #[arg(long)]
    mitigated: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReportArgs {
    resultset: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated outputs; all of them when omitted.
    #[arg(long, value_delimiter = ',')]
    emit: Vec<ExportKind>,
}

fn edges_str(g: &Graph) -> String {
    let e: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("[{}]", e.join(" "))
}

fn subgraph(sub: &SubgraphArgs) -> Result<(HardwareTopology, Graph)> {
    let topo = TopologySource::Named(sub.topology.clone()).resolve()?;
    let g = induced_subgraph(&topo, &sub.qubits)?.graph;
    Ok((topo, g))
}

fn load_results(path: &std::path::Path) -> Result<ResultSet> {
    if !path.exists() {
        return Err(Error::InvalidConfig(format!(
            "{} does not exist",
            path.display()
        )));
    }
    ResultSet::load(path)
}

fn topology(cmd: TopologyCmd) -> Result<()> {
    match cmd {
        TopologyCmd::Validate { file } => {
            if !file.exists() {
                return Err(Error::InvalidConfig(format!(
                    "{} does not exist",
                    file.display()
                )));
            }
            let t = HardwareTopology::load(&file)?;
            let connected = Graph::from_edges(t.n_qubits, &t.couplers)?.is_connected();
            println!(
                "ok: {} ({} qubits, {} couplers, {})",
                t.name,
                t.n_qubits,
                t.couplers.len(),
                if connected {
                    "connected"
                } else {
                    "disconnected"
                }
            );
        }
        TopologyCmd::List => {
            for t in bundled_topologies() {
                println!(
                    "{:<12} {:>3} qubits {:>3} couplers",
                    t.name,
                    t.n_qubits,
                    t.couplers.len()
                );
            }
        }
    }
    Ok(())
}

fn orbit(cmd: OrbitCmd) -> Result<()> {
    match cmd {
        OrbitCmd::Sample { sub, seed, count } => {
            let (topo, g) = subgraph(&sub)?;
            let n = g.n();
            println!(
                "{} qubits {:?}: edges {} tw {}",
                topo.name,
                sub.qubits,
                edges_str(&g),
                treewidth(&g)?
            );
            for (i, seq) in sample_lc_sequences(n, count.unwrap_or(1 << (n + 1)), seed)
                .iter()
                .enumerate()
            {
                let h = seq
                    .iter()
                    .try_fold(g.clone(), |acc, &v| local_complement(&acc, v))?;
                println!(
                    "{i:>4} {:<24} tw {} edges {}",
                    format!("{:?}", seq.ops()),
                    treewidth(&h)?,
                    edges_str(&h)
                );
            }
        }
        OrbitCmd::Enumerate { sub, limit } => {
            let (_, g) = subgraph(&sub)?;
            let o = enumerate_orbit(&g, limit)?;
            let mut by_tw = std::collections::BTreeMap::new();
            for h in &o.graphs {
                *by_tw.entry(treewidth(h)?).or_insert(0usize) += 1;
            }
            println!(
                "orbit size {}{}",
                o.len(),
                if o.truncated { " (truncated)" } else { "" }
            );
            for (tw, k) in by_tw {
                println!("  tw {tw}: {k} graphs");
            }
            if g.n() <= resbench::graph::CANONICAL_LIMIT && !o.truncated {
                println!("  {} isomorphism classes", o.isomorphism_classes()?.len());
            }
        }
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.mitigate {
        cfg.mitigate = true;
    }
    if let Some(m) = args.method {
        cfg.method = m;
    }
    if let Some(s) = args.shots {
        cfg.shots = s;
    }
    let out = args
        .output
        .or(cfg.output.clone())
        .unwrap_or_else(|| "results.jsonl".into());
    let rs = run_benchmark(&cfg)?;
    let derived = rs.save(&out)?;
    let failed = rs.records.iter().filter(|r| !r.is_ok()).count();
    println!(
        "{} records ({failed} failed) in {} batches -> {}, {}",
        rs.records.len(),
        rs.meta.batches.len(),
        out.display(),
        derived.display()
    );
    print_scores(&rs, false)?;
    if cfg.mitigate {
        print_scores(&rs, true)?;
    }
    Ok(())
}

fn print_scores(rs: &ResultSet, mitigated: bool) -> Result<()> {
    if mitigated && rs.records.iter().all(|r| r.mitigated.is_none()) {
        return Err(Error::InvalidConfig(
            "result set has no mitigated expectations".into(),
        ));
    }
    let s = scores(rs, mitigated);
    let label = if mitigated { "mitigated" } else { "raw" };
    for (name, m) in [("RES-Naive", s.naive), ("RES-Unitary", s.unitary)] {
        if let Some(MethodScore { res, max_n, max_tw }) = m {
            println!("{name:<12} {res:>4}   max-n {max_n}   max-tw {max_tw}   ({label})");
        }
    }
    Ok(())
}

fn score(args: ScoreArgs) -> Result<()> {
    let rs = load_results(&args.resultset)?;
    if args.json {
        if args.mitigated && rs.records.iter().all(|r| r.mitigated.is_none()) {
            return Err(Error::InvalidConfig(
                "result set has no mitigated expectations".into(),
            ));
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&scores(&rs, args.mitigated))?
        );
        Ok(())
    } else {
        print_scores(&rs, args.mitigated)
    }
}

fn report(args: ReportArgs) -> Result<()> {
    let rs = load_results(&args.resultset)?;
    let kinds = if args.emit.is_empty() {
        ExportKind::ALL.to_vec()
    } else {
        args.emit
    };
    std::fs::create_dir_all(&args.out)?;
    for kind in kinds {
        for path in export(&rs, kind, &args.out)? {
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Topology(c) => topology(c),
        Command::Orbit(c) => orbit(c),
        Command::Run(a) => run(a),
        Command::Score(a) => score(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}

//! `bisq` command-line front end.
//!
//! Every algorithm command writes one JSON line per trial and a closing summary
//! line. Contract violations (extra rounds, queries during refinement, a
//! sampled non-edge, a false "connected") exit with status 3. Bad input exits
//! with status 1, and clap's own usage errors with status 2.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use bisq::graph::generate::GenSpec;
use bisq::graph::io::{load_edge_list, write_edge_list};
use bisq::harness::audit::{audit_table, default_grid};
use bisq::harness::csv::to_csv;
use bisq::harness::{connectivity_campaign, estimate_campaign, sample_campaign, Campaign};
use bisq::params::{Constants, Profile};
use bisq::{EvalMode, Graph};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "bisq", version, about = "Graph algorithms over bipartite independent set queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Generate(GenerateArgs),
    /// Estimate the edge count.
    Estimate(RunArgs),
    /// Draw near-uniform edges.
    Sample {
        #[command(flatten)]
        run: RunArgs,
        /// Draws per trial.
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Decide connectivity in two rounds.
    Connectivity(RunArgs),
    /// Dry-run query counts over an n grid; nothing is executed.
    Audit {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated n values.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
    },
}

#[derive(Args)]
struct GenerateArgs {
    /// gnp, connected_gnp, star, path, cycle, clique, tree, complete_bipartite, empty or components.
    kind: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    size: Option<usize>,
    /// Component sizes separated by '/'.
    #[arg(long)]
    sizes: Option<String>,
    /// clique, path, tree or sparse.
    #[arg(long)]
    inner: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Aggregate,
    Exact,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to fast, or paper for audits.
    #[arg(long)]
    profile: Option<Profile>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the summary as CSV instead of JSON lines.
    #[arg(long)]
    csv: bool,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long = "cT")]
    c_t: Option<f64>,
    #[arg(long = "clambda")]
    c_lambda: Option<f64>,
    #[arg(long = "cR")]
    c_r: Option<f64>,
    #[arg(long = "cnb")]
    c_nb: Option<f64>,
    #[arg(long = "cse")]
    c_se: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Edge-list file.
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    graph: Option<PathBuf>,
    /// Generator spec such as `gnp:n=1024,p=0.01,seed=7`.
    #[arg(long)]
    gen: Option<String>,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    /// Add exact answers and accuracy figures to the reports.
    #[arg(long)]
    with_truth: bool,
    #[arg(long, value_enum, default_value = "aggregate")]
    eval: ModeArg,
}

impl CommonArgs {
    fn constants(&self, default: Profile) -> anyhow::Result<Constants> {
        let mut c = Constants::for_profile(self.profile.unwrap_or(default));
        let overrides = [
            (&mut c.c1, self.c1),
            (&mut c.c2, self.c2),
            (&mut c.c_t, self.c_t),
            (&mut c.c_lambda, self.c_lambda),
            (&mut c.c_r, self.c_r),
            (&mut c.c_nb, self.c_nb),
            (&mut c.c_se, self.c_se),
        ];
        for (slot, value) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        c.validate()?;
        Ok(c)
    }
}

impl RunArgs {
    fn load(&self) -> anyhow::Result<Arc<Graph>> {
        let g = match (&self.graph, &self.gen) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                load_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            (None, Some(spec)) => spec.parse::<GenSpec>()?.build()?,
            (None, None) => bail!("one of --graph or --gen is required"),
        };
        Ok(Arc::new(g))
    }

    fn campaign(&self) -> anyhow::Result<Campaign> {
        let c = &self.common;
        let mut campaign = Campaign::new(c.epsilon, c.seed, self.trials, c.constants(Profile::Fast)?);
        campaign.mode = match self.eval {
            ModeArg::Aggregate => EvalMode::Aggregate,
            ModeArg::Exact => EvalMode::Exact,
        };
        campaign.with_truth = self.with_truth;
        Ok(campaign)
    }
}

/// Collects output lines and writes them once to the file or stdout.
struct Sink {
    lines: Vec<String>,
}

impl Sink {
    fn json<T: Serialize>(&mut self, record: &T) -> anyhow::Result<()> {
        self.lines.push(serde_json::to_string(record)?);
        Ok(())
    }

    fn finish<T: Serialize>(mut self, summary: &T, common: &CommonArgs) -> anyhow::Result<()> {
        if common.csv {
            let (header, row) = to_csv(summary)?;
            self.lines = vec![header, row];
        } else {
            self.json(summary)?;
        }
        let mut text = self.lines.join("\n");
        text.push('\n');
        match &common.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn emit<R: Serialize, S: Serialize>(reports: &[R], summary: &S, common: &CommonArgs) -> anyhow::Result<()> {
    let mut sink = Sink { lines: Vec::new() };
    for r in reports {
        sink.json(r)?;
    }
    sink.finish(summary, common)
}

fn generate(args: &GenerateArgs) -> anyhow::Result<()> {
    let mut spec = GenSpec::new(&args.kind).with("seed", args.seed);
    let numeric = [("n", args.n), ("a", args.a), ("b", args.b), ("k", args.k), ("size", args.size)];
    for (key, value) in numeric {
        if let Some(v) = value {
            spec = spec.with(key, v);
        }
    }
    if let Some(p) = args.p {
        spec = spec.with("p", p);
    }
    if let Some(s) = &args.sizes {
        spec = spec.with("sizes", s);
    }
    if let Some(s) = &args.inner {
        spec = spec.with("inner", s);
    }
    let text = write_edge_list(&spec.build()?);
    match &args.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate(args) => generate(&args),
        Command::Estimate(args) => {
            let (reports, summary) = estimate_campaign(&args.load()?, &args.campaign()?)?;
            emit(&reports, &summary, &args.common)
        }
        Command::Sample { run, count } => {
            let (reports, summary) = sample_campaign(&run.load()?, count, &run.campaign()?)?;
            emit(&reports, &summary, &run.common)
        }
        Command::Connectivity(args) => {
            let (reports, summary) = connectivity_campaign(&args.load()?, &args.campaign()?)?;
            emit(&reports, &summary, &args.common)
        }
        Command::Audit { common, grid } => {
            let consts = common.constants(Profile::Paper)?;
            let grid = grid.unwrap_or_else(default_grid);
            if grid.iter().any(|&n| n < 2) {
                bail!("audit grid values must be at least 2");
            }
            let table = audit_table(&grid, common.epsilon, common.delta, &consts)?;
            let mut sink = Sink { lines: Vec::new() };
            if common.csv {
                #[derive(Serialize)]
                struct Row {
                    estimator_band: f64,
                    connectivity_exponent: f64,
                    ns_closed_form_matches: bool,
                    ser_within_bound: bool,
                }
                let row = Row {
                    estimator_band: table.estimator_band,
                    connectivity_exponent: table.connectivity_exponent,
                    ns_closed_form_matches: table.ns.iter().all(|r| r.planned == r.closed_form),
                    ser_within_bound: table.ser.iter().all(|r| r.within_bound),
                };
                return sink.finish(&row, &common);
            }
            for r in &table.ns {
                sink.json(&("ns", r))?;
            }
            for r in &table.ser {
                sink.json(&("ser", r))?;
            }
            for r in &table.estimator {
                sink.json(&("estimator", r))?;
            }
            for r in &table.connectivity {
                sink.json(&("connectivity", r))?;
            }
            #[derive(Serialize)]
            struct Summary<'a> {
                kind: &'static str,
                constants: &'a Constants,
                epsilon: f64,
                delta: f64,
                estimator_band: f64,
                connectivity_exponent: f64,
            }
            let summary = Summary {
                kind: "audit_summary",
                constants: &table.constants,
                epsilon: table.epsilon,
                delta: table.delta,
                estimator_band: table.estimator_band,
                connectivity_exponent: table.connectivity_exponent,
            };
            sink.finish(&summary, &common)
        }
    }
}

fn main() -> ExitCode {
    if let Some(threads) = std::env::var("BISQ_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bisq: {e:#}");
            match e.downcast_ref::<bisq::Error>() {
                Some(bisq::Error::Contract(_)) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}

//! `sparsecolour`: verify list-colouring count bounds on concrete graphs.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use sparsecolour_core::counting::{CountConfig, ListAssignment};
use sparsecolour_core::generators::{generate, GeneratorSpec};
use sparsecolour_core::verify::{
    avoidance_report, bounds_table, exit_code, experiment_report, geometric_bound_report,
    list_bound_report, markov_report, write_bounds_csv, BoundsGrid, ExperimentOptions, Instance,
    ListMode, ReportBundle, VerificationReport, VerifyOptions,
};

use config::Config;

#[derive(Parser)]
#[command(
    name = "sparsecolour",
    version,
    about = "Exact checks of list-colouring count bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// At least ell^n colourings when every list has k(v) colours.
    #[command(name = "verify-thm1", visible_alias = "list-bound")]
    ListBound {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ell: Option<f64>,
    },
    /// At least (q/sqrt(D))^n colourings with lists sized by q(v).
    #[command(name = "verify-thm4", visible_alias = "geometric-bound")]
    GeometricBound {
        #[command(flatten)]
        common: Common,
    },
    /// Probability that a uniform colouring avoids a colour, against the product bound.
    #[command(name = "check-lemma2", visible_alias = "avoidance")]
    Avoidance {
        #[command(flatten)]
        common: Common,
    },
    /// Short-list tail probabilities against t_u / ell.
    #[command(name = "check-markov", visible_alias = "short-lists")]
    ShortLists {
        #[command(flatten)]
        common: Common,
        /// Defaults to the largest ell the instance certifies.
        #[arg(long)]
        ell: Option<f64>,
    },
    /// The four-step recolouring experiment around one vertex.
    Experiment {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        ell: Option<f64>,
        /// Defaults to the first vertex of maximum degree.
        #[arg(long)]
        vertex: Option<usize>,
        /// One threshold for every neighbour; accepts `inf`.
        #[arg(long)]
        threshold: Option<f64>,
        /// Write one JSON line per Monte-Carlo run.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// CSV table of the closed-form bounds over a (Δ, f, q) grid.
    Bounds {
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<u64>>,
        #[arg(long = "f", value_delimiter = ',')]
        fs: Option<Vec<f64>>,
        #[arg(long = "q", value_delimiter = ',')]
        qs: Option<Vec<u64>>,
        /// Vertex count behind the per-vertex count columns.
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Build a graph from a generator spec file and print it.
    Generate {
        /// Flat `key = value` generator spec.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Args)]
struct Common {
    /// Graph file, `named:NAME` or `spec:FILE`; repeat for a corpus.
    #[arg(long, required = true)]
    graph: Vec<String>,
    /// List assignment file.
    #[arg(long, conflicts_with = "uniform")]
    lists: Option<PathBuf>,
    /// Give every vertex the colours 0..Q-1.
    #[arg(long)]
    uniform: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo runs instead of exact enumeration.
    #[arg(long)]
    trials: Option<u64>,
    /// Search-tree node budget for exact counting.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Vertex order as a comma-separated permutation.
    #[arg(long, value_delimiter = ',')]
    order: Option<Vec<usize>>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record per-check runtimes (reports are then no longer byte-stable).
    #[arg(long)]
    timings: bool,
}

/// Everything a command needs after flags and config are merged.
struct Settings {
    options: VerifyOptions,
    list_file: Option<PathBuf>,
    seed: u64,
    trials: Option<u64>,
    format: Format,
    out: Option<PathBuf>,
    config: Config,
}

impl Common {
    fn settings(&self) -> Result<Settings> {
        let config = Config::load(self.config.as_deref())?;
        let mut counting = CountConfig::default();
        if let Some(b) = config::budget(self.budget, &config)? {
            counting.node_budget = b;
        }
        if let Some(b) = config.get("enumeration_budget")? {
            counting.enumeration_budget = b;
        }
        if let Some(n) = config.get("subset_dp_max_n")? {
            counting.subset_dp_max_n = n;
        }
        if let Some(b) = config.get("subset_dp_max_bytes")? {
            counting.subset_dp_max_bytes = b;
        }
        if let Some(jobs) = config.pick(self.jobs, "jobs")? {
            if jobs == 0 {
                bail!("--jobs must be at least 1");
            }
            // Fails only if a pool already exists, which cannot happen here.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global();
        }
        let timings = self.timings || config.get::<bool>("timings")?.unwrap_or(false);
        let lists = match self.uniform {
            Some(q) => ListMode::Uniform(q),
            None => ListMode::Auto,
        };
        Ok(Settings {
            options: VerifyOptions {
                counting,
                lists,
                order: self.order.clone(),
                timings,
            },
            list_file: self.lists.clone(),
            seed: config.pick(self.seed, "seed")?.unwrap_or(0),
            trials: config.pick(self.trials, "trials")?,
            format: config.pick(self.format, "format")?.unwrap_or(Format::Json),
            out: self.out.clone(),
            config,
        })
    }

    fn instances(&self) -> Result<Vec<Instance>> {
        self.graph
            .iter()
            .map(|s| Instance::load(s).with_context(|| format!("loading {s}")))
            .collect()
    }
}

impl Settings {
    /// Options for one instance: a list file is parsed against its vertex count.
    fn for_instance(&self, inst: &Instance) -> Result<VerifyOptions> {
        let mut opts = self.options.clone();
        if let Some(path) = &self.list_file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let (lists, _) = ListAssignment::parse_text(&text, inst.graph.n())
                .with_context(|| format!("{} for {}", path.display(), inst.id))?;
            opts.lists = ListMode::Explicit(lists);
        }
        Ok(opts)
    }

    fn ell(&self, flag: Option<f64>) -> Result<Option<f64>> {
        self.config.pick(flag, "ell")
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(bundle: &ReportBundle, settings: &Settings) -> Result<i32> {
    let mut out = open_out(settings.out.as_deref())?;
    match settings.format {
        Format::Json => out.write_all(bundle.to_json().as_bytes())?,
        Format::Csv => bundle.write_csv(&mut out)?,
    }
    out.flush()?;
    Ok(exit_code(bundle))
}

/// Runs `run` on every instance in parallel and writes the sorted bundle.
fn run_corpus(
    common: &Common,
    run: impl Fn(&Instance, &Settings, VerifyOptions) -> VerificationReport + Sync,
) -> Result<i32> {
    let settings = common.settings()?;
    let instances = common.instances()?;
    let reports = instances
        .par_iter()
        .map(|inst| Ok(run(inst, &settings, settings.for_instance(inst)?)))
        .collect::<Result<Vec<_>>>()?;
    emit(&ReportBundle::new(reports), &settings)
}

fn real() -> Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Command::ListBound { common, ell } => {
            let ell = common.settings()?.ell(ell)?.context("--ell is required")?;
            run_corpus(&common, |inst, _, opts| list_bound_report(inst, ell, &opts))
        }
        Command::GeometricBound { common } => {
            run_corpus(&common, |inst, _, opts| geometric_bound_report(inst, &opts))
        }
        Command::Avoidance { common } => run_corpus(&common, |inst, s, opts| {
            avoidance_report(inst, &opts, s.trials, s.seed)
        }),
        Command::ShortLists { common, ell } => {
            let ell = common.settings()?.ell(ell)?;
            run_corpus(&common, |inst, s, opts| {
                markov_report(inst, ell, &opts, s.trials, s.seed)
            })
        }
        Command::Experiment {
            common,
            ell,
            vertex,
            threshold,
            trace,
        } => experiment(&common, ell, vertex, threshold, trace),
        Command::Bounds {
            degrees,
            fs,
            qs,
            n,
            out,
            format,
        } => {
            let mut grid = BoundsGrid::default();
            grid.degrees = degrees.unwrap_or(grid.degrees);
            grid.fs = fs.unwrap_or(grid.fs);
            grid.qs = qs.unwrap_or(grid.qs);
            grid.n = n.unwrap_or(grid.n);
            let rows = bounds_table(&grid);
            let mut w = open_out(out.as_deref())?;
            match format {
                Format::Csv => write_bounds_csv(&rows, &mut w)?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut w, &rows)?;
                    writeln!(w)?;
                }
            }
            w.flush()?;
            Ok(0)
        }
        Command::Generate { spec, out } => {
            let text = std::fs::read_to_string(&spec)
                .with_context(|| format!("reading {}", spec.display()))?;
            let spec = GeneratorSpec::parse_text(&text)?;
            let g = generate(&spec)?;
            let mut w = open_out(out.as_deref())?;
            writeln!(w, "# {spec}")?;
            writeln!(
                w,
                "# max_degree {} local_density {} rho {}",
                g.profile.max_degree, g.profile.local_density, g.profile.rho
            )?;
            w.write_all(g.graph.to_text().as_bytes())?;
            w.flush()?;
            Ok(0)
        }
    }
}

fn experiment(
    common: &Common,
    ell: Option<f64>,
    vertex: Option<usize>,
    threshold: Option<f64>,
    trace: Option<PathBuf>,
) -> Result<i32> {
    let settings = common.settings()?;
    let ell = settings.ell(ell)?.context("--ell is required")?;
    if trace.is_some() && settings.trials.is_none() {
        bail!("--trace needs --trials");
    }
    let exp = ExperimentOptions {
        vertex,
        threshold,
        trials: settings.trials,
        seed: settings.seed,
        keep_traces: trace.is_some(),
    };
    let instances = common.instances()?;
    let mut results = instances
        .par_iter()
        .map(|inst| {
            let (r, t) = experiment_report(inst, ell, &exp, &settings.for_instance(inst)?);
            Ok((inst.id.clone(), r, t))
        })
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(|a, b| a.0.cmp(&b.0));
    if let Some(path) = trace {
        let mut w = open_out(Some(&path))?;
        for (id, _, traces) in &results {
            for t in traces {
                let mut line = serde_json::to_value(t)?;
                line["instance"] = serde_json::Value::String(id.clone());
                writeln!(w, "{}", serde_json::to_string(&line)?)?;
            }
        }
        w.flush()?;
    }
    let bundle = ReportBundle::new(results.into_iter().map(|(_, r, _)| r).collect());
    emit(&bundle, &settings)
}

fn main() {
    match real() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}

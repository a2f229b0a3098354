//! The `lfo` command-line tool.
//!
//! Exit codes: 0 on success, 1 for invalid flags or configuration, 2 when a
//! run or an output write fails.

pub mod config_file;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lfo::algorithms::{default_levy, ALGORITHM_NAMES};
use lfo::harness::{
    aggregate_traces, run_experiment, standard_suite, write_summary_csv, write_summary_jsonl,
    write_trace_csv, write_trace_jsonl, AggregateResult, ExperimentConfig, DEFAULT_BUDGET_EVALS,
    DEFAULT_MASTER_SEED,
};
use lfo::testbed::OBJECTIVE_NAMES;
use lfo::{sample_length, BoundaryPolicy, ConvergenceTrace, LevyParams, Objective, RandomSource};

/// Retries granted by `--boundary resample` before falling back to clipping.
pub const RESAMPLE_RETRIES: u32 = 100;

#[derive(Debug, Parser)]
#[command(
    name = "lfo",
    version,
    about = "Levy-flight optimizers and benchmark runner"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Show the benchmark functions and algorithms.
    List,
    /// Write step lengths drawn from the Levy law as `index,length` rows.
    Sample(SampleArgs),
    /// Run replicated experiments on one function.
    Run(RunArgs),
    /// Run the five-function benchmark protocol.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub l0: f64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Option file of `key = value` lines; flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Boundary {
    Clip,
    Resample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct RunArgs {
    #[arg(long)]
    pub function: String,
    /// Dimension; defaults to the function's standard dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated algorithm names, or `all`.
    #[arg(long, default_value = "all")]
    pub algorithm: String,
    #[arg(long, default_value_t = lfo::algorithms::DEFAULT_BETA, allow_negative_numbers = true)]
    pub beta: f64,
    /// Scale factor of the step law; defaults to 5% of the largest extent.
    #[arg(long, allow_negative_numbers = true)]
    pub l0: Option<f64>,
    /// Evaluation budget per replication.
    #[arg(long)]
    pub budget_evals: Option<u64>,
    /// Wall-clock budget per replication in milliseconds.
    #[arg(long)]
    pub budget_ms: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub replications: u64,
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Boundary::Clip)]
    pub boundary: Boundary,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Option file of `key = value` lines; flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SuiteArgs {
    #[arg(long, default_value = "results")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BUDGET_EVALS)]
    pub budget_evals: u64,
    #[arg(long, default_value_t = DEFAULT_MASTER_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub parallelism: Option<usize>,
    /// Option file of `key = value` lines; flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

/// A failure mapped to a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration; exit code 1.
    Usage(String),
    /// Failure while running or writing output; exit code 2.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Errors are reported on standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse_args(args) {
        Ok(cli) => cli,
        Err(ParseOutcome::Clap(e)) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
        Err(ParseOutcome::Config(e)) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

enum ParseOutcome {
    Clap(clap::Error),
    Config(CliError),
}

fn parse_args(args: Vec<OsString>) -> Result<Cli, ParseOutcome> {
    let args = match config_file::config_path(&args) {
        Some(path) => {
            let text = fs::read_to_string(&path).map_err(|e| {
                ParseOutcome::Config(usage(format!("cannot read {}: {e}", path.display())))
            })?;
            let pairs = config_file::parse(&text)
                .map_err(|e| ParseOutcome::Config(usage(format!("{}: {e}", path.display()))))?;
            config_file::splice(args, &pairs)
        }
        None => args,
    };
    Cli::try_parse_from(args).map_err(ParseOutcome::Clap)
}

pub fn execute(command: Command) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::List => cmd_list(&mut out),
        Command::Sample(a) => cmd_sample(&a, &mut out),
        Command::Run(a) => cmd_run(&a, &mut out),
        Command::Suite(a) => cmd_suite(&a, &mut out),
    }
}

const ALGORITHM_SUMMARIES: [(&str, &str); 6] = [
    (
        "lfo-b",
        "generations of Levy jumps around the best-known point",
    ),
    ("lfo-ls", "like lfo-b, with a local search per particle"),
    (
        "lfo-mls",
        "local search restarted by unconditional Levy jumps",
    ),
    (
        "lfo-ils",
        "iterated local search with improving Levy perturbations",
    ),
    ("sa", "simulated annealing with geometric cooling"),
    ("lfo-sa", "lfo-mls for half the budget, then annealing"),
];

pub fn cmd_list(out: &mut impl Write) -> Result<(), CliError> {
    let mut text = String::from("functions:\n");
    for name in OBJECTIVE_NAMES {
        let obj = Objective::by_name(name, None).map_err(runtime)?;
        let fixed = Objective::by_name(name, Some(obj.dim() + 1)).is_err();
        let space = obj.space();
        let best = obj
            .known_best()
            .map_or("unknown".to_string(), |v| format!("{v}"));
        let bounds = format!(
            "[{}, {}]{}",
            space.lower()[0],
            space.upper()[0],
            if space.has_constraint() {
                " + constraints"
            } else {
                ""
            }
        );
        text.push_str(&format!(
            "  {name:<6} dim {:<3} {:<9} bounds {bounds:<30} known best {best}\n",
            obj.dim(),
            if fixed { "(fixed)" } else { "(default)" },
        ));
    }
    text.push_str("algorithms:\n");
    for (name, about) in ALGORITHM_SUMMARIES {
        text.push_str(&format!("  {name:<8} {about}\n"));
    }
    out.write_all(text.as_bytes()).map_err(runtime)
}

pub fn cmd_sample(args: &SampleArgs, out: &mut impl Write) -> Result<(), CliError> {
    let params = LevyParams::new(args.beta, args.l0).map_err(usage)?;
    let mut rng = RandomSource::from_seed(args.seed);
    let write = |sink: &mut dyn Write, rng: &mut RandomSource| -> io::Result<()> {
        writeln!(sink, "index,length")?;
        for i in 0..args.count {
            writeln!(sink, "{i},{:.16e}", sample_length(&params, rng))?;
        }
        sink.flush()
    };
    match &args.out {
        Some(path) => {
            let mut file = BufWriter::new(
                File::create(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?,
            );
            write(&mut file, &mut rng).map_err(runtime)
        }
        None => write(&mut BufWriter::new(out), &mut rng).map_err(runtime),
    }
}

/// Evaluation and time budgets from the two budget flags.
///
/// Zero budgets are rejected. With neither flag the default evaluation
/// budget applies; with both, whichever is reached first ends a run.
pub fn budgets(
    evals: Option<u64>,
    ms: Option<u64>,
) -> Result<(Option<u64>, Option<Duration>), CliError> {
    if evals == Some(0) {
        return Err(usage("--budget-evals must be positive"));
    }
    if ms == Some(0) {
        return Err(usage("--budget-ms must be positive"));
    }
    Ok(match (evals, ms) {
        (None, None) => (Some(DEFAULT_BUDGET_EVALS), None),
        (e, m) => (e, m.map(Duration::from_millis)),
    })
}

fn parse_algorithms(list: &str) -> Result<Vec<String>, CliError> {
    if list.trim() == "all" {
        return Ok(ALGORITHM_NAMES.iter().map(|s| s.to_string()).collect());
    }
    let names: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
    for n in &names {
        if !ALGORITHM_NAMES.contains(&n.as_str()) {
            return Err(usage(format!(
                "unknown algorithm `{n}`; expected one of {}",
                ALGORITHM_NAMES.join(", ")
            )));
        }
    }
    Ok(names)
}

/// Builds and validates the experiment described by `args`.
pub fn run_config(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let (max_evals, max_time) = budgets(args.budget_evals, args.budget_ms)?;
    if args.replications == 0 {
        return Err(usage("--replications must be at least 1"));
    }
    let config = ExperimentConfig {
        dim: args.dim,
        algorithms: parse_algorithms(&args.algorithm)?
            .iter()
            .map(|n| n.as_str().into())
            .collect(),
        replications: args.replications,
        master_seed: args.seed,
        max_evals,
        max_time,
        boundary: match args.boundary {
            Boundary::Clip => BoundaryPolicy::ClipToEdge,
            Boundary::Resample => BoundaryPolicy::Resample {
                max_retries: RESAMPLE_RETRIES,
            },
        },
        beta: args.beta,
        l0: args.l0,
        ..ExperimentConfig::new(&args.function)
    };
    let objective = config.objective().map_err(usage)?;
    default_levy(&objective, config.beta, config.l0).map_err(usage)?;
    config.resolve_algorithms(&objective).map_err(usage)?;
    config.validate().map_err(usage)?;
    Ok(config)
}

fn parallelism(requested: Option<usize>) -> Result<usize, CliError> {
    match requested {
        Some(0) => Err(usage("--parallelism must be at least 1")),
        Some(n) => Ok(n),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn write_outputs(
    dir: &Path,
    function: &str,
    format: Format,
    traces: &[ConvergenceTrace],
    agg: &AggregateResult,
) -> Result<(PathBuf, PathBuf), CliError> {
    fs::create_dir_all(dir).map_err(|e| runtime(format!("{}: {e}", dir.display())))?;
    let ext = format.extension();
    let trace_path = dir.join(format!("{function}_trace.{ext}"));
    let summary_path = dir.join(format!("{function}_summary.{ext}"));
    let create = |p: &Path| {
        File::create(p)
            .map(BufWriter::new)
            .map_err(|e| runtime(format!("{}: {e}", p.display())))
    };
    let (trace_file, summary_file) = (create(&trace_path)?, create(&summary_path)?);
    match format {
        Format::Csv => {
            write_trace_csv(traces, trace_file).map_err(runtime)?;
            write_summary_csv(agg, summary_file).map_err(runtime)?;
        }
        Format::Jsonl => {
            write_trace_jsonl(traces, trace_file).map_err(runtime)?;
            write_summary_jsonl(agg, summary_file).map_err(runtime)?;
        }
    }
    Ok((trace_path, summary_path))
}

/// Final-checkpoint statistics, one line per algorithm.
fn summary_table(agg: &AggregateResult) -> String {
    let mut text = format!(
        "{:<8} {:>8} {:>4} {:>14} {:>14} {:>14}\n",
        "algo", "evals", "n", "mean", "median", "min"
    );
    let mut last: Vec<&lfo::harness::CheckpointStats> = Vec::new();
    for row in &agg.rows {
        match last.last_mut() {
            Some(prev) if prev.function == row.function && prev.algorithm == row.algorithm => {
                *prev = row
            }
            _ => last.push(row),
        }
    }
    for r in last {
        text.push_str(&format!(
            "{:<8} {:>8} {:>4} {:>14.6e} {:>14.6e} {:>14.6e}\n",
            r.algorithm, r.checkpoint_evals, r.n, r.mean, r.median, r.min
        ));
    }
    text
}

pub fn cmd_run(args: &RunArgs, out: &mut impl Write) -> Result<(), CliError> {
    let config = run_config(args)?;
    let workers = parallelism(args.parallelism)?;
    let traces = run_experiment(&config, workers).map_err(runtime)?;
    let agg = aggregate_traces(&traces).map_err(runtime)?;
    let (trace_path, summary_path) =
        write_outputs(&args.out, &config.function, args.format, &traces, &agg)?;
    let dim = traces.first().map_or(0, |t| t.dim);
    let text = format!(
        "{} (dim {dim}), {} replication(s)\n{}trace: {}\nsummary: {}\n",
        config.function,
        config.replications,
        summary_table(&agg),
        trace_path.display(),
        summary_path.display()
    );
    out.write_all(text.as_bytes()).map_err(runtime)
}

pub fn cmd_suite(args: &SuiteArgs, out: &mut impl Write) -> Result<(), CliError> {
    let (max_evals, _) = budgets(Some(args.budget_evals), None)?;
    let workers = parallelism(args.parallelism)?;
    let presets: Vec<ExperimentConfig> = standard_suite()
        .into_iter()
        .map(|c| ExperimentConfig {
            master_seed: args.seed,
            max_evals,
            ..c
        })
        .collect();
    for c in &presets {
        c.validate().map_err(usage)?;
    }
    for c in &presets {
        let traces = run_experiment(c, workers).map_err(runtime)?;
        let agg = aggregate_traces(&traces).map_err(runtime)?;
        let (_, summary_path) =
            write_outputs(&args.out_dir, &c.function, Format::Csv, &traces, &agg)?;
        let text = format!(
            "{} (dim {}), {} replications\n{}summary: {}\n",
            c.function,
            traces.first().map_or(0, |t| t.dim),
            c.replications,
            summary_table(&agg),
            summary_path.display()
        );
        out.write_all(text.as_bytes()).map_err(runtime)?;
        out.flush().map_err(runtime)?;
    }
    Ok(())
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use curnys::adversarial::AdversarialSpec;
use curnys::bench::{
    self, ingest, kernel, ExperimentConfig, InputFormat, Method, OutputFormat, Source, Sweep, Task,
    Variant,
};
use curnys::{rng_from_seed, Error, Matrix, Result};

#[derive(Parser)]
#[command(name = "curnys", version, about = "CUR and Nyström approximation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// CUR decomposition error ratios.
    Cur(Common),
    /// Nyström approximation error ratios.
    Nystrom(Common),
    /// Measured Nyström residuals against closed-form lower bounds.
    Lowerbound(Common),
    /// Write an RBF kernel matrix as CSV.
    Kernel(InputArgs),
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Matrix file (Matrix Market or dense CSV).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Input format: mm or csv (guessed from the extension if absent).
    #[arg(long)]
    format: Option<String>,
    /// CSV file of points, one per row, for an RBF kernel.
    #[arg(long)]
    points: Option<PathBuf>,
    /// Number of standard normal points for an RBF kernel.
    #[arg(long)]
    random_points: Option<usize>,
    /// Dimension of the random points.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    sigma: Option<f64>,
    /// Size of the adversarial matrix.
    #[arg(long)]
    m: Option<usize>,
    /// Off-diagonal value of the adversarial matrix.
    #[arg(long)]
    alpha: Option<f64>,
    /// Block count for the block-diagonal adversarial matrix.
    #[arg(long)]
    blocks: Option<usize>,
    /// Synthetic decaying-spectrum matrix, given as MxN.
    #[arg(long)]
    synthetic: Option<String>,
    /// Decay rate of the synthetic spectrum.
    #[arg(long, default_value_t = 0.9)]
    decay: f64,
    /// Seed for generated inputs (separate from the algorithm seed).
    #[arg(long, default_value_t = 0)]
    data_seed: u64,
    #[arg(long, default_value_t = bench::DEFAULT_MAX_DIM)]
    max_dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Common {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    /// Multipliers: c = a k, r = a c.
    #[arg(long, value_delimiter = ',')]
    a: Vec<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// adaptive, subspace or uniform.
    #[arg(long)]
    method: Option<String>,
    /// standard, standard-k, ensemble or modified.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long, default_value_t = 3)]
    ensemble_t: usize,
    #[arg(long, default_value_t = 10)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// csv or json.
    #[arg(long, default_value = "csv")]
    out_format: String,
    /// Report zero seconds so repeated runs produce identical output.
    #[arg(long)]
    no_timing: bool,
}

fn source(args: &InputArgs) -> Result<Source> {
    let mut found = Vec::new();
    if let Some(path) = &args.input {
        let format = match &args.format {
            Some(f) => f.parse()?,
            None => InputFormat::guess(path),
        };
        found.push(Source::File { path: path.clone(), format });
    }
    let sigma = || args.sigma.ok_or_else(|| Error::Argument("--sigma is required for kernel inputs".into()));
    if let Some(points) = &args.points {
        found.push(Source::KernelFile { points: points.clone(), sigma: sigma()? });
    }
    if let Some(n) = args.random_points {
        found.push(Source::KernelRandom { n, dim: args.dim, sigma: sigma()?, seed: args.data_seed });
    }
    if let Some(m) = args.m {
        let alpha = args.alpha.ok_or_else(|| Error::Argument("--alpha is required with --m".into()))?;
        found.push(Source::Adversarial(match args.blocks {
            Some(b) => AdversarialSpec::block_diagonal(m, b, alpha)?,
            None => AdversarialSpec::single(m, alpha)?,
        }));
    }
    if let Some(shape) = &args.synthetic {
        let (m, n) = shape
            .split_once('x')
            .and_then(|(m, n)| Some((m.parse().ok()?, n.parse().ok()?)))
            .ok_or_else(|| Error::Argument(format!("--synthetic expects MxN, got '{shape}'")))?;
        found.push(Source::Synthetic { m, n, rate: args.decay, seed: args.data_seed });
    }
    match found.len() {
        1 => Ok(found.pop().expect("one source")),
        0 => Err(Error::Argument(
            "give one of --input, --points, --random-points, --m or --synthetic".into(),
        )),
        _ => Err(Error::Argument("give only one input source".into())),
    }
}

fn experiment(task: Task, args: Common) -> Result<()> {
    let sweep = match (args.a.is_empty(), args.epsilon) {
        (false, None) => Sweep::Multipliers(args.a.clone()),
        (true, Some(e)) => Sweep::Epsilon(e),
        _ => return Err(Error::Argument("give exactly one of --a and --epsilon".into())),
    };
    let default_variant = if task == Task::LowerBound { "standard" } else { "modified" };
    let default_method = if task == Task::LowerBound { "uniform" } else { "adaptive" };
    let config = ExperimentConfig {
        source: source(&args.input)?,
        task,
        method: args.method.as_deref().unwrap_or(default_method).parse::<Method>()?,
        variant: args.variant.as_deref().unwrap_or(default_variant).parse::<Variant>()?,
        k: args.k,
        sweep,
        ensemble_t: args.ensemble_t,
        repeats: args.repeats,
        seed: args.seed,
        timing: !args.no_timing,
        max_dim: args.input.max_dim,
    };
    config.validate()?;
    let format: OutputFormat = args.out_format.parse()?;
    let a = config.source.load(config.max_dim)?;
    let records = bench::run_experiment(&config, &a)?;
    bench::emit(&records, format, args.input.out.as_deref())
}

fn write_matrix<W: Write>(a: &Matrix, mut out: W) -> Result<()> {
    for row in a.row_iter() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    out.flush()?;
    Ok(())
}

fn kernel_command(args: InputArgs) -> Result<()> {
    let sigma = args.sigma.ok_or_else(|| Error::Argument("--sigma is required".into()))?;
    let points = match (&args.points, args.random_points) {
        (Some(p), None) => ingest::ingest(p, InputFormat::DenseCsv, args.max_dim)?,
        (None, Some(n)) => kernel::gaussian_points(n, args.dim, &mut rng_from_seed(args.data_seed)),
        _ => return Err(Error::Argument("give exactly one of --points and --random-points".into())),
    };
    let k = bench::build_rbf_kernel(&points, sigma)?;
    match &args.out {
        Some(path) => write_matrix(&k, std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => write_matrix(&k, std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Cur(args) => experiment(Task::Cur, args),
        Command::Nystrom(args) => experiment(Task::Nystrom, args),
        Command::Lowerbound(args) => experiment(Task::LowerBound, args),
        Command::Kernel(args) => kernel_command(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io(_) | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

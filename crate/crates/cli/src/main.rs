use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use permanent::algorithms::{AlgorithmId, Method};
use permanent::oracles::{run_precision_suite, write_precision_csv, Family, PrecisionConfig};
use permanent::tuner::{self, plane_intersection, TuneConfig};
use permanent::{DynMatrix, Options, PermanentError, TuningParams, TuningSource, Value};

/// Bundled defaults, rewritten by `tune` when `PERMANENT_TUNE=ON`.
const BUNDLED_TUNING: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tuning/default.tuning");

#[derive(Parser)]
#[command(name = "permanent", version, about = "Matrix permanents by enumeration, Ryser and Glynn")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the permanent of one matrix.
    Compute(ComputeArgs),
    /// Time the algorithms on this machine and fit dispatch parameters.
    Tune(TuneArgs),
    /// Time the algorithms over a shape grid and write a CSV.
    Bench(BenchArgs),
    /// Score every algorithm against analytic permanents and write a CSV.
    Precision(PrecisionArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// opt, combinatoric, ryser or glynn, optionally with _square or
    /// _rectangular.
    #[arg(short, long, default_value = "opt")]
    algorithm: String,
    /// Dispatch parameters for `opt` (defaults to the bundled file).
    #[arg(long)]
    tuning_file: Option<PathBuf>,
    /// Compute integer input in double precision.
    #[arg(long)]
    float: bool,
    /// Read the matrix from a file, or `-` for stdin.
    #[arg(short, long, conflicts_with = "matrix")]
    input: Option<PathBuf>,
    /// Print the chosen algorithm to stderr.
    #[arg(short, long)]
    verbose: bool,
    /// Inline matrix: rows separated by `;`, entries by whitespace.
    matrix: Option<String>,
}

#[derive(Args)]
struct TuneArgs {
    /// Where to write the tuning file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the raw timings as CSV.
    #[arg(long)]
    bench_csv: Option<PathBuf>,
    /// Fit from timings previously written by `bench` or `--bench-csv`
    /// instead of timing the grid again.
    #[arg(long, conflicts_with = "bench_csv")]
    from_csv: Option<PathBuf>,
    /// Force both planes through the point `N,R` (column, rectangularity);
    /// `p8` becomes the rounded `N`.
    #[arg(long, value_parser = parse_anchor)]
    anchor: Option<(f64, f64)>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 24)]
    n_max: usize,
    /// Print each timed cell to stderr.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 24)]
    n_max: usize,
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct PrecisionArgs {
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    /// Random Cauchy draws per order; the best conditioned one is kept.
    #[arg(long, default_value_t = permanent::oracles::DEFAULT_CAUCHY_ATTEMPTS)]
    cauchy_attempts: usize,
    /// Comma-separated subset of ones, identity, cauchy.
    #[arg(long, value_delimiter = ',')]
    families: Vec<String>,
    /// Comma-separated subset of combinatoric, ryser, glynn.
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<String>,
}

enum Failure {
    Input(String),
    Overflow(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Overflow(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Overflow(m) | Failure::Io(m) => m,
        }
    }
}

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Tune(a) => tune(a),
        Command::Bench(a) => bench(a),
        Command::Precision(a) => precision(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn compute(args: ComputeArgs) -> Result<(), Failure> {
    let method: Method = args
        .algorithm
        .parse()
        .map_err(|e| Failure::Input(format!("{e}")))?;
    let params = match &args.tuning_file {
        Some(p) => TuningParams::load(p).map_err(|e| match e {
            permanent::ParamsError::Io(_) => io_failure(p, e),
            _ => Failure::Input(format!("{}: {e}", p.display())),
        })?,
        None => TuningParams::default(),
    };
    let text = match (&args.input, &args.matrix) {
        (Some(p), _) if p.as_os_str() == "-" => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
            s
        }
        (Some(p), _) => fs::read_to_string(p).map_err(|e| io_failure(p, e))?,
        (None, Some(m)) => m.clone(),
        (None, None) => return Err(Failure::Input("no matrix given; pass it inline or with --input".into())),
    };
    let matrix = parse_matrix(&text).map_err(Failure::Input)?;
    let options = Options {
        method,
        params,
        integer_output: !args.float,
    };
    let outcome = permanent::permanent(&matrix, &options).map_err(|e| match e {
        PermanentError::Overflow { .. } => Failure::Overflow(e.to_string()),
        _ => Failure::Input(e.to_string()),
    })?;
    if args.verbose {
        eprintln!("algorithm: {}", outcome.algorithm);
    }
    if outcome.result.overflowed {
        return Err(Failure::Overflow(
            "the permanent does not fit in a 64-bit integer; rerun with --float".into(),
        ));
    }
    println!("{}", outcome.result.value);
    Ok(())
}

/// Rows are separated by `;` or newlines and entries by whitespace or commas.
/// One float entry makes the whole matrix float, one complex entry (`a+bi`)
/// makes it complex.
fn parse_matrix(text: &str) -> Result<DynMatrix, String> {
    let rows: Vec<Vec<&str>> = text
        .split(['\n', ';'])
        .map(|line| line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect::<Vec<_>>())
        .filter(|r| !r.is_empty())
        .collect();
    let Some(cols) = rows.first().map(Vec::len) else {
        return Err("the matrix is empty".into());
    };
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(format!("row {} has {} entries, expected {cols}", i + 1, r.len()));
    }
    let tokens: Vec<&str> = rows.iter().flatten().copied().collect();
    let is_complex = tokens.iter().any(|t| t.ends_with(['i', 'j']));
    let is_float = tokens.iter().any(|t| t.contains(['.', 'e', 'E']) || t.parse::<i64>().is_err());
    let bad = |t: &str| format!("cannot parse {t:?} as a number");
    let values: Vec<Value> = tokens
        .iter()
        .map(|&t| {
            if is_complex {
                t.replace('j', "i").parse::<Complex64>().map(Value::Complex).map_err(|_| bad(t))
            } else if is_float {
                t.parse::<f64>().map(Value::Float).map_err(|_| bad(t))
            } else {
                t.parse::<i64>().map(Value::Int).map_err(|_| bad(t))
            }
        })
        .collect::<Result<_, _>>()?;
    DynMatrix::from_values(rows.len(), cols, values).map_err(|e| e.to_string())
}

fn write_output(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let mut f = io::BufWriter::new(fs::File::create(p).map_err(|e| io_failure(p, e))?);
            write(&mut f).and_then(|_| f.flush()).map_err(|e| io_failure(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn check_range(n_min: usize, n_max: usize) -> Result<(), Failure> {
    if n_min < 1 || n_min > n_max {
        return Err(Failure::Input(format!("invalid size range {n_min}..={n_max}")));
    }
    Ok(())
}

fn tune(args: TuneArgs) -> Result<(), Failure> {
    check_range(args.n_min, args.n_max)?;
    let mut config = TuneConfig {
        n_range: args.n_min..=args.n_max,
        seed: args.seed,
        ..TuneConfig::default()
    };
    config.timing.trials = args.trials.max(3);
    let verbose = args.verbose;
    config.anchor = args.anchor;
    let samples = match &args.from_csv {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_failure(p, e))?;
            tuner::read_bench_csv(&text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        None => {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(config.seed);
            let shapes = tuner::grid_shapes(config.n_range.clone(), &config.ratios);
            tuner::run_grid(&shapes, &config.timing, &mut rng, |s| {
                if verbose {
                    eprintln!("{:>12} {:>2}x{:<2} {:.3e} s", s.algorithm.name(), s.m, s.n, s.median_seconds);
                }
            })
        }
    };
    // timings are kept even when the fit fails
    if let Some(p) = &args.bench_csv {
        write_output(Some(p), |w| tuner::write_bench_csv(w, &samples))?;
    }
    let report = tuner::fit_samples(samples, &config).map_err(|e| Failure::Input(e.to_string()))?;

    let mut params = report.params().clone();
    let bundled = std::env::var("PERMANENT_TUNE").is_ok_and(|v| v == "ON");
    if bundled {
        params.source = TuningSource::Default;
    }
    for (k, v) in ["p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8"].iter().zip(params.values()) {
        eprintln!("{k} = {v}");
    }
    match plane_intersection(&params) {
        Some((n, r)) => eprintln!("planes intersect at n = {n:.3}, r = {r:.3}"),
        None => eprintln!("planes are parallel"),
    }
    if !(report.derived.plane1.separable && report.derived.plane2.separable) {
        eprintln!("warning: labels were not linearly separable; the fallback line was used");
    }

    let target = if bundled { Some(PathBuf::from(BUNDLED_TUNING)) } else { args.output.clone() };
    match target {
        Some(p) => params.save(&p).map_err(|e| io_failure(&p, e)),
        None => write_output(None, |w| w.write_all(params.to_file_string().as_bytes())),
    }
}

fn parse_anchor(text: &str) -> Result<(f64, f64), String> {
    let (n, r) = text.split_once(',').ok_or("expected N,R")?;
    let n: f64 = n.trim().parse().map_err(|_| format!("bad column {n:?}"))?;
    let r: f64 = r.trim().parse().map_err(|_| format!("bad ratio {r:?}"))?;
    if !(n >= 2.0 && n.is_finite() && r > 0.0 && r <= 1.0) {
        return Err("need N >= 2 and 0 < R <= 1".into());
    }
    Ok((n, r))
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    check_range(args.n_min, args.n_max)?;
    let config = TuneConfig::default();
    let mut timing = config.timing.clone();
    timing.trials = args.trials.max(3);
    let shapes = tuner::grid_shapes(args.n_min..=args.n_max, &config.ratios);
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(args.seed);
    let verbose = args.verbose;
    let samples = tuner::run_grid(&shapes, &timing, &mut rng, |s| {
        if verbose {
            eprintln!("{:>12} {:>2}x{:<2} {:.3e} s", s.algorithm.name(), s.m, s.n, s.median_seconds);
        }
    });
    write_output(args.output.as_deref(), |w| tuner::write_bench_csv(w, &samples))
}

fn precision(args: PrecisionArgs) -> Result<(), Failure> {
    check_range(args.n_min, args.n_max)?;
    let mut config = PrecisionConfig {
        n_range: args.n_min..=args.n_max,
        seed: args.seed,
        cauchy_attempts: args.cauchy_attempts.max(1),
        ..PrecisionConfig::default()
    };
    if !args.families.is_empty() {
        config.families = args
            .families
            .iter()
            .map(|f| {
                Family::ALL
                    .into_iter()
                    .find(|x| x.name() == f.as_str())
                    .ok_or_else(|| Failure::Input(format!("unknown family {f:?}")))
            })
            .collect::<Result<_, _>>()?;
    }
    if !args.algorithms.is_empty() {
        config.algorithms = args
            .algorithms
            .iter()
            .map(|a| a.parse::<AlgorithmId>().map_err(|e| Failure::Input(e.to_string())))
            .collect::<Result<_, _>>()?;
    }
    let records = run_precision_suite(&config);
    write_output(args.output.as_deref(), |w| write_precision_csv(w, &records))
}

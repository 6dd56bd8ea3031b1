//! Command-line front end: parse complex/graph files, run the estimators
//! and the exact oracle, and emit machine-readable reports.
//!
//! Exit codes: 0 success, 1 failure (including failed validation checks),
//! 2 parse error, 3 budget error, 4 oracle-scale error.

mod report;
mod validate;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use bettimc::chebyshev::{estimate_betti, EstimateOptions};
use bettimc::complex::Complex;
use bettimc::error::Error;
use bettimc::gen::{random_er_clique_complex, random_general_complex};
use bettimc::io::{format_complex, read_complex_file, read_complex_file_with_warnings};
use bettimc::laplacian::SpectralParams;
use bettimc::oracle;
use bettimc::walk::{column_norm_bound, estimate_trace_power, hoeffding_budget};
use bettimc::{DEFAULT_MAX_BUDGET, DEFAULT_SEED};

use report::{RunReport, ValidationSummary};

#[derive(Parser)]
#[command(
    name = "bettimc",
    version,
    about = "Monte Carlo estimation of normalized Betti numbers of simplicial and clique complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the normalized Betti number of the input complex.
    Estimate(EstimateArgs),
    /// Estimate the normalized trace of one power of H.
    Trace(TraceArgs),
    /// Exact Betti number from the integer-rank oracle.
    Exact(OracleArgs),
    /// Exact spectrum of the combinatorial Laplacian.
    Spectrum(SpectrumArgs),
    /// Run the structural invariant suite against the input.
    Validate(ValidateArgs),
    /// Time the estimator against the exact oracle.
    Bench(EstimateArgs),
    /// Generate a random instance file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// `auto`, `n`, or an explicit positive number.
#[derive(Clone, Copy, Debug)]
enum LambdaHat {
    Auto,
    VertexCount,
    Fixed(f64),
}

impl FromStr for LambdaHat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(LambdaHat::Auto),
            "n" => Ok(LambdaHat::VertexCount),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|v| *v > 0.0 && v.is_finite())
                .map(LambdaHat::Fixed)
                .ok_or_else(|| format!("expected 'auto', 'n' or a positive number, got {other:?}")),
        }
    }
}

impl fmt::Display for LambdaHat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaHat::Auto => write!(f, "auto"),
            LambdaHat::VertexCount => write!(f, "n"),
            LambdaHat::Fixed(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Args)]
struct InputArgs {
    /// Instance file (`complex <n>` or `graph <n>` header).
    input: PathBuf,
    /// Target dimension k.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SamplingArgs {
    /// Upper estimate of the largest Laplacian eigenvalue.
    #[arg(long, default_value = "auto")]
    lambda_hat: LambdaHat,
    /// RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker count for sample generation.
    #[arg(long, env = "BETTIMC_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Per-power cap on the number of walks.
    #[arg(long, default_value_t = DEFAULT_MAX_BUDGET)]
    max_budget: u64,
    /// Overall failure probability.
    #[arg(long, default_value_t = 0.01)]
    failure_prob: f64,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Additive precision for the normalized Betti number.
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Normalized spectral gap lower bound; defaults to the exact value on
    /// oracle-scale instances.
    #[arg(long)]
    gamma: Option<f64>,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Power of H to estimate.
    #[arg(long, default_value_t = 1)]
    z: u32,
    /// Additive precision of the trace estimate.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Relative zero-eigenvalue threshold.
    #[arg(long, default_value_t = oracle::DEFAULT_ZERO_TOL)]
    zero_tol: f64,
}

#[derive(Args)]
struct ValidateArgs {
    /// Instance file.
    input: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct GenArgs {
    /// Instance family: Erdős–Rényi clique complex or random facet complex.
    #[arg(long, value_enum)]
    model: GenModel,
    /// Vertex count.
    #[arg(long)]
    n: u32,
    /// Edge probability (er model).
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Facet count (complex model).
    #[arg(long, default_value_t = 6)]
    facets: usize,
    /// Largest facet size (complex model).
    #[arg(long, default_value_t = 4)]
    max_size: usize,
    /// RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output path for the instance file.
    #[arg(long)]
    out: PathBuf,
    /// Output format of the generation report.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GenModel {
    Er,
    Complex,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::Io(_) => 2,
        Error::Budget { .. } => 3,
        Error::OracleScale(_) => 4,
        _ => 1,
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Estimate(args) => run_estimate(args),
        Command::Trace(args) => run_trace(args),
        Command::Exact(args) => run_exact(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Validate(args) => run_validate(args),
        Command::Bench(args) => run_bench(args),
        Command::Gen(args) => run_gen(args),
    }
}

/// Resolved spectral parameters plus how they were obtained.
#[derive(Serialize)]
struct ResolvedParams {
    lambda_hat: f64,
    gamma: f64,
    lambda_hat_source: String,
    gamma_source: String,
}

fn oracle_scale(c: &Complex, k: usize) -> bool {
    let d_k = c.face_count(k);
    let d_down = if k > 0 { c.face_count(k - 1) } else { 0 };
    let d_up = c.face_count(k + 1);
    d_k <= oracle::SPECTRUM_LIMIT
        && d_k.saturating_mul(d_down.max(d_up).max(1)) <= oracle::DENSE_ENTRY_LIMIT
}

fn resolve_params(
    c: &Complex,
    k: usize,
    lambda_hat: LambdaHat,
    gamma: Option<f64>,
    warnings: &mut Vec<String>,
) -> Result<ResolvedParams, Error> {
    if c.face_count(k) == 0 {
        return Err(Error::EmptyDimension { k });
    }
    let spectrum = if oracle_scale(c, k) {
        Some(oracle::exact_spectrum(c, k, oracle::DEFAULT_ZERO_TOL)?)
    } else {
        None
    };

    let (resolved_lambda, lambda_src) = match (lambda_hat, &spectrum) {
        (LambdaHat::Fixed(v), s) => {
            if let Some(s) = s {
                if v < s.lambda_max - 1e-9 {
                    warnings.push(format!(
                        "lambda_hat = {v} is below the exact lambda_max = {}",
                        s.lambda_max
                    ));
                }
            }
            (v, "fixed".to_string())
        }
        (LambdaHat::VertexCount, _) => (c.vertex_count() as f64, "n".to_string()),
        (LambdaHat::Auto, Some(s)) => {
            if s.lambda_max > 0.0 {
                (s.lambda_max, "oracle".to_string())
            } else {
                warnings.push("Laplacian is zero; lambda_hat fixed at 1".to_string());
                (1.0, "degenerate".to_string())
            }
        }
        (LambdaHat::Auto, None) => (c.vertex_count() as f64, "n-fallback".to_string()),
    };

    let (resolved_gamma, gamma_src) = match (gamma, &spectrum) {
        (Some(g), _) => {
            if !(g > 0.0 && g <= 1.0) {
                return Err(Error::InvalidParams(format!("gamma must lie in (0, 1], got {g}")));
            }
            (g, "fixed".to_string())
        }
        (None, Some(s)) => match s.gap {
            Some(gap) => ((gap / resolved_lambda).min(1.0), "oracle".to_string()),
            None => (1.0, "degenerate".to_string()),
        },
        (None, None) => {
            return Err(Error::InvalidParams(
                "instance is beyond oracle scale; supply --gamma explicitly".into(),
            ))
        }
    };

    Ok(ResolvedParams {
        lambda_hat: resolved_lambda,
        gamma: resolved_gamma,
        lambda_hat_source: lambda_src,
        gamma_source: gamma_src,
    })
}

fn print_report<C: Serialize, R: Serialize>(format: Format, report: &RunReport<C, R>) {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => {
            println!("command: {}", report.command);
            println!(
                "config: {}",
                serde_json::to_string(&report.config).expect("config serialization")
            );
            println!(
                "result: {}",
                serde_json::to_string_pretty(&report.result).expect("result serialization")
            );
            if let Some(samples) = report.samples_used {
                println!("samples used: {samples}");
            }
            for w in &report.warnings {
                println!("warning: {w}");
            }
            println!("wall time: {:.3}s", report.wall_time);
        }
    }
}

#[derive(Serialize)]
struct EstimateConfigEcho {
    input: String,
    k: usize,
    epsilon: f64,
    params: ResolvedParams,
    seed: u64,
    workers: usize,
    max_budget: u64,
    failure_prob: f64,
}

fn run_estimate(args: EstimateArgs) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let (c, mut warnings) = read_complex_file_with_warnings(&args.input.input)?;
    let k = args.input.k;
    let resolved = resolve_params(&c, k, args.sampling.lambda_hat, args.gamma, &mut warnings)?;
    let params = SpectralParams::new(resolved.lambda_hat, resolved.gamma)?;
    let opts = EstimateOptions {
        seed: args.sampling.seed,
        workers: args.sampling.workers.max(1),
        max_budget: args.sampling.max_budget,
        failure_prob: args.sampling.failure_prob,
    };
    let estimate = estimate_betti(&c, k, &params, args.epsilon, &opts)?;
    let samples = estimate.samples_used();
    let report = RunReport {
        command: "estimate",
        config: EstimateConfigEcho {
            input: args.input.input.display().to_string(),
            k,
            epsilon: args.epsilon,
            params: resolved,
            seed: opts.seed,
            workers: opts.workers,
            max_budget: opts.max_budget,
            failure_prob: opts.failure_prob,
        },
        result: estimate,
        wall_time: started.elapsed().as_secs_f64(),
        samples_used: Some(samples),
        warnings,
    };
    print_report(args.input.format, &report);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct TraceConfigEcho {
    input: String,
    k: usize,
    z: u32,
    epsilon: f64,
    params: ResolvedParams,
    seed: u64,
    workers: usize,
    max_budget: u64,
    failure_prob: f64,
}

fn run_trace(args: TraceArgs) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let (c, mut warnings) = read_complex_file_with_warnings(&args.input.input)?;
    let k = args.input.k;
    // The trace of a fixed power does not involve the gap; resolve it
    // opportunistically and fall back to 1.
    let resolved = resolve_params(&c, k, args.sampling.lambda_hat, None, &mut warnings)
        .or_else(|_| resolve_params(&c, k, args.sampling.lambda_hat, Some(1.0), &mut warnings))?;
    let params = SpectralParams::new(resolved.lambda_hat, resolved.gamma)?;
    let bound = column_norm_bound(&c, k, &params)?;
    let budget = hoeffding_budget(
        bound,
        args.z,
        args.epsilon,
        args.sampling.failure_prob,
        args.sampling.max_budget,
    )?;
    let estimate = estimate_trace_power(
        &c,
        k,
        args.z,
        &params,
        &budget,
        args.sampling.seed,
        0,
        args.sampling.workers.max(1),
    )?;
    let report = RunReport {
        command: "trace",
        config: TraceConfigEcho {
            input: args.input.input.display().to_string(),
            k,
            z: args.z,
            epsilon: args.epsilon,
            params: resolved,
            seed: args.sampling.seed,
            workers: args.sampling.workers.max(1),
            max_budget: args.sampling.max_budget,
            failure_prob: args.sampling.failure_prob,
        },
        result: estimate,
        wall_time: started.elapsed().as_secs_f64(),
        samples_used: Some(budget.p),
        warnings,
    };
    print_report(args.input.format, &report);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SimpleConfigEcho {
    input: String,
    k: usize,
}

#[derive(Serialize)]
struct ExactResult {
    betti: u64,
    d_k: usize,
    normalized: f64,
}

fn run_exact(args: OracleArgs) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let (c, warnings) = read_complex_file_with_warnings(&args.input.input)?;
    let k = args.input.k;
    let d_k = c.face_count(k);
    if d_k == 0 {
        return Err(Error::EmptyDimension { k });
    }
    let betti = oracle::exact_betti(&c, k)?;
    let report = RunReport {
        command: "exact",
        config: SimpleConfigEcho { input: args.input.input.display().to_string(), k },
        result: ExactResult { betti, d_k, normalized: betti as f64 / d_k as f64 },
        wall_time: started.elapsed().as_secs_f64(),
        samples_used: None,
        warnings,
    };
    print_report(args.input.format, &report);
    Ok(ExitCode::SUCCESS)
}

fn run_spectrum(args: SpectrumArgs) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let (c, warnings) = read_complex_file_with_warnings(&args.input.input)?;
    let spectrum = oracle::exact_spectrum(&c, args.input.k, args.zero_tol)?;
    let report = RunReport {
        command: "spectrum",
        config: SimpleConfigEcho { input: args.input.input.display().to_string(), k: args.input.k },
        result: spectrum,
        wall_time: started.elapsed().as_secs_f64(),
        samples_used: None,
        warnings,
    };
    print_report(args.input.format, &report);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ValidateConfigEcho {
    input: String,
}

fn run_validate(args: ValidateArgs) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let c = read_complex_file(&args.input)?;
    let checks = validate::run_suite(&c)?;
    let summary = ValidationSummary::new(checks);
    let all_passed = summary.failed == 0;
    if matches!(args.format, Format::Text) {
        for check in &summary.checks {
            let status = if check.passed { "pass" } else { "FAIL" };
            let detail = if check.detail.is_empty() {
                String::new()
            } else {
                format!(" ({})", check.detail)
            };
            println!("{status} k={} {}{detail}", check.k, check.name);
        }
        println!("{} passed, {} failed", summary.passed, summary.failed);
    } else {
        let report = RunReport {
            command: "validate",
            config: ValidateConfigEcho { input: args.input.display().to_string() },
            result: summary,
            wall_time: started.elapsed().as_secs_f64(),
            samples_used: None,
            warnings: Vec::new(),
        };
        println!("{}", report.to_json());
        return Ok(if report.result.failed == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        });
    }
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[derive(Serialize)]
struct BenchResult {
    estimate: bettimc::BettiEstimate,
    estimator_seconds: f64,
    exact_betti: Option<u64>,
    exact_normalized: Option<f64>,
    oracle_seconds: Option<f64>,
}

fn run_bench(args: EstimateArgs) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let (c, mut warnings) = read_complex_file_with_warnings(&args.input.input)?;
    let k = args.input.k;
    let resolved = resolve_params(&c, k, args.sampling.lambda_hat, args.gamma, &mut warnings)?;
    let params = SpectralParams::new(resolved.lambda_hat, resolved.gamma)?;
    let opts = EstimateOptions {
        seed: args.sampling.seed,
        workers: args.sampling.workers.max(1),
        max_budget: args.sampling.max_budget,
        failure_prob: args.sampling.failure_prob,
    };

    let est_started = Instant::now();
    let estimate = estimate_betti(&c, k, &params, args.epsilon, &opts)?;
    let estimator_seconds = est_started.elapsed().as_secs_f64();
    let samples = estimate.samples_used();

    let (exact, exact_seconds) = if oracle_scale(&c, k) {
        let oracle_started = Instant::now();
        let betti = oracle::exact_betti(&c, k)?;
        (Some(betti), Some(oracle_started.elapsed().as_secs_f64()))
    } else {
        warnings.push("instance beyond oracle scale; skipping exact comparison".into());
        (None, None)
    };

    let d_k = c.face_count(k);
    let report = RunReport {
        command: "bench",
        config: EstimateConfigEcho {
            input: args.input.input.display().to_string(),
            k,
            epsilon: args.epsilon,
            params: resolved,
            seed: opts.seed,
            workers: opts.workers,
            max_budget: opts.max_budget,
            failure_prob: opts.failure_prob,
        },
        result: BenchResult {
            estimate,
            estimator_seconds,
            exact_betti: exact,
            exact_normalized: exact.map(|b| b as f64 / d_k as f64),
            oracle_seconds: exact_seconds,
        },
        wall_time: started.elapsed().as_secs_f64(),
        samples_used: Some(samples),
        warnings,
    };
    print_report(args.input.format, &report);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct GenConfigEcho {
    model: GenModel,
    n: u32,
    p: f64,
    facets: usize,
    max_size: usize,
    seed: u64,
    out: String,
}

#[derive(Serialize)]
struct GenResult {
    dimension: Option<usize>,
    face_counts: Vec<usize>,
}

fn run_gen(args: GenArgs) -> Result<ExitCode, Error> {
    let started = Instant::now();
    let c = match args.model {
        GenModel::Er => random_er_clique_complex(args.n, args.p, args.seed)?,
        GenModel::Complex => random_general_complex(args.n, args.facets, args.max_size, args.seed)?,
    };
    std::fs::write(&args.out, format_complex(&c))?;
    let dimension = c.dimension();
    let face_counts = match dimension {
        Some(dim) => (0..=dim).map(|k| c.face_count(k)).collect(),
        None => Vec::new(),
    };
    let report = RunReport {
        command: "gen",
        config: GenConfigEcho {
            model: args.model,
            n: args.n,
            p: args.p,
            facets: args.facets,
            max_size: args.max_size,
            seed: args.seed,
            out: args.out.display().to_string(),
        },
        result: GenResult { dimension, face_counts },
        wall_time: started.elapsed().as_secs_f64(),
        samples_used: None,
        warnings: Vec::new(),
    };
    print_report(args.format, &report);
    Ok(ExitCode::SUCCESS)
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use specdiff::ddprec::{disc_error, disc_error_asym};
use specdiff::errmodel::{asym_ur, bound_ur, bound_ur_prime};
use specdiff::experiment::{
    emit_csv, run_mapped, run_transition, write_csv, ErrorReport, ExperimentConfig, FunctionKind,
};
use specdiff::kte_map::{balance_residual, solve_alpha_dd};
use specdiff::{fd_weights, ChebGrid, DiffBackend, Error, UNIT_ROUNDOFF};

#[derive(Parser)]
#[command(
    name = "specdiff",
    version,
    about = "Error-versus-n experiments for spectral differentiation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unmapped sweep: measured error at x = 1 with rounding and discretization models.
    Transition(SweepArgs),
    /// Mapped sweep: one curve per beta, alpha from the balance condition.
    Mapped(SweepArgs),
    /// Print the balanced mapping parameter.
    Alpha(AlphaArgs),
    /// Print the error bounds for one grid size.
    Bounds(BoundsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionArg {
    Sin2pi,
    Sinscaled,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Weights,
    Dct,
}

impl From<MethodArg> for DiffBackend {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Weights => DiffBackend::Weights,
            MethodArg::Dct => DiffBackend::Dct,
        }
    }
}

#[derive(Args)]
struct FunctionArgs {
    #[arg(long, value_enum, default_value = "sin2pi")]
    function: FunctionArg,
    /// Points per wavelength for sinscaled.
    #[arg(long, default_value_t = 4.0)]
    eta: f64,
    /// Unit roundoff.
    #[arg(long, default_value_t = UNIT_ROUNDOFF)]
    u: f64,
}

impl FunctionArgs {
    fn kind(&self) -> FunctionKind {
        match self.function {
            FunctionArg::Sin2pi => FunctionKind::Sin2Pi,
            FunctionArg::Sinscaled => FunctionKind::SinScaled { eta: self.eta },
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    func: FunctionArgs,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 8)]
    nmin: usize,
    #[arg(long, default_value_t = 64)]
    nmax: usize,
    #[arg(long, default_value_t = 1)]
    nstride: usize,
    #[arg(long, value_enum, default_value = "weights")]
    method: MethodArg,
    /// Comma-separated balance exponents (mapped runs).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    beta: Vec<f64>,
    /// Seed for randomized inputs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Measure at x = 1 only; defaults to true for transition, false for mapped.
    #[arg(long)]
    edge_only: Option<bool>,
    /// CSV output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long)]
    n: usize,
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "0"
    )]
    beta: Vec<f64>,
    #[arg(long, default_value_t = UNIT_ROUNDOFF)]
    u: f64,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    func: FunctionArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
}

enum Failure {
    Config(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::InvalidArgument(_)
            | Error::GridTooSmall(_)
            | Error::OrderExceedsDegree { .. }
            | Error::NoValidAlpha { .. }
            | Error::GammaUndefined { .. }
            | Error::Io { .. } => Failure::Config(e.to_string()),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

fn sweep_config(args: &SweepArgs, mapped: bool) -> ExperimentConfig {
    let method: DiffBackend = args.method.into();
    let betas = if args.beta.is_empty() {
        vec![method.default_beta()]
    } else {
        args.beta.clone()
    };
    ExperimentConfig {
        function: args.func.kind(),
        m: args.m,
        nmin: args.nmin,
        nmax: args.nmax,
        nstride: args.nstride,
        method,
        mapped,
        betas,
        u: args.func.u,
        seed: args.seed,
        edge_only: args.edge_only.unwrap_or(!mapped),
    }
}

fn write_report(report: &ErrorReport, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => emit_csv(report, path)?,
        None => write_csv(report, std::io::stdout().lock())?,
    }
    if report.has_numeric_failure() {
        return Err(Failure::Numeric(
            "non-finite value in a mandatory column".into(),
        ));
    }
    Ok(())
}

fn print_alpha(args: &AlphaArgs) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "n,beta,alpha,residual");
    for &beta in &args.beta {
        let alpha = solve_alpha_dd(args.n, beta, args.u)?;
        let residual = balance_residual(alpha, args.n, beta, args.u);
        let _ = writeln!(
            out,
            "{},{},{:.16e},{:.3e}",
            args.n,
            beta,
            alpha.to_f64(),
            residual
        );
    }
    Ok(())
}

fn print_bounds(args: &BoundsArgs) -> Result<(), Failure> {
    let (n, m, u) = (args.n, args.m, args.func.u);
    let grid = ChebGrid::new(n)?;
    let f = args.func.kind().test_function(n);
    let fabs = f
        .samples(grid.nodes())
        .iter()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    let ur = bound_ur(grid.as_grid(), m, 1.0, fabs, u)?;
    let urp = bound_ur_prime(&fd_weights(grid.as_grid(), m, 1.0)?, fabs, u)?;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "n = {n}, m = {m}, |f| = {fabs:.6e}");
    let _ = writeln!(out, "UR       {ur:.6e}");
    let _ = writeln!(out, "URprime  {urp:.6e}");
    if (1..=4).contains(&m) {
        let disc = disc_error(&f, &grid, m)?;
        let _ = writeln!(out, "UR_asym  {:.6e}", asym_ur(m, n, fabs, u)?);
        let _ = writeln!(out, "UD       {:.6e}", disc.value);
        let _ = writeln!(
            out,
            "UD_asym  {:.6e}",
            disc_error_asym(m, n, &disc.divided)?
        );
        for (j, d) in disc.divided.iter().enumerate() {
            let _ = writeln!(out, "D{}       {d:.6e}", j + 2);
        }
        if !disc.reliable {
            let _ = writeln!(out, "# UD not resolved in double-double at this n");
        }
    }
    for v in [ur, urp] {
        if !v.is_finite() {
            return Err(Failure::Numeric("bound is not finite".into()));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Transition(args) => {
            let report = run_transition(&sweep_config(&args, false))?;
            write_report(&report, &args.out)
        }
        Command::Mapped(args) => {
            let report = run_mapped(&sweep_config(&args, true))?;
            write_report(&report, &args.out)
        }
        Command::Alpha(args) => print_alpha(&args),
        Command::Bounds(args) => print_bounds(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(2)
        }
    }
}

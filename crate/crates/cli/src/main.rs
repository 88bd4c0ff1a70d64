use std::fs::File;
use std::io::{self, BufReader, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use ndim_cli::record::ErrorRecord;
use ndim_cli::{build_spec, parse_rational, run, run_batch, OutputRecord, RunError, RunOptions};
use ndim_core::Range;

#[derive(Parser)]
#[command(name = "ndim", version, about = "Exact ∫ (x²)^j (x²+M1)^l (x²+M2)^m dx by negative-dimensional integration")]
struct Cli {
    /// Relative tolerance for the quadrature cross-check.
    #[arg(long, global = true, env = "NDIM_QUAD_TOL", default_value_t = 1e-10)]
    quad_tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one integral.
    Eval(EvalArgs),
    /// Evaluate JSONL records ({"j","l","m","mass1","mass2","range"}), one output line each.
    Batch(BatchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RangeArg {
    Full,
    Half,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Exact,
    Float,
    Latex,
    Json,
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    j: i64,
    #[arg(long, allow_hyphen_values = true)]
    l: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    m: i64,
    #[arg(long, value_parser = rational, default_value = "1")]
    mass1: BigRational,
    #[arg(long, value_parser = rational, default_value = "4")]
    mass2: BigRational,
    #[arg(long, value_enum, default_value = "half")]
    range: RangeArg,
    #[arg(long, value_enum, default_value = "exact")]
    format: Format,
    /// Include per-basis-term values.
    #[arg(long)]
    breakdown: bool,
    /// Run both oracles and report agreement.
    #[arg(long)]
    crosscheck: bool,
}

#[derive(Args)]
struct BatchArgs {
    /// JSONL input file, `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Worker threads; output order never depends on it.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    breakdown: bool,
    #[arg(long)]
    crosscheck: bool,
}

fn print_text(rec: &OutputRecord, format: Format, out: &mut impl Write) -> io::Result<()> {
    let main = match format {
        Format::Exact => rec.exact.clone(),
        Format::Latex => rec.latex.clone(),
        Format::Float => format!("{:.17}", rec.float),
        Format::Json => unreachable!("handled by the caller"),
    };
    writeln!(out, "{main}")?;
    if let Some(terms) = &rec.terms {
        for t in terms {
            let value = if matches!(format, Format::Float) { format!("{:.17}", t.float) } else { t.exact.clone() };
            let note = t.strategy.as_deref().unwrap_or(if t.vanished { "vanished" } else { "gamma-ratio" });
            writeln!(out, "  {}: {value}  [{note}]", t.label)?;
        }
    }
    if let Some(o) = &rec.oracle {
        writeln!(out, "  closed form: {} (exact match: {})", o.closed_form, o.exact_match)?;
        writeln!(out, "  quadrature: {:.17} (relative delta {:.3e})", o.quad, o.quad_delta)?;
        writeln!(out, "  representations agree: {}", o.representations_agree)?;
    }
    Ok(())
}

fn eval(args: EvalArgs, quad_tol: f64) -> anyhow::Result<ExitCode> {
    let range = match args.range {
        RangeArg::Full => Range::Full,
        RangeArg::Half => Range::Half,
    };
    let opts = RunOptions { breakdown: args.breakdown, crosscheck: args.crosscheck, quad_tol };
    let outcome = build_spec(args.j, args.l, args.m, args.mass1, args.mass2, range)
        .map_err(RunError::from)
        .and_then(|spec| run(&spec, &opts));
    let mut out = io::stdout().lock();
    match outcome {
        Ok(rec) => {
            match args.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string(&rec)?)?,
                f => print_text(&rec, f, &mut out)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            if matches!(args.format, Format::Json) {
                writeln!(out, "{}", serde_json::to_string(&ErrorRecord::from(&e))?)?;
            } else {
                eprintln!("error: {e}");
            }
            Ok(ExitCode::from(if matches!(e, RunError::Spec(_)) { 2 } else { 1 }))
        }
    }
}

fn batch(args: BatchArgs, quad_tol: f64) -> anyhow::Result<ExitCode> {
    let opts = RunOptions { breakdown: args.breakdown, crosscheck: args.crosscheck, quad_tol };
    let out = io::stdout().lock();
    let all_ok = if args.input == "-" {
        run_batch(io::stdin().lock(), out, &opts, args.jobs)?
    } else {
        run_batch(BufReader::new(File::open(&args.input)?), out, &opts, args.jobs)?
    };
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval(a) => eval(a, cli.quad_tol),
        Command::Batch(a) => batch(a, cli.quad_tol),
    }
}

//! `dyck`: check, generate, reduce and benchmark Dyck-language streams.
//!
//! Exit codes: 0 accept, 1 reject (reason on stderr), 2 usage or input error.

mod bench;
mod gen;
mod source;

use std::fs::OpenOptions;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dyckstream::format::StreamFormat;
use dyckstream::word::oracle_check;
use dyckstream::{check_two_pass, Algo, HashParams, Letter, Metrics, Modulus, OnePassChecker, Verdict};

use source::{chars2_source, for_each_letter, Chars2Writer};

#[derive(Parser)]
#[command(name = "dyck", version, about = "Streaming recognizer for well-parenthesized expressions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership of a stream.
    Check(CheckArgs),
    /// Generate members, non-members and hard instances.
    #[command(subcommand)]
    Gen(gen::GenCommand),
    /// Reduce a many-type stream to two types, written as chars2.
    Reduce(ReduceArgs),
    /// Measure peak stack size and false-accept rate on random members.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Chars2,
    Tokens,
    Tags,
}

impl From<Format> for StreamFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Chars2 => StreamFormat::Chars2,
            Format::Tokens => StreamFormat::Tokens,
            Format::Tags => StreamFormat::Tags,
        }
    }
}

/// Fingerprint parameters shared by `check` and `bench`.
#[derive(Args, Clone, Copy)]
struct HashArgs {
    /// Seed for the random evaluation point.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Modulus selection.
    #[arg(long, default_value = "fixed_prime")]
    mode: Modulus,
    /// Error exponent: failure probability at most n^-c.
    #[arg(long, default_value_t = 1)]
    c: u32,
}

impl HashArgs {
    fn params(&self, n: u64) -> Result<HashParams> {
        Ok(HashParams::new(n.max(1), self.c, self.seed, self.mode)?)
    }
}

#[derive(Args)]
struct CheckArgs {
    /// Input file, or '-' for stdin.
    #[arg(default_value = "-")]
    input: String,
    #[arg(long, default_value = "onepass")]
    algo: Algo,
    #[arg(long, value_enum, default_value = "chars2")]
    format: Format,
    /// Alphabet size; above 2 the stream is reduced to two types first.
    #[arg(long, default_value_t = 2)]
    s: u32,
    #[command(flatten)]
    hash: HashArgs,
    /// Append the metrics record to this file.
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Input file, or '-' for stdin.
    #[arg(default_value = "-")]
    input: String,
    #[arg(long, value_enum, default_value = "tokens")]
    format: Format,
    #[arg(long, default_value_t = 2)]
    s: u32,
}

/// Oracle run with the stack depth as its space figure.
fn oracle_metrics(letters: &[Letter]) -> (Verdict, Metrics) {
    let verdict = oracle_check(letters);
    let mut m = Metrics::new(Algo::Oracle, letters.len() as u64);
    m.letters_read = letters.len() as u64;
    let mut h = 0i64;
    for l in letters {
        h += l.step_value();
        m.peak_stack_items = m.peak_stack_items.max(h.max(0) as u64);
    }
    m.pass_count = 1;
    m.verdict = Some(verdict);
    (verdict, m)
}

fn check(args: CheckArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let format = args.format.into();
    let (verdict, mut metrics) = match args.algo {
        Algo::Oracle => {
            let mut letters = Vec::new();
            for_each_letter(&args.input, format, args.s, |l| {
                letters.push(l);
                Ok(())
            })?;
            oracle_metrics(&letters)
        }
        Algo::OnePass => {
            let src = chars2_source(&args.input, format, args.s)?;
            let n = src.count()?;
            let mut checker = OnePassChecker::new(n, &args.hash.params(n)?)?;
            for l in src.letters()? {
                if checker.feed(l?)?.is_some() {
                    break;
                }
            }
            let (v, m, ()) = checker.finish()?;
            (v, m)
        }
        Algo::TwoPass => {
            let mut src = chars2_source(&args.input, format, args.s)?;
            let n = src.count()?;
            let (v, mut m) = check_two_pass(&mut src, n, &args.hash.params(n)?)?;
            m.buffered_reverse = src.spooled;
            (v, m)
        }
    };
    metrics.elapsed_us = start.elapsed().as_micros() as u64;
    if let Some(path) = &args.metrics {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        writeln!(f, "{}", metrics.emit())?;
    }
    Ok(match verdict {
        Verdict::Accept => {
            println!("accept");
            ExitCode::SUCCESS
        }
        Verdict::Reject(r) => {
            eprintln!("reject: {r} ({})", r.message());
            ExitCode::from(1)
        }
    })
}

fn reduce(args: ReduceArgs) -> Result<ExitCode> {
    let mut w = Chars2Writer::new(BufWriter::new(io::stdout().lock()));
    for_each_letter(&args.input, args.format.into(), args.s, |l| w.push(l))?;
    w.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check(args) => check(args),
        Command::Gen(cmd) => gen::run(cmd),
        Command::Reduce(args) => reduce(args),
        Command::Bench(args) => bench::run(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

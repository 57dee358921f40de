use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{ensure, Context, Result};
use clap::Args;
use dyckstream::instances::{gen_random_member, mutate_member};
use dyckstream::onepass::block_size_for;
use dyckstream::{check_one_pass, check_two_pass_slice, Algo, HashParams, Letter, Metrics, Verdict};

use crate::{oracle_metrics, HashArgs};

/// Seed offset for the evaluation points used against mutants, so they are
/// independent of the ones used on members.
const MUTANT_SEED_BASE: u64 = 1 << 32;

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "onepass")]
    algo: Algo,
    /// Comma-separated even word lengths, each a number or 2^k.
    #[arg(long, value_parser = parse_sizes, default_value = "2^10,2^12,2^14")]
    sizes: Sizes,
    /// Random members per size.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Mutants per size for the false-accept estimate.
    #[arg(long, default_value_t = 20)]
    trials: u64,
    #[command(flatten)]
    hash: HashArgs,
}

#[derive(Clone)]
struct Sizes(Vec<u64>);

fn parse_size(s: &str) -> Result<u64> {
    let n = match s.trim().split_once('^') {
        Some((base, exp)) => {
            let base: u64 = base.parse().with_context(|| format!("size {s:?}"))?;
            let exp: u32 = exp.parse().with_context(|| format!("size {s:?}"))?;
            base.checked_pow(exp).with_context(|| format!("size {s:?} overflows"))?
        }
        None => s.trim().parse().with_context(|| format!("size {s:?}"))?,
    };
    ensure!(n > 0 && n % 2 == 0, "size {n} must be positive and even");
    Ok(n)
}

fn parse_sizes(s: &str) -> Result<Sizes> {
    Ok(Sizes(s.split(',').map(parse_size).collect::<Result<_>>()?))
}

fn run_one(algo: Algo, letters: &[Letter], params: &HashParams) -> Result<(Verdict, Metrics)> {
    let start = Instant::now();
    let (v, mut m) = match algo {
        Algo::OnePass => check_one_pass(letters.iter().copied(), letters.len() as u64, params)?,
        Algo::TwoPass => check_two_pass_slice(letters, params)?,
        Algo::Oracle => oracle_metrics(letters),
    };
    m.elapsed_us = start.elapsed().as_micros() as u64;
    Ok((v, m))
}

/// The peak stack bound each algorithm is expected to respect.
fn peak_bound(algo: Algo, m: &Metrics) -> u64 {
    match algo {
        Algo::OnePass => block_size_for(m.n) + 1,
        Algo::TwoPass => 2 * u64::from(m.padded_n.trailing_zeros()),
        Algo::Oracle => m.n / 2,
    }
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.max(1.0).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn run(args: BenchArgs) -> Result<ExitCode> {
    ensure!(args.seeds > 0, "--seeds must be at least 1");
    let mut out = BufWriter::new(io::stdout().lock());
    let mut summary = Vec::new();
    let mut scaling = Vec::new();
    let mut over_bound = 0u64;
    for &n in &args.sizes.0 {
        let pairs = (n / 2) as usize;
        let mut peaks = Vec::new();
        let mut bound = 0;
        for seed in 0..args.seeds {
            let word = gen_random_member(pairs, seed);
            let params = HashArgs { seed, ..args.hash }.params(n)?;
            let (v, m) = run_one(args.algo, word.letters(), &params)?;
            ensure!(v.accepted(), "member n={n} seed={seed} rejected: {v}");
            bound = peak_bound(args.algo, &m);
            over_bound += u64::from(m.peak_stack_items > bound);
            peaks.push(m.peak_stack_items);
            writeln!(out, "{}", m.emit())?;
        }
        let mean = peaks.iter().sum::<u64>() as f64 / peaks.len() as f64;
        let max = peaks.iter().max().copied().unwrap_or(0);
        scaling.push((n as f64, mean));

        let mut accepted = 0u64;
        for t in 0..args.trials {
            let mutant = mutate_member(&gen_random_member(pairs, t), t)?;
            let params = HashArgs { seed: MUTANT_SEED_BASE + t, ..args.hash }.params(n)?;
            accepted += u64::from(run_one(args.algo, mutant.letters(), &params)?.0.accepted());
        }
        let rate = if args.trials == 0 { 0.0 } else { accepted as f64 / args.trials as f64 };
        summary.push(format!(
            "# size n={n} mean_peak={mean:.1} max_peak={max} bound={bound} mutants={} false_accepts={accepted} rate={rate:.6}",
            args.trials
        ));
    }
    for line in summary {
        writeln!(out, "{line}")?;
    }
    if let Some(slope) = log_log_slope(&scaling) {
        writeln!(out, "# scaling algo={} peak~n^{slope:.3} over_bound={over_bound}", args.algo)?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

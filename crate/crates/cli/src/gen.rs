use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{bail, ensure, Result};
use clap::{Args, Subcommand, ValueEnum};
use dyckstream::format::{to_tokens, StreamFormat};
use dyckstream::instances::{gen_ascension, gen_mountain, gen_random_member, mutate_member, random_instance, InstanceSpec};
use dyckstream::{Letter, Word};

use crate::source::{for_each_letter, Chars2Writer};

#[derive(Subcommand)]
pub enum GenCommand {
    /// Uniformly random member with the given number of pairs.
    Dyck {
        #[arg(long)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Flip the type of one matched pair of a member read from FILE.
    Mutate {
        /// chars2 file, or '-' for stdin.
        file: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// One MOUNTAIN word: member iff c equals X at position n-k+1.
    Mountain {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        c: AB,
        /// X as hex, bits most significant first, 0 = a and 1 = b.
        #[arg(long, conflicts_with = "seed")]
        x: Option<String>,
        /// Draw X at random.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// ASCENSION word from random parameters.
    Ascension {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Make coordinate i (1-based) wrong, giving a non-member.
        #[arg(long)]
        fault: Option<usize>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum AB {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Chars2,
    Tokens,
}

#[derive(Args)]
pub struct OutArgs {
    #[arg(long, value_enum, default_value = "chars2")]
    format: OutFormat,
}

fn x_from_hex(hex: &str, n: usize) -> Result<Vec<Letter>> {
    let mut bits = Vec::with_capacity(4 * hex.len());
    for ch in hex.trim_start_matches("0x").chars() {
        let Some(d) = ch.to_digit(16) else {
            bail!("--x: {ch:?} is not a hex digit");
        };
        bits.extend((0..4).rev().map(|k| d >> k & 1 == 1));
    }
    ensure!(bits.len() >= n, "--x holds {} bits, need n={n}", bits.len());
    Ok(bits[..n].iter().map(|&b| if b { Letter::B } else { Letter::A }).collect())
}

fn emit(word: &Word, member: bool, spec: Option<&InstanceSpec>, out: &OutArgs) -> Result<()> {
    let mut stdout = BufWriter::new(io::stdout().lock());
    writeln!(stdout, "# label={}", if member { "member" } else { "nonmember" })?;
    if let Some(spec) = spec {
        writeln!(stdout, "# {spec}")?;
    }
    match out.format {
        OutFormat::Chars2 => {
            let mut w = Chars2Writer::new(stdout);
            for &l in word.letters() {
                w.push(l)?;
            }
            w.finish()?;
        }
        OutFormat::Tokens => {
            writeln!(stdout, "{}", to_tokens(word.letters()))?;
            stdout.flush()?;
        }
    }
    Ok(())
}

pub fn run(cmd: GenCommand) -> Result<ExitCode> {
    match cmd {
        GenCommand::Dyck { pairs, seed, out } => emit(&gen_random_member(pairs, seed), true, None, &out)?,
        GenCommand::Mutate { file, seed, out } => {
            let mut letters = Vec::new();
            for_each_letter(&file, StreamFormat::Chars2, 2, |l| {
                letters.push(l);
                Ok(())
            })?;
            let word = mutate_member(&Word::dyck2(letters), seed)?;
            emit(&word, false, None, &out)?;
        }
        GenCommand::Mountain { n, k, c, x, seed, out } => {
            let x = match (x, seed) {
                (Some(hex), _) => x_from_hex(&hex, n)?,
                (None, Some(seed)) => random_instance(1, n, seed, None)?.xs.remove(0),
                (None, None) => bail!("mountain needs --x or --seed"),
            };
            let c = match c {
                AB::A => Letter::A,
                AB::B => Letter::B,
            };
            let spec = InstanceSpec { n, xs: vec![x.clone()], ks: vec![k], cs: vec![c] };
            let (word, member) = gen_mountain(&x, k, c)?;
            emit(&word, member, Some(&spec), &out)?;
        }
        GenCommand::Ascension { m, n, seed, fault, out } => {
            let spec = random_instance(m, n, seed, fault)?;
            let (word, member) = gen_ascension(&spec)?;
            emit(&word, member, Some(&spec), &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

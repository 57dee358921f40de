//! Per-run space and work counters, and their key/value record form.
//!
//! Record format (version 1): one line of space-separated `key=value`
//! fields, always in this order:
//!
//! ```text
//! v=1 algo=onepass n=1024 padded_n=1024 peak_stack_items=7 item_bits=72
//! space_bits=568 letters_read=1024 hash_mults=9321 checks_performed=130
//! pass_count=1 buffered_reverse=false verdict=accept reason=none elapsed_us=88
//! ```
//!
//! (shown wrapped; the record is a single line). `elapsed_us` is the only
//! field that varies between identical runs.

use std::collections::BTreeMap;
use std::fmt;

use crate::word::Verdict;

pub const RECORD_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    OnePass,
    TwoPass,
    Oracle,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::OnePass => "onepass",
            Algo::TwoPass => "twopass",
            Algo::Oracle => "oracle",
        }
    }
}

impl std::str::FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "onepass" => Ok(Algo::OnePass),
            "twopass" => Ok(Algo::TwoPass),
            "oracle" => Ok(Algo::Oracle),
            other => Err(format!("unknown algorithm {other:?}")),
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metrics {
    pub algo: Algo,
    pub n: u64,
    pub padded_n: u64,
    pub stack_items: u64,
    pub peak_stack_items: u64,
    /// Bits per stack item as stored.
    pub item_bits: u64,
    /// Counters, flags and buffers outside the stack.
    pub control_bits: u64,
    pub letters_read: u64,
    pub hash_mults: u64,
    pub checks_performed: u64,
    pub pass_count: u32,
    pub buffered_reverse: bool,
    pub verdict: Option<Verdict>,
    pub elapsed_us: u64,
}

impl Metrics {
    pub fn new(algo: Algo, n: u64) -> Metrics {
        Metrics {
            algo,
            n,
            padded_n: n,
            stack_items: 0,
            peak_stack_items: 0,
            item_bits: 0,
            control_bits: 0,
            letters_read: 0,
            hash_mults: 0,
            checks_performed: 0,
            pass_count: 0,
            buffered_reverse: false,
            verdict: None,
            elapsed_us: 0,
        }
    }

    pub fn record_push(&mut self) {
        self.stack_items += 1;
        self.peak_stack_items = self.peak_stack_items.max(self.stack_items);
    }

    pub fn record_pop(&mut self) {
        self.stack_items = self.stack_items.saturating_sub(1);
    }

    pub fn record_check(&mut self) {
        self.checks_performed += 1;
    }

    /// Peak space in bits: stack items at their stored width plus control state.
    pub fn space_bits(&self) -> u64 {
        self.peak_stack_items * self.item_bits + self.control_bits
    }

    /// The one-line record described in the module docs.
    pub fn emit(&self) -> String {
        let verdict = self.verdict.map_or("none", |v| if v.accepted() { "accept" } else { "reject" });
        let reason = self.verdict.map_or("none", Verdict::reason_str);
        format!(
            "v={RECORD_VERSION} algo={} n={} padded_n={} peak_stack_items={} item_bits={} space_bits={} \
             letters_read={} hash_mults={} checks_performed={} pass_count={} buffered_reverse={} \
             verdict={verdict} reason={reason} elapsed_us={}",
            self.algo,
            self.n,
            self.padded_n,
            self.peak_stack_items,
            self.item_bits,
            self.space_bits(),
            self.letters_read,
            self.hash_mults,
            self.checks_performed,
            self.pass_count,
            self.buffered_reverse,
            self.elapsed_us,
        )
    }
}

/// Splits a record into its fields.
pub fn parse_record(line: &str) -> Result<BTreeMap<String, String>, String> {
    line.split_whitespace()
        .map(|f| {
            f.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| format!("field {f:?} is not key=value"))
        })
        .collect()
}

/// Bits to store any integer in `0..=max`.
pub fn bits_for(max: u64) -> u64 {
    u64::from(64 - max.leading_zeros()).max(1)
}

//! One-pass checker with `O(√n log n)` space.
//!
//! The stream is cut into blocks of `⌈√n⌉` letters. Inside a block, matched
//! pairs are checked directly and cancelled, leaving a run of closers
//! followed by a run of openers. The closers are folded one by one into the
//! item on top of the stack; when an item's height drops to zero its
//! fingerprint must be zero and the item is dropped. The openers become one
//! new stack item `(fingerprint, count)`.
//!
//! Invariants of the stack (checked by the shadow tests):
//!
//! * every item encodes a subsequence `v = v_u v_d` of upsteps then
//!   downsteps, with `h = hash(v)` and `ell = height(v) > 0`;
//! * every downstep of `v_d` has its matching upstep in `v_u`;
//! * the sum of all `ell` equals the running height.

use crate::error::CheckError;
use crate::fingerprint::{HashParams, Residue};
use crate::metrics::{bits_for, Algo, Metrics};
use crate::word::{Letter, RejectReason, Verdict};

/// Compressed summary of a subsequence: fingerprint and height.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OnePassItem {
    pub h: Residue,
    pub ell: u64,
}

/// Observation hooks for instrumentation. Indices are 1-based stream
/// positions.
pub trait OnePassProbe {
    /// A pair inside one block was checked and cancelled.
    fn cancelled(&mut self, _i: u64, _j: u64) {}
    /// The closer at `index` was folded into the top item.
    fn extended(&mut self, _stack: &[OnePassItem], _index: u64) {}
    /// A zero-height item was tested; it is discarded if `passed`.
    fn checked(&mut self, _item: &OnePassItem, _passed: bool) {}
    /// A new item encoding the openers at `indices` was pushed.
    fn pushed(&mut self, _stack: &[OnePassItem], _indices: &[u64]) {}
    fn block_done(&mut self, _stack: &[OnePassItem], _letters_read: u64) {}
}

impl OnePassProbe for () {}

/// Residual form of a block after in-block cancellation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifiedBlock {
    pub down: Vec<Letter>,
    pub up: Vec<Letter>,
}

struct Positions {
    down: Vec<usize>,
    up: Vec<usize>,
    cancelled: Vec<(usize, usize)>,
}

fn simplify_positions(block: &[Letter]) -> Result<Positions, RejectReason> {
    let mut down = Vec::new();
    let mut up: Vec<usize> = Vec::new();
    let mut cancelled = Vec::new();
    for (pos, &l) in block.iter().enumerate() {
        if l.is_open() {
            up.push(pos);
            continue;
        }
        match up.pop() {
            Some(i) if block[i].closes_with(l) => cancelled.push((i, pos)),
            Some(_) => return Err(RejectReason::Mismatched),
            // Nothing open inside the block yet, so this closer reaches below
            // the block's starting height.
            None => down.push(pos),
        }
    }
    Ok(Positions { down, up, cancelled })
}

/// Cancels every matched pair inside `block`, failing on the first
/// ill-formed one. The result is all closers followed by all openers.
pub fn simplify_block(block: &[Letter]) -> Result<SimplifiedBlock, RejectReason> {
    let p = simplify_positions(block)?;
    Ok(SimplifiedBlock {
        down: p.down.iter().map(|&i| block[i]).collect(),
        up: p.up.iter().map(|&i| block[i]).collect(),
    })
}

/// `⌈√n⌉`, at least 1.
pub fn block_size_for(n: u64) -> u64 {
    let r = n.isqrt();
    (if r * r == n { r } else { r + 1 }).max(1)
}

/// Single-owner state machine for one run.
pub struct OnePassChecker<P = ()> {
    params: HashParams,
    n: u64,
    block_size: u64,
    stack: Vec<OnePassItem>,
    height: i64,
    letters_read: u64,
    block: Vec<Letter>,
    metrics: Metrics,
    probe: P,
    verdict: Option<Verdict>,
}

impl OnePassChecker<()> {
    pub fn new(n: u64, params: &HashParams) -> Result<Self, CheckError> {
        OnePassChecker::with_probe(n, params, ())
    }
}

impl<P: OnePassProbe> OnePassChecker<P> {
    pub fn with_probe(n: u64, params: &HashParams, probe: P) -> Result<Self, CheckError> {
        if n > params.n_bound() {
            return Err(CheckError::LengthExceedsBound { n, n_bound: params.n_bound() });
        }
        let block_size = block_size_for(n);
        let mut metrics = Metrics::new(Algo::OnePass, n);
        metrics.pass_count = 1;
        metrics.item_bits = u64::from(params.residue_bits()) + bits_for(n);
        // Running height, letters read, block buffer (2 bits per letter).
        metrics.control_bits = 2 * bits_for(n) + 2 * block_size;
        Ok(OnePassChecker {
            params: *params,
            n,
            block_size,
            stack: Vec::new(),
            height: 0,
            letters_read: 0,
            block: Vec::with_capacity(block_size as usize),
            metrics,
            probe,
            verdict: None,
        })
    }

    pub fn stack(&self) -> &[OnePassItem] {
        &self.stack
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn block_size(&self) -> u64 {
        self.block_size
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn probe(&self) -> &P {
        &self.probe
    }

    /// Verdict reached so far, if any.
    pub fn verdict(&self) -> Option<Verdict> {
        self.verdict
    }

    /// Consumes one letter. Returns the verdict once one is reached; further
    /// letters after a rejection are ignored.
    pub fn feed(&mut self, l: Letter) -> Result<Option<Verdict>, CheckError> {
        if self.verdict.is_some() {
            return Ok(self.verdict);
        }
        if !matches!(l.type_index(), 1 | 2) {
            return Err(CheckError::UnsupportedType {
                position: self.letters_read + 1,
                type_index: l.type_index(),
            });
        }
        if self.letters_read == self.n {
            return Err(CheckError::LengthMismatch { declared: self.n, actual: self.n + 1 });
        }
        self.letters_read += 1;
        self.metrics.letters_read = self.letters_read;
        self.block.push(l);
        if self.block.len() as u64 == self.block_size || self.letters_read == self.n {
            let block = std::mem::take(&mut self.block);
            if let Err(reason) = self.process_block(&block) {
                self.verdict = Some(Verdict::Reject(reason));
            }
            self.block = block;
            self.block.clear();
        }
        Ok(self.verdict)
    }

    /// Runs the block step on the letters just read (the last `block.len()`
    /// positions of the stream).
    pub fn process_block(&mut self, block: &[Letter]) -> Result<(), RejectReason> {
        let start = self.letters_read + 1 - block.len() as u64;
        let simplified = simplify_positions(block)?;
        for &(i, j) in &simplified.cancelled {
            self.probe.cancelled(start + i as u64, start + j as u64);
        }

        let base = self.height;
        for (k, &pos) in simplified.down.iter().enumerate() {
            let mut top = self.stack.pop().ok_or(RejectReason::ExtraClosing)?;
            self.metrics.record_pop();
            // Pair-height of the k-th residual closer is the height before it.
            let d = base - k as i64;
            debug_assert!(d >= 1 && top.ell >= 1);
            top.ell -= 1;
            let lh = self.params.letter_hash_counted(block[pos], d as u64, &mut self.metrics.hash_mults);
            top.h = self.params.combine(top.h, lh);
            self.stack.push(top);
            self.metrics.record_push();
            self.probe.extended(&self.stack, start + pos as u64);
            if top.ell == 0 {
                self.metrics.record_check();
                let passed = top.h.is_zero();
                self.probe.checked(&top, passed);
                if !passed {
                    return Err(RejectReason::Mismatched);
                }
                self.stack.pop();
                self.metrics.record_pop();
            }
        }
        self.height = base - simplified.down.len() as i64;

        if !simplified.up.is_empty() {
            let mut h = Residue::ZERO;
            for (k, &pos) in simplified.up.iter().enumerate() {
                // Residual openers climb one level each from the block minimum.
                let d = (self.height + k as i64 + 1) as u64;
                let lh = self.params.letter_hash_counted(block[pos], d, &mut self.metrics.hash_mults);
                h = self.params.combine(h, lh);
            }
            let ell = simplified.up.len() as u64;
            self.stack.push(OnePassItem { h, ell });
            self.metrics.record_push();
            self.height += ell as i64;
            let indices: Vec<u64> = simplified.up.iter().map(|&p| start + p as u64).collect();
            self.probe.pushed(&self.stack, &indices);
        }
        self.probe.block_done(&self.stack, self.letters_read);
        Ok(())
    }

    /// Ends the stream.
    pub fn finish(mut self) -> Result<(Verdict, Metrics, P), CheckError> {
        let verdict = match self.verdict {
            Some(v) => v,
            None if self.letters_read != self.n => {
                return Err(CheckError::LengthMismatch { declared: self.n, actual: self.letters_read })
            }
            None if !self.stack.is_empty() => Verdict::Reject(RejectReason::MissingClosing),
            None => Verdict::Accept,
        };
        self.metrics.verdict = Some(verdict);
        Ok((verdict, self.metrics, self.probe))
    }
}

/// Runs the one-pass checker over `letters`, which must hold exactly `n`
/// letters.
pub fn check_one_pass<I>(letters: I, n: u64, params: &HashParams) -> Result<(Verdict, Metrics), CheckError>
where
    I: IntoIterator<Item = Letter>,
{
    let (v, m, ()) = check_one_pass_with_probe(letters, n, params, ())?;
    Ok((v, m))
}

pub fn check_one_pass_with_probe<I, P>(
    letters: I,
    n: u64,
    params: &HashParams,
    probe: P,
) -> Result<(Verdict, Metrics, P), CheckError>
where
    I: IntoIterator<Item = Letter>,
    P: OnePassProbe,
{
    let mut checker = OnePassChecker::with_probe(n, params, probe)?;
    for l in letters {
        if checker.feed(l)?.is_some() {
            break;
        }
    }
    checker.finish()
}

//! Bidirectional two-pass checker with `O(log² n)` space.
//!
//! The input is padded with `(aā)^i` to a power-of-two length `2^k` and read
//! as a hierarchy of aligned blocks: an `i`-block is `x[(q-1)2^i + 1, q 2^i]`.
//! Letters are handled one at a time as in the one-pass checker (openers
//! push, closers fold into the top item, zero-height items are tested and
//! dropped). Whenever an `i`-block ends, the two top items are merged if both
//! start inside that block. Merging keeps the stack below `2k` items but
//! hides some ill-formed pairs from the zero test; every such pair is
//! exposed when the same procedure runs over the reversed, dualized input.
//!
//! The block recursion is driven by the position counter: after position
//! `t`, the blocks ending there are levels `1..=trailing_zeros(t)`, innermost
//! first, which is exactly the order the recursive form finishes them in.

use crate::error::CheckError;
use crate::fingerprint::{HashParams, Residue};
use crate::metrics::{bits_for, Algo, Metrics};
use crate::word::{Letter, RejectReason, Verdict};

/// Summary of a subsequence: fingerprint, height, and position of its first
/// letter in the word being scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoPassItem {
    pub h: Residue,
    pub ell: u64,
    pub first: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

/// Instrumentation hooks. Positions are 1-based in the padded word as it is
/// scanned in the current direction.
pub trait TwoPassProbe {
    fn pass_started(&mut self, _direction: Direction) {}
    fn pushed(&mut self, _stack: &[TwoPassItem], _index: u64) {}
    fn extended(&mut self, _stack: &[TwoPassItem], _index: u64) {}
    /// A zero-height item was tested; it is discarded if `passed`.
    fn checked(&mut self, _item: &TwoPassItem, _passed: bool) {}
    /// The two top items were merged at the end of the `level`-block
    /// starting at `block_start`.
    fn compressed(&mut self, _stack: &[TwoPassItem], _level: u32, _block_start: u64) {}
    /// Called once the letter at `index` and any block ends it closes have
    /// been processed.
    fn letter_done(&mut self, _stack: &[TwoPassItem], _index: u64, _letter: Letter) {}
}

impl TwoPassProbe for () {}

/// Smallest power of two `>= n` and the number of padding letters.
///
/// Odd lengths are never members and are rejected outright. The empty word
/// needs no blocks and maps to `(0, 0)`.
pub fn pad_to_pow2(n: u64) -> Result<(u64, u64), RejectReason> {
    if n % 2 == 1 {
        return Err(RejectReason::MissingClosing);
    }
    if n == 0 {
        return Ok((0, 0));
    }
    let padded = n.next_power_of_two();
    Ok((padded, padded - n))
}

pub fn dual(l: Letter) -> Letter {
    l.dual()
}

/// A stream that can be read forward once and then backward once.
///
/// `reverse` yields the original letters last-to-first, without dualizing.
pub trait Bidirectional {
    fn forward(&mut self) -> Result<impl Iterator<Item = Result<Letter, CheckError>> + '_, CheckError>;
    fn reverse(&mut self) -> Result<impl Iterator<Item = Result<Letter, CheckError>> + '_, CheckError>;
}

/// In-memory source.
pub struct SliceSource<'a>(pub &'a [Letter]);

impl Bidirectional for SliceSource<'_> {
    fn forward(&mut self) -> Result<impl Iterator<Item = Result<Letter, CheckError>> + '_, CheckError> {
        Ok(self.0.iter().copied().map(Ok))
    }

    fn reverse(&mut self) -> Result<impl Iterator<Item = Result<Letter, CheckError>> + '_, CheckError> {
        Ok(self.0.iter().rev().copied().map(Ok))
    }
}

enum Stop {
    Reject(RejectReason),
    Error(CheckError),
}

impl From<CheckError> for Stop {
    fn from(e: CheckError) -> Self {
        Stop::Error(e)
    }
}

/// Per-run state, reused across both passes.
pub struct TwoPassChecker<P = ()> {
    params: HashParams,
    n: u64,
    padded_n: u64,
    pad_count: u64,
    k: u32,
    stack: Vec<TwoPassItem>,
    height: i64,
    pos: u64,
    direction: Direction,
    metrics: Metrics,
    probe: P,
    /// Set when the length alone decides the run (odd `n`).
    decided: Option<Verdict>,
}

impl<P: TwoPassProbe> TwoPassChecker<P> {
    pub fn with_probe(n: u64, params: &HashParams, probe: P) -> Result<Self, CheckError> {
        if n > params.n_bound() {
            return Err(CheckError::LengthExceedsBound { n, n_bound: params.n_bound() });
        }
        let mut metrics = Metrics::new(Algo::TwoPass, n);
        let (padded_n, pad_count, decided) = match pad_to_pow2(n) {
            Ok((padded, pad)) => (padded, pad, None),
            Err(reason) => (n, 0, Some(Verdict::Reject(reason))),
        };
        let k = if padded_n == 0 { 0 } else { padded_n.trailing_zeros() };
        metrics.padded_n = padded_n;
        metrics.item_bits = u64::from(params.residue_bits()) + 2 * bits_for(padded_n);
        // Height, position, pad count, level counter.
        metrics.control_bits = 3 * bits_for(padded_n) + bits_for(u64::from(k));
        Ok(TwoPassChecker {
            params: *params,
            n,
            padded_n,
            pad_count,
            k,
            stack: Vec::new(),
            height: 0,
            pos: 0,
            direction: Direction::Forward,
            metrics,
            probe,
            decided,
        })
    }

    pub fn stack(&self) -> &[TwoPassItem] {
        &self.stack
    }

    pub fn depth(&self) -> u32 {
        self.k
    }

    pub fn padded_len(&self) -> u64 {
        self.padded_n
    }

    pub fn pad_count(&self) -> u64 {
        self.pad_count
    }

    pub fn probe(&self) -> &P {
        &self.probe
    }

    /// Processes one letter, already oriented for the current direction.
    fn step(&mut self, l: Letter) -> Result<(), Stop> {
        if !matches!(l.type_index(), 1 | 2) {
            return Err(CheckError::UnsupportedType { position: self.pos + 1, type_index: l.type_index() }.into());
        }
        self.pos += 1;
        self.metrics.letters_read += 1;
        let pos = self.pos;
        if l.is_open() {
            self.height += 1;
            let h = self.params.letter_hash_counted(l, self.height as u64, &mut self.metrics.hash_mults);
            self.stack.push(TwoPassItem { h, ell: 1, first: pos });
            self.metrics.record_push();
            self.probe.pushed(&self.stack, pos);
        } else {
            let mut top = self.stack.pop().ok_or(Stop::Reject(RejectReason::NegativeHeight))?;
            self.metrics.record_pop();
            debug_assert!(self.height >= 1 && top.ell >= 1);
            let lh = self.params.letter_hash_counted(l, self.height as u64, &mut self.metrics.hash_mults);
            self.height -= 1;
            top.ell -= 1;
            top.h = self.params.combine(top.h, lh);
            self.stack.push(top);
            self.metrics.record_push();
            self.probe.extended(&self.stack, pos);
            if top.ell == 0 {
                self.metrics.record_check();
                let passed = top.h.is_zero();
                self.probe.checked(&top, passed);
                if !passed {
                    return Err(Stop::Reject(RejectReason::Mismatched));
                }
                self.stack.pop();
                self.metrics.record_pop();
            }
        }

        let mut level = 1;
        while level <= self.k && pos.is_multiple_of(1u64 << level) {
            let block_start = pos - (1u64 << level) + 1;
            self.compress_if_inside(level, block_start);
            level += 1;
        }
        self.probe.letter_done(&self.stack, pos, l);
        Ok(())
    }

    fn compress_if_inside(&mut self, level: u32, block_start: u64) {
        let len = self.stack.len();
        if len < 2 || self.stack[len - 1].first < block_start || self.stack[len - 2].first < block_start {
            return;
        }
        let top = self.stack.pop().expect("two items");
        self.metrics.record_pop();
        let below = self.stack.last_mut().expect("two items");
        below.h = self.params.combine(below.h, top.h);
        below.ell += top.ell;
        self.probe.compressed(&self.stack, level, block_start);
    }

    /// Reads one aligned `level`-block (`2^level` letters) from `letters`.
    ///
    /// # Panics
    /// If the current position is not a multiple of `2^level`.
    fn block_pass<I>(&mut self, level: u32, letters: &mut I) -> Result<(), Stop>
    where
        I: Iterator<Item = Result<Letter, CheckError>>,
    {
        assert_eq!(self.pos % (1u64 << level), 0, "block start must be aligned");
        for _ in 0..1u64 << level {
            let l = letters
                .next()
                .ok_or(CheckError::LengthMismatch { declared: self.n, actual: self.letters_in_pass() })??;
            self.step(l)?;
        }
        Ok(())
    }

    fn letters_in_pass(&self) -> u64 {
        match self.direction {
            Direction::Forward => self.pos.min(self.n),
            Direction::Reverse => self.pos.saturating_sub(self.pad_count),
        }
    }

    fn start_pass(&mut self, direction: Direction) {
        self.direction = direction;
        self.stack.clear();
        self.height = 0;
        self.pos = 0;
        self.metrics.stack_items = 0;
        self.metrics.pass_count += 1;
        self.probe.pass_started(direction);
    }

    fn run<S: Bidirectional>(&mut self, source: &mut S) -> Result<Verdict, Stop> {
        if let Some(v) = self.decided {
            return Ok(v);
        }
        if self.padded_n == 0 {
            self.metrics.pass_count = 2;
            return Ok(Verdict::Accept);
        }
        let padding = || std::iter::repeat([Letter::A, Letter::A_BAR]).flatten().map(Ok);

        self.start_pass(Direction::Forward);
        {
            let mut fwd = source.forward()?;
            let mut padded = fwd.by_ref().take(self.n as usize).chain(padding().take(self.pad_count as usize));
            self.block_pass(self.k, &mut padded)?;
            if fwd.next().is_some() {
                return Err(CheckError::LengthMismatch { declared: self.n, actual: self.n + 1 }.into());
            }
        }
        if !self.stack.is_empty() {
            return Err(Stop::Reject(RejectReason::MissingClosing));
        }

        self.start_pass(Direction::Reverse);
        {
            let rev = source.reverse()?.map(|r| r.map(Letter::dual));
            let mut padded = padding().take(self.pad_count as usize).chain(rev.take(self.n as usize));
            self.block_pass(self.k, &mut padded)?;
        }
        if !self.stack.is_empty() {
            return Err(CheckError::Internal("stack not empty after the reverse pass").into());
        }
        Ok(Verdict::Accept)
    }
}

/// Runs both passes over `source`, which must hold exactly `n` letters.
pub fn check_two_pass<S: Bidirectional>(
    source: &mut S,
    n: u64,
    params: &HashParams,
) -> Result<(Verdict, Metrics), CheckError> {
    let (v, m, ()) = check_two_pass_with_probe(source, n, params, ())?;
    Ok((v, m))
}

pub fn check_two_pass_with_probe<S: Bidirectional, P: TwoPassProbe>(
    source: &mut S,
    n: u64,
    params: &HashParams,
    probe: P,
) -> Result<(Verdict, Metrics, P), CheckError> {
    let mut checker = TwoPassChecker::with_probe(n, params, probe)?;
    let verdict = match checker.run(source) {
        Ok(v) => v,
        Err(Stop::Reject(r)) => Verdict::Reject(r),
        Err(Stop::Error(e)) => return Err(e),
    };
    checker.metrics.verdict = Some(verdict);
    Ok((verdict, checker.metrics, checker.probe))
}

/// Convenience wrapper for an in-memory word.
pub fn check_two_pass_slice(letters: &[Letter], params: &HashParams) -> Result<(Verdict, Metrics), CheckError> {
    check_two_pass(&mut SliceSource(letters), letters.len() as u64, params)
}

//! Words over the parenthesis alphabet, height profiles, matching pairs, and
//! the exact stack-based membership oracle.
//!
//! Positions are 1-based everywhere in this crate: the letter at position `i`
//! of a word `w` is `w.letters()[i - 1]`, and "the prefix of length `i`" is
//! `x[1, i]`.

use std::fmt;

use crate::error::WordError;

/// Direction of a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Open,
    Close,
}

/// One letter: an opener or closer of a given type (`1..=s`).
///
/// For the two-type alphabet, type 1 is `a`/`ā` and type 2 is `b`/`b̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    kind: Kind,
    ty: u32,
}

impl Letter {
    pub const A: Letter = Letter::open(1);
    pub const A_BAR: Letter = Letter::close(1);
    pub const B: Letter = Letter::open(2);
    pub const B_BAR: Letter = Letter::close(2);

    /// Opener of type `ty`. Types start at 1.
    pub const fn open(ty: u32) -> Letter {
        Letter { kind: Kind::Open, ty }
    }

    pub const fn close(ty: u32) -> Letter {
        Letter { kind: Kind::Close, ty }
    }

    pub const fn kind(self) -> Kind {
        self.kind
    }

    pub const fn type_index(self) -> u32 {
        self.ty
    }

    pub const fn is_open(self) -> bool {
        matches!(self.kind, Kind::Open)
    }

    pub const fn is_close(self) -> bool {
        matches!(self.kind, Kind::Close)
    }

    /// `+1` for an upstep, `-1` for a downstep.
    pub const fn step_value(self) -> i64 {
        match self.kind {
            Kind::Open => 1,
            Kind::Close => -1,
        }
    }

    /// Swaps opener and closer of the same type. Used by the reverse pass.
    pub const fn dual(self) -> Letter {
        match self.kind {
            Kind::Open => Letter::close(self.ty),
            Kind::Close => Letter::open(self.ty),
        }
    }

    /// Whether `self` (an opener) and `closer` form a well-formed pair.
    pub fn closes_with(self, closer: Letter) -> bool {
        self.is_open() && closer.is_close() && self.ty == closer.ty
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.ty) {
            (Kind::Open, 1) => f.write_str("a"),
            (Kind::Close, 1) => f.write_str("ā"),
            (Kind::Open, 2) => f.write_str("b"),
            (Kind::Close, 2) => f.write_str("b̄"),
            (Kind::Open, t) => write!(f, "+{t}"),
            (Kind::Close, t) => write!(f, "-{t}"),
        }
    }
}

/// A finite word over an alphabet of `alphabet_size` parenthesis types.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
    alphabet_size: u32,
}

impl Word {
    pub fn new(letters: Vec<Letter>, alphabet_size: u32) -> Result<Word, WordError> {
        if alphabet_size == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        if let Some((pos, l)) = letters
            .iter()
            .enumerate()
            .find(|(_, l)| l.ty == 0 || l.ty > alphabet_size)
        {
            return Err(WordError::TypeOutOfRange {
                position: pos + 1,
                type_index: l.ty,
                alphabet_size,
            });
        }
        Ok(Word { letters, alphabet_size })
    }

    /// A word over `{a, ā, b, b̄}`.
    ///
    /// # Panics
    /// If any letter has a type other than 1 or 2.
    pub fn dyck2(letters: Vec<Letter>) -> Word {
        Word::new(letters, 2).expect("letter outside the two-type alphabet")
    }

    pub fn empty(alphabet_size: u32) -> Word {
        Word { letters: Vec::new(), alphabet_size }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter at 1-based position `i`.
    pub fn at(&self, i: usize) -> Letter {
        self.letters[i - 1]
    }

    pub fn height(&self) -> i64 {
        self.letters.iter().map(|l| l.step_value()).sum()
    }

    pub fn prefix_heights(&self) -> Vec<i64> {
        prefix_heights(&self.letters)
    }

    pub fn matching_pairs(&self) -> Vec<MatchingPair> {
        matching_pairs(&self.letters)
    }

    pub fn oracle_check(&self) -> Verdict {
        oracle_check(&self.letters)
    }

    /// The reversed word with every letter dualized.
    pub fn reverse_dual(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.dual()).collect(),
            alphabet_size: self.alphabet_size,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A matching pair `(i, j)`, 1-based with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchingPair {
    pub i: usize,
    pub j: usize,
}

/// Why a word was rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RejectReason {
    NegativeHeight,
    MissingClosing,
    Mismatched,
    ExtraClosing,
}

impl RejectReason {
    /// Stable machine-readable name.
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::NegativeHeight => "negative_height",
            RejectReason::MissingClosing => "missing_closing",
            RejectReason::Mismatched => "mismatched",
            RejectReason::ExtraClosing => "extra_closing",
        }
    }

    pub fn message(self) -> &'static str {
        match self {
            RejectReason::NegativeHeight => "negative height",
            RejectReason::MissingClosing => "missing closing parenthesis",
            RejectReason::Mismatched => "mismatched parentheses",
            RejectReason::ExtraClosing => "extra closing parenthesis",
        }
    }

    pub fn from_name(name: &str) -> Option<RejectReason> {
        [
            RejectReason::NegativeHeight,
            RejectReason::MissingClosing,
            RejectReason::Mismatched,
            RejectReason::ExtraClosing,
        ]
        .into_iter()
        .find(|r| r.as_str() == name)
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of a membership check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject(RejectReason),
}

impl Verdict {
    pub fn accepted(self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn reason(self) -> Option<RejectReason> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject(r) => Some(r),
        }
    }

    /// `"none"` for an accept, otherwise the reason name.
    pub fn reason_str(self) -> &'static str {
        self.reason().map_or("none", RejectReason::as_str)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("accept"),
            Verdict::Reject(r) => write!(f, "reject({r})"),
        }
    }
}

pub fn step_value(l: Letter) -> i64 {
    l.step_value()
}

/// `out[t - 1] = height(x[1, t])`.
pub fn prefix_heights(letters: &[Letter]) -> Vec<i64> {
    letters
        .iter()
        .scan(0i64, |h, l| {
            *h += l.step_value();
            Some(*h)
        })
        .collect()
}

/// All matching pairs, sorted by `i`.
///
/// Letters that go below the running minimum, and openers never closed, are
/// left unmatched.
pub fn matching_pairs(letters: &[Letter]) -> Vec<MatchingPair> {
    let mut open: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for (pos, l) in letters.iter().enumerate() {
        if l.is_open() {
            open.push(pos + 1);
        } else if let Some(i) = open.pop() {
            pairs.push(MatchingPair { i, j: pos + 1 });
        }
    }
    pairs.sort_unstable();
    pairs
}

/// Partner of every position (0 when unmatched), indexed by 1-based position;
/// entry 0 is unused.
pub fn partner_table(letters: &[Letter]) -> Vec<usize> {
    let mut partner = vec![0; letters.len() + 1];
    for p in matching_pairs(letters) {
        partner[p.i] = p.j;
        partner[p.j] = p.i;
    }
    partner
}

/// Exact linear-space membership test with an explicit letter stack.
///
/// The first violation in scan order wins.
pub fn oracle_check(letters: &[Letter]) -> Verdict {
    let mut stack: Vec<Letter> = Vec::new();
    for &l in letters {
        if l.is_open() {
            stack.push(l);
            continue;
        }
        match stack.pop() {
            None => return Verdict::Reject(RejectReason::NegativeHeight),
            Some(top) if !top.closes_with(l) => return Verdict::Reject(RejectReason::Mismatched),
            Some(_) => {}
        }
    }
    if stack.is_empty() {
        Verdict::Accept
    } else {
        Verdict::Reject(RejectReason::MissingClosing)
    }
}

/// Whether the 1-based index set `indices` is `opener_type`-balanced: at
/// every height `d`, openers of that type whose prefix ends at height `d`
/// are as many as closers of that type whose preceding prefix is at `d`.
pub fn is_balanced(word: &Word, indices: &[usize], opener_type: u32) -> bool {
    let heights = word.prefix_heights();
    let mut count: std::collections::HashMap<i64, i64> = std::collections::HashMap::new();
    for &i in indices {
        let l = word.at(i);
        if l.type_index() != opener_type {
            continue;
        }
        if l.is_open() {
            *count.entry(heights[i - 1]).or_default() += 1;
        } else {
            let before = if i >= 2 { heights[i - 2] } else { 0 };
            *count.entry(before).or_default() -= 1;
        }
    }
    count.values().all(|&c| c == 0)
}

/// Balanced for every type of the word's alphabet.
pub fn is_balanced_all(word: &Word, indices: &[usize]) -> bool {
    (1..=word.alphabet_size()).all(|t| is_balanced(word, indices, t))
}

//! Letterwise encoding of many parenthesis types into two.
//!
//! An opener of type `i` becomes the `l`-bit binary expansion of `i - 1`,
//! most significant bit first, written with `a` for 0 and `b` for 1. The
//! matching closer is the same bits in the opposite order, written with `ā`
//! and `b̄`. So `encode(open i) · encode(close i)` is always well-formed, and
//! a word is well-formed over `s` types exactly when its encoding is
//! well-formed over two.

use crate::error::ReductionError;
use crate::format::TagEvent;
use crate::word::Letter;

/// Alphabet size and code length `l = max(1, ⌈log₂ s⌉)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReductionParams {
    s: u32,
    l: u32,
}

impl ReductionParams {
    pub fn new(s: u32) -> Result<ReductionParams, ReductionError> {
        if s == 0 {
            return Err(ReductionError::EmptyAlphabet);
        }
        let l = (32 - (s - 1).leading_zeros()).max(1);
        Ok(ReductionParams { s, l })
    }

    pub fn alphabet_size(&self) -> u32 {
        self.s
    }

    pub fn code_len(&self) -> u32 {
        self.l
    }
}

/// The code of one letter, held inline.
#[derive(Clone, Copy, Debug)]
pub struct Code {
    letters: [Letter; 32],
    len: u8,
    next: u8,
}

impl Code {
    pub fn as_slice(&self) -> &[Letter] {
        &self.letters[..self.len as usize]
    }
}

impl Iterator for Code {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        if self.next == self.len {
            return None;
        }
        self.next += 1;
        Some(self.letters[self.next as usize - 1])
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.len - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Code {}

/// Two-type code of `letter`.
pub fn encode_letter(params: &ReductionParams, letter: Letter) -> Result<Code, ReductionError> {
    let ty = letter.type_index();
    if ty == 0 || ty > params.s {
        return Err(ReductionError::TypeOutOfRange { type_index: ty, alphabet_size: params.s });
    }
    let value = ty - 1;
    let l = params.l as usize;
    let mut code = Code { letters: [Letter::A; 32], len: l as u8, next: 0 };
    for k in 0..l {
        // Opener: bit l-1-k (MSB first). Closer: bit k (LSB first).
        let bit = if letter.is_open() { value >> (l - 1 - k) & 1 } else { value >> k & 1 };
        let two = 1 + bit;
        code.letters[k] = if letter.is_open() { Letter::open(two) } else { Letter::close(two) };
    }
    Ok(code)
}

/// Streaming reduction: `f(x_1) f(x_2) …`, one code per input letter.
pub struct Reduce<I> {
    params: ReductionParams,
    inner: I,
    current: Option<Code>,
}

impl<I> Iterator for Reduce<I>
where
    I: Iterator<Item = Letter>,
{
    type Item = Result<Letter, ReductionError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(l) = self.current.as_mut().and_then(Iterator::next) {
                return Some(Ok(l));
            }
            let next = self.inner.next()?;
            match encode_letter(&self.params, next) {
                Ok(code) => self.current = Some(code),
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

pub fn reduce_stream<I>(params: ReductionParams, stream: I) -> Reduce<I::IntoIter>
where
    I: IntoIterator<Item = Letter>,
{
    Reduce { params, inner: stream.into_iter(), current: None }
}

/// Eagerly reduces a whole word.
pub fn reduce_word(params: ReductionParams, letters: &[Letter]) -> Result<Vec<Letter>, ReductionError> {
    reduce_stream(params, letters.iter().copied()).collect()
}

/// Two-type code of one tag event: every name byte as 8 bits.
///
/// An open tag emits its bytes in order, each most significant bit first.
/// A close tag emits the reverse-dual of that, so `open(w) close(w)` is
/// well-formed and `open(w) close(w')` is not for `w != w'`.
pub fn encode_tag(event: &TagEvent) -> Result<Vec<Letter>, ReductionError> {
    let (name, open) = match event {
        TagEvent::Open(n) => (n, true),
        TagEvent::Close(n) => (n, false),
    };
    if name.is_empty() {
        return Err(ReductionError::EmptyTagName);
    }
    let mut out = Vec::with_capacity(name.len() * 8);
    if open {
        for &byte in name {
            for k in (0..8).rev() {
                out.push(Letter::open(1 + u32::from(byte >> k & 1)));
            }
        }
    } else {
        for &byte in name.iter().rev() {
            for k in 0..8 {
                out.push(Letter::close(1 + u32::from(byte >> k & 1)));
            }
        }
    }
    Ok(out)
}

pub fn encode_tag_stream<'a, I>(events: I) -> Result<Vec<Letter>, ReductionError>
where
    I: IntoIterator<Item = &'a TagEvent>,
{
    let mut out = Vec::new();
    for ev in events {
        out.extend(encode_tag(ev)?);
    }
    Ok(out)
}

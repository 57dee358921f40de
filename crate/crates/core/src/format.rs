//! Text formats for letter streams.
//!
//! * `chars2`: `(` `)` `[` `]` for `a ā b b̄`; whitespace is ignored.
//! * `tokens`: whitespace-separated `+i` / `-i` (the minus may also be
//!   U+2212) for an opener or closer of type `i`.
//! * `tags`: one event per line, `<name` opens and `>name` closes.
//!
//! In `chars2` and `tokens`, a `#` starts a comment running to end of line.
//! The readers here are incremental so that checkers can consume files of
//! any size without buffering them.

use std::io::{self, BufRead, Write};

use crate::error::FormatError;
use crate::word::{Kind, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StreamFormat {
    Chars2,
    Tokens,
    Tags,
}

impl StreamFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            StreamFormat::Chars2 => "chars2",
            StreamFormat::Tokens => "tokens",
            StreamFormat::Tags => "tags",
        }
    }
}

/// An error from a streaming reader: either I/O or malformed content.
#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub fn chars2_letter(byte: u8) -> Option<Letter> {
    match byte {
        b'(' => Some(Letter::A),
        b')' => Some(Letter::A_BAR),
        b'[' => Some(Letter::B),
        b']' => Some(Letter::B_BAR),
        _ => None,
    }
}

/// The `chars2` byte for a two-type letter.
pub fn chars2_byte(l: Letter) -> Option<u8> {
    match (l.kind(), l.type_index()) {
        (Kind::Open, 1) => Some(b'('),
        (Kind::Close, 1) => Some(b')'),
        (Kind::Open, 2) => Some(b'['),
        (Kind::Close, 2) => Some(b']'),
        _ => None,
    }
}

/// Parses an in-memory `chars2` string.
pub fn chars2(text: &str) -> Result<Word, FormatError> {
    let letters = Chars2Reader::new(text.as_bytes())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| match e {
            ReadError::Format(f) => f,
            ReadError::Io(_) => unreachable!("reading from a slice"),
        })?;
    Ok(Word::dyck2(letters))
}

pub fn to_chars2(letters: &[Letter]) -> Result<String, FormatError> {
    letters
        .iter()
        .map(|&l| chars2_byte(l).map(char::from).ok_or(FormatError::AlphabetTooLarge))
        .collect()
}

/// Incremental `chars2` reader.
pub struct Chars2Reader<R> {
    bytes: io::Bytes<R>,
    offset: usize,
    in_comment: bool,
}

impl<R: BufRead> Chars2Reader<R> {
    #[allow(clippy::unbuffered_bytes)]
    pub fn new(reader: R) -> Self {
        Chars2Reader { bytes: reader.bytes(), offset: 0, in_comment: false }
    }
}

impl<R: BufRead> Iterator for Chars2Reader<R> {
    type Item = Result<Letter, ReadError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let byte = match self.bytes.next()? {
                Ok(b) => b,
                Err(e) => return Some(Err(e.into())),
            };
            let offset = self.offset;
            self.offset += 1;
            if self.in_comment {
                self.in_comment = byte != b'\n';
                continue;
            }
            if byte == b'#' {
                self.in_comment = true;
                continue;
            }
            if byte.is_ascii_whitespace() {
                continue;
            }
            return Some(chars2_letter(byte).ok_or(FormatError::UnknownByte { byte, offset }.into()));
        }
    }
}

/// Parses one `+i` / `-i` token.
pub fn parse_token(token: &str, line: usize, alphabet_size: u32) -> Result<Letter, FormatError> {
    let bad = || FormatError::BadToken { token: token.to_string(), line };
    let (kind, digits) = if let Some(rest) = token.strip_prefix('+') {
        (Kind::Open, rest)
    } else if let Some(rest) = token.strip_prefix('-').or_else(|| token.strip_prefix('\u{2212}')) {
        (Kind::Close, rest)
    } else {
        return Err(bad());
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let ty: u32 = digits.parse().map_err(|_| bad())?;
    if ty == 0 || ty > alphabet_size {
        return Err(FormatError::TypeOutOfRange { token: token.to_string(), line, alphabet_size });
    }
    Ok(match kind {
        Kind::Open => Letter::open(ty),
        Kind::Close => Letter::close(ty),
    })
}

pub fn tokens(text: &str, alphabet_size: u32) -> Result<Word, FormatError> {
    let letters = TokenReader::new(text.as_bytes(), alphabet_size)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| match e {
            ReadError::Format(f) => f,
            ReadError::Io(_) => unreachable!("reading from a slice"),
        })?;
    Word::new(letters, alphabet_size).map_err(|_| FormatError::AlphabetTooLarge)
}

pub fn to_tokens(letters: &[Letter]) -> String {
    letters
        .iter()
        .map(|l| match l.kind() {
            Kind::Open => format!("+{}", l.type_index()),
            Kind::Close => format!("-{}", l.type_index()),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Line-at-a-time `tokens` reader.
pub struct TokenReader<R> {
    reader: R,
    alphabet_size: u32,
    line: usize,
    pending: std::vec::IntoIter<String>,
    done: bool,
}

impl<R: BufRead> TokenReader<R> {
    pub fn new(reader: R, alphabet_size: u32) -> Self {
        TokenReader {
            reader,
            alphabet_size,
            line: 0,
            pending: Vec::new().into_iter(),
            done: false,
        }
    }
}

impl<R: BufRead> Iterator for TokenReader<R> {
    type Item = Result<Letter, ReadError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(tok) = self.pending.next() {
                return Some(parse_token(&tok, self.line, self.alphabet_size).map_err(Into::into));
            }
            if self.done {
                return None;
            }
            let mut buf = String::new();
            match self.reader.read_line(&mut buf) {
                Ok(0) => {
                    self.done = true;
                    return None;
                }
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line += 1;
            let content = buf.split('#').next().unwrap_or("");
            self.pending = content
                .split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>()
                .into_iter();
        }
    }
}

/// One event of the `tags` format.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TagEvent {
    Open(Vec<u8>),
    Close(Vec<u8>),
}

/// Parses one `tags` line; blank lines and `#` comments yield `None`.
pub fn parse_tag_line(line: &str, line_no: usize) -> Result<Option<TagEvent>, FormatError> {
    let trimmed = line.trim_end_matches(['\r', '\n']);
    if trimmed.trim().is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let (open, name) = if let Some(name) = trimmed.strip_prefix('<') {
        (true, name)
    } else if let Some(name) = trimmed.strip_prefix('>') {
        (false, name)
    } else {
        return Err(FormatError::BadTagLine { line: line_no });
    };
    if name.is_empty() {
        return Err(FormatError::EmptyTagName { line: line_no });
    }
    let name = name.as_bytes().to_vec();
    Ok(Some(if open { TagEvent::Open(name) } else { TagEvent::Close(name) }))
}

pub fn tag_events(text: &str) -> Result<Vec<TagEvent>, FormatError> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        out.extend(parse_tag_line(line, k + 1)?);
    }
    Ok(out)
}

/// Line-at-a-time `tags` reader.
pub struct TagReader<R> {
    reader: R,
    line: usize,
}

impl<R: BufRead> TagReader<R> {
    pub fn new(reader: R) -> Self {
        TagReader { reader, line: 0 }
    }
}

impl<R: BufRead> Iterator for TagReader<R> {
    type Item = Result<TagEvent, ReadError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let mut buf = String::new();
            match self.reader.read_line(&mut buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e.into())),
            }
            self.line += 1;
            match parse_tag_line(&buf, self.line) {
                Ok(Some(ev)) => return Some(Ok(ev)),
                Ok(None) => continue,
                Err(e) => return Some(Err(e.into())),
            }
        }
    }
}

pub fn to_tags(events: &[TagEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        let (sigil, name) = match ev {
            TagEvent::Open(n) => ('<', n),
            TagEvent::Close(n) => ('>', n),
        };
        out.push(sigil);
        out.push_str(&String::from_utf8_lossy(name));
        out.push('\n');
    }
    out
}

/// Writes letters in `chars2`, wrapping lines at 80 columns.
pub fn write_chars2<W: Write>(out: &mut W, letters: &[Letter]) -> io::Result<()> {
    for chunk in letters.chunks(80) {
        let line: Vec<u8> = chunk
            .iter()
            .map(|&l| chars2_byte(l).ok_or_else(|| io::Error::other(FormatError::AlphabetTooLarge)))
            .collect::<io::Result<_>>()?;
        out.write_all(&line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

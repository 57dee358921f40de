//! Letter sources for `check`: a `chars2` file read forward and backward, or
//! any other input spooled into a temporary `chars2` file first.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use dyckstream::format::{chars2_byte, chars2_letter, Chars2Reader, StreamFormat, TagReader, TokenReader};
use dyckstream::reduction::{encode_tag, reduce_stream, ReductionParams};
use dyckstream::twopass::Bidirectional;
use dyckstream::{CheckError, FormatError, Letter};
use tempfile::NamedTempFile;

const CHUNK: usize = 64 * 1024;

/// A `chars2` file on disk, possibly a spooled temporary.
pub struct Chars2File {
    path: PathBuf,
    _temp: Option<NamedTempFile>,
    pub spooled: bool,
}

impl Chars2File {
    /// Counts letters, failing on the first malformed byte.
    pub fn count(&self) -> Result<u64> {
        let mut n = 0;
        for l in Chars2Reader::new(BufReader::new(File::open(&self.path)?)) {
            l.with_context(|| format!("reading {}", self.path.display()))?;
            n += 1;
        }
        Ok(n)
    }

    pub fn letters(&self) -> Result<impl Iterator<Item = Result<Letter, CheckError>>> {
        let file = File::open(&self.path)?;
        Ok(Chars2Reader::new(BufReader::new(file)).map(|r| r.map_err(|e| CheckError::Source(e.to_string()))))
    }
}

impl Bidirectional for Chars2File {
    fn forward(&mut self) -> Result<impl Iterator<Item = Result<Letter, CheckError>> + '_, CheckError> {
        self.letters().map_err(|e| CheckError::Source(e.to_string()))
    }

    fn reverse(&mut self) -> Result<impl Iterator<Item = Result<Letter, CheckError>> + '_, CheckError> {
        let file = File::open(&self.path).map_err(|e| CheckError::Source(e.to_string()))?;
        ReverseChars2::new(file).map_err(|e| CheckError::Source(e.to_string()))
    }
}

/// Reads a `chars2` file last letter first, one line at a time.
///
/// A `#` comment runs to end of line, so a line is only decoded once its
/// start is known; memory is one chunk plus the longest line.
pub struct ReverseChars2 {
    file: File,
    pos: u64,
    carry: Vec<u8>,
    line: Vec<Letter>,
}

impl ReverseChars2 {
    pub fn new(mut file: File) -> io::Result<ReverseChars2> {
        let pos = file.seek(SeekFrom::End(0))?;
        Ok(ReverseChars2 { file, pos, carry: Vec::new(), line: Vec::new() })
    }

    fn next_line(&mut self) -> io::Result<Option<Vec<u8>>> {
        loop {
            if let Some(k) = self.carry.iter().rposition(|&b| b == b'\n') {
                let line = self.carry.split_off(k + 1);
                self.carry.truncate(k);
                return Ok(Some(line));
            }
            if self.pos == 0 {
                return Ok((!self.carry.is_empty()).then(|| std::mem::take(&mut self.carry)));
            }
            let len = (CHUNK as u64).min(self.pos);
            self.pos -= len;
            self.file.seek(SeekFrom::Start(self.pos))?;
            let mut chunk = vec![0; len as usize];
            self.file.read_exact(&mut chunk)?;
            chunk.extend_from_slice(&self.carry);
            self.carry = chunk;
        }
    }
}

impl Iterator for ReverseChars2 {
    type Item = Result<Letter, CheckError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(l) = self.line.pop() {
                return Some(Ok(l));
            }
            let raw = match self.next_line() {
                Ok(Some(raw)) => raw,
                Ok(None) => return None,
                Err(e) => return Some(Err(CheckError::Source(e.to_string()))),
            };
            let content = raw.split(|&b| b == b'#').next().unwrap_or(&[]);
            for &b in content.iter().filter(|b| !b.is_ascii_whitespace()) {
                match chars2_letter(b) {
                    Some(l) => self.line.push(l),
                    None => return Some(Err(CheckError::Source(format!("unexpected byte {b:#04x}")))),
                }
            }
        }
    }
}

/// Writes letters as `chars2`, 80 per line.
pub struct Chars2Writer<W: Write> {
    out: W,
    col: usize,
}

impl<W: Write> Chars2Writer<W> {
    pub fn new(out: W) -> Self {
        Chars2Writer { out, col: 0 }
    }

    pub fn push(&mut self, l: Letter) -> Result<()> {
        let Some(b) = chars2_byte(l) else {
            bail!(FormatError::AlphabetTooLarge);
        };
        self.out.write_all(&[b])?;
        self.col += 1;
        if self.col == 80 {
            self.out.write_all(b"\n")?;
            self.col = 0;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        if self.col > 0 {
            self.out.write_all(b"\n")?;
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

fn open_input(path: &str) -> Result<Box<dyn BufRead>> {
    if path == "-" {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        let f = File::open(path).with_context(|| format!("opening {path}"))?;
        Ok(Box::new(BufReader::new(f)))
    }
}

/// Streams `path` in `format` as two-type letters, reducing when `s > 2`
/// or for tags, into `sink`.
pub fn for_each_letter(path: &str, format: StreamFormat, s: u32, mut sink: impl FnMut(Letter) -> Result<()>) -> Result<()> {
    let input = open_input(path)?;
    match format {
        StreamFormat::Chars2 => {
            if s != 2 {
                bail!("chars2 carries exactly two types; use --format tokens for --s {s}");
            }
            for l in Chars2Reader::new(input) {
                sink(l?)?;
            }
        }
        StreamFormat::Tokens => {
            let params = ReductionParams::new(s)?;
            let letters = TokenReader::new(input, s);
            if s <= 2 {
                for l in letters {
                    sink(l?)?;
                }
            } else {
                // Reduction needs plain letters; surface read errors as they come.
                let mut failure = None;
                let stream = letters.map_while(|r| r.map_err(|e| failure = Some(e)).ok());
                for l in reduce_stream(params, stream) {
                    sink(l?)?;
                }
                if let Some(e) = failure {
                    return Err(e.into());
                }
            }
        }
        StreamFormat::Tags => {
            for ev in TagReader::new(input) {
                for l in encode_tag(&ev?)? {
                    sink(l)?;
                }
            }
        }
    }
    Ok(())
}

/// Opens the input as a `chars2` file, spooling to a temporary file unless
/// it already is one on disk.
pub fn chars2_source(path: &str, format: StreamFormat, s: u32) -> Result<Chars2File> {
    if path != "-" && format == StreamFormat::Chars2 && s == 2 {
        return Ok(Chars2File { path: PathBuf::from(path), _temp: None, spooled: false });
    }
    let temp = NamedTempFile::new().context("creating temporary file")?;
    let mut w = Chars2Writer::new(BufWriter::new(temp.reopen()?));
    for_each_letter(path, format, s, |l| w.push(l))?;
    w.finish()?;
    Ok(Chars2File { path: temp.path().to_path_buf(), _temp: Some(temp), spooled: true })
}

//! Labelled workloads: uniform random members, single-fault mutants, and
//! the nested MOUNTAIN / ASCENSION hard instances.
//!
//! An ASCENSION(m) word is
//!
//! ```text
//! X₁ Ȳ₁ c̄₁ c₁ Y₁  X₂ Ȳ₂ c̄₂ c₂ Y₂  …  X_m Ȳ_m c̄_m c_m Y_m  X̄_m … X̄₂ X̄₁
//! ```
//!
//! where each `X_i` is `n` openers, `Y_i` is the last `k_i - 1` letters of
//! `X_i`, and bars denote matching closing words. It is well-formed exactly
//! when `c_i = X_i[n - k_i + 1]` for every `i`. MOUNTAIN is the case `m = 1`.
//! Bit strings map to openers with 0 → `a` and 1 → `b`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::InstanceError;
use crate::word::{matching_pairs, oracle_check, Letter, Word};

/// `Z̄`: `Z` reversed with every opener replaced by its closer.
pub fn matching_word(z: &[Letter]) -> Result<Vec<Letter>, InstanceError> {
    z.iter()
        .rev()
        .map(|&l| {
            if l.is_open() {
                Ok(l.dual())
            } else {
                Err(InstanceError::NotOpener(l.to_string()))
            }
        })
        .collect()
}

/// Parameters of an ASCENSION(m) instance. Indices `k` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InstanceSpec {
    pub n: usize,
    pub xs: Vec<Vec<Letter>>,
    pub ks: Vec<usize>,
    pub cs: Vec<Letter>,
}

impl InstanceSpec {
    pub fn m(&self) -> usize {
        self.xs.len()
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let m = self.xs.len();
        if m == 0 || self.n == 0 {
            return Err(InstanceError::EmptyDimension);
        }
        if self.ks.len() != m || self.cs.len() != m {
            return Err(InstanceError::DimensionMismatch {
                m,
                xs: m,
                ks: self.ks.len(),
                cs: self.cs.len(),
            });
        }
        for x in &self.xs {
            if x.len() != self.n {
                return Err(InstanceError::BadLength { got: x.len(), n: self.n });
            }
            if let Some(l) = x.iter().find(|l| !is_two_type_opener(**l)) {
                return Err(InstanceError::NotOpener(l.to_string()));
            }
        }
        if let Some(&k) = self.ks.iter().find(|&&k| k == 0 || k > self.n) {
            return Err(InstanceError::KOutOfRange { k, n: self.n });
        }
        if let Some(c) = self.cs.iter().find(|c| !is_two_type_opener(**c)) {
            return Err(InstanceError::NotOpener(c.to_string()));
        }
        Ok(())
    }

    /// Ground truth: every `c_i` equals `X_i[n - k_i + 1]`.
    pub fn label(&self) -> bool {
        (0..self.m()).all(|i| self.cs[i] == self.xs[i][self.n - self.ks[i]])
    }

    /// `2 Σ (n + k_i)`.
    pub fn word_len(&self) -> usize {
        self.ks.iter().map(|k| 2 * (self.n + k)).sum()
    }
}

fn is_two_type_opener(l: Letter) -> bool {
    l.is_open() && matches!(l.type_index(), 1 | 2)
}

fn ab(l: Letter) -> char {
    if l.type_index() == 1 {
        'a'
    } else {
        'b'
    }
}

fn from_ab(c: char) -> Result<Letter, InstanceError> {
    match c {
        'a' => Ok(Letter::A),
        'b' => Ok(Letter::B),
        other => Err(InstanceError::Record(format!("expected a or b, found {other:?}"))),
    }
}

/// Record form:
/// `instance m=2 n=4 x=abba,aabb k=1,3 c=a,b label=member`.
impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.xs.iter().map(|x| x.iter().map(|&l| ab(l)).collect()).collect();
        let ks: Vec<String> = self.ks.iter().map(ToString::to_string).collect();
        let cs: Vec<String> = self.cs.iter().map(|&c| ab(c).to_string()).collect();
        write!(
            f,
            "instance m={} n={} x={} k={} c={} label={}",
            self.m(),
            self.n,
            xs.join(","),
            ks.join(","),
            cs.join(","),
            if self.label() { "member" } else { "nonmember" }
        )
    }
}

impl FromStr for InstanceSpec {
    type Err = InstanceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |msg: String| InstanceError::Record(msg);
        let mut fields = s.split_whitespace();
        if fields.next() != Some("instance") {
            return Err(bad("record must start with \"instance\"".into()));
        }
        let (mut m, mut n, mut xs, mut ks, mut cs) = (None, None, None, None, None);
        for field in fields {
            let (key, value) = field.split_once('=').ok_or_else(|| bad(format!("field {field:?}")))?;
            let list = || value.split(',');
            match key {
                "m" => m = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
                "n" => n = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
                "x" => xs = Some(list().map(|x| x.chars().map(from_ab).collect()).collect::<Result<Vec<Vec<_>>, _>>()?),
                "k" => ks = Some(list().map(|k| k.parse().map_err(|_| bad(format!("k {k:?}")))).collect::<Result<Vec<usize>, _>>()?),
                "c" => cs = Some(list().map(|c| c.chars().next().map_or(Err(bad("empty c".into())), from_ab)).collect::<Result<Vec<_>, _>>()?),
                "label" => {}
                other => return Err(bad(format!("unknown field {other:?}"))),
            }
        }
        let spec = InstanceSpec {
            n: n.ok_or_else(|| bad("missing n".into()))?,
            xs: xs.ok_or_else(|| bad("missing x".into()))?,
            ks: ks.ok_or_else(|| bad("missing k".into()))?,
            cs: cs.ok_or_else(|| bad("missing c".into()))?,
        };
        if m != Some(spec.m()) {
            return Err(bad("m disagrees with the number of X strings".into()));
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// The MOUNTAIN word `X Ȳ c̄ c Y X̄` and its label.
pub fn gen_mountain(x: &[Letter], k: usize, c: Letter) -> Result<(Word, bool), InstanceError> {
    gen_ascension(&InstanceSpec { n: x.len(), xs: vec![x.to_vec()], ks: vec![k], cs: vec![c] })
}

/// The ASCENSION(m) word and its label.
pub fn gen_ascension(spec: &InstanceSpec) -> Result<(Word, bool), InstanceError> {
    spec.validate()?;
    let n = spec.n;
    let mut out = Vec::with_capacity(spec.word_len());
    for i in 0..spec.m() {
        let x = &spec.xs[i];
        let y = &x[n + 1 - spec.ks[i]..];
        out.extend_from_slice(x);
        out.extend(matching_word(y)?);
        out.push(spec.cs[i].dual());
        out.push(spec.cs[i]);
        out.extend_from_slice(y);
    }
    for x in spec.xs.iter().rev() {
        out.extend(matching_word(x)?);
    }
    Ok((Word::dyck2(out), spec.label()))
}

/// Random ASCENSION parameters with correct `c_i`, except coordinate
/// `fault` (1-based), whose `c` is flipped.
pub fn random_instance(m: usize, n: usize, seed: u64, fault: Option<usize>) -> Result<InstanceSpec, InstanceError> {
    if m == 0 || n == 0 {
        return Err(InstanceError::EmptyDimension);
    }
    if let Some(f) = fault {
        if f == 0 || f > m {
            return Err(InstanceError::FaultOutOfRange { fault: f, m });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = Vec::with_capacity(m);
    let mut ks = Vec::with_capacity(m);
    let mut cs = Vec::with_capacity(m);
    for i in 0..m {
        let x: Vec<Letter> = (0..n).map(|_| if rng.random::<bool>() { Letter::B } else { Letter::A }).collect();
        let k = rng.random_range(1..=n);
        let mut c = x[n - k];
        if fault == Some(i + 1) {
            c = if c == Letter::A { Letter::B } else { Letter::A };
        }
        xs.push(x);
        ks.push(k);
        cs.push(c);
    }
    Ok(InstanceSpec { n, xs, ks, cs })
}

/// Uniformly random Dyck path of semilength `pairs` (cycle lemma), with
/// every matched pair typed `a` or `b` independently.
pub fn gen_random_member(pairs: usize, seed: u64) -> Word {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // pairs up-steps and pairs + 1 down-steps: exactly one rotation stays
    // nonnegative until its final step.
    let mut steps: Vec<bool> = std::iter::repeat_n(true, pairs).chain(std::iter::repeat_n(false, pairs + 1)).collect();
    steps.shuffle(&mut rng);
    let mut h = 0i64;
    let mut min = (0i64, 0usize);
    for (t, &up) in steps.iter().enumerate() {
        h += if up { 1 } else { -1 };
        if h < min.0 {
            min = (h, t + 1);
        }
    }
    // Start just after the first minimum; the rotated walk ends with the
    // single step that dips below zero.
    let len = steps.len();
    steps.rotate_left(min.1 % len);
    steps.pop();

    let mut letters = Vec::with_capacity(2 * pairs);
    let mut open_types = Vec::with_capacity(pairs);
    for up in steps {
        if up {
            let ty = if rng.random::<bool>() { 2 } else { 1 };
            open_types.push(ty);
            letters.push(Letter::open(ty));
        } else {
            letters.push(Letter::close(open_types.pop().expect("Dyck path")));
        }
    }
    Word::dyck2(letters)
}

/// Flips the type of the opener of one uniformly chosen matching pair,
/// giving a non-member with the same height profile and exactly one
/// ill-formed pair.
pub fn mutate_member(word: &Word, seed: u64) -> Result<Word, InstanceError> {
    if word.is_empty() {
        return Err(InstanceError::EmptyWord);
    }
    if !oracle_check(word.letters()).accepted() || word.alphabet_size() != 2 {
        return Err(InstanceError::NotMember);
    }
    let pairs = matching_pairs(word.letters());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = pairs[rng.random_range(0..pairs.len())];
    let mut letters = word.letters().to_vec();
    let old = letters[pick.i - 1];
    letters[pick.i - 1] = Letter::open(3 - old.type_index());
    Ok(Word::dyck2(letters))
}

//! Height-indexed linear fingerprint over a prime field.
//!
//! An `a` whose prefix ends at height `d` contributes `α^d`, an `ā` whose
//! preceding prefix sits at height `d` contributes `-α^d`, and every other
//! letter contributes 0. The fingerprint of a subsequence is the sum of its
//! letters' contributions, so a matched `a…ā` pair cancels exactly and
//! fingerprints of disjoint pieces add.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ParamError;
use crate::word::{Letter, Word};

/// 2^61 - 1.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

/// How the modulus is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modulus {
    /// Smallest prime `p >= n_bound^(1+c)`, which lies below `2 n_bound^(1+c)`.
    PaperExact,
    /// `p = 2^61 - 1`, valid while `n_bound^(1+c) <= p`.
    FixedPrime,
}

impl Modulus {
    pub fn as_str(self) -> &'static str {
        match self {
            Modulus::PaperExact => "paper_exact",
            Modulus::FixedPrime => "fixed_prime",
        }
    }
}

impl FromStr for Modulus {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper_exact" => Ok(Modulus::PaperExact),
            "fixed_prime" => Ok(Modulus::FixedPrime),
            other => Err(ParamError::Record(format!("unknown modulus mode {other:?}"))),
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value in `[0, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue(u64);

impl Residue {
    pub const ZERO: Residue = Residue(0);

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Modulus, evaluation point and the bounds they were sized for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HashParams {
    mode: Modulus,
    p: u64,
    alpha: u64,
    n_bound: u64,
    c: u32,
}

impl HashParams {
    /// Draws `α` uniformly from `[0, p)` using a generator seeded with `seed`.
    pub fn new(n_bound: u64, c: u32, seed: u64, mode: Modulus) -> Result<HashParams, ParamError> {
        let p = modulus_for(n_bound, c, mode)?;
        let alpha = ChaCha8Rng::seed_from_u64(seed).random_range(0..p);
        Ok(HashParams { mode, p, alpha, n_bound, c })
    }

    /// Same modulus rules as [`HashParams::new`] but with a caller-chosen `α`.
    pub fn with_alpha(n_bound: u64, c: u32, alpha: u64, mode: Modulus) -> Result<HashParams, ParamError> {
        let p = modulus_for(n_bound, c, mode)?;
        Ok(HashParams { mode, p, alpha: alpha % p, n_bound, c })
    }

    /// Explicit `(p, α)`, bypassing the sizing rules. Test and exploration use.
    ///
    /// # Panics
    /// If `p < 2` or `p >= 2^63`.
    pub fn raw(p: u64, alpha: u64) -> HashParams {
        assert!((2..1 << 63).contains(&p), "modulus out of range");
        HashParams { mode: Modulus::PaperExact, p, alpha: alpha % p, n_bound: p - 1, c: 1 }
    }

    pub fn mode(&self) -> Modulus {
        self.mode
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn n_bound(&self) -> u64 {
        self.n_bound
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// Bits needed to store one residue.
    pub fn residue_bits(&self) -> u32 {
        64 - (self.p - 1).leading_zeros()
    }

    pub fn residue(&self, v: u64) -> Residue {
        Residue(v % self.p)
    }

    pub fn combine(&self, a: Residue, b: Residue) -> Residue {
        let s = a.0 + b.0;
        Residue(if s >= self.p { s - self.p } else { s })
    }

    pub fn neg(&self, a: Residue) -> Residue {
        Residue(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    /// `α^d mod p` by square-and-multiply, adding the number of modular
    /// multiplications performed to `mults`.
    pub fn alpha_pow(&self, d: u64, mults: &mut u64) -> Residue {
        let mut result = 1 % self.p;
        let mut base = self.alpha;
        let mut e = d;
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                if first {
                    result = base;
                    first = false;
                } else {
                    result = self.mul(result, base);
                    *mults += 1;
                }
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
                *mults += 1;
            }
        }
        Residue(result)
    }

    /// Contribution of letter `l` at pair-height `d`: the height after an
    /// opener, or the height before a closer.
    pub fn letter_hash(&self, l: Letter, d: u64) -> Residue {
        let mut mults = 0;
        self.letter_hash_counted(l, d, &mut mults)
    }

    pub fn letter_hash_counted(&self, l: Letter, d: u64, mults: &mut u64) -> Residue {
        if l.type_index() != 1 {
            return Residue::ZERO;
        }
        let pow = self.alpha_pow(d, mults);
        if l.is_open() {
            pow
        } else {
            self.neg(pow)
        }
    }

    /// Reference fingerprint of the letters of `word` at the 1-based
    /// `indices`, using heights from the whole word.
    ///
    /// Returns `None` if a type-1 letter in the set sits at a negative
    /// pair-height, where the fingerprint is undefined.
    pub fn subsequence_hash(&self, word: &Word, indices: &[usize]) -> Option<Residue> {
        let heights = word.prefix_heights();
        let mut acc = Residue::ZERO;
        for &i in indices {
            let l = word.at(i);
            let d = if l.is_open() {
                heights[i - 1]
            } else if i >= 2 {
                heights[i - 2]
            } else {
                0
            };
            if l.type_index() == 1 && d < 0 {
                return None;
            }
            acc = self.combine(acc, self.letter_hash(l, d.max(0) as u64));
        }
        Some(acc)
    }
}

/// Record form: `mode=fixed_prime p=... alpha=... n_bound=... c=...`.
impl fmt::Display for HashParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode={} p={} alpha={} n_bound={} c={}",
            self.mode, self.p, self.alpha, self.n_bound, self.c
        )
    }
}

impl FromStr for HashParams {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mut mode, mut p, mut alpha, mut n_bound, mut c) = (None, None, None, None, None);
        for field in s.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| ParamError::Record(format!("field {field:?} is not key=value")))?;
            let num = || value.parse::<u64>().map_err(|e| ParamError::Record(format!("{key}: {e}")));
            match key {
                "mode" => mode = Some(value.parse()?),
                "p" => p = Some(num()?),
                "alpha" => alpha = Some(num()?),
                "n_bound" => n_bound = Some(num()?),
                "c" => c = Some(num()? as u32),
                other => return Err(ParamError::Record(format!("unknown field {other:?}"))),
            }
        }
        let missing = |k: &str| ParamError::Record(format!("missing field {k}"));
        let params = HashParams {
            mode: mode.ok_or_else(|| missing("mode"))?,
            p: p.ok_or_else(|| missing("p"))?,
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            n_bound: n_bound.ok_or_else(|| missing("n_bound"))?,
            c: c.ok_or_else(|| missing("c"))?,
        };
        if params.p < 2 || params.alpha >= params.p || !is_prime(params.p) {
            return Err(ParamError::Record(format!("inconsistent modulus/alpha in {s:?}")));
        }
        Ok(params)
    }
}

/// Sum of two residues under the same parameters.
pub fn combine(params: &HashParams, a: Residue, b: Residue) -> Residue {
    params.combine(a, b)
}

fn modulus_for(n_bound: u64, c: u32, mode: Modulus) -> Result<u64, ParamError> {
    if n_bound == 0 {
        return Err(ParamError::ZeroBound);
    }
    if c == 0 {
        return Err(ParamError::ZeroExponent);
    }
    let target = n_bound.checked_pow(c + 1);
    match mode {
        Modulus::PaperExact => {
            let target = target
                .filter(|t| t.checked_mul(2).is_some_and(|t2| t2 < 1 << 63))
                .ok_or(ParamError::ModulusOverflow { n_bound, c })?;
            Ok(next_prime(target))
        }
        Modulus::FixedPrime => match target {
            Some(t) if t <= MERSENNE_61 => Ok(MERSENNE_61),
            _ => Err(ParamError::PrimeTooSmall { n_bound, c }),
        },
    }
}

/// `a * b mod p` for `a, b < p`.
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    let x = a as u128 * b as u128;
    if p == MERSENNE_61 {
        let s = (x as u64 & MERSENNE_61) + (x >> 61) as u64;
        if s >= MERSENNE_61 {
            s - MERSENNE_61
        } else {
            s
        }
    } else {
        (x % p as u128) as u64
    }
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    (n.max(2)..).find(|&k| is_prime(k)).expect("prime below 2^64")
}

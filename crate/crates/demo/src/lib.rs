//! Browser bindings: height profiles, checker stack traces and instance
//! generation, each returned as a JSON string.

use dyckstream::fingerprint::Modulus;
use dyckstream::format::{chars2, chars2_byte, to_chars2};
use dyckstream::instances::{gen_ascension, gen_random_member, mutate_member, random_instance};
use dyckstream::onepass::{check_one_pass_with_probe, OnePassItem, OnePassProbe};
use dyckstream::twopass::{check_two_pass_with_probe, Direction, SliceSource, TwoPassItem, TwoPassProbe};
use dyckstream::word::{matching_pairs, oracle_check, prefix_heights};
use dyckstream::{HashParams, Letter, Metrics, Verdict, Word};
use wasm_bindgen::prelude::wasm_bindgen;
use wasm_bindgen::JsValue;

/// Longest word the tracers accept; traces grow with n log n.
pub const MAX_TRACE_LEN: usize = 4096;

fn parse(word: &str) -> Result<Word, String> {
    chars2(word).map_err(|e| e.to_string())
}

fn params(n: usize, seed: u64) -> Result<HashParams, String> {
    HashParams::new(n.max(1) as u64, 1, seed, Modulus::FixedPrime).map_err(|e| e.to_string())
}

fn verdict_json(v: Verdict) -> String {
    format!(r#"{{"accepted":{},"reason":"{}"}}"#, v.accepted(), v.reason_str())
}

fn metrics_json(m: &Metrics) -> String {
    format!(
        r#"{{"n":{},"padded_n":{},"peak_stack_items":{},"item_bits":{},"space_bits":{},"checks_performed":{},"pass_count":{}}}"#,
        m.n,
        m.padded_n,
        m.peak_stack_items,
        m.item_bits,
        m.space_bits(),
        m.checks_performed,
        m.pass_count
    )
}

/// Heights, matching pairs and the oracle verdict.
pub fn profile_json(word: &str) -> Result<String, String> {
    let w = parse(word)?;
    let heights: Vec<String> = std::iter::once(0).chain(prefix_heights(w.letters())).map(|h| h.to_string()).collect();
    let pairs: Vec<String> = matching_pairs(w.letters())
        .iter()
        .map(|p| format!("[{},{},{}]", p.i, p.j, w.at(p.i).closes_with(w.at(p.j))))
        .collect();
    Ok(format!(
        r#"{{"word":"{}","heights":[{}],"pairs":[{}],"verdict":{}}}"#,
        to_chars2(w.letters()).map_err(|e| e.to_string())?,
        heights.join(","),
        pairs.join(","),
        verdict_json(oracle_check(w.letters()))
    ))
}

fn item_json(ell: u64, h: u64) -> String {
    format!(r#"[{ell},"{h:x}"]"#)
}

#[derive(Default)]
struct Trace {
    steps: Vec<String>,
}

impl Trace {
    fn step(&mut self, kind: &str, at: u64, stack: impl Iterator<Item = String>, extra: &str) {
        let stack: Vec<String> = stack.collect();
        self.steps.push(format!(r#"{{"kind":"{kind}","at":{at},"stack":[{}]{extra}}}"#, stack.join(",")));
    }

    fn finish(self, verdict: Verdict, metrics: &Metrics) -> String {
        format!(
            r#"{{"verdict":{},"metrics":{},"steps":[{}]}}"#,
            verdict_json(verdict),
            metrics_json(metrics),
            self.steps.join(",")
        )
    }
}

fn one_items(stack: &[OnePassItem]) -> impl Iterator<Item = String> + '_ {
    stack.iter().map(|it| item_json(it.ell, it.h.value()))
}

fn two_items(stack: &[TwoPassItem]) -> impl Iterator<Item = String> + '_ {
    stack.iter().map(|it| item_json(it.ell, it.h.value()))
}

impl OnePassProbe for Trace {
    fn checked(&mut self, item: &OnePassItem, passed: bool) {
        self.step("check", 0, one_items(std::slice::from_ref(item)), &format!(r#","passed":{passed}"#));
    }

    fn block_done(&mut self, stack: &[OnePassItem], letters_read: u64) {
        self.step("block", letters_read, one_items(stack), "");
    }
}

impl TwoPassProbe for Trace {
    fn pass_started(&mut self, direction: Direction) {
        let kind = match direction {
            Direction::Forward => "forward",
            Direction::Reverse => "reverse",
        };
        self.step(kind, 0, std::iter::empty(), "");
    }

    fn checked(&mut self, item: &TwoPassItem, passed: bool) {
        self.step("check", item.first, two_items(std::slice::from_ref(item)), &format!(r#","passed":{passed}"#));
    }

    fn letter_done(&mut self, stack: &[TwoPassItem], index: u64, letter: Letter) {
        let letter = chars2_byte(letter).map_or('?', char::from);
        self.step("letter", index, two_items(stack), &format!(r#","letter":"{letter}""#));
    }
}

fn traceable(word: &str) -> Result<Word, String> {
    let w = parse(word)?;
    if w.len() > MAX_TRACE_LEN {
        return Err(format!("word has {} letters; the tracer takes at most {MAX_TRACE_LEN}", w.len()));
    }
    Ok(w)
}

/// Stack after every block of the one-pass checker, plus every check.
pub fn one_pass_trace_json(word: &str, seed: u64) -> Result<String, String> {
    let w = traceable(word)?;
    let n = w.len() as u64;
    let (v, m, trace) =
        check_one_pass_with_probe(w.letters().iter().copied(), n, &params(w.len(), seed)?, Trace::default())
            .map_err(|e| e.to_string())?;
    Ok(trace.finish(v, &m))
}

/// Stack after every letter of both passes of the two-pass checker.
pub fn two_pass_trace_json(word: &str, seed: u64) -> Result<String, String> {
    let w = traceable(word)?;
    let n = w.len() as u64;
    let (v, m, trace) =
        check_two_pass_with_probe(&mut SliceSource(w.letters()), n, &params(w.len(), seed)?, Trace::default())
            .map_err(|e| e.to_string())?;
    Ok(trace.finish(v, &m))
}

/// A word of roughly `size` letters: `member`, `mutant` or `ascension`.
pub fn generate_json(kind: &str, size: usize, seed: u64) -> Result<String, String> {
    let size = size.max(2);
    let (word, note) = match kind {
        "member" => (gen_random_member(size / 2, seed), "random member".to_string()),
        "mutant" => {
            let w = mutate_member(&gen_random_member(size / 2, seed), seed).map_err(|e| e.to_string())?;
            (w, "one pair retyped".to_string())
        }
        "ascension" => {
            // m words of length 2(n + k) with k <= n: pick n near sqrt(size).
            let n = ((size as f64).sqrt() / 2.0).ceil().max(1.0) as usize;
            let m = (size / (3 * n)).max(1);
            let fault = (seed % 2 == 1).then_some(1 + (seed as usize / 2) % m);
            let spec = random_instance(m, n, seed, fault).map_err(|e| e.to_string())?;
            (gen_ascension(&spec).map_err(|e| e.to_string())?.0, spec.to_string())
        }
        other => return Err(format!("unknown kind {other:?}")),
    };
    Ok(format!(
        r#"{{"word":"{}","member":{},"note":"{}"}}"#,
        to_chars2(word.letters()).map_err(|e| e.to_string())?,
        oracle_check(word.letters()).accepted(),
        note
    ))
}

fn js(r: Result<String, String>) -> Result<JsValue, JsValue> {
    r.map(JsValue::from).map_err(JsValue::from)
}

#[wasm_bindgen]
pub fn profile(word: &str) -> Result<JsValue, JsValue> {
    js(profile_json(word))
}

#[wasm_bindgen]
pub fn one_pass_trace(word: &str, seed: u64) -> Result<JsValue, JsValue> {
    js(one_pass_trace_json(word, seed))
}

#[wasm_bindgen]
pub fn two_pass_trace(word: &str, seed: u64) -> Result<JsValue, JsValue> {
    js(two_pass_trace_json(word, seed))
}

#[wasm_bindgen]
pub fn generate(kind: &str, size: usize, seed: u64) -> Result<JsValue, JsValue> {
    js(generate_json(kind, size, seed))
}

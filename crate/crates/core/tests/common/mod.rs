//! Shadow implementations that track the actual subsequence behind every
//! stack item and cross-check the checkers' summaries against hashes
//! recomputed from prefix heights.
//!
//! Violations are collected instead of panicking so that the acceptance
//! harness can report them.

#![allow(dead_code)]

use dyckstream::onepass::{OnePassItem, OnePassProbe};
use dyckstream::twopass::{Direction, TwoPassItem, TwoPassProbe};
use dyckstream::word::{partner_table, Letter};
use dyckstream::HashParams;

/// Fixed view of the word being scanned.
pub struct Scan {
    letters: Vec<Letter>,
    /// `heights[t]` is the height of `x[1, t]`.
    heights: Vec<i64>,
    partner: Vec<usize>,
    pow: Vec<u64>,
    p: u64,
}

impl Scan {
    pub fn new(letters: Vec<Letter>, params: &HashParams) -> Scan {
        let mut heights = vec![0i64; letters.len() + 1];
        for (t, l) in letters.iter().enumerate() {
            heights[t + 1] = heights[t] + if l.is_open() { 1 } else { -1 };
        }
        let top = heights.iter().copied().max().unwrap_or(0).max(0) as usize;
        let p = params.p();
        let mut pow = Vec::with_capacity(top + 2);
        let mut acc = 1 % p;
        for _ in 0..=top + 1 {
            pow.push(acc);
            acc = (u128::from(acc) * u128::from(params.alpha()) % u128::from(p)) as u64;
        }
        let partner = partner_table(&letters);
        Scan { letters, heights, partner, pow, p }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn letter(&self, t: u64) -> Letter {
        self.letters[t as usize - 1]
    }

    pub fn height(&self, t: u64) -> i64 {
        self.heights[t as usize]
    }

    pub fn partner(&self, t: u64) -> u64 {
        self.partner[t as usize] as u64
    }

    /// Fingerprint contribution of position `t`, from prefix heights alone.
    pub fn contrib(&self, t: u64) -> u64 {
        let l = self.letter(t);
        if l.type_index() != 1 {
            return 0;
        }
        if l.is_open() {
            self.pow[self.height(t) as usize]
        } else {
            let v = self.pow[self.height(t - 1) as usize];
            (self.p - v) % self.p
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((u128::from(a) + u128::from(b)) % u128::from(self.p)) as u64
    }
}

#[derive(Default)]
pub struct Violations {
    pub count: u64,
    pub first: Vec<String>,
}

impl Violations {
    fn report(&mut self, msg: String) {
        self.count += 1;
        if self.first.len() < 5 {
            self.first.push(msg);
        }
    }

    pub fn is_clean(&self) -> bool {
        self.count == 0
    }
}

macro_rules! expect {
    ($v:expr, $cond:expr, $($fmt:tt)+) => {
        if !$cond {
            $v.report(format!($($fmt)+));
        }
    };
}

struct OneItem {
    id: usize,
    hash: u64,
    ell: i64,
    up_block: u64,
    last: u64,
    len: u64,
}

/// Shadow of the one-pass stack.
pub struct OnePassShadow {
    scan: Scan,
    block_size: u64,
    bound: u64,
    items: Vec<OneItem>,
    owner: Vec<usize>,
    next_id: usize,
    removed: u64,
    pub violations: Violations,
    pub events: u64,
    pub collisions: u64,
}

impl OnePassShadow {
    pub fn new(letters: &[Letter], params: &HashParams, block_size: u64) -> OnePassShadow {
        let n = letters.len() as u64;
        OnePassShadow {
            scan: Scan::new(letters.to_vec(), params),
            block_size,
            bound: block_size_bound(n),
            items: Vec::new(),
            owner: vec![usize::MAX; letters.len() + 1],
            next_id: 0,
            removed: 0,
            violations: Violations::default(),
            events: 0,
            collisions: 0,
        }
    }

    fn block_of(&self, t: u64) -> u64 {
        (t - 1) / self.block_size
    }

    fn compare_top(&mut self, stack: &[OnePassItem], what: &str) {
        let v = &mut self.violations;
        expect!(v, stack.len() == self.items.len(), "{what}: depth {} vs shadow {}", stack.len(), self.items.len());
        if let (Some(real), Some(shadow)) = (stack.last(), self.items.last()) {
            expect!(v, real.h.value() == shadow.hash, "{what}: top hash {} vs recomputed {}", real.h.value(), shadow.hash);
            expect!(v, real.ell as i64 == shadow.ell, "{what}: top ell {} vs height {}", real.ell, shadow.ell);
        }
    }
}

/// `⌈√n⌉ + 1`.
pub fn block_size_bound(n: u64) -> u64 {
    dyckstream::onepass::block_size_for(n) + 1
}

impl OnePassProbe for OnePassShadow {
    fn cancelled(&mut self, i: u64, j: u64) {
        self.events += 1;
        let v = &mut self.violations;
        expect!(v, self.scan.partner(i) == j, "cancelled ({i},{j}) is not a matching pair");
        expect!(v, (i - 1) / self.block_size == (j - 1) / self.block_size, "cancelled ({i},{j}) spans blocks");
        expect!(v, self.scan.letter(i).closes_with(self.scan.letter(j)), "cancelled ({i},{j}) is ill-formed");
        self.removed += 2;
    }

    fn extended(&mut self, stack: &[OnePassItem], index: u64) {
        self.events += 1;
        let block = self.block_of(index);
        let contrib = self.scan.contrib(index);
        let partner = self.scan.partner(index);
        let Some(top) = self.items.last_mut() else {
            self.violations.report(format!("closer {index} extended an empty shadow stack"));
            return;
        };
        let v = &mut self.violations;
        expect!(v, !self.scan.letter(index).is_open(), "extended with upstep {index}");
        expect!(v, partner != 0 && self.owner[partner as usize] == top.id, "closer {index} has no matching upstep in its item");
        expect!(v, index > top.last, "closer {index} out of order");
        expect!(v, block > top.up_block, "closer {index} in the item's own block (staggering)");
        top.hash = self.scan.add(top.hash, contrib);
        top.ell -= 1;
        top.last = index;
        top.len += 1;
        self.owner[index as usize] = top.id;
        self.compare_top(stack, "extended");
    }

    fn checked(&mut self, item: &OnePassItem, passed: bool) {
        self.events += 1;
        let Some(top) = self.items.last() else {
            self.violations.report("check with empty shadow stack".into());
            return;
        };
        let v = &mut self.violations;
        expect!(v, top.ell == 0 && item.ell == 0, "checked item has nonzero height");
        expect!(v, item.h.value() == top.hash, "checked hash {} vs recomputed {}", item.h.value(), top.hash);
        expect!(v, passed == (top.hash == 0), "check outcome disagrees with hash");
        if passed {
            let top = self.items.pop().expect("nonempty");
            self.removed += top.len;
        }
    }

    fn pushed(&mut self, stack: &[OnePassItem], indices: &[u64]) {
        self.events += 1;
        let id = self.next_id;
        self.next_id += 1;
        let first = indices[0];
        let block = self.block_of(first);
        let mut hash = 0;
        for (k, &t) in indices.iter().enumerate() {
            let same_block = self.block_of(t) == block;
            let v = &mut self.violations;
            expect!(v, self.scan.letter(t).is_open(), "pushed downstep {t}");
            expect!(v, same_block, "pushed run spans blocks");
            expect!(v, k == 0 || t > indices[k - 1], "pushed run out of order");
            hash = self.scan.add(hash, self.scan.contrib(t));
            self.owner[t as usize] = id;
        }
        if let Some(below) = self.items.last() {
            let v = &mut self.violations;
            expect!(v, below.last < first, "stack concatenation not increasing at push");
        }
        self.items.push(OneItem { id, hash, ell: indices.len() as i64, up_block: block, last: *indices.last().unwrap(), len: indices.len() as u64 });
        self.compare_top(stack, "pushed");
    }

    fn block_done(&mut self, stack: &[OnePassItem], letters_read: u64) {
        self.events += 1;
        let v = &mut self.violations;
        expect!(v, stack.len() == self.items.len(), "depth {} vs shadow {}", stack.len(), self.items.len());
        expect!(v, stack.len() as u64 <= self.bound, "depth {} over bound {}", stack.len(), self.bound);
        let mut sum = 0;
        let mut kept = 0;
        for (k, (real, shadow)) in stack.iter().zip(&self.items).enumerate() {
            expect!(v, real.h.value() == shadow.hash && real.ell as i64 == shadow.ell, "item {k} differs from shadow");
            expect!(v, shadow.ell > 0, "zero-height item {k} left below the top");
            sum += shadow.ell;
            kept += shadow.len;
        }
        expect!(v, sum == self.scan.height(letters_read), "item heights sum {sum} vs running height");
        // Everything read is either still encoded or was removed as whole
        // matching pairs.
        expect!(v, kept + self.removed == letters_read, "kept {kept} + removed {} != read {letters_read}", self.removed);
    }
}

struct TwoItem {
    id: usize,
    hash: u64,
    ell: i64,
    first: u64,
}

/// Shadow of the two-pass stack, with per-pass coverage of one marked pair.
pub struct TwoPassShadow {
    scans: [Scan; 2],
    pass: usize,
    padded_n: u64,
    bound: u64,
    items: Vec<TwoItem>,
    owner: Vec<usize>,
    parent: Vec<usize>,
    /// Matching pair to watch and the smallest aligned block holding it, in
    /// forward padded positions.
    watched: Option<((u64, u64), (u64, u64))>,
    last_index: u64,
    pub covered: [bool; 2],
    pub checks: [u64; 2],
    pub violations: Violations,
    pub events: u64,
}

impl TwoPassShadow {
    pub fn new(letters: &[Letter], params: &HashParams) -> TwoPassShadow {
        let n = letters.len() as u64;
        let padded_n = if n == 0 { 0 } else { n.next_power_of_two() };
        let mut fwd = letters.to_vec();
        while (fwd.len() as u64) < padded_n {
            fwd.extend([Letter::A, Letter::A_BAR]);
        }
        let rev: Vec<Letter> = fwd.iter().rev().map(|l| l.dual()).collect();
        let k = if padded_n == 0 { 0 } else { u64::from(padded_n.trailing_zeros()) };
        TwoPassShadow {
            scans: [Scan::new(fwd, params), Scan::new(rev, params)],
            pass: 0,
            padded_n,
            bound: 2 * k.max(1),
            items: Vec::new(),
            owner: vec![usize::MAX; padded_n as usize + 1],
            parent: Vec::new(),
            watched: None,
            last_index: 0,
            covered: [false; 2],
            checks: [0; 2],
            violations: Violations::default(),
            events: 0,
        }
    }

    /// Tracks whether the pair `(i, j)` is ever tested by a check whose
    /// subsequence lies inside the smallest aligned block containing both.
    pub fn watch(mut self, i: u64, j: u64) -> TwoPassShadow {
        let level = 64 - ((i - 1) ^ (j - 1)).leading_zeros();
        let start = ((i - 1) >> level << level) + 1;
        self.watched = Some(((i, j), (start, start + (1 << level) - 1)));
        self
    }

    fn find(&mut self, mut id: usize) -> usize {
        while self.parent[id] != id {
            self.parent[id] = self.parent[self.parent[id]];
            id = self.parent[id];
        }
        id
    }

    fn watched_here(&self) -> Option<((u64, u64), (u64, u64))> {
        let ((i, j), (s, e)) = self.watched?;
        let n = self.padded_n;
        Some(if self.pass == 0 { ((i, j), (s, e)) } else { ((n - j + 1, n - i + 1), (n - e + 1, n - s + 1)) })
    }

    fn compare_top(&mut self, stack: &[TwoPassItem], what: &str) {
        let v = &mut self.violations;
        expect!(v, stack.len() == self.items.len(), "{what}: depth {} vs shadow {}", stack.len(), self.items.len());
        if let (Some(real), Some(shadow)) = (stack.last(), self.items.last()) {
            expect!(v, real.h.value() == shadow.hash, "{what}: top hash differs from recomputed");
            expect!(v, real.ell as i64 == shadow.ell, "{what}: top ell {} vs height {}", real.ell, shadow.ell);
            expect!(v, real.first == shadow.first, "{what}: first {} vs {}", real.first, shadow.first);
        }
    }
}

impl TwoPassProbe for TwoPassShadow {
    fn pass_started(&mut self, direction: Direction) {
        self.pass = match direction {
            Direction::Forward => 0,
            Direction::Reverse => 1,
        };
        self.items.clear();
        self.parent.clear();
        self.owner.fill(usize::MAX);
    }

    fn pushed(&mut self, stack: &[TwoPassItem], index: u64) {
        self.events += 1;
        let scan = &self.scans[self.pass];
        expect!(self.violations, scan.letter(index).is_open(), "pushed downstep {index}");
        let id = self.parent.len();
        self.parent.push(id);
        self.owner[index as usize] = id;
        let hash = scan.contrib(index);
        self.items.push(TwoItem { id, hash, ell: 1, first: index });
        self.compare_top(stack, "pushed");
    }

    fn extended(&mut self, stack: &[TwoPassItem], index: u64) {
        self.events += 1;
        let scan = &self.scans[self.pass];
        let partner = scan.partner(index);
        let contrib = scan.contrib(index);
        let Some(top_id) = self.items.last().map(|t| t.id) else {
            self.violations.report(format!("closer {index} extended an empty shadow stack"));
            return;
        };
        let root = self.find(top_id);
        let partner_owner = if partner == 0 { usize::MAX } else { self.owner[partner as usize] };
        let partner_root = if partner_owner == usize::MAX { usize::MAX } else { self.find(partner_owner) };
        expect!(self.violations, partner_root == root, "downstep {index} not matched inside its item");
        let scan = &self.scans[self.pass];
        let top = self.items.last_mut().expect("nonempty");
        top.hash = scan.add(top.hash, contrib);
        top.ell -= 1;
        self.owner[index as usize] = top.id;
        self.last_index = index;
        self.compare_top(stack, "extended");
    }

    fn checked(&mut self, item: &TwoPassItem, passed: bool) {
        self.events += 1;
        self.checks[self.pass] += 1;
        let Some(top) = self.items.last() else {
            self.violations.report("check with empty shadow stack".into());
            return;
        };
        let (top_id, top_hash, top_ell, top_first) = (top.id, top.hash, top.ell, top.first);
        let v = &mut self.violations;
        expect!(v, top_ell == 0 && item.ell == 0, "checked item has nonzero height");
        expect!(v, item.h.value() == top_hash, "checked hash differs from recomputed");
        expect!(v, passed == (top_hash == 0), "check outcome disagrees with hash");
        if let Some(((i, j), (start, end))) = self.watched_here() {
            let root = self.find(top_id);
            let local = top_first >= start && self.last_index <= end;
            let (oi, oj) = (self.owner[i as usize], self.owner[j as usize]);
            if local && oi != usize::MAX && oj != usize::MAX && self.find(oi) == root && self.find(oj) == root {
                self.covered[self.pass] = true;
            }
        }
        if passed {
            self.items.pop();
        }
    }

    fn compressed(&mut self, stack: &[TwoPassItem], _level: u32, block_start: u64) {
        self.events += 1;
        if self.items.len() < 2 {
            self.violations.report("compression with fewer than two shadow items".into());
            return;
        }
        let top = self.items.pop().expect("two items");
        let scan = &self.scans[self.pass];
        let below = self.items.last_mut().expect("two items");
        let v = &mut self.violations;
        expect!(v, top.first >= block_start && below.first >= block_start, "compressed items start before the block");
        below.hash = scan.add(below.hash, top.hash);
        below.ell += top.ell;
        below.first = below.first.min(top.first);
        let below_id = below.id;
        self.parent[top.id] = below_id;
        self.compare_top(stack, "compressed");
    }

    fn letter_done(&mut self, stack: &[TwoPassItem], index: u64, letter: Letter) {
        self.events += 1;
        let scan = &self.scans[self.pass];
        let v = &mut self.violations;
        expect!(v, scan.letter(index) == letter, "letter {index} differs from the scanned word");
        expect!(v, stack.len() == self.items.len(), "depth {} vs shadow {}", stack.len(), self.items.len());
        expect!(v, stack.len() as u64 <= self.bound, "depth {} over bound {}", stack.len(), self.bound);
        let reference = if letter.is_open() { scan.height(index) } else { scan.height(index - 1) };
        for (k, (real, shadow)) in stack.iter().zip(&self.items).enumerate() {
            expect!(
                v,
                real.h.value() == shadow.hash && real.ell as i64 == shadow.ell && real.first == shadow.first,
                "item {k} differs from shadow after letter {index}"
            );
            expect!(v, shadow.ell > 0, "zero-height item {k} kept after letter {index}");
            if shadow.first < index {
                expect!(
                    v,
                    scan.height(shadow.first) < reference,
                    "height ordering fails for item {k} (first {}) after letter {index}",
                    shadow.first
                );
            }
        }
    }
}

//! Exact sets of subset sums over dense bitmaps.
//!
//! A [`SizeSet`] is a bitmap over `[0, max]`. Minkowski sums are computed by
//! OR-ing shifted copies of the larger operand, one shift per member of the
//! smaller one. Sequences are stored as `(value, count)` runs so `k∘a` is
//! never expanded: a run is folded in with `O(log count)` shifts.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Default cap on the span of a sum set, in bits (128 MiB of bitmap).
pub const SUM_BUDGET: u64 = 1 << 30;

const WORD: usize = 64;

#[derive(Clone)]
pub struct SizeSet {
    max: usize,
    words: Vec<u64>,
}

impl SizeSet {
    /// The empty set over `[0, max]`.
    pub fn empty(max: usize) -> Self {
        Self {
            max,
            words: vec![0; max / WORD + 1],
        }
    }

    /// `{0}` over `[0, max]`.
    pub fn zero(max: usize) -> Self {
        let mut s = Self::empty(max);
        s.words[0] = 1;
        s
    }

    /// Resets to `{0}` without reallocating.
    pub fn reset_zero(&mut self) {
        self.words.fill(0);
        self.words[0] = 1;
    }

    pub fn from_values<I: IntoIterator<Item = u64>>(values: I) -> Self {
        let values: Vec<u64> = values.into_iter().collect();
        let max = values.iter().copied().max().unwrap_or(0) as usize;
        let mut s = Self::empty(max);
        for v in values {
            s.insert(v);
        }
        s
    }

    pub fn max(&self) -> usize {
        self.max
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, v: u64) -> bool {
        let v = v as usize;
        v <= self.max && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Inserts `v`; returns false if `v` lies beyond `max`.
    pub fn insert(&mut self, v: u64) -> bool {
        let v = v as usize;
        if v > self.max {
            return false;
        }
        self.words[v / WORD] |= 1 << (v % WORD);
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some((i * WORD + b) as u64)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Same members over a wider (or equal) range.
    pub fn widened(&self, max: usize) -> Self {
        let mut s = Self::empty(max.max(self.max));
        s.words[..self.words.len()].copy_from_slice(&self.words);
        s
    }

    /// `self ∪= other`, dropping members of `other` beyond `self.max`.
    pub fn union_with(&mut self, other: &SizeSet) {
        for (d, s) in self.words.iter_mut().zip(&other.words) {
            *d |= s;
        }
        self.trim();
    }

    /// `self ∪= self + {shift}`, truncated to `[0, max]`.
    pub fn shift_or(&mut self, shift: usize) {
        if shift == 0 || shift > self.max {
            return;
        }
        let (ws, bs) = (shift / WORD, shift % WORD);
        for i in (ws..self.words.len()).rev() {
            let mut v = self.words[i - ws] << bs;
            if bs > 0 && i > ws {
                v |= self.words[i - ws - 1] >> (WORD - bs);
            }
            self.words[i] |= v;
        }
        self.trim();
    }

    /// `self ∪= other + {shift}`, truncated to `[0, max]`.
    pub fn or_shifted(&mut self, other: &SizeSet, shift: usize) {
        if shift > self.max {
            return;
        }
        let (ws, bs) = (shift / WORD, shift % WORD);
        let n = self.words.len();
        for i in ws..n {
            let j = i - ws;
            let mut v = other.words.get(j).map_or(0, |w| w << bs);
            if bs > 0 && j > 0 {
                v |= other.words.get(j - 1).map_or(0, |w| w >> (WORD - bs));
            }
            self.words[i] |= v;
        }
        self.trim();
    }

    fn trim(&mut self) {
        let last = self.words.len() - 1;
        let used = self.max % WORD + 1;
        if used < WORD {
            self.words[last] &= (1u64 << used) - 1;
        }
    }
}

impl PartialEq for SizeSet {
    fn eq(&self, other: &Self) -> bool {
        let n = self.words.len().max(other.words.len());
        (0..n).all(|i| {
            self.words.get(i).copied().unwrap_or(0) == other.words.get(i).copied().unwrap_or(0)
        })
    }
}

impl Eq for SizeSet {}

impl std::fmt::Debug for SizeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite sequence of positive integers stored as `(value, count)` runs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Seq {
    runs: Vec<(u64, usize)>,
}

impl Seq {
    pub fn new(terms: &[u64]) -> Result<Self> {
        let mut seq = Seq::default();
        for &t in terms {
            seq.push_run(t, 1)?;
        }
        Ok(seq)
    }

    /// `k∘a`: the sequence of length `k` whose terms all equal `a`.
    pub fn repeated(k: usize, a: u64) -> Result<Self> {
        let mut seq = Seq::default();
        seq.push_run(a, k)?;
        Ok(seq)
    }

    pub fn from_runs(runs: &[(u64, usize)]) -> Result<Self> {
        let mut seq = Seq::default();
        for &(v, c) in runs {
            seq.push_run(v, c)?;
        }
        Ok(seq)
    }

    fn push_run(&mut self, value: u64, count: usize) -> Result<()> {
        if value == 0 {
            return Err(Error::input("sequence terms must be positive"));
        }
        if count == 0 {
            return Ok(());
        }
        match self.runs.last_mut() {
            Some((v, c)) if *v == value => *c += count,
            _ => self.runs.push((value, count)),
        }
        Ok(())
    }

    /// The concatenation `(self, other)`.
    pub fn concat(&self, other: &Seq) -> Seq {
        let mut seq = self.clone();
        for &(v, c) in &other.runs {
            // Both operands already hold positive terms.
            let _ = seq.push_run(v, c);
        }
        seq
    }

    pub fn runs(&self) -> &[(u64, usize)] {
        &self.runs
    }

    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = u64> + '_ {
        self.runs
            .iter()
            .flat_map(|&(v, c)| std::iter::repeat_n(v, c))
    }

    /// Sum of all terms, or `None` on overflow.
    pub fn total(&self) -> Option<u64> {
        self.runs.iter().try_fold(0u64, |acc, &(v, c)| {
            v.checked_mul(c as u64).and_then(|p| acc.checked_add(p))
        })
    }
}

/// `S(a)`: every sum of a sub-multiset of `a`, under the default budget.
pub fn subset_sums(a: &Seq) -> Result<SizeSet> {
    subset_sums_with_budget(a, SUM_BUDGET)
}

pub fn subset_sums_with_budget(a: &Seq, budget: u64) -> Result<SizeSet> {
    let total = a
        .total()
        .ok_or_else(|| Error::budget("subset sums", u128::MAX, budget))?;
    if total > budget {
        return Err(Error::budget("subset sums", total, budget));
    }
    let mut s = SizeSet::zero(total as usize);
    for &(v, c) in a.runs() {
        fold_run(&mut s, v, c);
    }
    Ok(s)
}

/// Adds `{0, v, …, c·v}` into `s` using binary chunks `1, 2, 4, …, rest`.
pub(crate) fn fold_run(s: &mut SizeSet, v: u64, c: usize) {
    let mut remaining = c;
    let mut chunk = 1usize;
    while remaining > 0 {
        let take = chunk.min(remaining);
        s.shift_or((v as usize) * take);
        remaining -= take;
        chunk *= 2;
    }
}

/// Exact Minkowski sum `s + t`.
pub fn sumset_add(s: &SizeSet, t: &SizeSet) -> SizeSet {
    let (small, large) = if s.len() <= t.len() { (s, t) } else { (t, s) };
    let mut out = SizeSet::empty(s.max + t.max);
    for e in small.iter() {
        out.or_shifted(large, e as usize);
    }
    out
}

/// `S(k∘a) = {0, a, 2a, …, ka}`.
pub fn repeated(k: usize, a: u64) -> SizeSet {
    let mut s = SizeSet::zero(k * a as usize);
    for i in 1..=k as u64 {
        s.insert(i * a);
    }
    s
}

/// `S(k∘a, l∘b)`, allowing either value to be zero.
pub fn two_value_sums(k: usize, a: u64, l: usize, b: u64) -> SizeSet {
    sumset_add(&repeated(k, a), &repeated(l, b))
}

/// Residues modulo `b` attained by `S(a)`.
pub fn residues_mod(a: &Seq, b: u64) -> Result<BTreeSet<u64>> {
    if b == 0 {
        return Err(Error::input("modulus must be positive"));
    }
    let n = b as usize;
    let mut reach = vec![false; n];
    reach[0] = true;
    for &(v, c) in a.runs() {
        let step = (v % b) as usize;
        // c ≥ b additions already saturate the cyclic orbit.
        for _ in 0..c.min(n) {
            let prev = reach.clone();
            let mut changed = false;
            for r in (0..n).filter(|&r| prev[r]) {
                let t = (r + step) % n;
                if !reach[t] {
                    reach[t] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    Ok((0..b).filter(|&r| reach[r as usize]).collect())
}

/// Checks `|S(a, k∘b)| ≥ k·min(b/g, n)` given `gcd(a_i, b) ≤ g` for every term.
pub fn check_residue_bound(a: &Seq, b: u64, k: usize, g: u64) -> Result<bool> {
    if b == 0 || g == 0 {
        return Err(Error::input("b and g must be positive"));
    }
    if let Some(t) = a.terms().find(|t| t.gcd(&b) > g) {
        return Err(Error::precondition(format!("gcd({t}, {b}) exceeds {g}")));
    }
    let sums = sumset_add(&subset_sums(a)?, &repeated(k, b));
    let size = sums.len() as u128;
    let (k, n) = (k as u128, a.len() as u128);
    // |S| ≥ k·min(b/g, n)  ⇔  |S| ≥ k·n  or  |S|·g ≥ k·b
    Ok(size >= k * n || size * g as u128 >= k * b as u128)
}

/// Checks `|S(k∘a, l∘b)| ≥ k·min(a/g, l)` given `gcd(a, b) ≤ g`.
pub fn check_two_value_bound(k: usize, a: u64, l: usize, b: u64, g: u64) -> Result<bool> {
    if a == 0 || b == 0 || g == 0 {
        return Err(Error::input("a, b and g must be positive"));
    }
    if a.gcd(&b) > g {
        return Err(Error::precondition(format!("gcd({a}, {b}) exceeds {g}")));
    }
    let size = two_value_sums(k, a, l, b).len() as u128;
    let (k, l) = (k as u128, l as u128);
    Ok(size >= k * l || size * g as u128 >= k * a as u128)
}

/// Subset-sum table that can produce the lexicographically least index set
/// realising any attainable sum.
#[derive(Debug, Clone)]
pub struct SumWitnessTable {
    weights: Vec<u64>,
    /// `suffix[t]` holds the sums of sub-multisets of `weights[t..]`.
    suffix: Vec<SizeSet>,
}

impl SumWitnessTable {
    pub fn new(weights: &[u64]) -> Result<Self> {
        Self::with_budget(weights, SUM_BUDGET)
    }

    pub fn with_budget(weights: &[u64], budget: u64) -> Result<Self> {
        let total: u64 = weights.iter().sum();
        let bits = (weights.len() as u128 + 1) * (total as u128 + 1);
        if bits > budget as u128 {
            return Err(Error::budget("witness table", bits, budget));
        }
        let n = weights.len();
        let mut suffix = vec![SizeSet::zero(total as usize); n + 1];
        for t in (0..n).rev() {
            let mut s = suffix[t + 1].clone();
            s.or_shifted(&suffix[t + 1], weights[t] as usize);
            suffix[t] = s;
        }
        Ok(Self {
            weights: weights.to_vec(),
            suffix,
        })
    }

    pub fn sums(&self) -> &SizeSet {
        &self.suffix[0]
    }

    /// Lexicographically least sorted index list with weight sum `target`.
    pub fn witness(&self, target: u64) -> Option<Vec<usize>> {
        if !self.suffix[0].contains(target) {
            return None;
        }
        let mut rest = target;
        let mut picked = Vec::new();
        for (t, &w) in self.weights.iter().enumerate() {
            if rest == 0 {
                break;
            }
            if w <= rest && self.suffix[t + 1].contains(rest - w) {
                picked.push(t);
                rest -= w;
            }
        }
        debug_assert_eq!(rest, 0);
        Some(picked)
    }
}

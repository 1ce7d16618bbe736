//! Equal-sum matchings over a weight sequence.
//!
//! For set size `r` and target `d`, the hypergraph `F(r, d)` has as edges the
//! `r`-subsets of indices whose weights sum to `d`. We never enumerate its
//! edges: a depth-first search with a failure memo extracts the
//! lexicographically least edge among the still-active indices, and repeated
//! extraction yields a maximal matching.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::profile::ScaleProfile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualSumMatching {
    pub r: usize,
    pub d: u64,
    pub sets: Vec<Vec<usize>>,
}

impl EqualSumMatching {
    pub fn empty(r: usize, d: u64) -> Self {
        Self {
            r,
            d,
            sets: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Total weight of the indices covered by the matching.
    pub fn covered_weight(&self) -> u64 {
        self.d * self.sets.len() as u64
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.sets.iter().flatten().copied()
    }

    /// Checks disjointness, cardinality `r` and sum `d` against `weights`.
    pub fn check(&self, weights: &[u64]) -> Result<()> {
        let mut seen = HashSet::new();
        for (j, set) in self.sets.iter().enumerate() {
            if set.len() != self.r {
                return Err(Error::Verification(format!(
                    "set {j} has {} elements, expected {}",
                    set.len(),
                    self.r
                )));
            }
            let mut sum = 0u64;
            for &i in set {
                let w = *weights
                    .get(i)
                    .ok_or_else(|| Error::Verification(format!("index {i} out of range")))?;
                sum += w;
                if !seen.insert(i) {
                    return Err(Error::Verification(format!("index {i} used twice")));
                }
            }
            if sum != self.d {
                return Err(Error::Verification(format!(
                    "set {j} sums to {sum}, expected {}",
                    self.d
                )));
            }
        }
        Ok(())
    }
}

/// One greedy round per entry: the matching taken and how many indices were
/// still uncovered after it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverTrace {
    pub rounds: Vec<(EqualSumMatching, usize)>,
}

#[derive(Debug, Clone)]
pub struct Cover {
    pub trace: CoverTrace,
    /// The round matching of largest covered weight.
    pub best: EqualSumMatching,
}

fn normalize(active: &[usize]) -> Vec<usize> {
    let mut a = active.to_vec();
    a.sort_unstable();
    a.dedup();
    a
}

/// Lexicographic search for `r`-subsets with a given sum over a fixed
/// ordering of candidate indices. Failed states stay failed as indices are
/// retired, so the memo is shared across extractions.
struct EdgeSearch {
    order: Vec<usize>,
    w: Vec<u64>,
    alive: Vec<bool>,
    suffix_max: Vec<u64>,
    failed: HashSet<(usize, usize, u64)>,
}

struct Frame {
    pos: usize,
    c: usize,
    s: u64,
    stage: u8,
    included: bool,
}

impl EdgeSearch {
    fn new(weights: &[u64], active: &[usize]) -> Self {
        let order = normalize(active);
        let w: Vec<u64> = order.iter().map(|&i| weights[i]).collect();
        let mut suffix_max = vec![0u64; w.len() + 1];
        for p in (0..w.len()).rev() {
            suffix_max[p] = suffix_max[p + 1].max(w[p]);
        }
        Self {
            alive: vec![true; order.len()],
            order,
            w,
            suffix_max,
            failed: HashSet::new(),
        }
    }

    fn find(&mut self, r: usize, d: u64) -> Option<Vec<usize>> {
        let n = self.w.len();
        let mut picks: Vec<usize> = Vec::new();
        let mut stack = vec![Frame {
            pos: 0,
            c: r,
            s: d,
            stage: 0,
            included: false,
        }];
        while let Some(f) = stack.last_mut() {
            let key = (f.pos, f.c, f.s);
            let fail = match f.stage {
                0 => {
                    if f.c == 0 {
                        if f.s == 0 {
                            return Some(picks.iter().map(|&p| self.order[p]).collect());
                        }
                        true
                    } else if f.pos == n
                        || f.s < f.c as u64
                        || f.s > f.c as u64 * self.suffix_max[f.pos]
                        || self.failed.contains(&key)
                    {
                        true
                    } else {
                        f.stage = 1;
                        if self.alive[f.pos] && self.w[f.pos] <= f.s {
                            f.included = true;
                            picks.push(f.pos);
                            let child = Frame {
                                pos: f.pos + 1,
                                c: f.c - 1,
                                s: f.s - self.w[f.pos],
                                stage: 0,
                                included: false,
                            };
                            stack.push(child);
                        }
                        false
                    }
                }
                1 => {
                    if f.included {
                        picks.pop();
                        f.included = false;
                    }
                    f.stage = 2;
                    let child = Frame {
                        pos: f.pos + 1,
                        c: f.c,
                        s: f.s,
                        stage: 0,
                        included: false,
                    };
                    stack.push(child);
                    false
                }
                _ => {
                    self.failed.insert(key);
                    true
                }
            };
            if fail {
                stack.pop();
            }
        }
        None
    }

    fn retire(&mut self, set: &[usize]) {
        for &i in set {
            if let Ok(p) = self.order.binary_search(&i) {
                self.alive[p] = false;
            }
        }
    }
}

/// Lexicographically least `r`-subset of `active` whose weights sum to `d`.
pub fn find_equal_sum_set(
    weights: &[u64],
    active: &[usize],
    r: usize,
    d: u64,
) -> Option<Vec<usize>> {
    if r == 0 || active.iter().any(|&i| i >= weights.len()) {
        return None;
    }
    EdgeSearch::new(weights, active).find(r, d)
}

/// Greedy maximal matching of `F(r, d)` restricted to `active`.
pub fn maximal_matching(weights: &[u64], active: &[usize], r: usize, d: u64) -> EqualSumMatching {
    let mut matching = EqualSumMatching::empty(r, d);
    if r == 0 || active.iter().any(|&i| i >= weights.len()) {
        return matching;
    }
    let mut search = EdgeSearch::new(weights, active);
    while let Some(set) = search.find(r, d) {
        search.retire(&set);
        matching.sets.push(set);
    }
    matching
}

/// `counts[c][s]`: number of `c`-subsets of the active weights summing to `s`,
/// saturating.
fn subset_counts(w: &[u64], r: usize) -> Vec<Vec<u128>> {
    let maxw = w.iter().copied().max().unwrap_or(0) as usize;
    let span = r * maxw;
    let mut counts = vec![vec![0u128; span + 1]; r + 1];
    counts[0][0] = 1;
    for (seen, &x) in w.iter().enumerate() {
        let x = x as usize;
        for c in (1..=r.min(seen + 1)).rev() {
            let (lo, hi) = counts.split_at_mut(c);
            let prev = &lo[c - 1];
            let cur = &mut hi[0];
            for s in (x..=span).rev() {
                if prev[s - x] != 0 {
                    cur[s] = cur[s].saturating_add(prev[s - x]);
                }
            }
        }
    }
    counts
}

fn better(a: &EqualSumMatching, b: &EqualSumMatching) -> bool {
    // covered weight, then more sets, then smaller r, then smaller d
    (
        a.covered_weight(),
        a.len(),
        std::cmp::Reverse(a.r),
        std::cmp::Reverse(a.d),
    ) > (
        b.covered_weight(),
        b.len(),
        std::cmp::Reverse(b.r),
        std::cmp::Reverse(b.d),
    )
}

/// Best maximal matching over set sizes `r' ≤ r`, trying for each `r'` the
/// `top` sums carried by the most `r'`-subsets.
pub fn best_matching_for_r(
    weights: &[u64],
    active: &[usize],
    r: usize,
    top: usize,
) -> EqualSumMatching {
    let active = normalize(active);
    if active.is_empty() || r == 0 {
        return EqualSumMatching::empty(1, 0);
    }
    let w: Vec<u64> = active.iter().map(|&i| weights[i]).collect();
    let r = r.min(active.len());
    let counts = subset_counts(&w, r);

    let mut candidates = Vec::new();
    for (rp, row) in counts.iter().enumerate().skip(1) {
        let mut sums: Vec<(u128, usize)> = row
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(s, &c)| (c, s))
            .collect();
        sums.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        candidates.extend(
            sums.into_iter()
                .take(top.max(1))
                .map(|(_, s)| (rp, s as u64)),
        );
    }

    let found: Vec<EqualSumMatching> = candidates
        .par_iter()
        .map(|&(rp, d)| maximal_matching(weights, &active, rp, d))
        .collect();
    found
        .into_iter()
        .fold(None::<EqualSumMatching>, |best, m| match best {
            Some(b) if !better(&m, &b) => Some(b),
            _ => Some(m),
        })
        .unwrap_or_else(|| EqualSumMatching::empty(1, 0))
}

/// Covers every index by repeatedly taking the best matching on what is still
/// uncovered, using set sizes up to the profile's `r_max`.
pub fn greedy_cover(weights: &[u64], profile: &ScaleProfile) -> Result<Cover> {
    let m: u64 = weights.iter().sum();
    greedy_cover_with(weights, profile.r_max(m), profile.top_candidates)
}

pub fn greedy_cover_with(weights: &[u64], r_max: usize, top: usize) -> Result<Cover> {
    if weights.contains(&0) {
        return Err(Error::input("weights must be positive"));
    }
    let mut uncovered: Vec<usize> = (0..weights.len()).collect();
    let mut trace = CoverTrace::default();
    let mut best: Option<EqualSumMatching> = None;
    while !uncovered.is_empty() {
        let matching = best_matching_for_r(weights, &uncovered, r_max, top);
        // r' = 1 always yields a nonempty matching on a nonempty active set.
        assert!(!matching.is_empty(), "greedy round made no progress");
        let used: HashSet<usize> = matching.indices().collect();
        uncovered.retain(|i| !used.contains(i));
        if best
            .as_ref()
            .is_none_or(|b| matching.covered_weight() > b.covered_weight())
        {
            best = Some(matching.clone());
        }
        trace.rounds.push((matching, uncovered.len()));
    }
    Ok(Cover {
        trace,
        best: best.unwrap_or_else(|| EqualSumMatching::empty(1, 0)),
    })
}

//! Exact ground truth: `M(G)` by exhaustive sweep, `|[n]·[n]|`, Ford's
//! asymptotic formula and the small-`m` conjecture search.

use rayon::prelude::*;

use crate::bigraph::BipartiteMultigraph;
use crate::error::{Error, Result};
use crate::sumset::SizeSet;

mod conjecture;

pub use conjecture::{conjecture_search, conjecture_table, ConjectureResult, MAX_EDGES};

/// Largest smaller side accepted by [`brute_multiplication_table`].
pub const BRUTE_MAX_SIDE: usize = 24;

/// Largest `n` accepted by [`table_nn`].
pub const TABLE_MAX_N: u64 = 100_000;

const TABLE_WINDOW: u64 = 1 << 22;

/// Exact `M(G)`, zero included. Each subset of the smaller side fixes the
/// other side's degrees, whose subset sums are the sizes with that subset.
/// Subsets are visited in Gray-code order, split over rayon by their high bits.
pub fn brute_multiplication_table(g: &BipartiteMultigraph) -> Result<SizeSet> {
    let h = if g.nx() <= g.ny() {
        g.clone()
    } else {
        g.swapped()
    };
    let n = h.nx();
    if n > BRUTE_MAX_SIDE {
        return Err(Error::budget(
            "oracle subset sweep",
            n as u64,
            BRUTE_MAX_SIDE as u64,
        ));
    }
    let m = h.m() as usize;
    let high = n.min(6);
    let low = n - high;
    let toggle = |deg: &mut [u64], x: usize, add: bool| {
        for &(y, t) in h.x_neighbors(x) {
            if add {
                deg[y] += t;
            } else {
                deg[y] -= t;
            }
        }
    };
    let part = |prefix: u64| {
        let mut deg = vec![0u64; h.ny()];
        for b in 0..high {
            if prefix >> b & 1 == 1 {
                toggle(&mut deg, low + b, true);
            }
        }
        let mut inside = vec![false; low];
        let mut acc = SizeSet::empty(m);
        let mut sums = SizeSet::zero(m);
        for step in 0..1u64 << low {
            if step > 0 {
                let x = step.trailing_zeros() as usize;
                inside[x] = !inside[x];
                toggle(&mut deg, x, inside[x]);
            }
            sums.reset_zero();
            for &d in &deg {
                if d > 0 {
                    sums.shift_or(d as usize);
                }
            }
            acc.union_with(&sums);
        }
        acc
    };
    Ok((0..1u64 << high).into_par_iter().map(part).reduce(
        || SizeSet::empty(m),
        |mut a, b| {
            a.union_with(&b);
            a
        },
    ))
}

/// `|[n]·[n]|`, the number of distinct products `ab` with `1 ≤ a, b ≤ n`.
/// Products are marked window by window so memory stays bounded.
pub fn table_nn(n: u64) -> Result<u64> {
    if n > TABLE_MAX_N {
        return Err(Error::budget("product table", n, TABLE_MAX_N));
    }
    if n == 0 {
        return Ok(0);
    }
    let top = n * n;
    let windows = top.div_ceil(TABLE_WINDOW);
    Ok((0..windows)
        .into_par_iter()
        .map(|w| {
            let lo = 1 + w * TABLE_WINDOW;
            let hi = (lo + TABLE_WINDOW - 1).min(top);
            let mut seen = vec![0u64; ((hi - lo) / 64 + 1) as usize];
            for a in 1..=n {
                if a * a > hi {
                    break;
                }
                let b0 = a.max(lo.div_ceil(a));
                let b1 = n.min(hi / a);
                for b in b0..=b1 {
                    let v = a * b - lo;
                    seen[(v / 64) as usize] |= 1 << (v % 64);
                }
            }
            seen.iter().map(|w| w.count_ones() as u64).sum::<u64>()
        })
        .sum())
}

/// `M(K_{n,n}) = {0} ∪ [n]·[n]`, with the right side built by direct
/// multiplication.
pub fn oracle_consistency(n: usize) -> Result<bool> {
    if n > 6 {
        return Err(Error::input(format!(
            "consistency check is limited to n ≤ 6, got {n}"
        )));
    }
    let oracle = brute_multiplication_table(&BipartiteMultigraph::complete(n, n))?;
    let mut products = vec![0u64];
    for a in 1..=n as u64 {
        for b in 1..=n as u64 {
            products.push(a * b);
        }
    }
    products.sort_unstable();
    products.dedup();
    Ok(oracle.to_vec() == products)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FordEstimate {
    pub n: u64,
    pub delta: f64,
    /// `n² / ((ln n)^δ (ln ln n)^{3/2})`.
    pub value: f64,
}

impl FordEstimate {
    pub fn density(&self) -> f64 {
        self.value / (self.n as f64 * self.n as f64)
    }
}

/// `δ = 1 − (1 + ln ln 2)/ln 2`.
pub fn ford_delta() -> f64 {
    let ln2 = std::f64::consts::LN_2;
    1.0 - (1.0 + ln2.ln()) / ln2
}

pub fn ford_estimate(n: u64) -> Result<FordEstimate> {
    if n < 3 {
        return Err(Error::input(format!("ln ln n needs n ≥ 3, got {n}")));
    }
    let delta = ford_delta();
    let nf = n as f64;
    let ln = nf.ln();
    Ok(FordEstimate {
        n,
        delta,
        value: nf * nf / (ln.powf(delta) * ln.ln().powf(1.5)),
    })
}

/// CSV rows `n,count,density,ford_estimate`; the estimate is left blank for
/// `n < 3`.
pub fn table_csv(ns: impl IntoIterator<Item = u64>) -> Result<String> {
    let mut out = String::from("n,count,density,ford_estimate\n");
    for n in ns {
        let count = table_nn(n)?;
        let density = count as f64 / (n as f64 * n as f64);
        let ford = ford_estimate(n)
            .map(|f| f.value.to_string())
            .unwrap_or_default();
        out.push_str(&format!("{n},{count},{density},{ford}\n"));
    }
    Ok(out)
}

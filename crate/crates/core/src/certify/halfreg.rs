use std::collections::HashMap;

use crate::bigraph::BipartiteMultigraph;
use crate::error::{Error, Result};
use crate::sumset::two_value_sums;

use super::{half_regular, two_term_realizers, Certificate, Entry, Source};

/// `0, d, 2d, …, kd` from prefixes of X against all of Y.
pub fn multiples(h: &BipartiteMultigraph) -> Result<Vec<Entry>> {
    let d = half_regular(h)?;
    let ys: Vec<usize> = (0..h.ny()).collect();
    Ok((0..=h.nx())
        .map(|j| {
            Entry::new(
                j as u64 * d,
                (0..j).collect(),
                ys.clone(),
                Source::Multiples,
            )
        })
        .collect())
}

/// Witnesses for `S(|u|∘vu, |v|∘vv)` taking `i` vertices of `u` and `j` of
/// `v` against the fixed Y-set `ys`.
fn class_entries(
    u: &[usize],
    vu: u64,
    v: &[usize],
    vv: u64,
    ys: &[usize],
    source: Source,
) -> Vec<Entry> {
    two_term_realizers(u.len(), vu, v.len(), vv)
        .into_iter()
        .map(|(s, i, j)| {
            let xs = u[..i].iter().chain(&v[..j]).copied().collect();
            Entry::new(s, xs, ys.to_vec(), source)
        })
        .collect()
}

fn x_by_mult(h: &BipartiteMultigraph, y: usize, t: u64) -> Vec<usize> {
    if t == 0 {
        let mut hit = vec![false; h.nx()];
        for &(x, _) in h.y_neighbors(y) {
            hit[x] = true;
        }
        return (0..h.nx()).filter(|&x| !hit[x]).collect();
    }
    h.y_neighbors(y)
        .iter()
        .filter(|&&(_, m)| m == t)
        .map(|&(x, _)| x)
        .collect()
}

fn all_but(n: usize, skip: usize) -> Vec<usize> {
    (0..n).filter(|&y| y != skip).collect()
}

/// Removes the Y-vertex balancing the degree-`d` and degree-`(d−1)` classes
/// and emits `S(k∘d, l∘(d−1))`. `None` when no removal leaves a
/// degree-`(d−1)` vertex.
pub fn warm_up_half_regular(g: &BipartiteMultigraph) -> Result<Option<Certificate>> {
    let d = half_regular(g)?;
    let best = (0..g.ny())
        .map(|y| {
            let keep = g.nx() - g.y_neighbors(y).len();
            let drop = g.y_neighbors(y).iter().filter(|&&(_, t)| t == 1).count();
            (keep.min(drop), y)
        })
        .filter(|&(_, y)| g.y_neighbors(y).iter().any(|&(_, t)| t == 1))
        .min_by_key(|&(score, y)| (std::cmp::Reverse(score), y));
    let Some((_, y)) = best else {
        return Ok(None);
    };
    let full = x_by_mult(g, y, 0);
    let less = x_by_mult(g, y, 1);
    let entries = class_entries(&full, d, &less, d - 1, &all_but(g.ny(), y), Source::WarmUp);
    Ok(Some(Certificate::new(g, entries)))
}

/// Every element of `S(γ_a∘(d−a), γ_b∘(d−b))`, realised by the
/// lexicographically least class prefixes over `Y∖{y}`.
pub fn two_class_construction(
    h: &BipartiteMultigraph,
    y: usize,
    a: u64,
    b: u64,
) -> Result<Vec<Entry>> {
    let d = half_regular(h)?;
    if y >= h.ny() {
        return Err(Error::input(format!("Y index {y} out of range")));
    }
    if a >= b {
        return Err(Error::precondition(format!(
            "need a < b, got a = {a}, b = {b}"
        )));
    }
    if d <= b {
        return Err(Error::precondition(format!("d = {d} must exceed b = {b}")));
    }
    let ua = x_by_mult(h, y, a);
    let ub = x_by_mult(h, y, b);
    if ua.is_empty() || ub.is_empty() {
        return Err(Error::precondition(format!(
            "classes {a} and {b} of y = {y} have sizes {} and {}",
            ua.len(),
            ub.len()
        )));
    }
    Ok(class_entries(
        &ua,
        d - a,
        &ub,
        d - b,
        &all_but(h.ny(), y),
        Source::TwoClass,
    ))
}

/// The `(y, a, b)` maximising the two-class sumset size, with its entries
/// and whether both classes reach `min_class`. Profiles are memoised since
/// many Y-vertices of a contraction share one.
pub fn best_two_class(h: &BipartiteMultigraph, min_class: f64) -> Result<Option<TwoClassChoice>> {
    let d = half_regular(h)?;
    let mut memo: HashMap<(usize, u64, usize, u64), usize> = HashMap::new();
    let mut best: Option<(usize, usize, u64, u64)> = None;
    let mut dense = false;
    for y in 0..h.ny() {
        let gamma = h.degree_profile(y)?.gamma;
        let classes: Vec<(u64, usize)> = gamma
            .iter()
            .enumerate()
            .filter(|&(t, &c)| c > 0 && (t as u64) < d)
            .map(|(t, &c)| (t as u64, c))
            .collect();
        for (i, &(a, ca)) in classes.iter().enumerate() {
            for &(b, cb) in &classes[i + 1..] {
                if ca as f64 >= min_class && cb as f64 >= min_class {
                    dense = true;
                }
                let n = *memo
                    .entry((ca, a, cb, b))
                    .or_insert_with(|| two_value_sums(ca, d - a, cb, d - b).len());
                if best.is_none_or(|(bn, ..)| n > bn) {
                    best = Some((n, y, a, b));
                }
            }
        }
    }
    let Some((_, y, a, b)) = best else {
        return Ok(None);
    };
    Ok(Some(TwoClassChoice {
        y,
        a,
        b,
        dense,
        entries: two_class_construction(h, y, a, b)?,
    }))
}

#[derive(Debug, Clone)]
pub struct TwoClassChoice {
    pub y: usize,
    pub a: u64,
    pub b: u64,
    /// Some Y-vertex has two classes of at least the requested size.
    pub dense: bool,
    pub entries: Vec<Entry>,
}

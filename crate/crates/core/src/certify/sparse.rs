use crate::bigraph::BipartiteMultigraph;
use crate::error::{Error, Result};

use super::{Entry, Source};

/// Y-vertices surviving the pruning, each with a private X-neighbour whose
/// only surviving neighbour it is.
struct Pruned {
    alive: Vec<bool>,
    private: Vec<(usize, usize)>,
    deg: Vec<u64>,
}

fn prune(f: &BipartiteMultigraph) -> Pruned {
    let mut alive = vec![true; f.ny()];
    let mut distinct: Vec<usize> = (0..f.nx()).map(|x| f.x_neighbors(x).len()).collect();
    loop {
        let mut changed = false;
        for y in 0..f.ny() {
            if alive[y] && f.y_neighbors(y).iter().all(|&(x, _)| distinct[x] >= 2) {
                alive[y] = false;
                for &(x, _) in f.y_neighbors(y) {
                    distinct[x] -= 1;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let deg = (0..f.nx())
        .map(|x| {
            f.x_neighbors(x)
                .iter()
                .filter(|&&(y, _)| alive[y])
                .map(|&(_, t)| t)
                .sum()
        })
        .collect();
    let private = (0..f.ny())
        .filter(|&y| alive[y])
        .map(|y| {
            let x = f
                .y_neighbors(y)
                .iter()
                .map(|&(x, _)| x)
                .find(|&x| distinct[x] == 1)
                .expect("surviving vertex keeps a private neighbour");
            (y, x)
        })
        .collect();
    Pruned {
        alive,
        private,
        deg,
    }
}

/// At least `l/(2r)` distinct sizes in `[1, l]` from a multigraph with no
/// isolated vertices and multiplicities at most `r`.
///
/// Y is pruned until every vertex has a private neighbour. A high-degree
/// vertex yields nested subsets of its neighbourhood; otherwise a chain
/// `X₀ ⊆ X₁ ⊆ …` against the surviving Y grows by a private neighbour or
/// swaps one low-degree vertex for several private ones, each step adding
/// between 1 and `r` edges. The chain stops before exceeding `l` and is
/// not guaranteed when `l` is below the smallest available increment, so
/// the nested neighbourhoods of every vertex are tried as well and the
/// longest list wins.
pub fn sparse_chain(f: &BipartiteMultigraph, l: u64, r: u64) -> Result<Vec<Entry>> {
    let n = f.nx();
    if r == 0 {
        return Err(Error::input("multiplicity cap must be positive"));
    }
    if l == 0 || l > n as u64 {
        return Err(Error::input(format!("target {l} must lie in [1, {n}]")));
    }
    if f.max_mult() > r {
        return Err(Error::input(format!(
            "multiplicity {} exceeds cap {r}",
            f.max_mult()
        )));
    }
    if let Some(x) = (0..n).find(|&x| f.x_neighbors(x).is_empty()) {
        return Err(Error::input(format!("X vertex {x} is isolated")));
    }
    if let Some(y) = (0..f.ny()).find(|&y| f.y_neighbors(y).is_empty()) {
        return Err(Error::input(format!("Y vertex {y} is isolated")));
    }

    let Pruned {
        alive,
        private,
        deg,
    } = prune(f);

    let wide = private
        .iter()
        .map(|&(y, _)| y)
        .filter(|&y| 2 * r as usize * f.y_neighbors(y).len() > n)
        .max_by_key(|&y| (f.y_neighbors(y).len(), std::cmp::Reverse(y)));
    let primary = match wide {
        Some(y) => nested(f.y_neighbors(y), l, |xs| (xs, vec![y])),
        None => chain(f, l, r, &alive, &private, deg),
    };
    let mut best = primary;
    for y in 0..f.ny() {
        let cand = nested(f.y_neighbors(y), l, |xs| (xs, vec![y]));
        if cand.len() > best.len() {
            best = cand;
        }
    }
    for x in 0..n {
        let cand = nested(f.x_neighbors(x), l, |ys| (vec![x], ys));
        if cand.len() > best.len() {
            best = cand;
        }
    }
    Ok(best)
}

/// Prefixes of a neighbourhood sorted by multiplicity, paired with the
/// centre, while the edge count stays within `l`.
fn nested(
    nbrs: &[(usize, u64)],
    l: u64,
    sides: impl Fn(Vec<usize>) -> (Vec<usize>, Vec<usize>),
) -> Vec<Entry> {
    let mut nbrs = nbrs.to_vec();
    nbrs.sort_by_key(|&(v, t)| (t, v));
    let mut out = Vec::new();
    let mut size = 0;
    for i in 0..nbrs.len() {
        size += nbrs[i].1;
        if size > l {
            break;
        }
        let (xs, ys) = sides(nbrs[..=i].iter().map(|&(v, _)| v).collect());
        out.push(Entry::new(size, xs, ys, Source::SparseChain));
    }
    out
}

fn chain(
    f: &BipartiteMultigraph,
    l: u64,
    r: u64,
    alive: &[bool],
    private: &[(usize, usize)],
    deg: Vec<u64>,
) -> Vec<Entry> {
    let n = f.nx();
    let ys: Vec<usize> = (0..f.ny()).filter(|&y| alive[y]).collect();
    let is_private = {
        let mut v = vec![false; n];
        for &(_, x) in private {
            v[x] = true;
        }
        v
    };
    let mut inside = vec![false; n];
    let mut order = private.to_vec();
    order.sort_by_key(|&(y, x)| (deg[x], y));
    let mut out = Vec::new();
    let mut e = 0u64;
    loop {
        let next = order.iter().find(|&&(_, x)| !inside[x]).map(|&(_, x)| x);
        let step = if let Some(x) = next {
            inside[x] = true;
            deg[x]
        } else {
            // Every private neighbour is in; trade some of them for an outsider.
            let Some(x) =
                (0..n).find(|&x| !inside[x] && !is_private[x] && deg[x] <= ys.len() as u64)
            else {
                break;
            };
            let mut diff = deg[x];
            for &(_, p) in &order {
                if diff <= r {
                    break;
                }
                if inside[p] && deg[p] < diff {
                    inside[p] = false;
                    diff -= deg[p];
                }
            }
            if diff == 0 || diff > r {
                break;
            }
            inside[x] = true;
            diff
        };
        e += step;
        if e > l {
            break;
        }
        let xs = (0..n).filter(|&x| inside[x]).collect();
        out.push(Entry::new(e, xs, ys.clone(), Source::SparseChain));
    }
    out
}

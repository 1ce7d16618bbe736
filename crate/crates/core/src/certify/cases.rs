use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bigraph::BipartiteMultigraph;
use crate::error::{Error, Result};
use crate::numtheory::{gcd_abs, min_gcd_shift_pair};
use crate::profile::ScaleParams;
use crate::sumset::{repeated, sumset_add, SumWitnessTable};

use super::{half_regular, sparse_chain, Entry, Source};

#[derive(Debug, Clone)]
pub enum CaseOutcome<D> {
    Fired {
        source: Source,
        entries: Vec<Entry>,
        detail: D,
    },
    Absent(String),
}

impl<D> CaseOutcome<D> {
    pub fn entries(&self) -> &[Entry] {
        match self {
            CaseOutcome::Fired { entries, .. } => entries,
            CaseOutcome::Absent(_) => &[],
        }
    }

    pub fn fired(&self) -> bool {
        matches!(self, CaseOutcome::Fired { .. })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Case1Detail {
    /// `|S|`, the union of the chosen neighbourhoods.
    pub s: usize,
    pub u: usize,
    pub chain: usize,
    /// Chain values dropped because their residue mod `d` repeated.
    pub collisions: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Case2Detail {
    pub tau: u64,
    pub p: usize,
    pub q: usize,
    pub s: usize,
    /// Majority degrees after each good deletion.
    pub alphas: Vec<u64>,
    /// First deletion after which no degree is shared by `2s/3` of `S`.
    pub bad_index: Option<usize>,
    pub recurrence_violations: usize,
    pub shift: Option<usize>,
    pub bucket: usize,
    pub gcd_mismatches: usize,
}

pub(crate) fn types(h: &BipartiteMultigraph, params: &ScaleParams) -> Result<Vec<Option<u64>>> {
    (0..h.ny()).map(|y| h.classify_type(y, params)).collect()
}

fn check_shape(h: &BipartiteMultigraph) -> Result<u64> {
    let d = half_regular(h)?;
    if h.ny() == 0 {
        return Err(Error::input("Y is empty"));
    }
    Ok(d)
}

/// Few vertices of nonzero type: a union `S` of type-0 neighbourhoods of size
/// about `k/2` carries a sparse chain, and each chain value `c` extends to
/// `d·|S'| − c + d·j` by adding `j` vertices outside `S`.
pub fn case1(h: &BipartiteMultigraph, params: &ScaleParams) -> Result<CaseOutcome<Case1Detail>> {
    let d = check_shape(h)?;
    let k = h.nx();
    let types = types(h, params)?;
    if let Some(y) = types.iter().position(Option::is_none) {
        return Ok(CaseOutcome::Absent(format!("Y vertex {y} has no type")));
    }
    let nonzero = types.iter().filter(|t| **t != Some(0)).count();
    if nonzero as f64 > params.case1_cutoff(d) {
        return Ok(CaseOutcome::Absent(format!(
            "{nonzero} vertices of nonzero type exceed the cutoff {:.2}",
            params.case1_cutoff(d)
        )));
    }

    let hi = k as f64 / 2.0;
    let lo = hi - k as f64 / (2.0 * params.log);
    let mut covered = vec![false; k];
    let mut s = 0usize;
    let mut u = Vec::new();
    for y in (0..h.ny()).filter(|&y| types[y] == Some(0) && !h.y_neighbors(y).is_empty()) {
        if s > 0 && s as f64 >= lo {
            break;
        }
        let fresh = h
            .y_neighbors(y)
            .iter()
            .filter(|&&(x, _)| !covered[x])
            .count();
        if (s + fresh) as f64 <= hi {
            for &(x, _) in h.y_neighbors(y) {
                covered[x] = true;
            }
            s += fresh;
            u.push(y);
        }
    }
    if s == 0 || (s as f64) < lo {
        return Ok(CaseOutcome::Absent(format!(
            "no union of type-0 neighbourhoods lands in [{lo:.2}, {hi:.2}] (reached {s})"
        )));
    }

    let sx: Vec<usize> = (0..k).filter(|&x| covered[x]).collect();
    let (f, _, _) = h.restrict(&sx, &u)?;
    let l = (s as u64).min(d);
    let chain = sparse_chain(&f, l, f.max_mult())?;

    let mut residues = BTreeSet::from([0u64]);
    let mut bases: Vec<(u64, Vec<usize>, Vec<usize>)> = vec![(0, Vec::new(), Vec::new())];
    let mut collisions = 0;
    for e in &chain {
        if !residues.insert((d - e.size % d) % d) {
            collisions += 1;
            continue;
        }
        let xs = e.xs.iter().map(|&i| sx[i]).collect();
        let ys = e.ys.iter().map(|&i| u[i]).collect();
        bases.push((e.size, xs, ys));
    }

    let outside: Vec<usize> = (0..k).filter(|&x| !covered[x]).collect();
    let mut entries = Vec::new();
    for (c, xs, drop) in &bases {
        let mut skip = vec![false; h.ny()];
        for &y in drop {
            skip[y] = true;
        }
        let ys: Vec<usize> = (0..h.ny()).filter(|&y| !skip[y]).collect();
        for j in 0..=outside.len() {
            let size = d * (xs.len() + j) as u64 - c;
            let wx = xs.iter().chain(&outside[..j]).copied().collect();
            entries.push(Entry::new(size, wx, ys.clone(), Source::Case1));
        }
    }
    Ok(CaseOutcome::Fired {
        source: Source::Case1,
        entries: super::finish(h, entries, usize::MAX)?,
        detail: Case1Detail {
            s,
            u: u.len(),
            chain: chain.len(),
            collisions,
        },
    })
}

/// Most common value among `deg[x]` for `x ∈ s` (larger value on ties) and
/// the vertices attaining it.
fn majority(s: &[usize], deg: &[u64]) -> (u64, Vec<usize>) {
    let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for &x in s {
        classes.entry(deg[x]).or_default().push(x);
    }
    classes
        .into_iter()
        .max_by_key(|(v, xs)| (xs.len(), *v))
        .expect("nonempty S")
}

/// Many vertices of nonzero type. `S` is the common type-`τ` neighbourhood of
/// `p` such vertices; further nonzero-type vertices are deleted one by one
/// while two thirds of `S` keep a common degree (2A, emitting `αᵢ·j`). At
/// the first deletion where that fails, a shift `f` equalising gcds splits
/// off a bucket whose subset sums combine with multiples of `α − fτ` (2B).
pub fn case2(h: &BipartiteMultigraph, params: &ScaleParams) -> Result<CaseOutcome<Case2Detail>> {
    let d = check_shape(h)?;
    let types = types(h, params)?;
    if let Some(y) = types.iter().position(Option::is_none) {
        return Ok(CaseOutcome::Absent(format!("Y vertex {y} has no type")));
    }
    let p = params.p();
    let q = params.q(d);
    let nonzero: Vec<usize> = (0..h.ny()).filter(|&y| types[y] != Some(0)).collect();
    let mut by_type: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for &y in &nonzero {
        by_type.entry(types[y].unwrap()).or_default().push(y);
    }
    let Some((tau, members)) = by_type
        .into_iter()
        .filter(|(_, ys)| ys.len() >= p)
        .max_by_key(|(t, ys)| (ys.len(), std::cmp::Reverse(*t)))
    else {
        return Ok(CaseOutcome::Absent(format!(
            "no nonzero type has {p} members"
        )));
    };
    if nonzero.len() < p + q {
        return Ok(CaseOutcome::Absent(format!(
            "{} vertices of nonzero type, need p + q = {}",
            nonzero.len(),
            p + q
        )));
    }

    let u: Vec<usize> = members[..p].to_vec();
    let s: Vec<usize> = (0..h.nx())
        .filter(|&x| u.iter().all(|&y| h.mult(x, y) == tau))
        .collect();
    if s.is_empty() {
        return Ok(CaseOutcome::Absent(
            "the chosen type neighbourhoods are disjoint".into(),
        ));
    }
    let in_u: BTreeSet<usize> = u.iter().copied().collect();
    let deleted: Vec<usize> = nonzero
        .iter()
        .copied()
        .filter(|y| !in_u.contains(y))
        .take(q)
        .collect();

    let mut detail = Case2Detail {
        tau,
        p,
        q,
        s: s.len(),
        ..Default::default()
    };
    let mut deg = vec![d; h.nx()];
    let mut good: Vec<(u64, Vec<usize>)> = Vec::new();
    let mut prev = d;
    for (i, &y) in deleted.iter().enumerate() {
        for &x in &s {
            deg[x] -= h.mult(x, y);
        }
        let (alpha, class) = majority(&s, &deg);
        if 3 * class.len() < 2 * s.len() {
            detail.bad_index = Some(i + 1);
            break;
        }
        if alpha + types[y].unwrap() != prev {
            detail.recurrence_violations += 1;
        }
        prev = alpha;
        detail.alphas.push(alpha);
        good.push((alpha, class));
    }

    let Some(l) = detail.bad_index else {
        let mut entries = vec![Entry::new(0, vec![], vec![], Source::Case2A)];
        for (i, (alpha, class)) in good.iter().enumerate() {
            let gone: BTreeSet<usize> = deleted[..=i].iter().copied().collect();
            let ys: Vec<usize> = (0..h.ny()).filter(|y| !gone.contains(y)).collect();
            for j in 1..=class.len() {
                entries.push(Entry::new(
                    alpha * j as u64,
                    class[..j].to_vec(),
                    ys.clone(),
                    Source::Case2A,
                ));
            }
        }
        return Ok(CaseOutcome::Fired {
            source: Source::Case2A,
            entries: super::finish(h, entries, usize::MAX)?,
            detail,
        });
    };

    let (alpha, s_alpha) = majority(&s, &deg);
    if alpha == 0 {
        return Ok(CaseOutcome::Absent(
            "majority degree is zero at the bad deletion".into(),
        ));
    }
    let shifts = p.min(((alpha - 1) / tau) as usize) + 1;
    let mut buckets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &x in s.iter().filter(|&&x| deg[x] != alpha) {
        let r = min_gcd_shift_pair(alpha, deg[x], tau, shifts)?;
        let shift = r.i as u64 * tau;
        if gcd_abs(alpha - shift, deg[x] as i128 - shift as i128) != r.g {
            detail.gcd_mismatches += 1;
        }
        buckets.entry(r.i).or_default().push(x);
    }
    let (f, bucket) = buckets
        .into_iter()
        .max_by_key(|(f, xs)| (xs.len(), std::cmp::Reverse(*f)))
        .expect("a bad deletion leaves vertices outside the majority");
    detail.shift = Some(f);
    detail.bucket = bucket.len();

    let shift = f as u64 * tau;
    let step = alpha - shift;
    let movers: Vec<usize> = bucket.into_iter().filter(|&x| deg[x] > shift).collect();
    let weights: Vec<u64> = movers.iter().map(|&x| deg[x] - shift).collect();
    let table = match SumWitnessTable::new(&weights) {
        Ok(t) => t,
        Err(e @ Error::Budget { .. }) => return Ok(CaseOutcome::Absent(e.to_string())),
        Err(e) => return Err(e),
    };
    let gone: BTreeSet<usize> = deleted[..l].iter().chain(&u[..f]).copied().collect();
    let ys: Vec<usize> = (0..h.ny()).filter(|y| !gone.contains(y)).collect();
    let all = sumset_add(table.sums(), &repeated(s_alpha.len(), step));
    let mut entries = Vec::with_capacity(all.len());
    for total in all.iter() {
        let (j, rest) = (0..=s_alpha.len())
            .map(|j| (j, total.checked_sub(j as u64 * step)))
            .find_map(|(j, r)| r.filter(|&r| table.sums().contains(r)).map(|r| (j, r)))
            .expect("sumset member splits");
        let picked = table.witness(rest).expect("member has a witness");
        let xs = s_alpha[..j]
            .iter()
            .copied()
            .chain(picked.into_iter().map(|i| movers[i]))
            .collect();
        entries.push(Entry::new(total, xs, ys.clone(), Source::Case2B));
    }
    Ok(CaseOutcome::Fired {
        source: Source::Case2B,
        entries: super::finish(h, entries, usize::MAX)?,
        detail,
    })
}

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bigraph::{BipartiteMultigraph, Contraction};
use crate::error::{Error, Result};
use crate::partition::greedy_cover_with;
use crate::profile::{ProfileMode, ScaleParams, ScaleProfile};

use super::cases::{case1, case2, types, Case1Detail, Case2Detail, CaseOutcome};
use super::halfreg::{best_two_class, multiples, warm_up_half_regular};
use super::{finish, trivial_certificate, Certificate, Entry, Source};

/// Whether a construction ran on `G` or on `G` with X and Y exchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Xy,
    Yx,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateSummary {
    pub source: Source,
    pub orientation: Option<Orientation>,
    pub size: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ReductionStats {
    pub rounds: usize,
    /// Vertices of the half-regular graph, their common degree and the set
    /// size of the winning matching.
    pub k: usize,
    pub d: u64,
    pub r: usize,
    /// Size of the Y-side matching when the second partition ran.
    pub second_k: Option<usize>,
    /// The half-regular graph was built from Y-groups after the second
    /// partition won.
    pub relabelled: bool,
    /// The branch the single-path case analysis would take.
    pub analysis_branch: &'static str,
    /// Y-vertex counts by type; `None` collects untyped vertices.
    pub types: BTreeMap<String, usize>,
    pub case1: Option<Case1Detail>,
    pub case2: Option<Case2Detail>,
    pub notes: Vec<String>,
    pub best: Option<Source>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineStats {
    pub m: u64,
    pub log: f64,
    pub r_max: usize,
    pub trivial_size: usize,
    pub candidates: Vec<CandidateSummary>,
    pub xy: Option<ReductionStats>,
    pub yx: Option<ReductionStats>,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub certificate: Certificate,
    pub profile: ProfileMode,
    pub path: Source,
    pub stats: PipelineStats,
}

struct Candidate {
    source: Source,
    orientation: Option<Orientation>,
    entries: Vec<Entry>,
}

impl Candidate {
    fn distinct(&self, cap: usize) -> usize {
        let mut s: Vec<u64> = self.entries.iter().map(|e| e.size).collect();
        s.sort_unstable();
        s.dedup();
        s.len().min(cap)
    }
}

/// Witness translation from a contraction back to the graph it came from.
struct Lift {
    contraction: Contraction,
    x_to_src: Vec<usize>,
    y_to_src: Vec<usize>,
    /// The contraction's X side consists of source Y-vertices.
    crossed: bool,
}

impl Lift {
    fn apply(&self, e: &Entry) -> (Vec<usize>, Vec<usize>) {
        let (bx, by) = self.contraction.lift(&e.xs, &e.ys);
        let bx: Vec<usize> = bx.into_iter().map(|i| self.x_to_src[i]).collect();
        let by: Vec<usize> = by.into_iter().map(|i| self.y_to_src[i]).collect();
        if self.crossed {
            (by, bx)
        } else {
            (bx, by)
        }
    }
}

fn positive(degrees: Vec<u64>) -> (Vec<usize>, Vec<u64>) {
    degrees
        .into_iter()
        .enumerate()
        .filter(|&(_, w)| w > 0)
        .unzip()
}

fn branch_name(d: u64, params: &ScaleParams, dense: bool, typed: &[Option<u64>]) -> &'static str {
    if (d as f64) < params.d_min() {
        "multiples"
    } else if dense {
        "two-class"
    } else if typed.iter().any(Option::is_none) {
        "untyped"
    } else if typed.iter().filter(|t| **t != Some(0)).count() as f64 <= params.case1_cutoff(d) {
        "case1"
    } else {
        "case2"
    }
}

fn absorb<D>(
    outcome: Result<CaseOutcome<D>>,
    name: &str,
    notes: &mut Vec<String>,
) -> Result<Option<(Source, Vec<Entry>, D)>> {
    match outcome {
        Ok(CaseOutcome::Fired {
            source,
            entries,
            detail,
        }) => Ok(Some((source, entries, detail))),
        Ok(CaseOutcome::Absent(why)) => {
            notes.push(format!("{name}: {why}"));
            Ok(None)
        }
        Err(e @ Error::Budget { .. }) => {
            notes.push(format!("{name}: {e}"));
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// Partitions, contracts to a half-regular graph, runs every half-regular
/// construction and returns the best one in `go`'s indices.
fn reduce(
    go: &BipartiteMultigraph,
    params: &ScaleParams,
) -> Result<Option<(ReductionStats, Candidate)>> {
    let (xs, weights) = positive(go.x_degrees());
    if xs.is_empty() {
        return Ok(None);
    }
    let cover = greedy_cover_with(&weights, params.r_max, params.top_candidates)?;
    let mut stats = ReductionStats {
        rounds: cover.trace.rounds.len(),
        r: cover.best.r,
        ..Default::default()
    };
    let groups: Vec<Vec<usize>> = cover
        .best
        .sets
        .iter()
        .map(|set| set.iter().map(|&i| xs[i]).collect())
        .collect();
    let k1 = groups.len();

    let mut lift = None;
    if (k1 as f64) < params.second_partition_below(go.m()) {
        let mut kept: Vec<usize> = groups.iter().flatten().copied().collect();
        kept.sort_unstable();
        let all_y: Vec<usize> = (0..go.ny()).collect();
        let (g1, xmap, _) = go.restrict(&kept, &all_y)?;
        let (ys, yw) = positive(g1.y_degrees());
        let cover2 = greedy_cover_with(&yw, params.r_max, params.top_candidates)?;
        stats.second_k = Some(cover2.best.len());
        if cover2.best.len() > k1 {
            let ygroups: Vec<Vec<usize>> = cover2
                .best
                .sets
                .iter()
                .map(|set| set.iter().map(|&i| ys[i]).collect())
                .collect();
            stats.relabelled = true;
            stats.r = cover2.best.r;
            lift = Some(Lift {
                contraction: g1.swapped().contract_groups(&ygroups)?,
                x_to_src: all_y,
                y_to_src: xmap,
                crossed: true,
            });
        }
    }
    let lift = match lift {
        Some(l) => l,
        None => Lift {
            contraction: go.contract_groups(&groups)?,
            x_to_src: (0..go.nx()).collect(),
            y_to_src: (0..go.ny()).collect(),
            crossed: false,
        },
    };

    let h = &lift.contraction.graph;
    let d = h
        .half_regular_degree()
        .expect("equal-sum groups contract to a half-regular graph");
    stats.k = h.nx();
    stats.d = d;

    let typed = types(h, params)?;
    for t in &typed {
        let key = t.map_or_else(|| "untyped".to_string(), |t| t.to_string());
        *stats.types.entry(key).or_insert(0) += 1;
    }

    let mut found: Vec<(Source, Vec<Entry>)> = vec![(Source::Multiples, multiples(h)?)];
    let two = best_two_class(h, params.two_class_min(h.nx()))?;
    let dense = two.as_ref().is_some_and(|t| t.dense);
    if let Some(t) = two {
        found.push((Source::TwoClass, t.entries));
    }
    stats.analysis_branch = branch_name(d, params, dense, &typed);
    if h.ny() > 0 {
        if let Some((source, entries, detail)) =
            absorb(case1(h, params), "case1", &mut stats.notes)?
        {
            stats.case1 = Some(detail);
            found.push((source, entries));
        }
        if let Some((source, entries, detail)) =
            absorb(case2(h, params), "case2", &mut stats.notes)?
        {
            stats.case2 = Some(detail);
            found.push((source, entries));
        }
    }

    let (source, entries) = found
        .into_iter()
        .rev()
        .max_by_key(|(_, e)| e.len())
        .expect("multiples always present");
    stats.best = Some(source);
    let entries = entries
        .iter()
        .map(|e| {
            let (xs, ys) = lift.apply(e);
            Entry::new(e.size, xs, ys, e.source)
        })
        .collect();
    Ok(Some((
        stats,
        Candidate {
            source,
            orientation: None,
            entries,
        },
    )))
}

fn swap_entries(entries: Vec<Entry>) -> Vec<Entry> {
    entries
        .into_iter()
        .map(|e| Entry {
            xs: e.ys,
            ys: e.xs,
            ..e
        })
        .collect()
}

/// Runs the trivial bound, the half-regular warm-up and the full reduction
/// in both orientations, keeping the verified certificate with the most
/// distinct sizes. Ties go to the earlier construction.
pub fn certify_pipeline(g: &BipartiteMultigraph, profile: &ScaleProfile) -> Result<PipelineReport> {
    profile.validate()?;
    let m = g.m();
    let params = profile.params(m);
    let cap = profile.max_entries;

    let trivial = trivial_certificate(g);
    let mut candidates = vec![Candidate {
        source: Source::Trivial,
        orientation: None,
        entries: trivial.entries,
    }];
    let mut xy_stats = None;
    let mut yx_stats = None;

    if m > 0 {
        let sw = g.swapped();
        if g.half_regular_degree().is_some() {
            if let Some(c) = warm_up_half_regular(g)? {
                candidates.push(Candidate {
                    source: Source::WarmUp,
                    orientation: Some(Orientation::Xy),
                    entries: c.entries,
                });
            }
        }
        if sw.half_regular_degree().is_some() {
            if let Some(c) = warm_up_half_regular(&sw)? {
                candidates.push(Candidate {
                    source: Source::WarmUp,
                    orientation: Some(Orientation::Yx),
                    entries: swap_entries(c.entries),
                });
            }
        }
        let (xy, yx) = rayon::join(|| reduce(g, &params), || reduce(&sw, &params));
        if let Some((stats, mut c)) = xy? {
            c.orientation = Some(Orientation::Xy);
            candidates.push(c);
            xy_stats = Some(stats);
        }
        if let Some((stats, mut c)) = yx? {
            c.orientation = Some(Orientation::Yx);
            c.entries = swap_entries(c.entries);
            candidates.push(c);
            yx_stats = Some(stats);
        }
    }

    let summaries: Vec<CandidateSummary> = candidates
        .iter()
        .map(|c| CandidateSummary {
            source: c.source,
            orientation: c.orientation,
            size: c.distinct(cap),
        })
        .collect();
    let best = candidates
        .into_iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.distinct(cap), std::cmp::Reverse(*i)))
        .map(|(_, c)| c)
        .expect("trivial candidate always present");
    let entries = finish(g, best.entries, cap)?;
    Ok(PipelineReport {
        certificate: Certificate::new(g, entries),
        profile: profile.mode,
        path: best.source,
        stats: PipelineStats {
            m,
            log: params.log,
            r_max: params.r_max,
            trivial_size: summaries[0].size,
            candidates: summaries,
            xy: xy_stats,
            yx: yx_stats,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify_certificate;
    use crate::generate;
    use crate::oracle::brute_multiplication_table;

    fn check(g: &BipartiteMultigraph, profile: &ScaleProfile) -> PipelineReport {
        let report = certify_pipeline(g, profile).unwrap();
        assert!(verify_certificate(g, &report.certificate).unwrap().is_ok());
        let truth = brute_multiplication_table(g).unwrap();
        assert!(report
            .certificate
            .sizes()
            .iter()
            .all(|&s| truth.contains(s)));
        assert!(report.certificate.len() >= trivial_certificate(g).len());
        report
    }

    #[test]
    fn complete_graph() {
        let report = check(
            &BipartiteMultigraph::complete(8, 8),
            &ScaleProfile::scaled(),
        );
        assert!(report.certificate.len() >= 9);
    }

    #[test]
    fn single_edge_is_trivial() {
        let report = check(
            &BipartiteMultigraph::complete(1, 1),
            &ScaleProfile::scaled(),
        );
        assert_eq!(report.certificate.sizes(), vec![0, 1]);
        assert_eq!(report.path, Source::Trivial);
    }

    #[test]
    fn empty_graph() {
        let g = BipartiteMultigraph::empty(3, 2);
        let report = certify_pipeline(&g, &ScaleProfile::scaled()).unwrap();
        assert_eq!(report.certificate.sizes(), vec![0]);
    }

    #[test]
    fn random_graphs() {
        for seed in 0..5 {
            let g = generate::random(20, 20, 0.15, seed).unwrap();
            check(&g, &ScaleProfile::scaled());
            check(&g, &ScaleProfile::paper());
        }
    }

    #[test]
    fn truncation_keeps_smallest_sizes() {
        let g = BipartiteMultigraph::complete(6, 6);
        let profile = ScaleProfile {
            max_entries: 3,
            ..ScaleProfile::scaled()
        };
        let report = certify_pipeline(&g, &profile).unwrap();
        assert_eq!(report.certificate.sizes(), vec![0, 1, 2]);
    }

    #[test]
    fn forced_surrogate_reaches_case_two() {
        let mut core = Vec::new();
        core.extend((0..6).map(|x| (x, 0, 2)));
        core.extend((2..8).map(|x| (x, 1, 2)));
        core.extend([0, 1, 2, 3, 6, 7].map(|x| (x, 2, 2)));
        let mut pairs = core.clone();
        let mut deg = [0u64; 8];
        for &(x, _, t) in &core {
            deg[x] += t;
        }
        let mut next = 3;
        for x in 0..8 {
            for _ in deg[x]..8 {
                pairs.push((x, next, 1));
                next += 1;
            }
        }
        let g = BipartiteMultigraph::from_pairs(8, next, pairs).unwrap();
        let profile = ScaleProfile {
            log_override: Some(2.0),
            ..ScaleProfile::scaled()
        };
        let report = check(&g, &profile);
        let xy = report.stats.xy.as_ref().unwrap();
        assert_eq!(xy.k, 8);
        assert_eq!(xy.case2.as_ref().unwrap().bad_index, Some(1));
    }
}

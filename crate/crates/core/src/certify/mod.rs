//! Certificates of membership in `M(G)` and the constructions producing them.
//!
//! Every entry pairs a claimed size with explicit witness subsets; the
//! verifier recounts each one, so soundness never depends on the (asymptotic)
//! reasoning behind a construction.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bigraph::BipartiteMultigraph;
use crate::error::{Error, Result};

mod cases;
mod halfreg;
mod pipeline;
mod sparse;
mod trivial;

pub use cases::{case1, case2, Case1Detail, Case2Detail, CaseOutcome};
pub use halfreg::{
    best_two_class, multiples, two_class_construction, warm_up_half_regular, TwoClassChoice,
};
pub use pipeline::{
    certify_pipeline, CandidateSummary, Orientation, PipelineReport, PipelineStats, ReductionStats,
};
pub use sparse::sparse_chain;
pub use trivial::trivial_certificate;

/// Which construction produced an entry. The declaration order is the
/// tie-break order when two constructions certify equally many sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "trivial")]
    Trivial,
    #[serde(rename = "warm-up")]
    WarmUp,
    #[serde(rename = "multiples")]
    Multiples,
    #[serde(rename = "two-class")]
    TwoClass,
    #[serde(rename = "sparse-chain")]
    SparseChain,
    #[serde(rename = "case1")]
    Case1,
    #[serde(rename = "case2A")]
    Case2A,
    #[serde(rename = "case2B")]
    Case2B,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Trivial => "trivial",
            Source::WarmUp => "warm-up",
            Source::Multiples => "multiples",
            Source::TwoClass => "two-class",
            Source::SparseChain => "sparse-chain",
            Source::Case1 => "case1",
            Source::Case2A => "case2A",
            Source::Case2B => "case2B",
        }
    }
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub size: u64,
    pub xs: Vec<usize>,
    pub ys: Vec<usize>,
    pub source: Source,
}

impl Entry {
    pub fn new(size: u64, mut xs: Vec<usize>, mut ys: Vec<usize>, source: Source) -> Self {
        xs.sort_unstable();
        ys.sort_unstable();
        Self {
            size,
            xs,
            ys,
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub graph_id: String,
    pub entries: Vec<Entry>,
}

impl Certificate {
    pub fn new(g: &BipartiteMultigraph, entries: Vec<Entry>) -> Self {
        Self {
            graph_id: g.graph_id(),
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sizes(&self) -> Vec<u64> {
        let mut s: Vec<u64> = self.entries.iter().map(|e| e.size).collect();
        s.sort_unstable();
        s
    }
}

/// On-disk certificate: witnesses index the original graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub graph_id: String,
    pub profile: String,
    pub path: Source,
    pub entries: Vec<Entry>,
}

impl CertificateDoc {
    pub fn from_report(report: &PipelineReport) -> Self {
        Self {
            graph_id: report.certificate.graph_id.clone(),
            profile: report.profile.name().to_string(),
            path: report.path,
            entries: report.certificate.entries.clone(),
        }
    }

    pub fn certificate(&self) -> Certificate {
        Certificate {
            graph_id: self.graph_id.clone(),
            entries: self.entries.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Ok {
        entries: usize,
    },
    /// `actual` is `None` when the witness indexes a missing vertex.
    FailingEntry {
        index: usize,
        claimed: u64,
        actual: Option<u64>,
    },
    DuplicateSize {
        first: usize,
        second: usize,
        size: u64,
    },
}

impl Verification {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verification::Ok { .. })
    }
}

impl std::fmt::Display for Verification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verification::Ok { entries } => write!(f, "ok: {entries} entries verified"),
            Verification::FailingEntry {
                index,
                claimed,
                actual: Some(a),
            } => write!(
                f,
                "entry {index} claims size {claimed} but its witness induces {a} edges"
            ),
            Verification::FailingEntry { index, claimed, .. } => {
                write!(
                    f,
                    "entry {index} (size {claimed}) has a witness outside the graph"
                )
            }
            Verification::DuplicateSize {
                first,
                second,
                size,
            } => {
                write!(f, "entries {first} and {second} both claim size {size}")
            }
        }
    }
}

/// Recounts every entry and checks that sizes are pairwise distinct.
pub fn verify_certificate(g: &BipartiteMultigraph, cert: &Certificate) -> Result<Verification> {
    if cert.graph_id != g.graph_id() {
        return Err(Error::input(format!(
            "certificate is for graph {}, not {}",
            cert.graph_id,
            g.graph_id()
        )));
    }
    Ok(check_entries(g, &cert.entries))
}

pub(crate) fn check_entries(g: &BipartiteMultigraph, entries: &[Entry]) -> Verification {
    let mut seen: HashMap<u64, usize> = HashMap::with_capacity(entries.len());
    let mut xmask = vec![false; g.nx()];
    let mut ymask = vec![false; g.ny()];
    for (index, e) in entries.iter().enumerate() {
        if e.xs.iter().any(|&x| x >= g.nx()) || e.ys.iter().any(|&y| y >= g.ny()) {
            return Verification::FailingEntry {
                index,
                claimed: e.size,
                actual: None,
            };
        }
        for &x in &e.xs {
            xmask[x] = true;
        }
        for &y in &e.ys {
            ymask[y] = true;
        }
        let actual = g.count_masked(&xmask, &ymask);
        for &x in &e.xs {
            xmask[x] = false;
        }
        for &y in &e.ys {
            ymask[y] = false;
        }
        if actual != e.size {
            return Verification::FailingEntry {
                index,
                claimed: e.size,
                actual: Some(actual),
            };
        }
        if let Some(&first) = seen.get(&e.size) {
            return Verification::DuplicateSize {
                first,
                second: index,
                size: e.size,
            };
        }
        seen.insert(e.size, index);
    }
    Verification::Ok {
        entries: entries.len(),
    }
}

/// Sorts by size, keeps the first witness per size, truncates to the
/// `max_entries` smallest sizes and verifies against `g`.
pub(crate) fn finish(
    g: &BipartiteMultigraph,
    mut entries: Vec<Entry>,
    max_entries: usize,
) -> Result<Vec<Entry>> {
    entries.sort_by_key(|e| e.size);
    entries.dedup_by_key(|e| e.size);
    entries.truncate(max_entries);
    match check_entries(g, &entries) {
        Verification::Ok { .. } => Ok(entries),
        bad => Err(Error::Verification(bad.to_string())),
    }
}

pub(crate) fn half_regular(h: &BipartiteMultigraph) -> Result<u64> {
    h.half_regular_degree()
        .ok_or_else(|| Error::precondition("graph is not half-regular on X"))
}

/// Sizes `i·u + j·v` (`i ≤ ku`, `j ≤ kv`) with the smallest `i` realising
/// each, ascending by size.
pub(crate) fn two_term_realizers(ku: usize, u: u64, kv: usize, v: u64) -> Vec<(u64, usize, usize)> {
    let sums = crate::sumset::two_value_sums(ku, u, kv, v);
    let mut out = Vec::with_capacity(sums.len());
    for s in sums.iter() {
        let hit = (0..=ku).find_map(|i| {
            let base = i as u64 * u;
            if base > s {
                return None;
            }
            let rest = s - base;
            if v == 0 {
                return (rest == 0).then_some((i, 0));
            }
            (rest.is_multiple_of(v) && rest / v <= kv as u64).then(|| (i, (rest / v) as usize))
        });
        let (i, j) = hit.expect("member of the sumset has a realizer");
        out.push((s, i, j));
    }
    out
}

//! Certified lower bounds for the multiplication table of bipartite graphs.
//!
//! The multiplication table `M(G)` of a bipartite (multi)graph is the set of
//! edge counts of its induced subgraphs. This crate builds explicit
//! certificates for large subsets of `M(G)`: every certified size carries a
//! witness pair of vertex subsets that anyone can recount. It also ships the
//! exact oracles needed to check those certificates on small instances.
//!
//! Module map:
//!
//! - [`bigraph`]: multigraph storage, induced counts, contraction, degree profiles.
//! - [`sumset`]: dense sets of subset sums and the two number-theoretic
//!   sumset bounds.
//! - [`numtheory`]: sieve, gcd shifts and product sets.
//! - [`partition`]: equal-sum matchings and the greedy cover.
//! - [`certify`]: certificates and every size-producing construction.
//! - [`oracle`]: brute force `M(G)`, `|[n]·[n]|`, and the small-m search.

#![allow(clippy::needless_range_loop)]

pub mod bigraph;
pub mod certify;
mod error;
pub mod generate;
pub mod numtheory;
pub mod oracle;
pub mod partition;
pub mod profile;
pub mod sumset;
pub mod sweeps;

pub use bigraph::{BipartiteMultigraph, Contraction, DegreeProfile};
pub use certify::{
    certify_pipeline, verify_certificate, Certificate, Entry, PipelineReport, Source,
};
pub use error::{Error, Result};
pub use profile::{ProfileMode, ScaleParams, ScaleProfile};
pub use sumset::{Seq, SizeSet};

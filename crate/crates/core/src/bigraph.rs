//! Bipartite multigraphs with integer edge multiplicities.
//!
//! Vertices are plain indices: `0..nx` on the X side and `0..ny` on the Y
//! side. Multiplicities live in a sparse pair map; per-vertex adjacency lists
//! are built once at construction because induced counting is the hot path.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::profile::ScaleParams;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteMultigraph {
    nx: usize,
    ny: usize,
    mult: BTreeMap<(usize, usize), u64>,
    m: u64,
    x_adj: Vec<Vec<(usize, u64)>>,
    y_adj: Vec<Vec<(usize, u64)>>,
}

impl BipartiteMultigraph {
    /// Builds a multigraph from `(x, y, multiplicity)` triples. Repeated pairs
    /// accumulate; zero multiplicities are ignored.
    pub fn from_pairs<I>(nx: usize, ny: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut mult = BTreeMap::new();
        for (x, y, t) in pairs {
            if x >= nx || y >= ny {
                return Err(Error::input(format!(
                    "pair ({x}, {y}) out of range for a {nx}x{ny} graph"
                )));
            }
            if t == 0 {
                continue;
            }
            *mult.entry((x, y)).or_insert(0u64) += t;
        }
        Ok(Self::from_map(nx, ny, mult))
    }

    /// Simple graph from an edge list; every multiplicity is one.
    pub fn simple<I>(nx: usize, ny: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut mult = BTreeMap::new();
        for (x, y) in edges {
            if x >= nx || y >= ny {
                return Err(Error::input(format!(
                    "edge ({x}, {y}) out of range for a {nx}x{ny} graph"
                )));
            }
            mult.insert((x, y), 1);
        }
        Ok(Self::from_map(nx, ny, mult))
    }

    pub fn complete(a: usize, b: usize) -> Self {
        let mut mult = BTreeMap::new();
        for x in 0..a {
            for y in 0..b {
                mult.insert((x, y), 1);
            }
        }
        Self::from_map(a, b, mult)
    }

    pub fn empty(nx: usize, ny: usize) -> Self {
        Self::from_map(nx, ny, BTreeMap::new())
    }

    fn from_map(nx: usize, ny: usize, mult: BTreeMap<(usize, usize), u64>) -> Self {
        let mut x_adj = vec![Vec::new(); nx];
        let mut y_adj = vec![Vec::new(); ny];
        let mut m = 0u64;
        for (&(x, y), &t) in &mult {
            x_adj[x].push((y, t));
            y_adj[y].push((x, t));
            m += t;
        }
        // BTreeMap order already sorts x_adj by y; y_adj is filled in x order.
        Self {
            nx,
            ny,
            mult,
            m,
            x_adj,
            y_adj,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Total edge count with multiplicity.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn pair_count(&self) -> usize {
        self.mult.len()
    }

    pub fn mult(&self, x: usize, y: usize) -> u64 {
        self.mult.get(&(x, y)).copied().unwrap_or(0)
    }

    /// Stored pairs in `(x, y)` order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.mult.iter().map(|(&(x, y), &t)| (x, y, t))
    }

    pub fn x_neighbors(&self, x: usize) -> &[(usize, u64)] {
        &self.x_adj[x]
    }

    pub fn y_neighbors(&self, y: usize) -> &[(usize, u64)] {
        &self.y_adj[y]
    }

    pub fn deg_x(&self, x: usize) -> u64 {
        self.x_adj[x].iter().map(|&(_, t)| t).sum()
    }

    pub fn deg_y(&self, y: usize) -> u64 {
        self.y_adj[y].iter().map(|&(_, t)| t).sum()
    }

    pub fn x_degrees(&self) -> Vec<u64> {
        (0..self.nx).map(|x| self.deg_x(x)).collect()
    }

    pub fn y_degrees(&self) -> Vec<u64> {
        (0..self.ny).map(|y| self.deg_y(y)).collect()
    }

    pub fn max_mult(&self) -> u64 {
        self.mult.values().copied().max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.mult.values().all(|&t| t == 1)
    }

    /// Common X-side degree, if every X-vertex has the same degree.
    pub fn half_regular_degree(&self) -> Option<u64> {
        let mut degs = (0..self.nx).map(|x| self.deg_x(x));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// The same graph with the roles of X and Y exchanged.
    pub fn swapped(&self) -> Self {
        let mult = self.mult.iter().map(|(&(x, y), &t)| ((y, x), t)).collect();
        Self::from_map(self.ny, self.nx, mult)
    }

    /// Number of edges induced by `xs ∪ ys`, counted with multiplicity.
    /// Repeated indices are counted once.
    pub fn induced_edge_count(&self, xs: &[usize], ys: &[usize]) -> Result<u64> {
        let xmask = index_mask(xs, self.nx, "X")?;
        let ymask = index_mask(ys, self.ny, "Y")?;
        Ok(self.count_masked(&xmask, &ymask))
    }

    pub(crate) fn count_masked(&self, xmask: &[bool], ymask: &[bool]) -> u64 {
        let mut total = 0;
        for (x, _) in xmask.iter().enumerate().filter(|(_, &on)| on) {
            for &(y, t) in &self.x_adj[x] {
                if ymask[y] {
                    total += t;
                }
            }
        }
        total
    }

    /// Induced subgraph on the given vertex lists, renumbered in list order.
    /// Returns the subgraph with maps from new to old indices.
    pub fn restrict(&self, xs: &[usize], ys: &[usize]) -> Result<(Self, Vec<usize>, Vec<usize>)> {
        let mut xpos = vec![usize::MAX; self.nx];
        let mut ypos = vec![usize::MAX; self.ny];
        for (i, &x) in xs.iter().enumerate() {
            if x >= self.nx || xpos[x] != usize::MAX {
                return Err(Error::input(format!("bad or repeated X index {x}")));
            }
            xpos[x] = i;
        }
        for (i, &y) in ys.iter().enumerate() {
            if y >= self.ny || ypos[y] != usize::MAX {
                return Err(Error::input(format!("bad or repeated Y index {y}")));
            }
            ypos[y] = i;
        }
        let mut mult = BTreeMap::new();
        for (&(x, y), &t) in &self.mult {
            if xpos[x] != usize::MAX && ypos[y] != usize::MAX {
                mult.insert((xpos[x], ypos[y]), t);
            }
        }
        Ok((
            Self::from_map(xs.len(), ys.len(), mult),
            xs.to_vec(),
            ys.to_vec(),
        ))
    }

    /// Merges each group of X-vertices into a single vertex whose
    /// multiplicity towards `y` is the group's total. X-vertices outside all
    /// groups are dropped, and Y-vertices left isolated are removed.
    pub fn contract_groups(&self, groups: &[Vec<usize>]) -> Result<Contraction> {
        let mut owner = vec![usize::MAX; self.nx];
        for (j, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::input(format!("group {j} is empty")));
            }
            for &x in group {
                if x >= self.nx {
                    return Err(Error::input(format!("X index {x} out of range")));
                }
                if owner[x] != usize::MAX {
                    return Err(Error::input(format!(
                        "X vertex {x} appears in groups {} and {j}",
                        owner[x]
                    )));
                }
                owner[x] = j;
            }
        }
        let mut merged: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (&(x, y), &t) in &self.mult {
            if owner[x] != usize::MAX {
                *merged.entry((owner[x], y)).or_insert(0) += t;
            }
        }
        let mut present = vec![false; self.ny];
        for &(_, y) in merged.keys() {
            present[y] = true;
        }
        let mut y_new = vec![usize::MAX; self.ny];
        let mut y_map = Vec::new();
        for y in (0..self.ny).filter(|&y| present[y]) {
            y_new[y] = y_map.len();
            y_map.push(y);
        }
        let mult = merged
            .into_iter()
            .map(|((j, y), t)| ((j, y_new[y]), t))
            .collect();
        Ok(Contraction {
            graph: Self::from_map(groups.len(), y_map.len(), mult),
            groups: groups.to_vec(),
            y_map,
        })
    }

    /// `gamma[t]` counts the X-vertices joined to `y` by exactly `t` edges.
    pub fn degree_profile(&self, y: usize) -> Result<DegreeProfile> {
        if y >= self.ny {
            return Err(Error::input(format!("Y index {y} out of range")));
        }
        let top = self.y_adj[y].iter().map(|&(_, t)| t).max().unwrap_or(0) as usize;
        let mut gamma = vec![0usize; top + 1];
        for &(_, t) in &self.y_adj[y] {
            gamma[t as usize] += 1;
        }
        gamma[0] = self.nx - self.y_adj[y].len();
        Ok(DegreeProfile { gamma, k: self.nx })
    }

    /// The type of `y`: the multiplicity shared by at least the configured
    /// fraction of X-vertices.
    pub fn classify_type(&self, y: usize, params: &ScaleParams) -> Result<Option<u64>> {
        let profile = self.degree_profile(y)?;
        profile.dominant(params.type_threshold(self.nx))
    }

    /// Stable identifier: SHA-256 of the canonical text form.
    pub fn graph_id(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// Canonical text form: `bigraph <nx> <ny> <#pairs>` then `x y mult` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("bigraph {} {} {}\n", self.nx, self.ny, self.mult.len());
        for (&(x, y), &t) in &self.mult {
            let _ = writeln!(out, "{x} {y} {t}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "bigraph" {
            return Err(Error::Parse {
                line: hline,
                msg: "expected `bigraph <nx> <ny> <#pairs>`".into(),
            });
        }
        let nx = parse_num::<usize>(fields[1], hline)?;
        let ny = parse_num::<usize>(fields[2], hline)?;
        let npairs = parse_num::<usize>(fields[3], hline)?;

        let mut mult = BTreeMap::new();
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse {
                    line: ln,
                    msg: "expected `x y mult`".into(),
                });
            }
            let x = parse_num::<usize>(f[0], ln)?;
            let y = parse_num::<usize>(f[1], ln)?;
            let t = parse_num::<u64>(f[2], ln)?;
            if x >= nx || y >= ny {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("pair ({x}, {y}) out of range"),
                });
            }
            if t == 0 {
                return Err(Error::Parse {
                    line: ln,
                    msg: "multiplicity must be positive".into(),
                });
            }
            if mult.insert((x, y), t).is_some() {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("duplicate pair ({x}, {y})"),
                });
            }
        }
        if mult.len() != npairs {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header announces {npairs} pairs, found {}", mult.len()),
            });
        }
        Ok(Self::from_map(nx, ny, mult))
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("not a non-negative integer: {s:?}"),
    })
}

fn index_mask(idx: &[usize], n: usize, side: &str) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &i in idx {
        if i >= n {
            return Err(Error::input(format!(
                "{side} index {i} out of range (size {n})"
            )));
        }
        mask[i] = true;
    }
    Ok(mask)
}

/// Result of [`BipartiteMultigraph::contract_groups`], carrying the index
/// maps needed to translate witnesses back to the source graph.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: BipartiteMultigraph,
    /// `groups[j]` lists the source X-vertices merged into X-vertex `j`.
    pub groups: Vec<Vec<usize>>,
    /// `y_map[i]` is the source index of contracted Y-vertex `i`.
    pub y_map: Vec<usize>,
}

impl Contraction {
    /// Translates a witness on the contracted graph to the source graph.
    pub fn lift(&self, xs: &[usize], ys: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut lx: Vec<usize> = xs
            .iter()
            .flat_map(|&j| self.groups[j].iter().copied())
            .collect();
        lx.sort_unstable();
        let mut ly: Vec<usize> = ys.iter().map(|&i| self.y_map[i]).collect();
        ly.sort_unstable();
        (lx, ly)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub gamma: Vec<usize>,
    pub k: usize,
}

impl DegreeProfile {
    pub fn get(&self, t: u64) -> usize {
        self.gamma.get(t as usize).copied().unwrap_or(0)
    }

    /// The unique multiplicity whose class reaches `threshold`. Thresholds at
    /// or below `k/2` no longer force uniqueness and are rejected.
    pub fn dominant(&self, threshold: f64) -> Result<Option<u64>> {
        if threshold.is_nan() || threshold <= self.k as f64 / 2.0 {
            return Err(Error::Config(format!(
                "type threshold {threshold} must exceed k/2 = {}",
                self.k as f64 / 2.0
            )));
        }
        Ok(self
            .gamma
            .iter()
            .position(|&c| c as f64 >= threshold)
            .map(|t| t as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_stars() -> BipartiteMultigraph {
        BipartiteMultigraph::simple(2, 1, [(0, 0), (1, 0)]).unwrap()
    }

    #[test]
    fn induced_counts_on_complete_graphs() {
        let k22 = BipartiteMultigraph::complete(2, 2);
        assert_eq!(k22.induced_edge_count(&[0, 1], &[0, 1]).unwrap(), 4);
        assert_eq!(k22.induced_edge_count(&[], &[0, 1]).unwrap(), 0);
        let k33 = BipartiteMultigraph::complete(3, 3);
        assert_eq!(k33.induced_edge_count(&[0, 2], &[0, 1, 2]).unwrap(), 6);
    }

    #[test]
    fn out_of_range_index_is_input_error() {
        let g = BipartiteMultigraph::complete(2, 2);
        assert!(matches!(
            g.induced_edge_count(&[2], &[0]),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            g.induced_edge_count(&[0], &[5]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn contraction_merges_group() {
        let c = two_stars().contract_groups(&[vec![0, 1]]).unwrap();
        assert_eq!(c.graph.nx(), 1);
        assert_eq!(c.graph.ny(), 1);
        assert_eq!(c.graph.mult(0, 0), 2);
    }

    #[test]
    fn singleton_groups_reproduce_graph() {
        let g = BipartiteMultigraph::complete(2, 2);
        let c = g.contract_groups(&[vec![0], vec![1]]).unwrap();
        assert_eq!(c.graph, g);
        assert_eq!(c.y_map, vec![0, 1]);
    }

    #[test]
    fn contracted_k42_is_half_regular() {
        let g = BipartiteMultigraph::complete(4, 2);
        let c = g.contract_groups(&[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!((c.graph.nx(), c.graph.ny()), (2, 2));
        assert!(c.graph.pairs().all(|(_, _, t)| t == 2));
        assert_eq!(c.graph.half_regular_degree(), Some(4));
        for y in 0..2 {
            let p = c.graph.degree_profile(y).unwrap();
            assert_eq!(p.get(2), 2);
            assert_eq!(p.get(0), 0);
        }
    }

    #[test]
    fn contraction_drops_isolated_y_and_rejects_overlap() {
        let g = BipartiteMultigraph::simple(2, 3, [(0, 0), (1, 2)]).unwrap();
        let c = g.contract_groups(&[vec![1]]).unwrap();
        assert_eq!(c.graph.ny(), 1);
        assert_eq!(c.y_map, vec![2]);
        assert_eq!(c.lift(&[0], &[0]), (vec![1], vec![2]));
        assert!(matches!(
            g.contract_groups(&[vec![0, 1], vec![1]]),
            Err(Error::Input(_))
        ));
        assert!(matches!(g.contract_groups(&[vec![]]), Err(Error::Input(_))));
    }

    #[test]
    fn degree_profiles() {
        let k33 = BipartiteMultigraph::complete(3, 3);
        assert_eq!(k33.degree_profile(1).unwrap().gamma, vec![0, 3]);
        let g = BipartiteMultigraph::from_pairs(3, 1, [(0, 0, 2), (1, 0, 2)]).unwrap();
        let p = g.degree_profile(0).unwrap();
        assert_eq!(p.get(0), 1);
        assert_eq!(p.get(2), 2);
        assert_eq!(p.gamma.iter().sum::<usize>(), 3);
    }

    #[test]
    fn dominant_multiplicity() {
        let k = 10;
        let all_zero = DegreeProfile { gamma: vec![k], k };
        assert_eq!(all_zero.dominant(7.5).unwrap(), Some(0));
        let mostly_one = DegreeProfile {
            gamma: vec![1, k - 1],
            k,
        };
        assert_eq!(mostly_one.dominant((k - 1) as f64).unwrap(), Some(1));
        let split = DegreeProfile {
            gamma: vec![k / 2, k / 2],
            k,
        };
        assert_eq!(split.dominant(5.5).unwrap(), None);
        assert!(matches!(split.dominant(5.0), Err(Error::Config(_))));
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let g = BipartiteMultigraph::from_pairs(3, 2, [(0, 1, 3), (2, 0, 1)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "bigraph 3 2 2\n0 1 3\n2 0 1\n");
        assert_eq!(BipartiteMultigraph::parse(&text).unwrap(), g);

        let commented = "# a graph\nbigraph 2 2 1\n\n0 1 1 # edge\n";
        assert_eq!(BipartiteMultigraph::parse(commented).unwrap().m(), 1);

        for bad in [
            "",
            "graph 1 1 0",
            "bigraph 1 1 1\n0 0",
            "bigraph 1 1 1\n0 1 1",
            "bigraph 1 1 2\n0 0 1\n0 0 1",
            "bigraph 1 1 1\n0 0 0",
            "bigraph 1 1 2\n0 0 1",
            "bigraph 1 1 1\n0 x 1",
        ] {
            assert!(
                matches!(BipartiteMultigraph::parse(bad), Err(Error::Parse { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn graph_id_depends_on_content() {
        let a = BipartiteMultigraph::complete(2, 2);
        let b = BipartiteMultigraph::complete(2, 3);
        assert_eq!(a.graph_id(), BipartiteMultigraph::complete(2, 2).graph_id());
        assert_ne!(a.graph_id(), b.graph_id());
        assert_eq!(a.graph_id().len(), 64);
    }
}

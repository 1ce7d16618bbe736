//! Exhaustive minimum of `|M(G)|` over simple bipartite graphs with `m`
//! edges. Connected graphs are grown edge by edge and deduplicated by a
//! canonical form; general graphs are multisets of connected components,
//! and `M` of a disjoint union is the Minkowski sum of the parts.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bigraph::BipartiteMultigraph;
use crate::error::{Error, Result};
use crate::sumset::{sumset_add, SizeSet};

use super::brute_multiplication_table;

/// Largest edge count accepted by [`conjecture_search`].
pub const MAX_EDGES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Small {
    nx: usize,
    ny: usize,
    edges: Vec<(usize, usize)>,
}

impl Small {
    fn to_graph(&self) -> BipartiteMultigraph {
        BipartiteMultigraph::simple(self.nx, self.ny, self.edges.iter().copied())
            .expect("valid small graph")
    }

    fn swapped(&self) -> Small {
        Small {
            nx: self.ny,
            ny: self.nx,
            edges: self.edges.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    fn vertices(&self) -> usize {
        self.nx + self.ny
    }

    fn children(&self, max_vertices: usize) -> Vec<Small> {
        let mut out = Vec::new();
        let with = |e: (usize, usize), nx: usize, ny: usize| {
            let mut edges = self.edges.clone();
            edges.push(e);
            edges.sort_unstable();
            Small { nx, ny, edges }
        };
        for x in 0..self.nx {
            for y in 0..self.ny {
                if self.edges.binary_search(&(x, y)).is_err() {
                    out.push(with((x, y), self.nx, self.ny));
                }
            }
        }
        if self.vertices() < max_vertices {
            for x in 0..self.nx {
                out.push(with((x, self.ny), self.nx, self.ny + 1));
            }
            for y in 0..self.ny {
                out.push(with((self.nx, y), self.nx + 1, self.ny));
            }
        }
        out
    }
}

/// Ranks of `keys`, so equal keys share a colour and the order is label-free.
fn ranks<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap())
        .collect()
}

fn classes(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |&c| c + 1)
}

fn refine(adj: &[Vec<usize>], mut colors: Vec<usize>) -> Vec<usize> {
    loop {
        let keys: Vec<(usize, Vec<usize>)> = adj
            .iter()
            .enumerate()
            .map(|(v, nbrs)| {
                let mut c: Vec<usize> = nbrs.iter().map(|&u| colors[u]).collect();
                c.sort_unstable();
                (colors[v], c)
            })
            .collect();
        let next = ranks(&keys);
        if classes(&next) == classes(&colors) {
            return next;
        }
        colors = next;
    }
}

/// Individualisation–refinement: the least edge list over every labelling
/// the search reaches. Twins within a cell lead to identical subtrees, so
/// only one of them is tried.
fn search(adj: &[Vec<usize>], nx: usize, colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
    let n = adj.len();
    if classes(&colors) == n {
        let mut form: Vec<(u8, u8)> = (0..nx)
            .flat_map(|x| adj[x].iter().map(move |&y| (x, y)))
            .map(|(x, y)| (colors[x] as u8, (colors[y] - nx) as u8))
            .collect();
        form.sort_unstable();
        let flat: Vec<u8> = form.into_iter().flat_map(|(a, b)| [a, b]).collect();
        if best.as_ref().is_none_or(|b| flat < *b) {
            *best = Some(flat);
        }
        return;
    }
    let mut count = vec![0usize; n];
    for &c in &colors {
        count[c] += 1;
    }
    let cell = (0..n).find(|&c| count[c] > 1).expect("a nontrivial cell");
    let mut tried: Vec<&Vec<usize>> = Vec::new();
    for v in (0..n).filter(|&v| colors[v] == cell) {
        if tried.contains(&&adj[v]) {
            continue;
        }
        tried.push(&adj[v]);
        let keys: Vec<(usize, bool)> = (0..n).map(|u| (colors[u], u != v)).collect();
        search(adj, nx, refine(adj, ranks(&keys)), best);
    }
}

fn oriented_form(g: &Small) -> Vec<u8> {
    let n = g.vertices();
    let mut adj = vec![Vec::new(); n];
    for &(x, y) in &g.edges {
        adj[x].push(g.nx + y);
        adj[g.nx + y].push(x);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let keys: Vec<(bool, usize)> = (0..n).map(|v| (v >= g.nx, adj[v].len())).collect();
    let mut best = None;
    search(&adj, g.nx, refine(&adj, ranks(&keys)), &mut best);
    let mut form = vec![g.nx as u8, g.ny as u8];
    form.extend(best.unwrap_or_default());
    form
}

/// Canonical form up to isomorphism, the two sides allowed to exchange.
fn canonical(g: &Small) -> Vec<u8> {
    oriented_form(g).min(oriented_form(&g.swapped()))
}

struct Component {
    edges: usize,
    vertices: usize,
    graph: Small,
    sizes: SizeSet,
}

/// Connected bipartite graphs with `1..=max_edges` edges and at most
/// `max_vertices` vertices, one per isomorphism class, each with its `M`.
fn connected_graphs(max_edges: usize, max_vertices: usize) -> Result<Vec<Component>> {
    let mut levels: Vec<Vec<Small>> = vec![vec![Small {
        nx: 1,
        ny: 1,
        edges: vec![(0, 0)],
    }]];
    while levels.len() < max_edges {
        let last = levels.last().unwrap();
        let kids: Vec<(Vec<u8>, Small)> = last
            .par_iter()
            .flat_map_iter(|g| g.children(max_vertices))
            .map(|g| (canonical(&g), g))
            .collect();
        let mut next: BTreeMap<Vec<u8>, Small> = BTreeMap::new();
        for (form, g) in kids {
            next.entry(form).or_insert(g);
        }
        levels.push(next.into_values().collect());
    }
    levels
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|graph| {
            Ok(Component {
                edges: graph.edges.len(),
                vertices: graph.vertices(),
                sizes: brute_multiplication_table(&graph.to_graph())?,
                graph,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct ConjectureResult {
    pub m: usize,
    pub min: usize,
    /// One representative per isomorphism class attaining `min`, isolated
    /// vertices dropped.
    pub minimizers: Vec<BipartiteMultigraph>,
    /// Isomorphism classes with exactly `m` edges, no isolated vertices and
    /// at most the vertex cap.
    pub graphs: u128,
}

fn disjoint_union(parts: &[&Small]) -> BipartiteMultigraph {
    let (mut ox, mut oy) = (0, 0);
    let mut edges = Vec::new();
    for p in parts {
        edges.extend(p.edges.iter().map(|&(x, y)| (x + ox, y + oy)));
        ox += p.nx;
        oy += p.ny;
    }
    BipartiteMultigraph::simple(ox, oy, edges).expect("valid union")
}

struct Best<'a> {
    min: usize,
    found: Vec<Vec<&'a Small>>,
}

fn combine<'a>(
    comps: &'a [Component],
    start: usize,
    edges_left: usize,
    vertices_left: usize,
    current: &SizeSet,
    chosen: &mut Vec<&'a Small>,
    best: &mut Best<'a>,
) {
    if edges_left == 0 {
        let n = current.len();
        if n < best.min {
            best.min = n;
            best.found.clear();
        }
        if n == best.min {
            best.found.push(chosen.clone());
        }
        return;
    }
    // Any further component adds at least one new size.
    if current.len() + 1 > best.min {
        return;
    }
    for (i, c) in comps.iter().enumerate().skip(start) {
        if c.edges > edges_left {
            break;
        }
        if c.vertices > vertices_left {
            continue;
        }
        chosen.push(&c.graph);
        let next = sumset_add(current, &c.sizes);
        combine(
            comps,
            i,
            edges_left - c.edges,
            vertices_left - c.vertices,
            &next,
            chosen,
            best,
        );
        chosen.pop();
    }
}

/// Multisets of components with `m` edges in total and at most
/// `max_vertices` vertices, counted by a knapsack over `(edges, vertices)`.
fn count_graphs(comps: &[Component], m: usize, max_vertices: usize) -> u128 {
    let mut classes: BTreeMap<(usize, usize), u128> = BTreeMap::new();
    for c in comps {
        *classes.entry((c.edges, c.vertices)).or_insert(0) += 1;
    }
    let mut ways = vec![vec![0u128; max_vertices + 1]; m + 1];
    ways[0][0] = 1;
    for (&(e, v), &types) in &classes {
        let old = ways.clone();
        for te in 0..=m {
            for tv in 0..=max_vertices {
                let mut total = 0u128;
                // j copies drawn with repetition from `types` classes.
                let mut multisets = 1u128;
                for j in 1.. {
                    if j * e > te || j * v > tv {
                        break;
                    }
                    multisets = multisets * (types + j as u128 - 1) / j as u128;
                    total += multisets * old[te - j * e][tv - j * v];
                }
                ways[te][tv] += total;
            }
        }
    }
    ways[m].iter().sum()
}

/// Minimum `|M(G)|` over bipartite graphs with `m` edges, for every `m` in
/// `1..=max_m`, sharing one enumeration of connected graphs.
pub fn conjecture_table(max_m: usize, max_vertices: usize) -> Result<Vec<ConjectureResult>> {
    if max_m > MAX_EDGES {
        return Err(Error::budget(
            "conjecture search edges",
            max_m as u64,
            MAX_EDGES as u64,
        ));
    }
    if max_m == 0 {
        return Ok(Vec::new());
    }
    if max_vertices < 2 {
        return Err(Error::input("at least two vertices are needed for an edge"));
    }
    let cap = max_vertices.min(2 * max_m);
    let mut comps = connected_graphs(max_m, cap)?;
    comps.sort_by_key(|c| c.edges);
    (1..=max_m)
        .map(|m| {
            let vcap = cap.min(2 * m);
            let mut best = Best {
                min: usize::MAX,
                found: Vec::new(),
            };
            combine(
                &comps,
                0,
                m,
                vcap,
                &SizeSet::zero(0),
                &mut Vec::new(),
                &mut best,
            );
            if best.found.is_empty() {
                return Err(Error::input(format!(
                    "no graph with {m} edges fits in {vcap} vertices"
                )));
            }
            Ok(ConjectureResult {
                m,
                min: best.min,
                minimizers: best
                    .found
                    .iter()
                    .map(|parts| disjoint_union(parts))
                    .collect(),
                graphs: count_graphs(&comps, m, vcap),
            })
        })
        .collect()
}

pub fn conjecture_search(m: usize, max_vertices: usize) -> Result<ConjectureResult> {
    if m == 0 {
        return Err(Error::input("m must be positive"));
    }
    Ok(conjecture_table(m, max_vertices)?
        .pop()
        .expect("one row per m"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(nx: usize, ny: usize, edges: &[(usize, usize)]) -> Small {
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        Small { nx, ny, edges }
    }

    #[test]
    fn canonical_form_ignores_labels_and_sides() {
        let a = small(2, 2, &[(0, 0), (0, 1), (1, 1)]);
        let b = small(2, 2, &[(1, 1), (1, 0), (0, 0)]);
        assert_eq!(canonical(&a), canonical(&b));
        let p3 = small(1, 2, &[(0, 0), (0, 1)]);
        assert_eq!(canonical(&p3), canonical(&p3.swapped()));
        let c6 = small(3, 3, &[(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]);
        let c6b = small(3, 3, &[(0, 1), (2, 1), (2, 0), (1, 0), (1, 2), (0, 2)]);
        assert_eq!(canonical(&c6), canonical(&c6b));
        assert_ne!(canonical(&p3), canonical(&small(2, 2, &[(0, 0), (1, 1)])));
    }

    #[test]
    fn connected_counts() {
        // Three edges: P4 and K_{1,3}. Four: the three trees on five vertices and C4.
        let comps = connected_graphs(4, 8).unwrap();
        let by_edges = |e| comps.iter().filter(|c| c.edges == e).count();
        assert_eq!(by_edges(1), 1);
        assert_eq!(by_edges(2), 1);
        assert_eq!(by_edges(3), 2);
        assert_eq!(by_edges(4), 4);
    }

    #[test]
    fn search_examples() {
        let r1 = conjecture_search(1, 2).unwrap();
        assert_eq!((r1.min, r1.minimizers.len(), r1.graphs), (2, 1, 1));
        let r2 = conjecture_search(2, 4).unwrap();
        assert_eq!((r2.min, r2.minimizers.len(), r2.graphs), (3, 2, 2));
        let r4 = conjecture_search(4, 8).unwrap();
        assert_eq!(r4.min, 4);
        assert_eq!(r4.minimizers, vec![BipartiteMultigraph::complete(2, 2)]);
        assert!(matches!(
            conjecture_search(13, 26),
            Err(Error::Budget { .. })
        ));
    }
}

use crate::bigraph::BipartiteMultigraph;

use super::{Certificate, Entry, Source};

/// Nested subsets of the star at the vertex with the most distinct
/// neighbours (X before Y, lowest index on ties).
fn star_entries(g: &BipartiteMultigraph) -> Vec<Entry> {
    let best_x = (0..g.nx()).map(|x| (g.x_neighbors(x).len(), false, x));
    let best_y = (0..g.ny()).map(|y| (g.y_neighbors(y).len(), true, y));
    let Some((_, on_y, v)) = best_x
        .chain(best_y)
        .min_by_key(|&(n, on_y, v)| (std::cmp::Reverse(n), on_y, v))
    else {
        return Vec::new();
    };
    let nbrs = if on_y {
        g.y_neighbors(v)
    } else {
        g.x_neighbors(v)
    };
    let mut out = Vec::with_capacity(nbrs.len() + 1);
    let mut size = 0;
    for i in 0..=nbrs.len() {
        if i > 0 {
            size += nbrs[i - 1].1;
        }
        let prefix: Vec<usize> = nbrs[..i].iter().map(|&(u, _)| u).collect();
        let (xs, ys) = if on_y {
            (prefix, vec![v])
        } else {
            (vec![v], prefix)
        };
        out.push(Entry::new(size, xs, ys, Source::Trivial));
    }
    out
}

/// Prefixes of a greedily grown induced matching, scanning pairs in order.
fn matching_entries(g: &BipartiteMultigraph) -> Vec<Entry> {
    let mut blocked_x = vec![false; g.nx()];
    let mut blocked_y = vec![false; g.ny()];
    let mut chosen = Vec::new();
    for (x, y, t) in g.pairs() {
        if blocked_x[x] || blocked_y[y] {
            continue;
        }
        chosen.push((x, y, t));
        for &(y2, _) in g.x_neighbors(x) {
            blocked_y[y2] = true;
        }
        for &(x2, _) in g.y_neighbors(y) {
            blocked_x[x2] = true;
        }
    }
    let mut out = vec![Entry::new(0, vec![], vec![], Source::Trivial)];
    let mut size = 0;
    for i in 1..=chosen.len() {
        size += chosen[i - 1].2;
        let xs = chosen[..i].iter().map(|c| c.0).collect();
        let ys = chosen[..i].iter().map(|c| c.1).collect();
        out.push(Entry::new(size, xs, ys, Source::Trivial));
    }
    out
}

/// The larger of the densest star's nested subsets and a greedy induced
/// matching's prefixes; `{0}` for an edgeless graph.
pub fn trivial_certificate(g: &BipartiteMultigraph) -> Certificate {
    if g.m() == 0 {
        return Certificate::new(g, vec![Entry::new(0, vec![], vec![], Source::Trivial)]);
    }
    let star = star_entries(g);
    let matching = matching_entries(g);
    let entries = if matching.len() > star.len() {
        matching
    } else {
        star
    };
    Certificate::new(g, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::verify_certificate;

    fn sizes(g: &BipartiteMultigraph) -> Vec<u64> {
        let cert = trivial_certificate(g);
        assert!(verify_certificate(g, &cert).unwrap().is_ok());
        cert.sizes()
    }

    #[test]
    fn star_and_matching() {
        let star = BipartiteMultigraph::complete(1, 5);
        assert_eq!(sizes(&star), vec![0, 1, 2, 3, 4, 5]);
        let matching = BipartiteMultigraph::simple(4, 4, (0..4).map(|i| (i, i))).unwrap();
        assert_eq!(sizes(&matching), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn complete_graph_uses_the_star() {
        assert_eq!(
            sizes(&BipartiteMultigraph::complete(3, 3)),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn y_side_star_and_empty_graph() {
        let g = BipartiteMultigraph::complete(4, 1);
        assert_eq!(sizes(&g), vec![0, 1, 2, 3, 4]);
        let empty = BipartiteMultigraph::empty(3, 3);
        assert_eq!(sizes(&empty), vec![0]);
        assert!(trivial_certificate(&empty).entries[0].xs.is_empty());
    }

    #[test]
    fn multiplicities_count() {
        let g = BipartiteMultigraph::from_pairs(1, 2, [(0, 0, 3), (0, 1, 2)]).unwrap();
        assert_eq!(sizes(&g), vec![0, 3, 5]);
    }
}

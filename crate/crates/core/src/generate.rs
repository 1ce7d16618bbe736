//! Deterministic graph families used by the CLI and the tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bigraph::BipartiteMultigraph;
use crate::error::{Error, Result};

pub fn complete(a: usize, b: usize) -> Result<BipartiteMultigraph> {
    if a == 0 || b == 0 {
        return Err(Error::input("complete graph needs both sides nonempty"));
    }
    Ok(BipartiteMultigraph::complete(a, b))
}

/// Path on `n` vertices alternating `x₀ y₀ x₁ y₁ …`.
pub fn path(n: usize) -> Result<BipartiteMultigraph> {
    if n < 2 {
        return Err(Error::input("path needs at least 2 vertices"));
    }
    let edges = (0..n - 1).map(|i| {
        if i % 2 == 0 {
            (i / 2, i / 2)
        } else {
            (i / 2 + 1, i / 2)
        }
    });
    BipartiteMultigraph::simple(n.div_ceil(2), n / 2, edges)
}

/// Cycle on `n` vertices, `n` even and at least 4.
pub fn cycle(n: usize) -> Result<BipartiteMultigraph> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::input(format!(
            "cycle length must be even and ≥ 4, got {n}"
        )));
    }
    let h = n / 2;
    let edges = (0..h).flat_map(|i| [(i, i), ((i + 1) % h, i)]);
    BipartiteMultigraph::simple(h, h, edges)
}

/// `K_{1,n}` with the centre in X.
pub fn star(n: usize) -> Result<BipartiteMultigraph> {
    complete(1, n)
}

pub fn matching(n: usize) -> Result<BipartiteMultigraph> {
    if n == 0 {
        return Err(Error::input("matching needs at least one edge"));
    }
    BipartiteMultigraph::simple(n, n, (0..n).map(|i| (i, i)))
}

/// Each pair joined independently with probability `p`, from a ChaCha8
/// stream seeded by `seed`.
pub fn random(nx: usize, ny: usize, p: f64, seed: u64) -> Result<BipartiteMultigraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for x in 0..nx {
        for y in 0..ny {
            if rng.gen_bool(p) {
                edges.push((x, y));
            }
        }
    }
    BipartiteMultigraph::simple(nx, ny, edges)
}

/// Stars with centres in Y and the given numbers of leaves in X.
pub fn star_union(leaves: &[usize]) -> Result<BipartiteMultigraph> {
    let mut edges = Vec::new();
    let mut x = 0;
    for (y, &n) in leaves.iter().enumerate() {
        edges.extend((x..x + n).map(|x| (x, y)));
        x += n;
    }
    BipartiteMultigraph::simple(x, leaves.len(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(complete(3, 3).unwrap().pair_count(), 9);
        let p4 = path(4).unwrap();
        assert_eq!((p4.nx(), p4.ny(), p4.m()), (2, 2, 3));
        let c8 = cycle(8).unwrap();
        assert_eq!(c8.half_regular_degree(), Some(2));
        assert_eq!(c8.swapped().half_regular_degree(), Some(2));
        assert_eq!(c8.m(), 8);
        assert_eq!(star(6).unwrap().deg_x(0), 6);
        assert_eq!(matching(4).unwrap().m(), 4);
        assert_eq!(star_union(&[2, 3]).unwrap().y_degrees(), vec![2, 3]);
    }

    #[test]
    fn random_is_seeded() {
        let a = random(5, 5, 0.5, 7).unwrap();
        assert_eq!(a, random(5, 5, 0.5, 7).unwrap());
        assert_eq!(random(4, 4, 1.0, 0).unwrap().m(), 16);
        assert_eq!(random(4, 4, 0.0, 0).unwrap().m(), 0);
        assert!(random(2, 2, 1.5, 0).is_err());
    }

    #[test]
    fn bad_parameters() {
        assert!(complete(0, 2).is_err());
        assert!(cycle(6).is_ok());
        assert!(cycle(5).is_err());
        assert!(path(1).is_err());
    }
}

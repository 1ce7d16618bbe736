//! Primes in an interval, gcd-shift minimisers and product-set sizes.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest upper end accepted by [`primes_in`].
pub const SIEVE_BUDGET: u64 = 100_000_000;

/// Default cap on `|A|·b` for [`product_set_size`].
pub const PRODUCT_BUDGET: u64 = 100_000_000;

const SEGMENT: u64 = 1 << 18;

/// Primes `p ≤ n`, by a plain sieve of Eratosthenes.
fn small_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All primes in `[lo, hi]`, ascending, via a segmented sieve.
pub fn primes_in(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo < 2 || lo > hi {
        return Err(Error::input(format!("need 2 ≤ lo ≤ hi, got [{lo}, {hi}]")));
    }
    if hi > SIEVE_BUDGET {
        return Err(Error::budget("sieve", hi, SIEVE_BUDGET));
    }
    let base = small_primes(isqrt(hi));
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + SEGMENT - 1).min(hi);
        let mut composite = vec![false; (end - start + 1) as usize];
        for &p in &base {
            if p * p > end {
                break;
            }
            let first = (p * p).max(start.div_ceil(p) * p);
            let mut j = first;
            while j <= end {
                composite[(j - start) as usize] = true;
                j += p;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| start + i as u64),
        );
        start = end + 1;
    }
    Ok(out)
}

/// `gcd(a, |x|)` with `gcd(a, 0) = a`.
pub fn gcd_abs(a: u64, x: i128) -> u64 {
    (a as u128).gcd(&x.unsigned_abs()) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcdShiftResult {
    /// Shift index in `[0, k)`.
    pub i: usize,
    /// The gcd achieved at that shift.
    pub g: u64,
}

/// `f_i = gcd(a, b − i·d)` for `i = 0..k`.
pub fn shift_gcds(a: u64, b: u64, d: u64, k: usize) -> Vec<u64> {
    (0..k)
        .map(|i| gcd_abs(a, b as i128 - i as i128 * d as i128))
        .collect()
}

fn argmin(values: &[u64]) -> GcdShiftResult {
    let (i, &g) = values
        .iter()
        .enumerate()
        .min_by_key(|&(i, &g)| (g, i))
        .expect("at least one shift");
    GcdShiftResult { i, g }
}

/// Minimises `gcd(a, b − i·d)` over `0 ≤ i < k`, ties toward smaller `i`.
pub fn min_gcd_shift(a: u64, b: u64, d: u64, k: usize) -> Result<GcdShiftResult> {
    if a == 0 || b == 0 || d == 0 || k == 0 {
        return Err(Error::input("a, b, d, k must be positive"));
    }
    Ok(argmin(&shift_gcds(a, b, d, k)))
}

/// Minimises `gcd(a − i·d, b − i·d)` over `0 ≤ i < k` through the identity
/// `gcd(a − i·d, b − i·d) = gcd(a − b, b − i·d)`.
pub fn min_gcd_shift_pair(a: u64, b: u64, d: u64, k: usize) -> Result<GcdShiftResult> {
    if a == b {
        return Err(Error::input("a = b leaves the gcd unbounded"));
    }
    if d == 0 || k == 0 {
        return Err(Error::input("d and k must be positive"));
    }
    let diff = a.abs_diff(b);
    Ok(argmin(&shift_gcds(diff, b, d, k)))
}

/// Prime powers `q < k`.
pub fn prime_powers_below(k: u64) -> Vec<u64> {
    if k <= 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for p in small_primes(k - 1) {
        let mut q = p;
        while q < k {
            out.push(q);
            q *= p;
        }
    }
    out.sort_unstable();
    out
}

/// Checks `∏_{i<k} f_i ∣ a·d^k·∏_{q<k} q^{⌈k/q⌉}`, `q` ranging over prime
/// powers, with exact big-integer arithmetic.
pub fn gcd_divisibility_certificate(a: u64, b: u64, d: u64, k: usize) -> bool {
    let lhs: BigUint = shift_gcds(a, b, d, k)
        .into_iter()
        .map(BigUint::from)
        .product();
    let mut rhs = BigUint::from(a) * BigUint::from(d).pow(k as u32);
    let kk = k as u64;
    for q in prime_powers_below(kk) {
        rhs *= BigUint::from(q).pow(kk.div_ceil(q) as u32);
    }
    (&rhs % &lhs) == BigUint::from(0u32)
}

/// `|A·[b]| = |{a·j : a ∈ A, 1 ≤ j ≤ b}|`.
pub fn product_set_size(a: &[u64], b: u64) -> Result<usize> {
    product_set_size_with_budget(a, b, PRODUCT_BUDGET)
}

pub fn product_set_size_with_budget(a: &[u64], b: u64, budget: u64) -> Result<usize> {
    if a.is_empty() || b == 0 {
        return Err(Error::input("A must be nonempty and b positive"));
    }
    let work = a.len() as u128 * b as u128;
    if work > budget as u128 {
        return Err(Error::budget("product set", work, budget));
    }
    let mut products = Vec::with_capacity(work as usize);
    for &x in a {
        for j in 1..=b {
            products.push(
                x.checked_mul(j).ok_or_else(|| {
                    Error::budget("product value", x as u128 * j as u128, u64::MAX)
                })?,
            );
        }
    }
    products.sort_unstable();
    products.dedup();
    Ok(products.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_in_examples() {
        assert_eq!(primes_in(10, 20).unwrap(), vec![11, 13, 17, 19]);
        assert_eq!(primes_in(24, 28).unwrap(), Vec::<u64>::new());
        assert_eq!(primes_in(2, 2).unwrap(), vec![2]);
        assert!(matches!(primes_in(1, 5), Err(Error::Input(_))));
        assert!(matches!(primes_in(9, 5), Err(Error::Input(_))));
        assert!(matches!(
            primes_in(2, SIEVE_BUDGET + 1),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn segments_join_cleanly() {
        let lo = SEGMENT - 50;
        let hi = SEGMENT + 50;
        let got = primes_in(lo, hi).unwrap();
        let naive: Vec<u64> = (lo..=hi)
            .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(got, naive);
    }

    #[test]
    fn gcd_shift_examples() {
        assert_eq!(shift_gcds(12, 30, 1, 3), vec![6, 1, 4]);
        assert_eq!(
            min_gcd_shift(12, 30, 1, 3).unwrap(),
            GcdShiftResult { i: 1, g: 1 }
        );
        assert_eq!(
            min_gcd_shift(5, 5, 7, 1).unwrap(),
            GcdShiftResult { i: 0, g: 5 }
        );
        assert_eq!(
            min_gcd_shift(8, 12, 2, 2).unwrap(),
            GcdShiftResult { i: 1, g: 2 }
        );
        // b − i·d hits zero and then goes negative
        assert_eq!(shift_gcds(6, 4, 2, 4), vec![2, 2, 6, 2]);
    }

    #[test]
    fn gcd_shift_pair_examples() {
        assert_eq!(
            min_gcd_shift_pair(10, 4, 2, 3).unwrap(),
            GcdShiftResult { i: 0, g: 2 }
        );
        assert_eq!(
            min_gcd_shift_pair(7, 6, 1, 1).unwrap(),
            GcdShiftResult { i: 0, g: 1 }
        );
        assert_eq!(
            min_gcd_shift_pair(9, 3, 3, 2).unwrap(),
            GcdShiftResult { i: 0, g: 3 }
        );
        assert!(matches!(
            min_gcd_shift_pair(4, 4, 1, 2),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(prime_powers_below(3), vec![2]);
        assert_eq!(prime_powers_below(2), Vec::<u64>::new());
        assert_eq!(prime_powers_below(10), vec![2, 3, 4, 5, 7, 8, 9]);
        assert!(gcd_divisibility_certificate(12, 30, 1, 3));
        assert!(gcd_divisibility_certificate(8, 12, 2, 2));
        assert!(gcd_divisibility_certificate(17, 34, 5, 1));
    }

    #[test]
    fn product_set_examples() {
        assert_eq!(product_set_size(&[2, 3], 4).unwrap(), 7);
        assert_eq!(product_set_size(&[1], 5).unwrap(), 5);
        assert_eq!(product_set_size(&[2], 1).unwrap(), 1);
        assert!(matches!(product_set_size(&[], 3), Err(Error::Input(_))));
        assert!(matches!(
            product_set_size_with_budget(&[1, 2], 10, 19),
            Err(Error::Budget { .. })
        ));
    }
}

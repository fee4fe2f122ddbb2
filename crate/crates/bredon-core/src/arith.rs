//! Divisor combinatorics.
//!
//! Everything here is a pure function of small positive integers: gcd and
//! lcm helpers, the colon operation `x:y = x/(x,y)`, `ell`-adic parts,
//! divisor strings and the lcm-gcd sequence of a tuple, the allowable paths
//! of a pair of divisor strings, and the integrality constant `Y`.
//!
//! Inputs are `u64`. Values that can outgrow their inputs, such as the
//! products along allowable paths, are carried as [`BigUint`]; operations
//! whose result is bounded by an input report it as `u64`.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{invalid, Error, Result};

/// Greatest common divisor, with `gcd(0, x) = x`.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least common multiple, failing if the result does not fit in `u64`.
pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::Overflow(alloc::format!("lcm({a}, {b})")))
}

/// Greatest common divisor of a list (`0` for the empty list).
pub fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |g, &x| gcd(g, x))
}

/// Least common multiple of a list (`1` for the empty list).
pub fn lcm_all(xs: &[u64]) -> Result<u64> {
    xs.iter().try_fold(1, |l, &x| lcm(l, x))
}

/// The colon operation `x:y = x/(x,y)`.
///
/// This is the order of `y` in `Z/x`, and the index by which `x` must be
/// divided to make it coprime to the part it shares with `y`.
///
/// ```
/// use bredon_core::arith::colon;
/// assert_eq!(colon(12, 8), 3);
/// assert_eq!(colon(7, 1), 7);
/// assert_eq!(colon(1, 7), 1);
/// ```
pub fn colon(x: u64, y: u64) -> u64 {
    let g = gcd(x, y);
    if g == 0 {
        0
    } else {
        x / g
    }
}

/// Primality by trial division.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q.saturating_mul(q) <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// The primes dividing `n`, in increasing order.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Splits `d` as `d(ell) * d(ell^)` where `d(ell)` is the largest power of
/// the prime `ell` dividing `d`.
///
/// ```
/// use bredon_core::arith::ell_parts;
/// assert_eq!(ell_parts(45, 3).unwrap(), (9, 5));
/// assert_eq!(ell_parts(45, 7).unwrap(), (1, 45));
/// ```
pub fn ell_parts(d: u64, ell: u64) -> Result<(u64, u64)> {
    if !is_prime(ell) {
        return Err(invalid(alloc::format!("{ell} is not prime")));
    }
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    let mut part = 1u64;
    let mut rest = d;
    while rest % ell == 0 {
        rest /= ell;
        part *= ell;
    }
    Ok((part, rest))
}

/// True when every entry divides the next one.
pub fn is_divisor_string(b: &[u64]) -> bool {
    b.iter().all(|&x| x >= 1) && b.windows(2).all(|w| w[1] % w[0] == 0)
}

fn check_positive(b: &[u64], what: &str) -> Result<()> {
    if b.iter().any(|&x| x == 0) {
        return Err(invalid(alloc::format!("{what} entries must be positive")));
    }
    Ok(())
}

/// A pairwise coprime family such that every input is a product of powers
/// of its members.
fn coprime_base(xs: &[u64]) -> Vec<u64> {
    let mut base: Vec<u64> = xs.iter().copied().filter(|&x| x > 1).collect();
    'outer: loop {
        for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                let g = gcd(base[i], base[j]);
                if g > 1 {
                    let (a, b) = (base[i] / g, base[j] / g);
                    base.swap_remove(j);
                    base.swap_remove(i);
                    base.extend([a, b, g].into_iter().filter(|&x| x > 1));
                    continue 'outer;
                }
            }
        }
        break;
    }
    base.sort_unstable();
    base
}

/// The lcm-gcd sequence `((b;1), ..., (b;s))`, where `(b;j)` is the gcd of
/// all `j`-fold least common multiples of entries of `b`.
///
/// The result is a divisor string whose first entry is `gcd(b)` and whose
/// last entry is `lcm(b)`. It is computed prime by prime (over a coprime
/// base, so no factorisation is needed) by sorting exponents.
///
/// ```
/// use bredon_core::arith::lcm_gcd_seq;
/// assert_eq!(lcm_gcd_seq(&[15, 9, 18]).unwrap(), vec![3, 9, 90]);
/// ```
pub fn lcm_gcd_seq(b: &[u64]) -> Result<Vec<u64>> {
    if b.is_empty() {
        return Err(invalid("lcm-gcd sequence of an empty tuple"));
    }
    check_positive(b, "tuple")?;
    let base = coprime_base(b);
    let mut out = alloc::vec![1u64; b.len()];
    for &q in &base {
        let mut exps: Vec<u32> = b
            .iter()
            .map(|&x| {
                let mut x = x;
                let mut e = 0;
                while x % q == 0 {
                    x /= q;
                    e += 1;
                }
                e
            })
            .collect();
        exps.sort_unstable();
        for (slot, &e) in out.iter_mut().zip(&exps) {
            let factor = q
                .checked_pow(e)
                .ok_or_else(|| Error::Overflow(alloc::format!("{q}^{e}")))?;
            *slot = slot
                .checked_mul(factor)
                .ok_or_else(|| Error::Overflow("lcm-gcd sequence entry".into()))?;
        }
    }
    Ok(out)
}

/// The divisor string associated to a tuple (an alias for
/// [`lcm_gcd_seq`], accepting the empty tuple).
pub fn associated_string(b: &[u64]) -> Result<Vec<u64>> {
    if b.is_empty() {
        Ok(Vec::new())
    } else {
        lcm_gcd_seq(b)
    }
}

/// Repeatedly replaces a pair `x, y` (in positions `i < j`) by
/// `gcd(x, y), lcm(x, y)` until the tuple is a divisor string.
pub fn pairwise_distill(b: &[u64]) -> Result<Vec<u64>> {
    if b.is_empty() {
        return Err(invalid("pairwise distillation of an empty tuple"));
    }
    check_positive(b, "tuple")?;
    let mut v = b.to_vec();
    loop {
        let mut changed = false;
        for i in 0..v.len() {
            for j in (i + 1)..v.len() {
                if v[j] % v[i] != 0 {
                    let g = gcd(v[i], v[j]);
                    let l = lcm(v[i], v[j])?;
                    v[i] = g;
                    v[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(v);
        }
    }
}

/// Pads `b` on the left with ones to length `len`.
pub fn pad_front(b: &[u64], len: usize) -> Vec<u64> {
    let mut out = alloc::vec![1u64; len.saturating_sub(b.len())];
    out.extend_from_slice(b);
    out
}

/// The integers attached to allowable paths through the array
///
/// ```text
///        d_1  d_2  ...  d_k
///   1    c_1  c_2  ...  c_k
/// ```
///
/// Paths start at the bottom-left `1` and use the steps right, up-right
/// (bottom column `j-1` to top column `j`) and down (top to bottom within a
/// column). The integer attached to a path is the product of the entries it
/// visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    /// gcd of the integers of paths ending at `c_k`.
    pub gcd_end_c: BigUint,
    /// gcd of the integers of paths ending at `d_k`.
    pub gcd_end_d: BigUint,
    /// The explicit path integers `(ending at c_k, ending at d_k)`, present
    /// only when requested.
    pub explicit: Option<(Vec<BigUint>, Vec<BigUint>)>,
}

fn check_pair(c: &[u64], d: &[u64]) -> Result<()> {
    if c.len() != d.len() {
        return Err(invalid(alloc::format!(
            "length mismatch: {} versus {}",
            c.len(),
            d.len()
        )));
    }
    check_positive(c, "c")?;
    check_positive(d, "d")
}

/// Enumerates the allowable paths of `(c, d)`.
///
/// The two gcds are computed column by column, which is linear in `k`. With
/// `explicit = true` every path integer is also listed; there are
/// exponentially many, so this is meant for small `k`.
pub fn allowable_paths(c: &[u64], d: &[u64], explicit: bool) -> Result<PathSet> {
    check_pair(c, d)?;
    if c.is_empty() {
        return Err(invalid("allowable paths need k >= 1"));
    }
    // gcd over paths ending at the bottom and top entry of each column
    let mut bottom = BigUint::one();
    let mut top: Option<BigUint> = None;
    for (&cj, &dj) in c.iter().zip(d) {
        let reach_top = match &top {
            None => bottom.clone(),
            Some(t) => bottom.gcd(t),
        };
        let new_top = reach_top * BigUint::from(dj);
        bottom = bottom.gcd(&new_top) * BigUint::from(cj);
        top = Some(new_top);
    }
    let explicit = explicit.then(|| enumerate_paths(c, d));
    Ok(PathSet {
        gcd_end_c: bottom,
        gcd_end_d: top.expect("k >= 1"),
        explicit,
    })
}

fn enumerate_paths(c: &[u64], d: &[u64]) -> (Vec<BigUint>, Vec<BigUint>) {
    // lists of path integers ending at bottom(j) and top(j)
    let mut bottom: Vec<BigUint> = alloc::vec![BigUint::one()];
    let mut top: Vec<BigUint> = Vec::new();
    for (&cj, &dj) in c.iter().zip(d) {
        let new_top: Vec<BigUint> = bottom
            .iter()
            .chain(top.iter())
            .map(|p| p * BigUint::from(dj))
            .collect();
        let new_bottom: Vec<BigUint> = bottom
            .iter()
            .chain(new_top.iter())
            .map(|p| p * BigUint::from(cj))
            .collect();
        bottom = new_bottom;
        top = new_top;
    }
    (bottom, top)
}

/// The integrality constant `Y_{c,d}` by the recursion `Y_0 = 1`,
/// `Y_j = ((c_j Y_{j-1} : d_j), c_j)`. Returns `1` when `k = 0`.
pub fn y_recursive(c: &[u64], d: &[u64]) -> Result<u64> {
    check_pair(c, d)?;
    let mut y: u64 = 1;
    for (&cj, &dj) in c.iter().zip(d) {
        let prod = u128::from(cj) * u128::from(y);
        let g = prod.gcd(&u128::from(dj));
        let col = prod / g;
        y = col.gcd(&u128::from(cj)) as u64;
    }
    Ok(y)
}

/// The integrality constant `Y_{c,d} = gcd(E) / gcd(E and F)`, where `E`
/// and `F` are the path integers ending at `c_k` and `d_k`. Returns `1`
/// when `k = 0`.
pub fn y_path(c: &[u64], d: &[u64]) -> Result<u64> {
    check_pair(c, d)?;
    if c.is_empty() {
        return Ok(1);
    }
    let ps = allowable_paths(c, d, false)?;
    let all = ps.gcd_end_c.gcd(&ps.gcd_end_d);
    let y = &ps.gcd_end_c / all;
    y.to_u64()
        .ok_or_else(|| Error::Overflow("Y exceeds u64".into()))
}

/// The least `r >= 1` such that `r * u_num / u_den` is an integral class:
/// `Y(assoc(den), assoc(num))` after padding both strings with leading ones
/// to a common length.
///
/// ```
/// use bredon_core::arith::integral_multiple;
/// assert_eq!(integral_multiple(&[2, 6], &[4]).unwrap(), 2);
/// assert_eq!(integral_multiple(&[3], &[9]).unwrap(), 3);
/// ```
pub fn integral_multiple(num: &[u64], den: &[u64]) -> Result<u64> {
    let a = associated_string(num)?;
    let b = associated_string(den)?;
    let k = a.len().max(b.len());
    y_recursive(&pad_front(&b, k), &pad_front(&a, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn colon_examples() {
        assert_eq!(colon(12, 8), 3);
        assert_eq!(colon(7, 7), 1);
        assert_eq!(colon(9, 1), 9);
        assert_eq!(colon(1, 9), 1);
    }

    #[test]
    fn ell_parts_examples() {
        assert_eq!(ell_parts(45, 3).unwrap(), (9, 5));
        assert_eq!(ell_parts(45, 7).unwrap(), (1, 45));
        assert_eq!(ell_parts(1, 5).unwrap(), (1, 1));
        assert!(ell_parts(45, 9).is_err());
    }

    #[test]
    fn lcm_gcd_examples() {
        assert_eq!(lcm_gcd_seq(&[15, 9, 18]).unwrap(), vec![3, 9, 90]);
        assert_eq!(lcm_gcd_seq(&[6, 10, 15]).unwrap(), vec![1, 30, 30]);
        assert_eq!(lcm_gcd_seq(&[3, 9, 45]).unwrap(), vec![3, 9, 45]);
        assert!(lcm_gcd_seq(&[]).is_err());
        assert_eq!(pairwise_distill(&[15, 9, 18]).unwrap(), vec![3, 9, 90]);
    }

    #[test]
    fn coprime_base_is_pairwise_coprime() {
        let base = coprime_base(&[12, 18, 45, 45, 7]);
        for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                assert_eq!(gcd(base[i], base[j]), 1);
            }
        }
    }

    #[test]
    fn paths_k1_and_k2() {
        let p = allowable_paths(&[3], &[9], true).unwrap();
        assert_eq!(p.gcd_end_c, BigUint::from(3u32));
        assert_eq!(p.gcd_end_d, BigUint::from(9u32));
        let (c, d) = (vec![2u64, 6], vec![5u64, 15]);
        let p = allowable_paths(&c, &d, false).unwrap();
        let e = (2u64 * 6).gcd(&(5 * 15 * 6));
        let f = (2u64 * 15).gcd(&(5 * 15));
        assert_eq!(p.gcd_end_c, BigUint::from(e));
        assert_eq!(p.gcd_end_d, BigUint::from(f));
    }

    #[test]
    fn y_anchor_values() {
        assert_eq!(y_recursive(&[1, 4], &[2, 6]).unwrap(), 2);
        assert_eq!(y_path(&[1, 4], &[2, 6]).unwrap(), 2);
        assert_eq!(y_recursive(&[9], &[15]).unwrap(), 3);
        assert_eq!(y_recursive(&[], &[]).unwrap(), 1);
        assert!(y_recursive(&[1], &[]).is_err());
    }

    #[test]
    fn divisor_helpers() {
        assert_eq!(divisors(45), vec![1, 3, 5, 9, 15, 45]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_divisor_string(&[1, 3, 9, 45]));
        assert!(!is_divisor_string(&[3, 5]));
        assert_eq!(pad_front(&[4], 2), vec![1, 4]);
    }
}

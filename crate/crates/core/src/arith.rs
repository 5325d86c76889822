//! Exact integer arithmetic: valuations, factorization, quadratic residues,
//! Jacobi symbols and the 2-adic Hilbert symbol.

use crate::error::{Error, Result};

/// Primes up to this bound are found by trial division; anything left after
/// that goes through Miller-Rabin and Pollard rho.
const TRIAL_LIMIT: u64 = 1_000_000;

/// The 2-adic valuation of `n`.
pub fn v2(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::Zero("v2"));
    }
    Ok(n.trailing_zeros())
}

/// `n` with every factor of 2 removed.
pub fn odd_part(n: u64) -> Result<u64> {
    Ok(n >> v2(n)?)
}

/// The `p`-adic valuation of a nonzero `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n > 0 && p > 1);
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Floor of the square root of a 128-bit value.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Whether `n = k(k+1)/2` for some `k >= 0`.
pub fn is_triangular(n: u64) -> bool {
    match (n as u128).checked_mul(8) {
        Some(m) => {
            let d = m + 1;
            let r = isqrt_u128(d);
            r * r == d
        }
        None => false,
    }
}

/// Prime factorization as a sorted list of `(prime, exponent)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn odd_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes().filter(|&p| p != 2)
    }

    /// Exponent of `p`, zero if absent.
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// The product of all factors. May not fit in `u64` when the
    /// factorization was merged from several numbers.
    pub fn value(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e))
    }

    /// Product of the primes appearing to an odd power.
    pub fn squarefree_part(&self) -> u128 {
        self.factors
            .iter()
            .filter(|&&(_, e)| e % 2 == 1)
            .fold(1u128, |acc, &(p, _)| acc * p as u128)
    }

    /// Factorization of the product of several numbers.
    pub fn of_product(ns: &[u64]) -> Result<Self> {
        let mut merged: Vec<(u64, u32)> = Vec::new();
        for &n in ns {
            for &(p, e) in factorize(n)?.factors() {
                match merged.iter_mut().find(|(q, _)| *q == p) {
                    Some(entry) => entry.1 += e,
                    None => merged.push((p, e)),
                }
            }
        }
        merged.sort_unstable();
        Ok(Factorization { factors: merged })
    }
}

/// Factor a positive integer.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero("factorize"));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let tz = m.trailing_zeros();
    if tz > 0 {
        factors.push((2, tz));
        m >>= tz;
    }
    let mut p = 3u64;
    while p <= TRIAL_LIMIT && p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 2;
    }
    if m > 1 {
        let mut large = Vec::new();
        split_large(m, &mut large);
        large.sort_unstable();
        for q in large {
            match factors.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    Ok(Factorization { factors })
}

/// Split an odd cofactor with no prime factor below the trial limit (or a
/// prime) into primes.
fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of an odd composite `n`.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
        let mut g = 1u64;
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// The squarefree part of `n`: the product of primes dividing `n` to an odd
/// power.
pub fn squarefree_part(n: u64) -> Result<u64> {
    Ok(factorize(n)?.squarefree_part() as u64)
}

/// Jacobi symbol `(a/m)` for odd positive `m`.
pub fn jacobi(a: i128, m: u64) -> Result<i8> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenModulus(m));
    }
    let mut a = a.rem_euclid(m as i128) as u64;
    let mut n = m;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        (a, n) = (n % a, a);
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Whether `a` is a quadratic residue modulo `m` in the strict sense used
/// throughout: `gcd(a, m) = 1` and `x^2 = a (mod m)` is solvable. By
/// convention every `a` is a residue modulo 1.
///
/// The test runs prime by prime: Legendre symbols for the odd primes of `m`,
/// and for the 2-power part the usual lifting criterion (any odd `a` modulo
/// 2, `a = 1 (mod 4)` modulo 4, `a = 1 (mod 8)` modulo `2^e`, `e >= 3`).
pub fn is_qr(a: i128, m: u64) -> bool {
    assert!(m >= 1, "is_qr needs a positive modulus");
    if m == 1 {
        return true;
    }
    let r = a.rem_euclid(m as i128) as u64;
    if gcd(r, m) != 1 {
        return false;
    }
    let e = m.trailing_zeros();
    let two_ok = match e {
        0 | 1 => true,
        2 => r % 4 == 1,
        _ => r % 8 == 1,
    };
    if !two_ok {
        return false;
    }
    let odd = m >> e;
    if odd == 1 {
        return true;
    }
    // `odd > 1` so factorization cannot fail, and each Legendre symbol is 1
    // or -1 because `r` is coprime to `m`.
    factorize(odd)
        .expect("nonzero")
        .odd_primes()
        .all(|p| jacobi(r as i128, p) == Ok(1))
}

/// Split a nonzero integer as `2^alpha * u` with `u` odd (sign kept in `u`).
pub fn split_two(n: i128) -> Result<(u32, i128)> {
    if n == 0 {
        return Err(Error::Zero("split_two"));
    }
    let k = n.trailing_zeros();
    Ok((k, n >> k))
}

/// The 2-adic Hilbert symbol `(a, b)_2` for nonzero integers.
///
/// With `a = 2^alpha u`, `b = 2^beta v` and `u`, `v` odd it equals
/// `(-1)^(eps(u) eps(v) + alpha omega(v) + beta omega(u))`, where
/// `eps(u) = (u-1)/2` and `omega(u) = (u^2-1)/8` mod 2.
pub fn hilbert2(a: i128, b: i128) -> Result<i8> {
    let (alpha, u) = split_two(a)?;
    let (beta, v) = split_two(b)?;
    let eps = |w: i128| u32::from(w.rem_euclid(4) == 3);
    let omega = |w: i128| u32::from(matches!(w.rem_euclid(8), 3 | 5));
    let e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    Ok(if e % 2 == 0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_qr(a: i128, m: u64) -> bool {
        let r = a.rem_euclid(m as i128) as u64;
        gcd(r, m) == 1 && (0..m).any(|x| (x * x) % m == r)
    }

    #[test]
    fn valuations() {
        assert_eq!(v2(22176).unwrap(), 5);
        assert_eq!(odd_part(22176).unwrap(), 693);
        assert_eq!(v2(0), Err(Error::Zero("v2")));
        assert_eq!(squarefree_part(72).unwrap(), 2);
        assert_eq!(squarefree_part(1).unwrap(), 1);
        assert_eq!(valuation(250, 5), 3);
    }

    #[test]
    fn factorization_round_trips() {
        assert!(is_prime(9_999_999_967));
        assert_eq!(factorize(9_999_999_967).unwrap().factors(), &[(9_999_999_967, 1)]);
        for n in [1u64, 2, 12, 97, 1 << 40, 600_851_475_143, 999_999_000_001, u64::MAX] {
            let f = factorize(n).unwrap();
            assert_eq!(f.value(), n as u128);
            assert!(f.primes().all(is_prime));
        }
        // Product of two primes above the trial-division limit.
        let n = 1_000_003u64 * 1_000_033;
        assert_eq!(factorize(n).unwrap().factors(), &[(1_000_003, 1), (1_000_033, 1)]);
        let p = 4_294_967_291u64;
        assert_eq!(factorize(p * 3 * 3).unwrap().factors(), &[(3, 2), (p, 1)]);
    }

    #[test]
    fn primality_matches_sieve() {
        let n = 20_000usize;
        let mut composite = vec![false; n];
        for i in 2..n {
            if !composite[i] {
                for j in (i * i..n).step_by(i) {
                    composite[j] = true;
                }
            }
            assert_eq!(is_prime(i as u64), !composite[i], "{i}");
        }
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
    }

    #[test]
    fn merged_factorization() {
        let f = Factorization::of_product(&[6, 10, 15]).unwrap();
        assert_eq!(f.factors(), &[(2, 2), (3, 2), (5, 2)]);
        assert_eq!(f.squarefree_part(), 1);
    }

    #[test]
    fn jacobi_against_euler_criterion() {
        for p in [3u64, 5, 7, 11, 13, 97, 101] {
            for a in -50i128..50 {
                let r = a.rem_euclid(p as i128) as u64;
                let expect = if r == 0 {
                    0
                } else if pow_mod(r, (p - 1) / 2, p) == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(jacobi(a, p).unwrap(), expect, "({a}/{p})");
            }
        }
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(7, 1).unwrap(), 1);
        assert_eq!(jacobi(3, 8), Err(Error::EvenModulus(8)));
    }

    #[test]
    fn quadratic_residues_against_brute_force() {
        for m in 1..=200u64 {
            for a in -60i128..60 {
                assert_eq!(is_qr(a, m), brute_qr(a, m), "{a} R {m}");
            }
        }
        assert!(!is_qr(3, 6));
    }

    #[test]
    fn integer_roots() {
        for n in 0..10_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
        let tri: Vec<u64> = (0..30).filter(|&n| is_triangular(n)).collect();
        assert_eq!(tri, vec![0, 1, 3, 6, 10, 15, 21, 28]);
    }

    /// `(a, b)_2 = 1` iff `a x^2 + b y^2 = z^2` has a primitive 2-adic
    /// solution. Primitive solutions lift from modulus 64 for the
    /// representatives used here, so a finite search decides it.
    fn hilbert_by_search(a: i128, b: i128) -> i8 {
        let m = 64i128;
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x % 2 == 0 && y % 2 == 0 && z % 2 == 0 {
                        continue;
                    }
                    if (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn hilbert_symbol_against_search() {
        let reps = [1i128, 3, 5, 7, 2, 6, 10, 14];
        for &a in &reps {
            for &b in &reps {
                assert_eq!(hilbert2(a, b).unwrap(), hilbert_by_search(a, b), "({a},{b})");
            }
        }
        // Symmetry, bimultiplicativity and sign handling on a wider range.
        for a in [-7i128, -3, -2, -1, 3, 12, 40, -96] {
            for b in [-5i128, -1, 2, 6, 11, -24] {
                let h = hilbert2(a, b).unwrap();
                assert_eq!(h, hilbert2(b, a).unwrap());
                assert_eq!(h * hilbert2(a, 3).unwrap(), hilbert2(a, 3 * b).unwrap());
            }
        }
        assert_eq!(hilbert2(0, 3), Err(Error::Zero("split_two")));
    }
}

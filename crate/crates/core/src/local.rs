//! Local representability: the odd-prime residue conditions for diagonal
//! ternary forms, the 2-adic side conditions for the mixed families, and
//! solution counts modulo prime powers.

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, is_qr, odd_part, v2};
use crate::error::{Error, Result};
use crate::forms::{FormKind, MixedForm};

/// Largest modulus `p^k` accepted by [`local_count`].
pub const LOCAL_MODULUS_LIMIT: u64 = 1_000_000;

/// One of the relations `-xy R z'` making up the odd-prime condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRelation {
    /// The residue, e.g. `-2bc`.
    pub residue: i128,
    /// The modulus, an odd part of a coefficient.
    pub modulus: u64,
    pub holds: bool,
}

impl ResidueRelation {
    pub fn new(residue: i128, modulus: u64) -> Self {
        ResidueRelation {
            residue,
            modulus,
            holds: is_qr(residue, modulus),
        }
    }
}

/// Whether `ax^2 + by^2 + cz^2` represents every integer over `Z_p` for all
/// odd primes `p`, expressed through the relations `-bc R a'`, `-ac R b'`,
/// `-ab R c'` (in that order).
pub fn odd_locally_universal(a: u64, b: u64, c: u64) -> Result<(bool, [ResidueRelation; 3])> {
    let (ai, bi, ci) = (a as i128, b as i128, c as i128);
    let rels = [
        ResidueRelation::new(-bi * ci, odd_part(a)?),
        ResidueRelation::new(-ai * ci, odd_part(b)?),
        ResidueRelation::new(-ai * bi, odd_part(c)?),
    ];
    Ok((rels.iter().all(|r| r.holds), rels))
}

/// The 2-adic side condition for a primitive mixed form.
///
/// Squares and triangular numbers behave differently at 2: `sst` forms need
/// `4 ∤ c`, or `4 || c` with `2 || ab`; `stt` forms need `4 ∤ b` or `4 ∤ c`;
/// `ttt` forms need nothing.
pub fn two_adic_ok(form: &MixedForm) -> bool {
    let [a, b, c] = form.coeffs();
    match form.kind() {
        FormKind::TwoSquaresOneTri => {
            let vc = c.trailing_zeros();
            vc < 2 || (vc == 2 && a.trailing_zeros() + b.trailing_zeros() == 1)
        }
        FormKind::OneSquareTwoTri => b % 4 != 0 || c % 4 != 0,
        FormKind::ThreeTri => true,
    }
}

/// The valuation `v2(c)`, `v2(b+c)` or `v2(a+b+c)` of the constant that
/// appears when completing squares; at least 3 rules out asymptotic
/// universality.
pub fn vf(form: &MixedForm) -> u32 {
    let [a, b, c] = form.coeffs();
    let n = match form.kind() {
        FormKind::TwoSquaresOneTri => c,
        FormKind::OneSquareTwoTri => b + c,
        FormKind::ThreeTri => a + b + c,
    };
    v2(n).expect("coefficients are positive")
}

/// Summary of the local conditions for a mixed form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalReport {
    pub primitive: bool,
    pub odd_relations: Vec<ResidueRelation>,
    pub odd_ok: bool,
    pub two_adic_ok: bool,
    pub vf: u32,
}

impl LocalReport {
    pub fn all_ok(&self) -> bool {
        self.primitive && self.odd_ok && self.two_adic_ok
    }
}

/// Local conditions through the associated quadratic form.
pub fn local_report(form: &MixedForm) -> LocalReport {
    let [a, b, c] = form.coeffs();
    let q = form.associated_quadratic();
    let [q1, q2, q3] = q.coeffs;
    let (odd_ok, rels) = odd_locally_universal(q1, q2, q3).expect("coefficients are positive");
    LocalReport {
        primitive: crate::arith::gcd(crate::arith::gcd(a, b), c) == 1,
        odd_relations: rels.to_vec(),
        odd_ok,
        two_adic_ok: two_adic_ok(form),
        vf: vf(form),
    }
}

fn check_modulus(p: u64, k: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    match p.checked_pow(k) {
        Some(q) if q <= LOCAL_MODULUS_LIMIT && k >= 1 => Ok(q),
        _ if k == 0 => Err(Error::Invalid("exponent must be at least 1".into())),
        _ => Err(Error::ModulusTooLarge { p, k, limit: LOCAL_MODULUS_LIMIT }),
    }
}

/// `freq[v]` = number of `x mod q` with `c x^2 = v (mod q)`.
fn square_frequencies(c: u64, q: u64) -> Vec<u64> {
    let mut freq = vec![0u64; q as usize];
    let c = c % q;
    for x in 0..q {
        let v = ((x * x) % q * c) % q;
        freq[v as usize] += 1;
    }
    freq
}

fn support(freq: &[u64]) -> Vec<(usize, u64)> {
    freq.iter()
        .enumerate()
        .filter(|&(_, &f)| f > 0)
        .map(|(v, &f)| (v, f))
        .collect()
}

/// Number of `(x, y, z) mod p^k` with `a x^2 + b y^2 + c z^2 = n (mod p^k)`.
pub fn local_count(coeffs: [u64; 3], n: u64, p: u64, k: u32) -> Result<u64> {
    let q = check_modulus(p, k)?;
    let f: Vec<Vec<u64>> = coeffs.iter().map(|&c| square_frequencies(c, q)).collect();
    let n = n % q;
    let mut total = 0u64;
    for (u, fu) in support(&f[0]) {
        for (v, fv) in support(&f[1]) {
            let w = (n + 2 * q - u as u64 - v as u64) % q;
            total += fu * fv * f[2][w as usize];
        }
    }
    Ok(total)
}

/// [`local_count`] for every residue `n mod p^k` at once.
pub fn local_count_all(coeffs: [u64; 3], p: u64, k: u32) -> Result<Vec<u64>> {
    let q = check_modulus(p, k)?;
    let qs = q as usize;
    let f: Vec<Vec<u64>> = coeffs.iter().map(|&c| square_frequencies(c, q)).collect();
    let mut pair = vec![0u64; qs];
    for (u, fu) in support(&f[0]) {
        for (v, fv) in support(&f[1]) {
            pair[(u + v) % qs] += fu * fv;
        }
    }
    let mut out = vec![0u64; qs];
    let s2 = support(&f[2]);
    for (u, &fu) in pair.iter().enumerate().filter(|(_, &f)| f > 0) {
        for &(w, fw) in &s2 {
            out[(u + w) % qs] += fu * fw;
        }
    }
    Ok(out)
}

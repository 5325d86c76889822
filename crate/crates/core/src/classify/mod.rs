//! Universality verdicts with a clause-by-clause trace.
//!
//! A form is *universal* if it represents every natural number, *almost
//! universal* if it misses only finitely many, and *asymptotically
//! universal* if it represents every sufficiently large integer that it
//! represents locally everywhere, with local obstructions limited to the
//! trivial ones.
//!
//! Asymptotic universality is decided exactly by residue conditions. Almost
//! universality is decided by a list of conditions describing when a
//! spinor-exceptional square class escapes representation. For some 2-adic
//! shapes of `stt` and `ttt` forms only one direction is known; those come
//! out [`TriState::Unknown`] with a gap tag.

mod lists;
pub mod shortcuts;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_qr, isqrt_u128, Factorization};
use crate::forms::{FormKind, MixedForm, Parity};
use crate::local::two_adic_ok;

pub use lists::{is_universal, universal_forms};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
        })
    }
}

/// Almost-universality verdict. `gap_tag` names the open case when the
/// value is `Unknown`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlmostVerdict {
    pub value: TriState,
    pub gap_tag: Option<String>,
}

impl AlmostVerdict {
    fn known(yes: bool) -> Self {
        AlmostVerdict {
            value: if yes { TriState::Yes } else { TriState::No },
            gap_tag: None,
        }
    }
}

/// One evaluated clause.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub clause: String,
    pub inputs: String,
    pub outcome: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub form: MixedForm,
    /// The form with its same-type slots reordered as the criteria expect.
    pub normalized: MixedForm,
    /// `permutation[i]` is the slot of `form` that became slot `i`.
    pub permutation: [usize; 3],
    pub universal: bool,
    pub asymptotically_universal: bool,
    pub almost_universal: AlmostVerdict,
    pub trace: Vec<TraceEntry>,
}

#[derive(Default)]
struct Trace(Vec<TraceEntry>);

impl Trace {
    fn push(&mut self, clause: &str, inputs: String, outcome: bool) -> bool {
        self.0.push(TraceEntry {
            clause: clause.to_string(),
            inputs,
            outcome,
        });
        outcome
    }
}

fn v2(n: u64) -> u32 {
    n.trailing_zeros()
}

fn odd(n: u64) -> u64 {
    n >> n.trailing_zeros()
}

/// Reorder slots of equal type: larger 2-adic valuation first, ties broken
/// by larger value. This puts `v2(a) >= v2(b)` for `sst`, `v2(b) >= v2(c)`
/// for `stt` and `v2(a) >= v2(b) >= v2(c)` with the smaller odd coefficient
/// last for `ttt`.
pub fn normalize(form: &MixedForm) -> (MixedForm, [usize; 3]) {
    let coeffs = form.coeffs();
    let key = |s: usize| std::cmp::Reverse((v2(coeffs[s]), coeffs[s]));
    let mut perm = [0usize, 1, 2];
    match form.kind() {
        FormKind::TwoSquaresOneTri => perm[..2].sort_by_key(|&s| key(s)),
        FormKind::OneSquareTwoTri => perm[1..].sort_by_key(|&s| key(s)),
        FormKind::ThreeTri => perm.sort_by_key(|&s| key(s)),
    }
    let c = perm.map(|s| coeffs[s]);
    let normalized = MixedForm::new(form.kind(), c[0], c[1], c[2]).expect("same coefficients");
    (normalized, perm)
}

/// Whether some integer point satisfies `c1 x^2 + c2 y^2 + c3 z^2 = target`
/// with the given variables odd.
pub fn condition3_solver(coeffs: [u128; 3], parity: [Parity; 3], target: u128) -> bool {
    let start = |p: Parity| u128::from(p == Parity::Odd);
    let step = |p: Parity| if p == Parity::Odd { 2 } else { 1 };
    let mut x = start(parity[0]);
    while coeffs[0] * x * x <= target {
        let rest_x = target - coeffs[0] * x * x;
        let mut y = start(parity[1]);
        while coeffs[1] * y * y <= rest_x {
            let rest = rest_x - coeffs[1] * y * y;
            if rest.is_multiple_of(coeffs[2]) {
                let z2 = rest / coeffs[2];
                let z = isqrt_u128(z2);
                if z * z == z2 && (parity[2] == Parity::Any || z % 2 == 1) {
                    return true;
                }
            }
            y += step(parity[1]);
        }
        x += step(parity[0]);
    }
    false
}

/// Whether the form is universal.
pub fn classify_universal(form: &MixedForm) -> bool {
    is_universal(form)
}

/// Asymptotic universality with its trace.
pub fn classify_asymptotic(form: &MixedForm) -> (bool, Vec<TraceEntry>) {
    let mut t = Trace::default();
    let ok = asymptotic_into(form, &mut t);
    (ok, t.0)
}

fn asymptotic_into(form: &MixedForm, t: &mut Trace) -> bool {
    let [a, b, c] = form.coeffs();
    let g = gcd(gcd(a, b), c);
    if !t.push("primitive", format!("gcd(a,b,c)={g}"), g == 1) {
        return false;
    }
    let (ai, bi, ci) = (a as i128, b as i128, c as i128);
    // Each slot's relation: the product of the other two coefficients,
    // times 2 when the slot pairing calls for it, must be a nonzero square
    // modulo the odd part of the slot coefficient.
    let (mult, names): ([i128; 3], [&str; 3]) = match form.kind() {
        FormKind::TwoSquaresOneTri => ([2, 2, 1], ["-2bc", "-2ac", "-ab"]),
        FormKind::OneSquareTwoTri => ([1, 2, 2], ["-bc", "-2ac", "-2ab"]),
        FormKind::ThreeTri => ([1, 1, 1], ["-bc", "-ac", "-ab"]),
    };
    let residues = [-mult[0] * bi * ci, -mult[1] * ai * ci, -mult[2] * ai * bi];
    let moduli = [odd(a), odd(b), odd(c)];
    let mut ok = true;
    for (i, slot) in ["a", "b", "c"].iter().enumerate() {
        let holds = is_qr(residues[i], moduli[i]);
        ok &= t.push(
            &format!("{}.residue.{slot}", form.kind().short_name()),
            format!("{}={} R {slot}'={}", names[i], residues[i], moduli[i]),
            holds,
        );
    }
    let two = two_adic_ok(form);
    let inputs = match form.kind() {
        FormKind::TwoSquaresOneTri => format!("v2(c)={}, v2(ab)={}", v2(c), v2(a) + v2(b)),
        FormKind::OneSquareTwoTri => format!("v2(b)={}, v2(c)={}", v2(b), v2(c)),
        FormKind::ThreeTri => "none".to_string(),
    };
    ok &= t.push(&format!("{}.two_adic", form.kind().short_name()), inputs, two);
    ok
}

/// Data shared by the almost-universality criteria.
struct Shape {
    a: u64,
    b: u64,
    c: u64,
    va: u32,
    vb: u32,
    vc: u32,
    /// `SF(a'b'c')` and its (odd) prime divisors.
    sf: u128,
    sf_primes: Vec<u64>,
}

impl Shape {
    fn new(form: &MixedForm) -> Self {
        let [a, b, c] = form.coeffs();
        let f = Factorization::of_product(&[odd(a), odd(b), odd(c)]).expect("positive");
        let sf_primes = f
            .factors()
            .iter()
            .filter(|&&(_, e)| e % 2 == 1)
            .map(|&(p, _)| p)
            .collect();
        Shape {
            a,
            b,
            c,
            va: v2(a),
            vb: v2(b),
            vc: v2(c),
            sf: f.squarefree_part(),
            sf_primes,
        }
    }

    fn primes_all(&self, residues: &[u64], modulus: u64) -> bool {
        self.sf_primes.iter().all(|p| residues.contains(&(p % modulus)))
    }

    fn primes_listing(&self) -> String {
        let ps: Vec<String> = self.sf_primes.iter().map(u64::to_string).collect();
        format!("SF(a'b'c')={} primes=[{}]", self.sf, ps.join(","))
    }

    /// `SF(abc) mod 2`: it is even iff the total 2-adic valuation is odd.
    fn sf_abc_parity(&self) -> u32 {
        1 - (self.va + self.vb + self.vc) % 2
    }

    /// Prime condition shared by `stt` and `ttt`: which residue set the
    /// primes of `SF(a'b'c')` must lie in depends on whether `SF(abc)` and
    /// `n` have the same parity.
    fn prime_clause(&self, t: &mut Trace, label: &str, n: u64, same_gives_1_3_mod_8: bool) -> bool {
        let same = self.sf_abc_parity() == (n % 2) as u32;
        let one_three = same == same_gives_1_3_mod_8;
        let holds = if one_three {
            self.primes_all(&[1, 3], 8)
        } else {
            self.primes_all(&[1], 4)
        };
        t.push(
            label,
            format!(
                "{}, SF(abc) parity {} vs {n}: need {}",
                self.primes_listing(),
                self.sf_abc_parity(),
                if one_three { "1,3 mod 8" } else { "1 mod 4" }
            ),
            holds,
        )
    }
}

fn sst_almost(form: &MixedForm, t: &mut Trace) -> AlmostVerdict {
    let s = Shape::new(form);
    let (a, b, c) = (s.a, s.b, s.c);
    let cond1 = {
        let even_a = a % 2 == 0;
        let c_ok = s.vc < 2;
        let congr = c_ok && (odd(a) as i128 - odd(b) as i128) % (1 << (3 - s.vc)) == 0;
        let b_clause = b % 4 == 0 || s.va % 2 == (c % 2) as u32;
        let odd_clause = b % 2 == 0 || c % 2 == 0 || (a % 8 == 0 && (b as i128 - c as i128) % 8 == 0);
        t.push(
            "sst.cond1",
            format!(
                "2|a:{even_a} 4∤c:{c_ok} a'=b' mod 2^(3-v2(c)):{congr} (4∤b => v2(a)=c mod 2):{b_clause} (2∤bc => 8|a,8|b-c):{odd_clause}"
            ),
            even_a && c_ok && congr && b_clause && odd_clause,
        )
    };
    if !cond1 {
        return AlmostVerdict::known(true);
    }
    let same = s.va % 2 == s.vb % 2;
    let cond2 = t.push(
        "sst.cond2",
        format!(
            "{}, v2(a)={} v2(b)={}: need {}",
            s.primes_listing(),
            s.va,
            s.vb,
            if same { "1 mod 4" } else { "1,3 mod 8" }
        ),
        if same {
            s.primes_all(&[1], 4)
        } else {
            s.primes_all(&[1, 3], 8)
        },
    );
    if !cond2 {
        return AlmostVerdict::known(true);
    }
    let k = 1u128 << (3 - s.vc);
    let coeffs = [k * a as u128, k * b as u128, odd(c) as u128];
    let solvable = condition3_solver(coeffs, [Parity::Any; 3], s.sf);
    let cond3 = t.push(
        "sst.cond3",
        format!("{}x^2+{}y^2+{}z^2={} solvable:{solvable}", coeffs[0], coeffs[1], coeffs[2], s.sf),
        !solvable,
    );
    AlmostVerdict::known(!cond3)
}

/// `x mod 2^k` comparison for possibly large `x`.
fn congruent(x: u128, y: u128, k: u32) -> bool {
    let m = 1u128 << k;
    x % m == y % m
}

fn stt_almost(form: &MixedForm, t: &mut Trace) -> AlmostVerdict {
    let s = Shape::new(form);
    let (a, b, c) = (s.a, s.b, s.c);
    let bc = b + c;
    let v = v2(bc);
    let cond1 = {
        let low = v < 2;
        let congr = low && congruent(s.sf, odd(bc) as u128, 3 - v);
        t.push(
            "stt.cond1",
            format!("v2(b+c)={v}, SF(a'b'c')={} vs (b+c)'={} mod 2^(3-v)", s.sf, odd(bc)),
            low && congr,
        )
    };
    let cond2 = cond1 && s.prime_clause(t, "stt.cond2", bc, true);
    let cond3 = cond2 && {
        let coeffs = [8 * a as u128, b as u128, c as u128];
        let target = s.sf << v;
        let solvable = condition3_solver(coeffs, [Parity::Any, Parity::Odd, Parity::Odd], target);
        t.push(
            "stt.cond3",
            format!("{}x^2+{}y^2+{}z^2={target}, y,z odd, solvable:{solvable}", coeffs[0], b, c),
            !solvable,
        )
    };
    if !cond3 {
        return AlmostVerdict::known(true);
    }
    let (va, vb) = (s.va, s.vb);
    let inputs = format!("v2(a)={va} v2(b)={vb} a={a} c={c}");
    if vb == 3 || vb == 4 {
        let nec = if vb == 3 {
            a % 4 == 0 || c % 2 == 0
        } else {
            a % 2 == 0 || a % 8 == c % 8
        };
        if !t.push("stt.necessary", inputs.clone(), nec) {
            return AlmostVerdict::known(true);
        }
        let suff = va % 2 == 1 && (vb == 4 || (va >= 3 && odd(b) % 8 == odd(c) % 8));
        if t.push("stt.sufficient", inputs, suff) {
            return AlmostVerdict::known(false);
        }
        return AlmostVerdict {
            value: TriState::Unknown,
            gap_tag: Some(format!("open:stt:v2(b)={vb}")),
        };
    }
    let cond4 = match vb {
        0 | 1 => va >= vb + 2 && (va - vb) % 2 == 0,
        2 => va % 2 == 1,
        _ if vb % 2 == 1 => a % 4 == 0 || c % 2 == 0,
        _ => a % 2 == 0 || a % 8 == c % 8,
    };
    let cond4 = t.push("stt.cond4", inputs, cond4);
    AlmostVerdict::known(!cond4)
}

fn ttt_almost(form: &MixedForm, t: &mut Trace) -> AlmostVerdict {
    let s = Shape::new(form);
    let (a, b, c) = (s.a, s.b, s.c);
    let n = a + b + c;
    let v = v2(n);
    let cond1 = {
        let low = v < 2;
        let congr = low && congruent(s.sf, odd(n) as u128, 3 - v);
        t.push(
            "ttt.cond1",
            format!("v2(a+b+c)={v}, SF(a'b'c')={} vs (a+b+c)'={} mod 2^(3-v)", s.sf, odd(n)),
            low && congr,
        )
    };
    let cond2 = cond1 && s.prime_clause(t, "ttt.cond2", n, false);
    let cond3 = cond2 && {
        let coeffs = [a as u128, b as u128, c as u128];
        let target = s.sf << v;
        let solvable = condition3_solver(coeffs, [Parity::Odd; 3], target);
        t.push(
            "ttt.cond3",
            format!("{a}x^2+{b}y^2+{c}z^2={target}, x,y,z odd, solvable:{solvable}"),
            !solvable,
        )
    };
    if !cond3 {
        return AlmostVerdict::known(true);
    }
    let (va, vb) = (s.va, s.vb);
    let inputs = format!("v2(a)={va} v2(b)={vb} b'={} c={c}", odd(b));
    let cond4 = match vb {
        0 | 1 => va >= vb + 3 && (va - vb) % 2 == 1,
        2 => va % 2 == 0,
        _ => true,
    };
    if !t.push("ttt.cond4", inputs.clone(), cond4) {
        return AlmostVerdict::known(true);
    }
    let stronger = match vb {
        0 | 1 => va >= vb + 5 && (va - vb) % 2 == 1,
        2 | 4 => va >= 4 && va % 2 == 0,
        3 => va >= 6 && va % 2 == 0 && odd(b) % 8 == c % 8,
        _ => true,
    };
    if t.push("ttt.stronger", inputs, stronger) {
        return AlmostVerdict::known(false);
    }
    AlmostVerdict {
        value: TriState::Unknown,
        gap_tag: Some(format!("open:ttt:v2(a)={va},v2(b)={vb}")),
    }
}

/// Almost universality of a form, assumed normalized and asymptotically
/// universal.
/// The form of the other triangular family representing the same integers,
/// from `T_x + T_y ~ x^2 + 2T_y`.
fn equal_pair_partner(form: &MixedForm) -> Option<MixedForm> {
    let [a, b, c] = form.coeffs();
    match form.kind() {
        FormKind::ThreeTri => {
            let (p, q) = if a == b {
                (a, c)
            } else if b == c {
                (b, a)
            } else if a == c {
                (a, b)
            } else {
                return None;
            };
            MixedForm::stt(p, 2 * p, q).ok()
        }
        FormKind::OneSquareTwoTri if b == 2 * a => MixedForm::ttt(a, a, c).ok(),
        FormKind::OneSquareTwoTri if c == 2 * a => MixedForm::ttt(a, a, b).ok(),
        _ => None,
    }
}

fn almost_into(form: &MixedForm, t: &mut Trace) -> AlmostVerdict {
    let verdict = family_almost(form, t);
    if verdict.value != TriState::Unknown {
        return verdict;
    }
    let Some(partner) = equal_pair_partner(form) else {
        return verdict;
    };
    let partner = normalize(&partner).0;
    let mut side = Trace::default();
    let other = if asymptotic_into(&partner, &mut side) {
        family_almost(&partner, &mut side)
    } else {
        AlmostVerdict::known(false)
    };
    let decided = other.value != TriState::Unknown;
    t.push("equivalent_form", format!("{partner}: {}", other.value), decided);
    if decided {
        other
    } else {
        verdict
    }
}

fn family_almost(form: &MixedForm, t: &mut Trace) -> AlmostVerdict {
    match form.kind() {
        FormKind::TwoSquaresOneTri => sst_almost(form, t),
        FormKind::OneSquareTwoTri => stt_almost(form, t),
        FormKind::ThreeTri => ttt_almost(form, t),
    }
}

/// Almost universality with its trace.
pub fn classify_almost(form: &MixedForm) -> (AlmostVerdict, Vec<TraceEntry>) {
    let (normalized, _) = normalize(form);
    let mut t = Trace::default();
    let verdict = if asymptotic_into(&normalized, &mut t) {
        almost_into(&normalized, &mut t)
    } else {
        AlmostVerdict::known(false)
    };
    (verdict, t.0)
}

/// Forms shown elsewhere not to be almost universal by arguments outside
/// the criteria. They only ever add a trace note.
const KNOWN_NOT_ALMOST_UNIVERSAL: [(FormKind, [u64; 3], &str); 5] = [
    (FormKind::ThreeTri, [1, 4, 4], "exceptions include T_m - 1 for infinitely many m"),
    (FormKind::ThreeTri, [1, 1, 8], "exceptions include 2T_m - 1 for infinitely many m"),
    (FormKind::ThreeTri, [48, 2, 1], "special argument"),
    (FormKind::OneSquareTwoTri, [4, 8, 1], "same exceptions as T_x + 4T_y + 4T_z"),
    (FormKind::OneSquareTwoTri, [1, 8, 2], "same exceptions as T_x + T_y + 8T_z"),
];

fn annotate(normalized: &MixedForm, t: &mut Trace) {
    for (kind, [a, b, c], why) in KNOWN_NOT_ALMOST_UNIVERSAL {
        let known = MixedForm::new(kind, a, b, c).expect("valid coefficients");
        if normalize(&known).0 == *normalized {
            t.push("annotation.known_not_almost_universal", format!("{known}: {why}"), true);
        }
    }
}

/// Full classification of a form.
pub fn classify(form: &MixedForm) -> Classification {
    let (normalized, permutation) = normalize(form);
    let mut t = Trace::default();
    let universal = t.push("universal.list", normalized.to_string(), is_universal(form));
    let asymptotic = asymptotic_into(&normalized, &mut t);
    let almost = if asymptotic {
        almost_into(&normalized, &mut t)
    } else {
        AlmostVerdict::known(false)
    };
    annotate(&normalized, &mut t);
    Classification {
        form: *form,
        normalized,
        permutation,
        universal,
        asymptotically_universal: asymptotic,
        almost_universal: almost,
        trace: t.0,
    }
}

//! The three families of mixed forms, direct evaluation and representation
//! tests, and the passage to diagonal ternary quadratic forms with parity
//! constraints.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_square, is_triangular, isqrt_u128};
use crate::error::{Error, Result};

pub const MAX_COEFFICIENT: u64 = 1 << 32;
pub const MAX_VARIABLE: i64 = 1 << 20;

/// Which slots hold squares and which hold triangular numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    /// `ax^2 + by^2 + cT_z`
    #[serde(rename = "sst")]
    TwoSquaresOneTri,
    /// `ax^2 + bT_y + cT_z`
    #[serde(rename = "stt")]
    OneSquareTwoTri,
    /// `aT_x + bT_y + cT_z`
    #[serde(rename = "ttt")]
    ThreeTri,
}

impl FormKind {
    pub const ALL: [FormKind; 3] = [
        FormKind::TwoSquaresOneTri,
        FormKind::OneSquareTwoTri,
        FormKind::ThreeTri,
    ];

    /// Number of square slots; they always come first.
    pub fn squares(self) -> usize {
        match self {
            FormKind::TwoSquaresOneTri => 2,
            FormKind::OneSquareTwoTri => 1,
            FormKind::ThreeTri => 0,
        }
    }

    pub fn is_square_slot(self, slot: usize) -> bool {
        slot < self.squares()
    }

    pub fn short_name(self) -> &'static str {
        match self {
            FormKind::TwoSquaresOneTri => "sst",
            FormKind::OneSquareTwoTri => "stt",
            FormKind::ThreeTri => "ttt",
        }
    }
}

impl std::str::FromStr for FormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sst" | "two-squares-one-tri" => Ok(FormKind::TwoSquaresOneTri),
            "stt" | "one-square-two-tri" => Ok(FormKind::OneSquareTwoTri),
            "ttt" | "three-tri" => Ok(FormKind::ThreeTri),
            _ => Err(Error::Invalid(format!("unknown form kind `{s}`"))),
        }
    }
}

/// A form `a X + b Y + c Z` where each of `X, Y, Z` is a square or a
/// triangular number according to `kind`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MixedForm {
    kind: FormKind,
    coeffs: [u64; 3],
}

impl MixedForm {
    pub fn new(kind: FormKind, a: u64, b: u64, c: u64) -> Result<Self> {
        for x in [a, b, c] {
            if x == 0 || x > MAX_COEFFICIENT {
                return Err(Error::Coefficient(x));
            }
        }
        Ok(MixedForm { kind, coeffs: [a, b, c] })
    }

    pub fn sst(a: u64, b: u64, c: u64) -> Result<Self> {
        Self::new(FormKind::TwoSquaresOneTri, a, b, c)
    }

    pub fn stt(a: u64, b: u64, c: u64) -> Result<Self> {
        Self::new(FormKind::OneSquareTwoTri, a, b, c)
    }

    pub fn ttt(a: u64, b: u64, c: u64) -> Result<Self> {
        Self::new(FormKind::ThreeTri, a, b, c)
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn coeffs(&self) -> [u64; 3] {
        self.coeffs
    }

    pub fn a(&self) -> u64 {
        self.coeffs[0]
    }

    pub fn b(&self) -> u64 {
        self.coeffs[1]
    }

    pub fn c(&self) -> u64 {
        self.coeffs[2]
    }

    /// The value `coef * x^2` or `coef * T_x` in `slot`.
    fn slot_value(&self, slot: usize, x: i64) -> Option<u128> {
        let x = x as i128;
        let base = if self.kind.is_square_slot(slot) {
            x * x
        } else {
            x * (x + 1) / 2
        } as u128;
        base.checked_mul(self.coeffs[slot] as u128)
    }

    /// The integral ternary form with parity constraints attached to this
    /// form: `n` is represented iff `8n + offset` is represented by the
    /// quadratic form with the constrained variables odd.
    pub fn associated_quadratic(&self) -> DiagonalQuadratic {
        let [a, b, c] = self.coeffs;
        use Parity::*;
        match self.kind {
            FormKind::TwoSquaresOneTri => DiagonalQuadratic {
                coeffs: [8 * a, 8 * b, c],
                parity: [Any, Any, Odd],
                scale: 8,
                offset: c,
            },
            FormKind::OneSquareTwoTri => DiagonalQuadratic {
                coeffs: [8 * a, b, c],
                parity: [Any, Odd, Odd],
                scale: 8,
                offset: b + c,
            },
            FormKind::ThreeTri => DiagonalQuadratic {
                coeffs: [a, b, c],
                parity: [Odd, Odd, Odd],
                scale: 8,
                offset: a + b + c,
            },
        }
    }
}

impl fmt::Display for MixedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars = ["x", "y", "z"];
        for slot in 0..3 {
            if slot > 0 {
                f.write_str(" + ")?;
            }
            let c = self.coeffs[slot];
            if c != 1 {
                write!(f, "{c}")?;
            }
            if self.kind.is_square_slot(slot) {
                write!(f, "{}^2", vars[slot])?;
            } else {
                write!(f, "T_{}", vars[slot])?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Any,
    Odd,
}

/// `c1 x^2 + c2 y^2 + c3 z^2` with some variables forced odd; a mixed form
/// represents `n` iff this represents `scale * n + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagonalQuadratic {
    pub coeffs: [u64; 3],
    pub parity: [Parity; 3],
    pub scale: u64,
    pub offset: u64,
}

/// Evaluate the form at an integer point.
pub fn evaluate(form: &MixedForm, x: i64, y: i64, z: i64) -> Result<u64> {
    let mut total = 0u128;
    for (slot, v) in [x, y, z].into_iter().enumerate() {
        if v.unsigned_abs() > MAX_VARIABLE as u64 {
            return Err(Error::Variable(v));
        }
        let term = form.slot_value(slot, v).ok_or(Error::Overflow("evaluate"))?;
        total += term;
    }
    u64::try_from(total).map_err(|_| Error::Overflow("evaluate"))
}

/// Whether `rest / coef` is a square (or triangular number) for the given
/// slot type.
fn slot_hits(square: bool, coef: u64, rest: u64) -> bool {
    if !rest.is_multiple_of(coef) {
        return false;
    }
    let q = rest / coef;
    if square {
        is_square(q)
    } else {
        is_triangular(q)
    }
}

/// Values `coef * x^2` (or `coef * T_x`), `x >= 0`, up to `limit`.
pub(crate) fn slot_values(square: bool, coef: u64, limit: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = 0u64;
    loop {
        let base = if square { x * x } else { x * (x + 1) / 2 };
        match base.checked_mul(coef) {
            Some(v) if v <= limit => out.push(v),
            _ => break,
        }
        x += 1;
    }
    out
}

/// Whether the form represents `n`.
///
/// The two slots with the largest coefficients are enumerated and the last
/// is solved in closed form. Negative `x` never needs checking because
/// `x^2` and `T_x` both take all their values on `x >= 0`.
pub fn represents(form: &MixedForm, n: u64) -> bool {
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&s| std::cmp::Reverse(form.coeffs[s]));
    let [s0, s1, s2] = order;
    let k = form.kind;
    for u in slot_values(k.is_square_slot(s0), form.coeffs[s0], n) {
        for v in slot_values(k.is_square_slot(s1), form.coeffs[s1], n - u) {
            if slot_hits(k.is_square_slot(s2), form.coeffs[s2], n - u - v) {
                return true;
            }
        }
    }
    false
}

/// Number of integer points `(x, y, z)` of any sign, respecting the parity
/// constraints, with `Q(x, y, z) = m`.
pub fn restricted_count(q: &DiagonalQuadratic, m: u64) -> u64 {
    // Nonnegative values in a slot together with their multiplicity.
    let values = |slot: usize, limit: u64| -> Vec<(u64, u64)> {
        let c = q.coeffs[slot];
        let odd = q.parity[slot] == Parity::Odd;
        let mut out = Vec::new();
        let mut x = u64::from(odd);
        while let Some(v) = x.checked_mul(x).and_then(|s| s.checked_mul(c)) {
            if v > limit {
                break;
            }
            out.push((v, if x == 0 { 1 } else { 2 }));
            x += if odd { 2 } else { 1 };
        }
        out
    };
    let mut total = 0u64;
    let c3 = q.coeffs[2];
    for (u, mu) in values(0, m) {
        for (v, mv) in values(1, m - u) {
            let rest = m - u - v;
            if !rest.is_multiple_of(c3) {
                continue;
            }
            let z2 = rest / c3;
            let z = isqrt_u128(z2 as u128) as u64;
            if z * z != z2 {
                continue;
            }
            let ok = match q.parity[2] {
                Parity::Any => true,
                Parity::Odd => z % 2 == 1,
            };
            if ok {
                total += mu * mv * if z == 0 { 1 } else { 2 };
            }
        }
    }
    total
}

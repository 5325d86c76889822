//! Spinor norms of diagonal 2-adic lattices and the spinor-exception test at
//! the prime 2.
//!
//! Everything lives in `Q_2^x / (Q_2^x)^2`, a group of order 8 with
//! representatives `1, 3, 5, 7, 2, 6, 10, 14`. A subset is stored as an
//! 8-bit mask.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{hilbert2, squarefree_part};
use crate::error::{Error, Result};

/// A class in `Q_2^x / (Q_2^x)^2`: the parity of the valuation and the unit
/// part mod 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    odd_valuation: bool,
    unit: u8,
}

impl SquareClass {
    pub const ONE: SquareClass = SquareClass { odd_valuation: false, unit: 1 };

    /// All eight classes, units first.
    pub fn all() -> impl Iterator<Item = SquareClass> {
        (0..8).map(SquareClass::from_index)
    }

    /// The class of `2^valuation * unit`.
    pub fn new(valuation: u32, unit: i128) -> Result<Self> {
        if unit % 2 == 0 {
            return Err(Error::Invalid(format!("{unit} is not a 2-adic unit")));
        }
        Ok(SquareClass {
            odd_valuation: valuation % 2 == 1,
            unit: unit.rem_euclid(8) as u8,
        })
    }

    /// The class of a nonzero integer.
    pub fn of(n: i128) -> Result<Self> {
        let (k, u) = crate::arith::split_two(n)?;
        Self::new(k, u)
    }

    fn index(self) -> u8 {
        (u8::from(self.odd_valuation) << 2) | (self.unit >> 1)
    }

    fn from_index(i: u8) -> Self {
        SquareClass {
            odd_valuation: i & 4 != 0,
            unit: ((i & 3) << 1) | 1,
        }
    }

    pub fn is_unit(self) -> bool {
        !self.odd_valuation
    }

    pub fn mul(self, other: SquareClass) -> SquareClass {
        SquareClass {
            odd_valuation: self.odd_valuation ^ other.odd_valuation,
            unit: (self.unit * other.unit) % 8,
        }
    }

    /// The smallest positive integer in the class.
    pub fn representative(self) -> i128 {
        let u = self.unit as i128;
        if self.odd_valuation {
            2 * u
        } else {
            u
        }
    }

    pub fn hilbert(self, other: SquareClass) -> i8 {
        hilbert2(self.representative(), other.representative()).expect("nonzero")
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

/// A subset of the eight square classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SquareClassSet(u8);

impl SquareClassSet {
    pub const EMPTY: SquareClassSet = SquareClassSet(0);
    pub const ALL: SquareClassSet = SquareClassSet(0xff);

    pub fn insert(&mut self, c: SquareClass) {
        self.0 |= 1 << c.index();
    }

    pub fn contains(self, c: SquareClass) -> bool {
        self.0 >> c.index() & 1 == 1
    }

    pub fn is_subset(self, other: SquareClassSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: SquareClassSet) -> SquareClassSet {
        SquareClassSet(self.0 | other.0)
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = SquareClass> {
        SquareClass::all().filter(move |&c| self.contains(c))
    }

    pub fn is_subgroup(self) -> bool {
        self.contains(SquareClass::ONE)
            && self.iter().all(|x| self.iter().all(|y| self.contains(x.mul(y))))
    }

    /// The smallest subgroup containing the set.
    pub fn generated_subgroup(self) -> SquareClassSet {
        let mut g = SquareClassSet::EMPTY;
        g.insert(SquareClass::ONE);
        loop {
            let mut next = g;
            for x in g.iter() {
                for y in self.iter() {
                    next.insert(x.mul(y));
                }
            }
            if next == g {
                return g;
            }
            g = next;
        }
    }

    /// Build from integer representatives.
    pub fn of(values: &[i128]) -> Result<SquareClassSet> {
        let mut s = SquareClassSet::EMPTY;
        for &v in values {
            s.insert(SquareClass::of(v)?);
        }
        Ok(s)
    }
}

impl FromIterator<SquareClass> for SquareClassSet {
    fn from_iter<I: IntoIterator<Item = SquareClass>>(iter: I) -> Self {
        let mut s = SquareClassSet::EMPTY;
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Display for SquareClassSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut reps: Vec<i128> = self.iter().map(SquareClass::representative).collect();
        reps.sort_unstable();
        let parts: Vec<String> = reps.iter().map(i128::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The imaginary quadratic field `Q(sqrt(-d))`, `d` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ImaginaryField {
    /// `Q(i)`
    Gaussian,
    /// `Q(sqrt(-2))`
    RootMinusTwo,
    /// `Q(sqrt(-d))` for any other squarefree `d`.
    Other(u64),
}

impl ImaginaryField {
    /// `Q(sqrt(radicand))` for a negative radicand.
    pub fn from_radicand(radicand: i128) -> Result<Self> {
        if radicand >= 0 {
            return Err(Error::Invalid(format!("radicand {radicand} is not negative")));
        }
        let abs = u64::try_from(-radicand).map_err(|_| Error::Overflow("from_radicand"))?;
        Ok(match squarefree_part(abs)? {
            1 => ImaginaryField::Gaussian,
            2 => ImaginaryField::RootMinusTwo,
            d => ImaginaryField::Other(d),
        })
    }

    pub fn d(self) -> u64 {
        match self {
            ImaginaryField::Gaussian => 1,
            ImaginaryField::RootMinusTwo => 2,
            ImaginaryField::Other(d) => d,
        }
    }
}

impl fmt::Display for ImaginaryField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImaginaryField::Gaussian => f.write_str("Q(i)"),
            d => write!(f, "Q(sqrt(-{}))", d.d()),
        }
    }
}

/// Local norms at 2 from the completion of `field`.
pub fn norm_group(field: ImaginaryField) -> SquareClassSet {
    match field {
        ImaginaryField::Gaussian => SquareClassSet::of(&[1, 5, 2, 10]).unwrap(),
        ImaginaryField::RootMinusTwo => SquareClassSet::of(&[1, 3, 2, 6]).unwrap(),
        ImaginaryField::Other(d) => {
            let minus_d = SquareClass::of(-(d as i128)).expect("d is nonzero");
            SquareClass::all().filter(|g| g.hilbert(minus_d) == 1).collect()
        }
    }
}

/// Spinor norm group of the binary lattice `<1, 2^r alpha>` over `Z_2`,
/// `alpha` a unit, `r >= 1`.
pub fn binary_spinor_norm(alpha: i128, r: u32) -> Result<SquareClassSet> {
    let alpha = SquareClass::new(0, alpha)?;
    if r == 0 {
        return Err(Error::Invalid("binary spinor norm needs r >= 1".into()));
    }
    let two = SquareClass::of(2).unwrap();
    let minus_one = SquareClass::of(-1).unwrap();
    let five = SquareClass::of(5).unwrap();
    Ok(match r {
        1 | 3 => {
            let m = minus_one.mul(two).mul(alpha);
            SquareClass::all().filter(|g| g.hilbert(m) == 1).collect()
        }
        2 => {
            let m = minus_one.mul(alpha);
            SquareClass::all()
                .filter(|g| g.is_unit() && g.hilbert(m) == 1)
                .collect()
        }
        4 => [SquareClass::ONE, alpha, five, five.mul(alpha)].into_iter().collect(),
        _ => [SquareClass::ONE, alpha].into_iter().collect(),
    })
}

/// A diagonal lattice `<u1 2^e1, u2 2^e2, u3 2^e3>` over `Z_2`, rescaled and
/// reordered so that `0 = e1 <= e2 <= e3`. Spinor norms do not change under
/// scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lattice2 {
    units: [u8; 3],
    exps: [u32; 3],
    /// `perm[i]` is the input position of normalized slot `i`.
    perm: [usize; 3],
}

impl Lattice2 {
    /// From odd units and (possibly negative) exponents.
    pub fn new(units: [i128; 3], exps: [i64; 3]) -> Result<Self> {
        for u in units {
            if u % 2 == 0 {
                return Err(Error::Invalid(format!("{u} is not a 2-adic unit")));
            }
        }
        let mut perm = [0usize, 1, 2];
        perm.sort_by_key(|&i| exps[i]);
        let base = exps[perm[0]];
        Ok(Lattice2 {
            units: perm.map(|i| units[i].rem_euclid(8) as u8),
            exps: perm.map(|i| (exps[i] - base) as u32),
            perm,
        })
    }

    /// The lattice `<c1, c2, c3>` for positive integers.
    pub fn diagonal(coeffs: [u64; 3]) -> Result<Self> {
        let mut units = [0i128; 3];
        let mut exps = [0i64; 3];
        for (i, &c) in coeffs.iter().enumerate() {
            let k = crate::arith::v2(c)?;
            units[i] = (c >> k) as i128;
            exps[i] = k as i64;
        }
        Self::new(units, exps)
    }

    pub fn units(&self) -> [u8; 3] {
        self.units
    }

    pub fn exponents(&self) -> [u32; 3] {
        self.exps
    }

    pub fn permutation(&self) -> [usize; 3] {
        self.perm
    }

    pub fn r(&self) -> u32 {
        self.exps[1]
    }

    pub fn s(&self) -> u32 {
        self.exps[2]
    }
}

impl fmt::Display for Lattice2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..3)
            .map(|i| match self.exps[i] {
                0 => format!("{}", self.units[i]),
                e => format!("2^{e}*{}", self.units[i]),
            })
            .collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// Spinor norm group of a ternary lattice, as far as it can be determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinorNorm {
    /// All of `Q_2^x`.
    Full,
    Group(SquareClassSet),
    /// Outside the configurations this module can evaluate.
    Indeterminate,
}

impl SpinorNorm {
    /// Whether the group lies inside `n`; `None` when indeterminate.
    pub fn is_within(self, n: SquareClassSet) -> Option<bool> {
        match self {
            SpinorNorm::Full => Some(SquareClassSet::ALL.is_subset(n)),
            SpinorNorm::Group(g) => Some(g.is_subset(n)),
            SpinorNorm::Indeterminate => None,
        }
    }
}

impl fmt::Display for SpinorNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinorNorm::Full => f.write_str("full"),
            SpinorNorm::Group(g) => write!(f, "{g}"),
            SpinorNorm::Indeterminate => f.write_str("indeterminate"),
        }
    }
}

/// Spinor norm group of a normalized ternary lattice `<u1, 2^r u2, 2^s u3>`.
///
/// The group is everything when `{r, s-r}` meets `{1, 3}` and `{r, s, s-r}`
/// meets `{2, 4}`. Otherwise, for `0 < r < s` (and for `s >= 5` with
/// `r` in `{0, s}`) it is generated by the norms of the three binary
/// sublattices. A sublattice whose two exponents agree is outside the
/// binary table, so such lattices come out indeterminate.
pub fn ternary_spinor_norm(lattice: &Lattice2) -> SpinorNorm {
    let (r, s) = (lattice.r(), lattice.s());
    let meets = |xs: &[u32], ys: &[u32]| xs.iter().any(|x| ys.contains(x));
    if meets(&[r, s - r], &[1, 3]) && meets(&[r, s, s - r], &[2, 4]) {
        return SpinorNorm::Full;
    }
    if !((0 < r && r < s) || (s >= 5 && (r == 0 || r == s))) {
        return SpinorNorm::Indeterminate;
    }
    let mut union = SquareClassSet::EMPTY;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let diff = lattice.exps[j] - lattice.exps[i];
        if diff == 0 {
            return SpinorNorm::Indeterminate;
        }
        // <u_i, 2^diff u_j> scales to <1, 2^diff u_i u_j> since u_i^2 = 1 mod 8.
        let alpha = (lattice.units[i] as i128 * lattice.units[j] as i128) % 8;
        union = union.union(binary_spinor_norm(alpha, diff).expect("diff >= 1"));
    }
    SpinorNorm::Group(union.generated_subgroup())
}

/// Outcome of the spinor-exception test at 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpCheck {
    /// The local conditions for a primitive spinor exception hold at 2.
    ConditionsHold,
    /// One of the failure clauses applies.
    ConditionsFail,
    Indeterminate,
}

/// Three-valued conjunction and disjunction with `None` as unknown.
fn and3(xs: &[Option<bool>]) -> Option<bool> {
    if xs.contains(&Some(false)) {
        Some(false)
    } else if xs.contains(&None) {
        None
    } else {
        Some(true)
    }
}

fn or3(xs: &[Option<bool>]) -> Option<bool> {
    if xs.contains(&Some(true)) {
        Some(true)
    } else if xs.contains(&None) {
        None
    } else {
        Some(false)
    }
}

/// Decide at 2 whether `t` (through `v2(t)`) can be a primitive spinor
/// exception for the genus of `<c', 2^r b', 2^s a'>` relative to `field`.
///
/// `lattice` must be normalized with the unit `c'` in the first slot. The
/// precondition that the spinor norm of the lattice lies inside the norm
/// group is the caller's responsibility.
pub fn schulze_pillot_check(
    lattice: &Lattice2,
    t_valuation: u32,
    field: ImaginaryField,
) -> SpCheck {
    let n = norm_group(field);
    let (r, s) = (lattice.r() as i64, lattice.s() as i64);
    let vt = t_valuation as i64;
    let u = lattice.units.map(i128::from);
    let inside = |shift: i64| {
        let l = Lattice2::new(u, [r - shift, r, s]).expect("units are odd");
        ternary_spinor_norm(&l).is_within(n)
    };
    let not = |x: Option<bool>| x.map(|b| !b);
    let same_parity = (r + s - vt) % 2 == 0;
    let fails = if same_parity {
        let r_odd = r % 2 == 1;
        let l1 = inside(2);
        let l2 = inside(0);
        or3(&[
            Some(r_odd && vt >= r - 3),
            and3(&[
                Some(!r_odd),
                not(l1),
                Some((r != s && vt >= r - 2) || (r == s && vt >= r)),
            ]),
            and3(&[Some(!r_odd), l1, not(l2), Some(vt >= r)]),
            and3(&[Some(!r_odd), l1, l2, Some(vt >= s)]),
        ])
    } else {
        if !(0 < r && r < s) {
            return SpCheck::Indeterminate;
        }
        let r_odd = r % 2 == 1;
        let l1 = inside(3);
        or3(&[
            Some(!r_odd && vt >= r - 4),
            and3(&[Some(r_odd), not(l1), Some(vt >= r - 3)]),
            and3(&[Some(r_odd), l1, Some(vt >= s - 2)]),
        ])
    };
    match fails {
        Some(true) => SpCheck::ConditionsFail,
        Some(false) => SpCheck::ConditionsHold,
        None => SpCheck::Indeterminate,
    }
}

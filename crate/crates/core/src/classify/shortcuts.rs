//! Closed-form criteria for special families of forms.
//!
//! Each shortcut is named by the form it describes, e.g. `sst(a,2,1)` is
//! `ax^2 + 2y^2 + T_z` with parameter `a`. A shortcut lists the forms it
//! speaks about (several when they are known to share a verdict) and its
//! claim. These are independent of the general classifier and serve as a
//! cross-check for it.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{classify, TriState};
use crate::arith::{factorize, is_qr, Factorization};
use crate::error::{Error, Result};
use crate::forms::MixedForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShortcutId {
    Reciprocity,
    PairedForms,
    SstAB4C,
    SstA2C4C,
    SstAB2,
    SstA2B,
    SstA11,
    SstA22,
    SstA21,
    SstA24,
    SstA42,
    SstA31,
    SstA13,
    SstA26,
    SstA62,
    Sst11M,
    Sst21M,
    SstEvenPowerM,
    SstOddPowerM,
    SstTwoPowersM,
    SstA216,
    SstA250,
    SttA21,
    SttA41,
    Stt11M,
    SttPowerPowerM,
    Stt12M,
    SttPowerDoubleM,
    TttA21,
}

impl ShortcutId {
    pub const ALL: [ShortcutId; 29] = [
        ShortcutId::Reciprocity,
        ShortcutId::PairedForms,
        ShortcutId::SstAB4C,
        ShortcutId::SstA2C4C,
        ShortcutId::SstAB2,
        ShortcutId::SstA2B,
        ShortcutId::SstA11,
        ShortcutId::SstA22,
        ShortcutId::SstA21,
        ShortcutId::SstA24,
        ShortcutId::SstA42,
        ShortcutId::SstA31,
        ShortcutId::SstA13,
        ShortcutId::SstA26,
        ShortcutId::SstA62,
        ShortcutId::Sst11M,
        ShortcutId::Sst21M,
        ShortcutId::SstEvenPowerM,
        ShortcutId::SstOddPowerM,
        ShortcutId::SstTwoPowersM,
        ShortcutId::SstA216,
        ShortcutId::SstA250,
        ShortcutId::SttA21,
        ShortcutId::SttA41,
        ShortcutId::Stt11M,
        ShortcutId::SttPowerPowerM,
        ShortcutId::Stt12M,
        ShortcutId::SttPowerDoubleM,
        ShortcutId::TttA21,
    ];

    pub fn name(self) -> &'static str {
        use ShortcutId::*;
        match self {
            Reciprocity => "reciprocity",
            PairedForms => "paired-forms",
            SstAB4C => "sst(a,b,4c)",
            SstA2C4C => "sst(a,2c,4c)",
            SstAB2 => "sst(a,b,2)",
            SstA2B => "sst(a,2,b)",
            SstA11 => "sst(a,1,1)",
            SstA22 => "sst(a,2,2)",
            SstA21 => "sst(a,2,1)",
            SstA24 => "sst(a,2,4)",
            SstA42 => "sst(a,4,2)",
            SstA31 => "sst(a,3,1)",
            SstA13 => "sst(a,1,3)",
            SstA26 => "sst(a,2,6)",
            SstA62 => "sst(a,6,2)",
            Sst11M => "sst(1,1,m)",
            Sst21M => "sst(2,1,m)",
            SstEvenPowerM => "sst(4^k,1,m)",
            SstOddPowerM => "sst(2^(2k+1),1,m)",
            SstTwoPowersM => "sst(2^k,2^l,m)",
            SstA216 => "sst(a,216,1)",
            SstA250 => "sst(a,250,1)",
            SttA21 => "stt(a,2,1)",
            SttA41 => "stt(a,4,1)",
            Stt11M => "stt(1,1,m)",
            SttPowerPowerM => "stt(2^k,2^k,m)",
            Stt12M => "stt(1,2,m)",
            SttPowerDoubleM => "stt(2^k,2^(k+1),m)",
            TttA21 => "ttt(a,2,1)",
        }
    }

    /// Names of the parameters, in order.
    pub fn params(self) -> &'static [&'static str] {
        use ShortcutId::*;
        match self {
            Reciprocity | PairedForms | SstAB4C => &["a", "b", "c"],
            SstA2C4C => &["a", "c"],
            SstAB2 | SstA2B => &["a", "b"],
            Sst11M | Sst21M | Stt11M | Stt12M => &["m"],
            SstEvenPowerM | SstOddPowerM | SttPowerPowerM | SttPowerDoubleM => &["k", "m"],
            SstTwoPowersM => &["k", "l", "m"],
            _ => &["a"],
        }
    }
}

impl fmt::Display for ShortcutId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShortcutId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ShortcutId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::UnknownShortcut(s.to_string()))
    }
}

/// What a shortcut claims for its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ShortcutOutcome {
    /// A hypothesis of the shortcut fails; it says nothing.
    NotApplicable,
    /// Almost-universality verdict shared by all listed forms, and the
    /// asymptotic verdict when the shortcut also states one.
    Verdict {
        almost: TriState,
        asymptotic: Option<bool>,
    },
    /// None of the listed forms is asymptotically universal.
    NotAsymptotic,
    /// Forms 0 and 1 are both not asymptotically universal, or forms 2 and 3
    /// are.
    EitherPairNotAsymptotic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShortcutResult {
    pub id: &'static str,
    pub forms: Vec<MixedForm>,
    pub outcome: ShortcutOutcome,
}

impl ShortcutResult {
    /// Whether the general classifier agrees with this claim.
    pub fn agrees_with_classifier(&self) -> bool {
        let asym = |f: &MixedForm| classify(f).asymptotically_universal;
        match &self.outcome {
            ShortcutOutcome::NotApplicable => true,
            ShortcutOutcome::Verdict { almost, asymptotic } => self.forms.iter().all(|f| {
                let c = classify(f);
                c.almost_universal.value == *almost
                    && asymptotic.is_none_or(|a| a == c.asymptotically_universal)
            }),
            ShortcutOutcome::NotAsymptotic => self.forms.iter().all(|f| !asym(f)),
            ShortcutOutcome::EitherPairNotAsymptotic => {
                let f = &self.forms;
                (!asym(&f[0]) && !asym(&f[1])) || (!asym(&f[2]) && !asym(&f[3]))
            }
        }
    }
}

fn primes(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.primes().collect())
}

fn odd_primes(n: u64) -> Result<Vec<u64>> {
    Ok(factorize(n)?.odd_primes().collect())
}

fn all_mod(ps: &[u64], modulus: u64, residues: &[u64]) -> bool {
    ps.iter().all(|p| residues.contains(&(p % modulus)))
}

fn odd_part(n: u64) -> u64 {
    n >> n.trailing_zeros()
}

fn is_squarefree(n: u64) -> Result<bool> {
    Ok(factorize(n)?.factors().iter().all(|&(_, e)| e == 1))
}

fn sf_primes(n: u64) -> Result<Vec<u64>> {
    let f: Factorization = factorize(n)?;
    Ok(f.factors()
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(p, _)| p)
        .collect())
}

fn tri(yes: bool) -> TriState {
    if yes {
        TriState::Yes
    } else {
        TriState::No
    }
}

fn verdict(almost: TriState) -> ShortcutOutcome {
    ShortcutOutcome::Verdict { almost, asymptotic: None }
}

fn pow2(k: u64) -> Result<u64> {
    u32::try_from(k)
        .ok()
        .and_then(|k| 1u64.checked_shl(k))
        .filter(|&v| v <= crate::forms::MAX_COEFFICIENT)
        .ok_or_else(|| Error::Invalid(format!("2^{k} is too large")))
}

/// Evaluate a shortcut by name.
pub fn shortcut(id: &str, params: &[u64]) -> Result<ShortcutResult> {
    evaluate(id.parse()?, params)
}

/// Evaluate a shortcut.
pub fn evaluate(id: ShortcutId, params: &[u64]) -> Result<ShortcutResult> {
    use ShortcutId::*;
    let want = id.params().len();
    if params.len() != want {
        return Err(Error::Invalid(format!(
            "{id} takes {want} parameters ({}), got {}",
            id.params().join(","),
            params.len()
        )));
    }
    if params.contains(&0) {
        return Err(Error::Invalid(format!("{id}: parameters must be positive")));
    }
    let p = params;
    let sst = MixedForm::sst;
    let stt = MixedForm::stt;
    let ttt = MixedForm::ttt;
    let (forms, outcome) = match id {
        Reciprocity => {
            let [a, b, c] = [p[0], p[1], p[2]];
            let (a1, b1, c1) = (odd_part(a) % 8, odd_part(b) % 8, odd_part(c) % 8);
            let same_v = a.trailing_zeros() % 2 == b.trailing_zeros() % 2;
            let neg = |x: u64| (8 - x) % 8;
            let plus4 = (c1 + 4) % 8;
            let pattern_equal = a1 == b1 && b1 == plus4;
            let pattern_signed = neg(b1) == plus4 && (a1 == plus4 || neg(a1) == plus4);
            let all = [
                sst(a, b, c)?,
                stt(c, a, b)?,
                ttt(a, b, c)?,
                sst(a, c, b)?,
                stt(a, b, c)?,
            ];
            let chosen: &[MixedForm] = if a1 == b1 && b1 == neg(c1) {
                &all
            } else if (pattern_equal && !same_v) || (pattern_signed && same_v) {
                &all[..3]
            } else if (pattern_equal && same_v) || (pattern_signed && !same_v) {
                &all[3..]
            } else {
                &[]
            };
            if chosen.is_empty() {
                (Vec::new(), ShortcutOutcome::NotApplicable)
            } else {
                (chosen.to_vec(), ShortcutOutcome::NotAsymptotic)
            }
        }
        PairedForms => {
            let [a, b, c] = [p[0], p[1], p[2]];
            let forms = vec![
                sst(a, b, 2 * c)?,
                sst(a, c, 2 * b)?,
                sst(a, 2 * c, b)?,
                sst(a, 2 * b, c)?,
            ];
            let (a1, b1, c1) = (odd_part(a) % 4, odd_part(b) % 4, odd_part(c) % 4);
            let applies = b.trailing_zeros() % 2 == c.trailing_zeros() % 2
                && !(a1 == b1 && b1 == c1);
            if applies {
                (forms, ShortcutOutcome::EitherPairNotAsymptotic)
            } else {
                (forms, ShortcutOutcome::NotApplicable)
            }
        }
        SstAB4C => {
            let [a, b, c] = [p[0], p[1], p[2]];
            let form = sst(a, b, 4 * c)?;
            if c % 2 == 0 {
                (vec![form], ShortcutOutcome::NotApplicable)
            } else {
                let (ai, bi, ci) = (a as i128, b as i128, c as i128);
                let yes = a.trailing_zeros() + b.trailing_zeros() == 1
                    && is_qr(-ai * bi, c)
                    && is_qr(-2 * ai * ci, odd_part(b))
                    && is_qr(-2 * bi * ci, odd_part(a));
                (vec![form], verdict(tri(yes)))
            }
        }
        SstA2C4C => {
            let [a, c] = [p[0], p[1]];
            let forms = vec![sst(a, 2 * c, 4 * c)?, stt(a, 2 * c, 2 * c)?];
            if c % 2 == 0 {
                (forms, ShortcutOutcome::NotApplicable)
            } else {
                let yes = c == 1 && all_mod(&primes(a)?, 4, &[1]);
                (forms, verdict(tri(yes)))
            }
        }
        SstAB2 | SstA2B => {
            let [a, b] = [p[0], p[1]];
            let forms = if id == SstAB2 {
                vec![sst(a, b, 2)?, sst(a, 1, 2 * b)?]
            } else {
                vec![sst(a, 2, b)?, sst(a, 2 * b, 1)?]
            };
            let mut sf = sf_primes(odd_part(a))?;
            if b % 2 == 1 {
                sf.extend(sf_primes(b)?);
            }
            if b % 2 == 0 || !sf.iter().any(|p| p % 4 == 3) {
                (forms, ShortcutOutcome::NotApplicable)
            } else {
                let k = if id == SstAB2 { 1 } else { 2 };
                let yes = is_qr(-k * a as i128, b) && is_qr(-(b as i128), odd_part(a));
                (forms, verdict(tri(yes)))
            }
        }
        SstA11 => {
            let a = p[0];
            (vec![sst(a, 1, 1)?], verdict(tri(is_qr(-2, odd_part(a)))))
        }
        SstA22 => {
            let a = p[0];
            (vec![sst(a, 2, 2)?], verdict(tri(all_mod(&primes(a)?, 8, &[1, 3]))))
        }
        SstA21 => {
            let a = p[0];
            let forms = vec![sst(a, 2, 1)?, sst(a, 1, 2)?, stt(a, 1, 1)?];
            (forms, verdict(tri(is_qr(-1, odd_part(a)))))
        }
        SstA24 => {
            let a = p[0];
            let forms = vec![sst(a, 2, 4)?, stt(a, 2, 2)?];
            (forms, verdict(tri(all_mod(&primes(a)?, 4, &[1]))))
        }
        SstA42 => {
            let a = p[0];
            let yes = a % 8 == 1 && all_mod(&primes(a)?, 4, &[1]);
            (vec![sst(a, 4, 2)?], verdict(tri(yes)))
        }
        SstA31 | SstA13 | SstA26 | SstA62 => {
            let a = p[0];
            let (form, modulus, residue, ps) = match id {
                SstA31 => (sst(a, 3, 1)?, 3, 1, odd_primes(a)?),
                SstA13 => (sst(a, 1, 3)?, 3, 2, odd_primes(a)?),
                SstA26 => (sst(a, 2, 6)?, 6, 1, primes(a)?),
                _ => (sst(a, 6, 2)?, 6, 5, primes(a)?),
            };
            let yes = a % modulus == residue && ps.iter().all(|p| (p / 12) % 2 == 0);
            let outcome = ShortcutOutcome::Verdict {
                almost: tri(yes),
                asymptotic: Some(yes),
            };
            (vec![form], outcome)
        }
        Sst11M => {
            let m = p[0];
            let yes = !m.is_multiple_of(4) && all_mod(&odd_primes(m)?, 4, &[1]);
            (vec![sst(1, 1, m)?], verdict(tri(yes)))
        }
        Sst21M => {
            let m = p[0];
            let yes = !m.is_multiple_of(8) && all_mod(&odd_primes(m)?, 8, &[1, 3]);
            (vec![sst(2, 1, m)?], verdict(tri(yes)))
        }
        SstEvenPowerM => {
            let [k, m] = [p[0], p[1]];
            let form = sst(pow2(2 * k)?, 1, m)?;
            let yes = m % 4 != 0
                && is_qr(-1, odd_part(m))
                && (m.trailing_zeros() != 1 || is_squarefree(m)?);
            (vec![form], verdict(tri(yes)))
        }
        SstOddPowerM => {
            let [k, m] = [p[0], p[1]];
            let form = sst(pow2(2 * k + 1)?, 1, m)?;
            let yes = m % 4 != 0 && is_qr(-2, odd_part(m)) && (m % 8 != 1 || is_squarefree(m)?);
            (vec![form], verdict(tri(yes)))
        }
        SstTwoPowersM => {
            let [k, l, m] = [p[0], p[1], p[2]];
            if k < l {
                (vec![sst(pow2(k)?, pow2(l)?, m)?], ShortcutOutcome::NotApplicable)
            } else {
                let form = sst(pow2(k)?, pow2(l)?, m)?;
                let ps = primes(m)?;
                let asym = if k % 2 == l % 2 {
                    all_mod(&ps, 4, &[1])
                } else {
                    all_mod(&ps, 8, &[1, 3])
                };
                let yes = asym && (is_squarefree(m)? || (k % 2 == 0 && l == 1));
                let outcome = ShortcutOutcome::Verdict {
                    almost: tri(yes),
                    asymptotic: Some(asym),
                };
                (vec![form], outcome)
            }
        }
        SstA216 => {
            let a = p[0];
            let form = sst(a, 216, 1)?;
            let v = a.trailing_zeros();
            if a % 2 == 1 || v % 2 == 1 || !all_mod(&odd_primes(a)?, 3, &[1]) {
                (vec![form], ShortcutOutcome::NotApplicable)
            } else {
                let ps = sf_primes(odd_part(a))?;
                let nineteen = ps.iter().filter(|&&p| p % 24 == 19).count();
                let not_au = all_mod(&ps, 24, &[1, 19]) && nineteen % 2 == 1;
                let outcome = ShortcutOutcome::Verdict {
                    almost: tri(!not_au),
                    asymptotic: Some(true),
                };
                (vec![form], outcome)
            }
        }
        SstA250 => {
            let a = p[0];
            let form = sst(a, 250, 1)?;
            let a1 = odd_part(a);
            let applies = a.trailing_zeros() % 2 == 1
                && matches!(a1 % 10, 1 | 9)
                && primes(a1)?.iter().all(|p| (p / 10) % 2 == 0);
            if !applies {
                (vec![form], ShortcutOutcome::NotApplicable)
            } else {
                let not_au = matches!(a1 % 40, 21 | 29) && all_mod(&sf_primes(a1)?, 20, &[1, 9]);
                let outcome = ShortcutOutcome::Verdict {
                    almost: tri(!not_au),
                    asymptotic: Some(true),
                };
                (vec![form], outcome)
            }
        }
        SttA21 => {
            let a = p[0];
            (vec![stt(a, 2, 1)?], verdict(tri(all_mod(&odd_primes(a)?, 8, &[1, 3]))))
        }
        SttA41 => {
            let a = p[0];
            (vec![stt(a, 4, 1)?], verdict(tri(all_mod(&odd_primes(a)?, 4, &[1]))))
        }
        Stt11M => {
            let m = p[0];
            let primes_ok = all_mod(&odd_primes(m)?, 8, &[1, 3]);
            let v = m.trailing_zeros();
            let m1 = odd_part(m) % 8;
            let even_large = v >= 4 && v.is_multiple_of(2);
            let almost = if !primes_ok {
                TriState::No
            } else if m1 == 3 || !even_large {
                TriState::Yes
            } else if v == 4 {
                TriState::Unknown
            } else {
                TriState::No
            };
            (vec![stt(1, 1, m)?], verdict(almost))
        }
        SttPowerPowerM => {
            let [k, m] = [p[0], p[1]];
            let form = stt(pow2(k)?, pow2(k)?, m)?;
            let primes_ok = all_mod(&primes(m)?, 8, &[1, 3]);
            let almost = match k {
                3 if m % 8 == 1 => TriState::No,
                3 | 4 if primes_ok => TriState::Unknown,
                _ => tri((k == 1 || k == 2) && primes_ok),
            };
            (vec![form], verdict(almost))
        }
        Stt12M => {
            let m = p[0];
            let forms = vec![stt(1, 2, m)?, ttt(1, 1, m)?];
            let primes_ok = all_mod(&odd_primes(m)?, 4, &[1]);
            let v = m.trailing_zeros();
            let almost = if !primes_ok {
                TriState::No
            } else if v == 3 {
                TriState::Unknown
            } else {
                tri(!(v >= 5 && v % 2 == 1))
            };
            (forms, verdict(almost))
        }
        SttPowerDoubleM => {
            let [k, m] = [p[0], p[1]];
            let forms = vec![stt(pow2(k)?, pow2(k + 1)?, m)?, ttt(pow2(k)?, pow2(k)?, m)?];
            let primes_ok = all_mod(&primes(m)?, 4, &[1]);
            let almost = if !primes_ok {
                TriState::No
            } else if k == 2 {
                TriState::Unknown
            } else {
                tri(k == 1)
            };
            (forms, verdict(almost))
        }
        TttA21 => {
            let a = p[0];
            let primes_ok = all_mod(&odd_primes(a)?, 8, &[1, 3]);
            let v = a.trailing_zeros();
            let a1 = odd_part(a) % 8;
            let even_large = v >= 4 && v.is_multiple_of(2);
            let almost = if !primes_ok {
                TriState::No
            } else if a1 == 1 || !even_large {
                TriState::Yes
            } else if v == 4 {
                TriState::Unknown
            } else {
                TriState::No
            };
            (vec![ttt(a, 2, 1)?], verdict(almost))
        }
    };
    Ok(ShortcutResult {
        id: id.name(),
        forms,
        outcome,
    })
}

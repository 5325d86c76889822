//! The complete lists of universal forms in each family, up to swapping the
//! slots of the same type.

use crate::forms::{FormKind, MixedForm};

/// `ax^2 + by^2 + cT_z` with `a <= b`.
const SST: [[u64; 3]; 10] = [
    [1, 1, 1],
    [1, 1, 2],
    [1, 2, 1],
    [1, 2, 2],
    [1, 2, 4],
    [1, 3, 1],
    [1, 4, 1],
    [1, 4, 2],
    [1, 8, 1],
    [2, 2, 1],
];

/// `ax^2 + bT_y + cT_z` with `b >= c`.
const STT: [[u64; 3]; 15] = [
    [1, 1, 1],
    [1, 2, 1],
    [1, 2, 2],
    [1, 3, 1],
    [1, 4, 1],
    [1, 4, 2],
    [1, 5, 2],
    [1, 6, 1],
    [1, 8, 1],
    [2, 1, 1],
    [2, 2, 1],
    [2, 4, 1],
    [3, 2, 1],
    [4, 1, 1],
    [4, 2, 1],
];

/// `aT_x + bT_y + cT_z` with `a <= b <= c`.
const TTT: [[u64; 3]; 7] = [
    [1, 1, 1],
    [1, 1, 2],
    [1, 1, 4],
    [1, 1, 5],
    [1, 2, 2],
    [1, 2, 3],
    [1, 2, 4],
];

/// The coefficient vector in the order the lists use.
fn list_key(form: &MixedForm) -> [u64; 3] {
    let [a, b, c] = form.coeffs();
    match form.kind() {
        FormKind::TwoSquaresOneTri => [a.min(b), a.max(b), c],
        FormKind::OneSquareTwoTri => [a, b.max(c), b.min(c)],
        FormKind::ThreeTri => {
            let mut v = [a, b, c];
            v.sort_unstable();
            v
        }
    }
}

/// Whether the form represents every natural number.
pub fn is_universal(form: &MixedForm) -> bool {
    let key = list_key(form);
    let list: &[[u64; 3]] = match form.kind() {
        FormKind::TwoSquaresOneTri => &SST,
        FormKind::OneSquareTwoTri => &STT,
        FormKind::ThreeTri => &TTT,
    };
    list.contains(&key)
}

/// All universal forms of a family, in list order.
pub fn universal_forms(kind: FormKind) -> Vec<MixedForm> {
    let list: &[[u64; 3]] = match kind {
        FormKind::TwoSquaresOneTri => &SST,
        FormKind::OneSquareTwoTri => &STT,
        FormKind::ThreeTri => &TTT,
    };
    list.iter()
        .map(|&[a, b, c]| MixedForm::new(kind, a, b, c).expect("small coefficients"))
        .collect()
}

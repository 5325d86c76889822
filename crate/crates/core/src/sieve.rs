//! Exceptional sets `{ n <= N : n not represented }` by a bitset sieve.
//!
//! The two slots with the smallest coefficients are combined into a bitset
//! of their pairwise sums. The remaining slot has the fewest values, and for
//! each of them that bitset is OR-ed in shifted by the value. Work on the
//! outer values is split across threads, each with its own accumulator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{slot_values, MixedForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Largest bound accepted. A bitset to `10^7` is about 1.2 MB per worker.
    pub max_bound: u64,
    /// Worker threads; `0` means one per available core.
    pub workers: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            max_bound: 10_000_000,
            workers: 0,
        }
    }
}

/// The numbers up to `bound` that a form misses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalSetReport {
    pub form: MixedForm,
    pub bound: u64,
    pub exceptions: Vec<u64>,
    /// A finite bound only shows what happens below it.
    pub caveat: String,
}

impl ExceptionalSetReport {
    pub fn max(&self) -> Option<u64> {
        self.exceptions.last().copied()
    }

    /// Exceptions up to `limit` (which should not exceed `bound`).
    pub fn count_up_to(&self, limit: u64) -> usize {
        self.exceptions.partition_point(|&n| n <= limit)
    }
}

struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(len: u64) -> Self {
        Bits {
            words: vec![0; (len as usize).div_ceil(64)],
        }
    }

    fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }

    fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// `self |= src << shift`, dropping bits past the end.
    fn or_shifted(&mut self, src: &Bits, shift: u64) {
        let word = (shift / 64) as usize;
        let bit = (shift % 64) as u32;
        let len = self.words.len();
        if word >= len {
            return;
        }
        let dst = &mut self.words[word..];
        if bit == 0 {
            for (d, s) in dst.iter_mut().zip(&src.words) {
                *d |= s;
            }
        } else {
            dst[0] |= src.words[0] << bit;
            for i in 1..dst.len() {
                dst[i] |= (src.words[i] << bit) | (src.words[i - 1] >> (64 - bit));
            }
        }
    }

    fn or_assign(&mut self, other: &Bits) {
        for (d, s) in self.words.iter_mut().zip(&other.words) {
            *d |= s;
        }
    }
}

/// All `n <= bound` not represented by `form`.
pub fn exceptional_set(form: &MixedForm, bound: u64) -> Result<ExceptionalSetReport> {
    exceptional_set_with(form, bound, &SieveConfig::default())
}

pub fn exceptional_set_with(
    form: &MixedForm,
    bound: u64,
    config: &SieveConfig,
) -> Result<ExceptionalSetReport> {
    if bound > config.max_bound {
        return Err(Error::BoundTooLarge {
            bound,
            max: config.max_bound,
        });
    }
    let kind = form.kind();
    let coeffs = form.coeffs();
    let mut order = [0usize, 1, 2];
    order.sort_by_key(|&s| std::cmp::Reverse(coeffs[s]));
    let values: Vec<Vec<u64>> = order
        .iter()
        .map(|&s| slot_values(kind.is_square_slot(s), coeffs[s], bound))
        .collect();
    let len = bound + 1;

    let mut pairs = Bits::new(len);
    for &u in &values[1] {
        for &v in &values[2] {
            if u + v > bound {
                break;
            }
            pairs.set(u + v);
        }
    }

    let outer = &values[0];
    let workers = match config.workers {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        w => w,
    }
    .clamp(1, outer.len().max(1));
    let hit = if workers == 1 {
        let mut acc = Bits::new(len);
        for &w in outer {
            acc.or_shifted(&pairs, w);
        }
        acc
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|t| {
                    let pairs = &pairs;
                    scope.spawn(move || {
                        let mut acc = Bits::new(len);
                        for &w in outer.iter().skip(t).step_by(workers) {
                            acc.or_shifted(pairs, w);
                        }
                        acc
                    })
                })
                .collect();
            let mut total = Bits::new(len);
            for h in handles {
                total.or_assign(&h.join().expect("sieve worker panicked"));
            }
            total
        })
    };

    let exceptions = (0..len).filter(|&n| !hit.get(n)).collect();
    Ok(ExceptionalSetReport {
        form: *form,
        bound,
        exceptions,
        caveat: format!(
            "exceptions listed up to {bound} only; larger exceptions are not excluded by this computation"
        ),
    })
}

//! Regression corpus of published exception sets, largest exceptions,
//! universality lists and verdicts, and a runner that recomputes them.

use std::fmt;

use serde::Serialize;

use crate::classify::{classify, TriState};
use crate::error::{Error, Result};
use crate::forms::{FormKind, MixedForm};
use crate::sieve::{exceptional_set_with, SieveConfig};

/// The corpus shipped with the crate.
pub const CORPUS: &str = include_str!("../data/fixtures.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Universal,
    Set(Vec<u64>),
    Max(u64),
    Verdict {
        almost: Option<TriState>,
        asymptotic: Option<bool>,
        universal: Option<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub id: String,
    pub form: MixedForm,
    pub check: Check,
    pub note: String,
    /// What a search actually finds when it contradicts `check`.
    pub observed: Option<Vec<u64>>,
}

fn bad(line: usize, msg: impl fmt::Display) -> Error {
    Error::Invalid(format!("corpus line {line}: {msg}"))
}

fn yes_no(s: &str, line: usize) -> Result<bool> {
    match s {
        "yes" => Ok(true),
        "no" => Ok(false),
        _ => Err(bad(line, format!("expected yes/no, got `{s}`"))),
    }
}

/// Parse a corpus; fixtures come back sorted by id.
pub fn parse_corpus(text: &str) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('|').map(str::trim).collect();
        let (id, form, check, expected, note, observed) = match fields[..] {
            [id, form, check, expected, note] => (id, form, check, expected, note, None),
            [id, form, check, expected, note, obs] => (id, form, check, expected, note, Some(obs)),
            _ => return Err(bad(line, "expected 5 or 6 `|`-separated fields")),
        };
        let words: Vec<&str> = form.split_whitespace().collect();
        let [kind, a, b, c] = words[..] else {
            return Err(bad(line, "form must be `kind a b c`"));
        };
        let num = |s: &str| s.parse::<u64>().map_err(|e| bad(line, format!("`{s}`: {e}")));
        let kind: FormKind = kind.parse()?;
        let form = MixedForm::new(kind, num(a)?, num(b)?, num(c)?)?;
        let check = match check {
            "universal" => Check::Universal,
            "set" => Check::Set(
                expected
                    .split_whitespace()
                    .map(num)
                    .collect::<Result<Vec<_>>>()?,
            ),
            "max" => Check::Max(num(expected)?),
            "verdict" => {
                let (mut almost, mut asymptotic, mut universal) = (None, None, None);
                for pair in expected.split_whitespace() {
                    let (k, v) = pair
                        .split_once('=')
                        .ok_or_else(|| bad(line, format!("`{pair}` is not key=value")))?;
                    match k {
                        "almost" => {
                            almost = Some(match v {
                                "yes" => TriState::Yes,
                                "no" => TriState::No,
                                "unknown" => TriState::Unknown,
                                _ => return Err(bad(line, format!("bad verdict `{v}`"))),
                            })
                        }
                        "asymptotic" => asymptotic = Some(yes_no(v, line)?),
                        "universal" => universal = Some(yes_no(v, line)?),
                        _ => return Err(bad(line, format!("unknown key `{k}`"))),
                    }
                }
                Check::Verdict { almost, asymptotic, universal }
            }
            other => return Err(bad(line, format!("unknown check `{other}`"))),
        };
        let observed = match observed {
            None => None,
            Some(obs) => {
                let rest = obs
                    .strip_prefix("observed:")
                    .ok_or_else(|| bad(line, "sixth field must start with `observed:`"))?;
                if !matches!(check, Check::Set(_) | Check::Max(_)) {
                    return Err(bad(line, "`observed` only applies to set and max checks"));
                }
                Some(rest.split_whitespace().map(num).collect::<Result<Vec<_>>>()?)
            }
        };
        out.push(Fixture {
            id: id.to_string(),
            form,
            check,
            note: note.to_string(),
            observed,
        });
    }
    out.sort_by(|x, y| x.id.cmp(&y.id));
    if let Some(w) = out.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(Error::Invalid(format!("duplicate fixture id `{}`", w[0].id)));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The published value is wrong and the computation matches the
    /// recorded observation instead.
    Disputed,
    /// The bound is too small to check this fixture.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub id: String,
    pub form: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegressionReport {
    pub bound: u64,
    pub outcomes: Vec<FixtureOutcome>,
    pub caveat: String,
}

impl RegressionReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == status).count()
    }
}

fn short(xs: &[u64]) -> String {
    const SHOW: usize = 24;
    let mut parts: Vec<String> = xs.iter().take(SHOW).map(u64::to_string).collect();
    if xs.len() > SHOW {
        parts.push(format!("... ({} total)", xs.len()));
    }
    format!("{{{}}}", parts.join(","))
}

fn run_one(fx: &Fixture, bound: u64) -> Result<FixtureOutcome> {
    let config = SieveConfig { workers: 1, ..SieveConfig::default() };
    let exceptions = || exceptional_set_with(&fx.form, bound, &config).map(|r| r.exceptions);
    let (status, detail) = match &fx.check {
        Check::Universal => {
            let e = exceptions()?;
            let listed = classify(&fx.form).universal;
            let ok = listed && e.is_empty();
            (ok, format!("listed:{listed} exceptions<={bound}: {}", short(&e)))
        }
        Check::Set(expected) => {
            let e = exceptions()?;
            let want: Vec<u64> = expected.iter().copied().filter(|&n| n <= bound).collect();
            let disputed = fx.observed.as_ref().is_some_and(|obs| {
                e == obs.iter().copied().filter(|&n| n <= bound).collect::<Vec<_>>()
            });
            if e != want && disputed {
                return Ok(fx.outcome(Status::Disputed, format!("computed {}", short(&e))));
            }
            (e == want, format!("computed {}", short(&e)))
        }
        Check::Max(m) => {
            if *m > bound {
                return Ok(fx.outcome(
                    Status::Skipped,
                    format!("bound {bound} is below the stated maximum {m}"),
                ));
            }
            let e = exceptions()?;
            let is_exception = e.binary_search(m).is_ok();
            let above: Vec<u64> = e.iter().copied().filter(|n| n > m).collect();
            let disputed = fx
                .observed
                .as_ref()
                .is_some_and(|obs| is_exception && !above.is_empty() && above.iter().all(|n| obs.contains(n)));
            if disputed {
                return Ok(fx.outcome(
                    Status::Disputed,
                    format!("{m} exception:true exceptions in ({m},{bound}]: {}", short(&above)),
                ));
            }
            (
                is_exception && above.is_empty(),
                format!("{m} exception:{is_exception} exceptions in ({m},{bound}]: {}", short(&above)),
            )
        }
        Check::Verdict { almost, asymptotic, universal } => {
            let c = classify(&fx.form);
            let ok = almost.is_none_or(|v| v == c.almost_universal.value)
                && asymptotic.is_none_or(|v| v == c.asymptotically_universal)
                && universal.is_none_or(|v| v == c.universal);
            (
                ok,
                format!(
                    "almost={} asymptotic={} universal={}",
                    c.almost_universal.value, c.asymptotically_universal, c.universal
                ),
            )
        }
    };
    Ok(fx.outcome(if status { Status::Pass } else { Status::Fail }, detail))
}

impl Fixture {
    fn outcome(&self, status: Status, detail: String) -> FixtureOutcome {
        FixtureOutcome {
            id: self.id.clone(),
            form: self.form.to_string(),
            status,
            detail,
        }
    }
}

/// Recompute every fixture up to `bound`, spreading fixtures over `jobs`
/// threads. The report is ordered by fixture id whatever `jobs` is.
pub fn run_fixtures(fixtures: &[Fixture], bound: u64, jobs: usize) -> Result<RegressionReport> {
    let jobs = jobs.clamp(1, fixtures.len().max(1));
    let results: Vec<Result<FixtureOutcome>> = if jobs == 1 {
        fixtures.iter().map(|fx| run_one(fx, bound)).collect()
    } else {
        let mut slots: Vec<Option<Result<FixtureOutcome>>> = vec![None; fixtures.len()];
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|t| {
                    scope.spawn(move || {
                        (t..fixtures.len())
                            .step_by(jobs)
                            .map(|i| (i, run_one(&fixtures[i], bound)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (i, r) in h.join().expect("fixture worker panicked") {
                    slots[i] = Some(r);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("every fixture ran")).collect()
    };
    let mut outcomes = results.into_iter().collect::<Result<Vec<_>>>()?;
    outcomes.sort_by(|x, y| x.id.cmp(&y.id));
    Ok(RegressionReport {
        bound,
        outcomes,
        caveat: format!(
            "exception sets are certified only up to {bound}; completeness beyond that is conjectural"
        ),
    })
}

/// Run the shipped corpus.
pub fn verify(bound: u64, jobs: usize) -> Result<RegressionReport> {
    run_fixtures(&parse_corpus(CORPUS)?, bound, jobs)
}

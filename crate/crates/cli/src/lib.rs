//! Command-line front end for `mixforms`.
//!
//! [`run`] takes the full argument vector and writers for standard output
//! and standard error, and returns the process exit code: 0 on success, 1
//! when `verify-paper` finds a mismatch, 2 on a usage error.

use std::io::Write;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use mixforms::classify::{AlmostVerdict, TraceEntry};
use mixforms::local::local_report;
use mixforms::regression::{verify, Status};
use mixforms::twoadic::binary_spinor_norm;
use mixforms::{classify, FormKind, MixedForm, SieveConfig};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mixforms", version, about = "Sums of squares and triangular numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide universality, asymptotic and almost universality.
    Classify {
        #[command(flatten)]
        form: FormArgs,
        /// Print the verdict as JSON.
        #[arg(long)]
        json: bool,
    },
    /// List the integers up to a bound that the form misses.
    Exceptions {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        bound: u64,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Show the local (p-adic) conditions.
    Local {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Spinor norm group of the binary 2-adic lattice <1, 2^r alpha>.
    Spinor {
        /// An odd integer.
        #[arg(long, allow_hyphen_values = true)]
        alpha: i64,
        #[arg(long)]
        r: u32,
    },
    /// Recompute the bundled regression corpus.
    VerifyPaper {
        #[arg(long, default_value_t = 50_000)]
        bound: u64,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    /// a x^2 + b y^2 + c T_z
    Sst,
    /// a x^2 + b T_y + c T_z
    Stt,
    /// a T_x + b T_y + c T_z
    Ttt,
}

impl From<Kind> for FormKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Sst => FormKind::TwoSquaresOneTri,
            Kind::Stt => FormKind::OneSquareTwoTri,
            Kind::Ttt => FormKind::ThreeTri,
        }
    }
}

#[derive(Args, Debug)]
struct FormArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    a: u64,
    b: u64,
    c: u64,
}

impl FormArgs {
    fn form(&self) -> mixforms::Result<MixedForm> {
        MixedForm::new(self.kind.into(), self.a, self.b, self.c)
    }
}

/// The JSON verdict object. Field order is the output order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub kind: String,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub universal: bool,
    pub asymptotically_universal: bool,
    pub almost_universal: AlmostVerdict,
    pub trace: Vec<TraceEntry>,
}

impl VerdictJson {
    pub fn of(form: &MixedForm) -> Self {
        let r = classify(form);
        let [a, b, c] = form.coeffs();
        VerdictJson {
            kind: form.kind().short_name().to_string(),
            a,
            b,
            c,
            universal: r.universal,
            asymptotically_universal: r.asymptotically_universal,
            almost_universal: r.almost_universal,
            trace: r.trace,
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Run the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::{DisplayHelp, DisplayVersion};
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let msg = e.render().to_string();
            let _ = write!(err, "{msg}");
            if !msg.contains("Usage:") {
                let _ = writeln!(err, "\n{}", Cli::command().render_usage());
            }
            return EXIT_USAGE;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Box<dyn std::error::Error>> {
    match command {
        Command::Classify { form, json } => {
            let form = form.form()?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&VerdictJson::of(&form))?)?;
            } else {
                print_classification(&form, out)?;
            }
        }
        Command::Exceptions { form, bound, json, csv } => {
            let form = form.form()?;
            let report = mixforms::sieve::exceptional_set_with(&form, bound, &SieveConfig::default())?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else if csv {
                writeln!(out, "n")?;
                for n in &report.exceptions {
                    writeln!(out, "{n}")?;
                }
            } else {
                let list: Vec<String> = report.exceptions.iter().map(u64::to_string).collect();
                writeln!(out, "{}", list.join(" "))?;
            }
        }
        Command::Local { form } => {
            let form = form.form()?;
            let r = local_report(&form);
            let q = form.associated_quadratic();
            let [q1, q2, q3] = q.coeffs;
            writeln!(out, "form: {form}")?;
            writeln!(
                out,
                "represents n iff {q1}x^2 + {q2}y^2 + {q3}z^2 represents {}n + {} (odd-constrained slots: {:?})",
                q.scale, q.offset, q.parity
            )?;
            writeln!(out, "primitive: {}", yes_no(r.primitive))?;
            for rel in &r.odd_relations {
                writeln!(out, "  {} square mod {}: {}", rel.residue, rel.modulus, yes_no(rel.holds))?;
            }
            writeln!(out, "odd primes: {}", if r.odd_ok { "ok" } else { "obstructed" })?;
            writeln!(out, "2-adic: {}", if r.two_adic_ok { "ok" } else { "obstructed" })?;
            writeln!(out, "v2 of completing constant: {}", r.vf)?;
            writeln!(out, "all local conditions: {}", yes_no(r.all_ok()))?;
        }
        Command::Spinor { alpha, r } => {
            let set = binary_spinor_norm(alpha.into(), r)?;
            writeln!(out, "{set}")?;
        }
        Command::VerifyPaper { bound, jobs } => {
            if bound > SieveConfig::default().max_bound {
                return Err(format!("bound {bound} exceeds {}", SieveConfig::default().max_bound).into());
            }
            let jobs = match jobs {
                Some(0) => return Err("--jobs must be at least 1".into()),
                Some(j) => j,
                None => std::thread::available_parallelism().map_or(1, |n| n.get()),
            };
            let report = verify(bound, jobs)?;
            for o in &report.outcomes {
                let tag = match o.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Disputed => "DISPUTED",
                    Status::Skipped => "SKIP",
                };
                writeln!(out, "{tag:8} {:20} {:28} {}", o.id, o.form, o.detail)?;
            }
            writeln!(
                out,
                "{} passed, {} failed, {} disputed, {} skipped (bound {bound})",
                report.count(Status::Pass),
                report.count(Status::Fail),
                report.count(Status::Disputed),
                report.count(Status::Skipped),
            )?;
            writeln!(out, "note: {}", report.caveat)?;
            if !report.all_passed() {
                return Ok(EXIT_MISMATCH);
            }
        }
    }
    Ok(EXIT_OK)
}

fn print_classification(form: &MixedForm, out: &mut dyn Write) -> std::io::Result<()> {
    let r = classify(form);
    writeln!(out, "form: {form}")?;
    if r.normalized != *form {
        writeln!(out, "normalized: {}", r.normalized)?;
    }
    writeln!(out, "universal: {}", yes_no(r.universal))?;
    writeln!(out, "asymptotically universal: {}", yes_no(r.asymptotically_universal))?;
    write!(out, "almost universal: {}", r.almost_universal.value)?;
    match &r.almost_universal.gap_tag {
        Some(tag) => writeln!(out, " ({tag})")?,
        None => writeln!(out)?,
    }
    let [a, b, c] = form.coeffs();
    let g = mixforms::arith::gcd(mixforms::arith::gcd(a, b), c);
    if g > 1 {
        writeln!(out, "note: gcd(a, b, c) = {g}, so only multiples of {g} are represented")?;
    }
    writeln!(out, "trace:")?;
    for e in &r.trace {
        writeln!(out, "  {:<40} {:<5} {}", e.clause, e.outcome, e.inputs)?;
    }
    Ok(())
}

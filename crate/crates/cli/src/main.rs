use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hammersley_besov::discrepancy::{eval_discrepancy, l2_squared_exact, EvalPoint};
use hammersley_besov::haar::{coeff_table, coefficient, CoeffRecord, HaarIndex, Method};
use hammersley_besov::hammersley::{generate, PatternRule, PointSet, SignPattern};
use hammersley_besov::norms::{
    besov_quasi_norm, parseval_l2, qmc_series, rate_report, Integrand, NormParams,
};
use hammersley_besov::numeric::{format_rational, parse_rational, to_f64};
use hammersley_besov::verify::{run_all, Outcome, VerifyConfig};
use hammersley_besov::{Error, Exec};

#[derive(Parser)]
#[command(
    name = "hambesov",
    version,
    about = "Generalized Hammersley point sets, Haar coefficients and Besov norms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SetArgs {
    #[arg(long, default_value_t = 2)]
    base: u32,
    /// digit count; defaults to the pattern length
    #[arg(long)]
    n: Option<u32>,
    /// string over I (identity) and R (reversal), digit 1 first; defaults to
    /// the balanced pattern
    #[arg(long)]
    pattern: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the point set as CSV
    Generate {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact discrepancy function at (x, y)
    Eval {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// One Haar coefficient as a JSON line
    Coeff {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, allow_hyphen_values = true)]
        j1: i32,
        #[arg(long, allow_hyphen_values = true)]
        j2: i32,
        #[arg(long, default_value_t = 0)]
        m1: u64,
        #[arg(long, default_value_t = 0)]
        m2: u64,
        #[arg(long, default_value_t = 1)]
        l1: u32,
        #[arg(long, default_value_t = 1)]
        l2: u32,
        /// fast, pointwise or oracle
        #[arg(long, default_value = "fast")]
        method: String,
        /// include the exact coefficient vector
        #[arg(long)]
        exact: bool,
    },
    /// All coefficients up to a level as JSON lines
    CoeffsTable {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        jmax: i32,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Discrete Besov quasi-norm with its truncation tail
    Norm {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        /// truncation level, default n + 4
        #[arg(long = "J")]
        j: Option<u32>,
    },
    /// Parseval sum of the squared L2 norm, optionally against the exact value
    L2 {
        #[command(flatten)]
        set: SetArgs,
        /// truncation level, default n + 5
        #[arg(long = "J")]
        j: Option<u32>,
        #[arg(long)]
        exact: bool,
    },
    /// Rate table over a range of n as CSV
    Scaling {
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long)]
        nmin: u32,
        #[arg(long)]
        nmax: u32,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        /// balanced or identity
        #[arg(long, default_value = "balanced")]
        pattern_rule: String,
    },
    /// QMC integration errors over a range of n as CSV
    Integrate {
        #[arg(long, default_value_t = 2)]
        base: u32,
        /// one, x1x2, x1sq_x2sq, exp_sum, sin_prod or centered
        #[arg(long)]
        f: String,
        #[arg(long)]
        nmin: u32,
        #[arg(long)]
        nmax: u32,
        #[arg(long, default_value = "balanced")]
        pattern_rule: String,
    },
    /// Run the invariant suites
    Verify {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    /// bad flags or arguments
    Usage(String),
    /// a verification suite failed
    Verification,
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => Failure::Runtime(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl SetArgs {
    fn build(&self) -> Result<PointSet, Failure> {
        let pattern = match (&self.pattern, self.n) {
            (Some(p), _) => p.parse::<SignPattern>()?,
            (None, Some(n)) => SignPattern::balanced(n as usize)?,
            (None, None) => return Err(Failure::Usage("give --n or --pattern".into())),
        };
        let n = self.n.unwrap_or(pattern.len() as u32);
        if pattern.len() != n as usize {
            return Err(Error::PatternLength {
                expected: n as usize,
                found: pattern.len(),
            }
            .into());
        }
        Ok(generate(self.base, n, &pattern)?)
    }
}

fn n_range(nmin: u32, nmax: u32) -> Result<std::ops::RangeInclusive<u32>, Failure> {
    if nmin == 0 || nmin > nmax {
        return Err(Failure::Usage(format!(
            "need 1 <= nmin <= nmax, got {nmin}..{nmax}"
        )));
    }
    Ok(nmin..=nmax)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { set, out: path } => {
            let ps = set.build()?;
            match path {
                Some(p) => ps.write_csv(BufWriter::new(File::create(p)?))?,
                None => ps.write_csv(&mut *out)?,
            }
        }
        Command::Eval { set, x, y } => {
            let p = EvalPoint::new(parse_rational(&x)?, parse_rational(&y)?)?;
            let ps = set.build()?;
            writeln!(out, "{}", format_rational(&eval_discrepancy(&ps, &p)))?;
        }
        Command::Coeff {
            set,
            j1,
            j2,
            m1,
            m2,
            l1,
            l2,
            method,
            exact,
        } => {
            let method: Method = method.parse()?;
            let ps = set.build()?;
            let idx = HaarIndex::new(ps.base(), (j1, j2), (m1, m2), (l1, l2))?;
            let v = coefficient(&ps, &idx, method)?;
            serde_json::to_writer(&mut *out, &CoeffRecord::new(&idx, ps.n(), &v, exact))?;
            writeln!(out)?;
        }
        Command::CoeffsTable {
            set,
            jmax,
            exact,
            sequential,
        } => {
            if !(-1..=hammersley_besov::haar::MAX_LEVEL).contains(&jmax) {
                return Err(Failure::Usage(format!("jmax {jmax} out of range")));
            }
            let ps = set.build()?;
            let exec = if sequential {
                Exec::Sequential
            } else {
                Exec::default()
            };
            for rec in coeff_table(&ps, jmax, exact, exec)? {
                serde_json::to_writer(&mut *out, &rec)?;
                writeln!(out)?;
            }
        }
        Command::Norm { set, p, q, r, j } => {
            let ps = set.build()?;
            let params = NormParams::new(p, q, r, j.unwrap_or(ps.n() + 4))?;
            let v = besov_quasi_norm(&ps, &params)?;
            let line = json!({
                "b": ps.base(), "n": ps.n(), "pattern": ps.pattern().to_string(),
                "p": p, "q": q, "r": r, "J": params.j,
                "value": v.value, "tail_bound": v.tail_bound,
            });
            writeln!(out, "{line}")?;
        }
        Command::L2 { set, j, exact } => {
            let ps = set.build()?;
            let j = j.unwrap_or(ps.n() + 5);
            let parseval = parseval_l2(&ps, j, true)?;
            let mut line = json!({
                "b": ps.base(), "n": ps.n(), "pattern": ps.pattern().to_string(),
                "J": j, "parseval": parseval,
            });
            if exact {
                let e = l2_squared_exact(&ps)?;
                line["exact"] = json!(format_rational(&e));
                line["difference"] = json!(parseval - to_f64(&e));
            }
            writeln!(out, "{line}")?;
        }
        Command::Scaling {
            base,
            nmin,
            nmax,
            p,
            q,
            r,
            pattern_rule,
        } => {
            let rule: PatternRule = pattern_rule.parse()?;
            rate_report(base, r, p, q, n_range(nmin, nmax)?, rule)?.write_csv(&mut *out)?;
        }
        Command::Integrate {
            base,
            f,
            nmin,
            nmax,
            pattern_rule,
        } => {
            let f: Integrand = f.parse()?;
            let rule: PatternRule = pattern_rule.parse()?;
            qmc_series(base, f, n_range(nmin, nmax)?, rule)?.write_csv(&mut *out)?;
        }
        Command::Verify { quick, seed } => {
            let mut failed = false;
            for rep in run_all(&VerifyConfig { quick, seed }) {
                let tag = match rep.outcome {
                    Outcome::Pass => "PASS",
                    Outcome::Fail => {
                        failed = true;
                        "FAIL"
                    }
                    Outcome::KnownFail => "KNOWN-FAIL",
                };
                writeln!(
                    out,
                    "{tag} {} ({:.2}s) {}",
                    rep.name, rep.seconds, rep.detail
                )?;
                out.flush()?;
            }
            if failed {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

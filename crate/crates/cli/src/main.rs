use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use lensurf_core::arith::{bredon_wood_crosscap, check_formulae, lens_sequence};
use lensurf_core::construction::{
    self, analyze_haken, construct_surface_with_limit, DEFAULT_DISK_LIMIT,
};
use lensurf_core::fundamental::{minimality_oracle, q_minimality_oracle, DEFAULT_BUDGET};
use lensurf_core::linalg::format_rational;
use lensurf_core::normal::euler_characteristic;
use lensurf_core::placement::{compression_schedule, verify_placements};
use lensurf_core::quad::{in_solution_space, q_basis, reconstruct_tdisks};
use lensurf_core::theorem::{verify_theorem_with_limit, TheoremReport};
use lensurf_core::{HakenVector, LensError, LensParams, QVector, Triangulation};

mod summary;

/// Normal surfaces in L(p,q): triangulations, quad coordinates and the
/// compression construction of the surfaces h_n.
#[derive(Parser, Debug)]
#[command(name = "lensurf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. `pretty` is for humans and may change.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Coords {
    Haken,
    Q,
}

#[derive(Args, Debug)]
struct PQ {
    #[arg(long, allow_negative_numbers = true)]
    p: i64,
    #[arg(long, allow_negative_numbers = true)]
    q: i64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The triangulation T(p,q): gluings, edge classes, vertex classes.
    Triangulate(PQ),
    /// Terms (p_k, q_k) of the recursion p_k = (kappa+1) p_{k-1} + kappa q_{k-1}.
    Sequence {
        #[arg(long, default_value_t = 2)]
        kappa: u64,
        #[arg(long)]
        n: usize,
    },
    /// Check the six identities of the kappa-sequence up to n.
    Formulae {
        #[arg(long, default_value_t = 2)]
        kappa: u64,
        #[arg(long)]
        n: usize,
    },
    /// Minimal crosscap number of L(p,q), p even.
    Crosscap(PQ),
    /// The s_i, t_i basis of the Q-solution space and its rank.
    Basis(PQ),
    /// The starting surface h_0 of the construction.
    H0(PQ),
    /// Run the construction in L(p_n, q_n) and report on h_{n-1}.
    Construct {
        #[arg(long)]
        n: usize,
        /// Skip disk materialization above this many disks.
        #[arg(long, default_value_t = DEFAULT_DISK_LIMIT)]
        disk_limit: usize,
    },
    /// Every disk-patch placement of the construction.
    Schedule {
        #[arg(long)]
        n: usize,
    },
    /// Check the placement rules on the schedule.
    VerifyPlacements {
        #[arg(long)]
        n: usize,
    },
    /// Full surface analysis of a Haken or quad vector read from JSON.
    Analyze {
        /// JSON file, `-` for stdin.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DISK_LIMIT)]
        disk_limit: usize,
    },
    /// Search for a proper summand of a vector. The Haken search is meant
    /// for p <= 8; larger inputs rarely finish within the budget.
    FundamentalCheck {
        #[arg(long, value_enum)]
        coords: Coords,
        #[arg(long)]
        input: PathBuf,
        /// Node limit of the search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Check the main theorem for one n or a range `a..b` (inclusive).
    VerifyTheorem {
        #[arg(long, conflicts_with = "n_range", required_unless_present = "n_range")]
        n: Option<usize>,
        #[arg(long, value_parser = parse_range)]
        n_range: Option<(usize, usize)>,
        /// Largest n accepted.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_DISK_LIMIT)]
        disk_limit: usize,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected a..b, got `{s}`"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

/// What went wrong, and which exit code it maps to.
enum Failure {
    Usage(String),
    Verification(String),
}

impl From<LensError> for Failure {
    fn from(e: LensError) -> Self {
        match e {
            LensError::NegativeCoordinate { .. } | LensError::Inconsistent(_) => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

struct Output {
    body: String,
    /// Failed assertions, reported on stderr.
    failures: Vec<String>,
}

impl Output {
    fn pass(body: String) -> Self {
        Output {
            body,
            failures: Vec::new(),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn render(value: &Value, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(value.to_string()),
        Format::Pretty => Ok(serde_json::to_string_pretty(value).unwrap()),
        Format::Csv => Err(Failure::Usage(
            "--format csv is not available for this command".into(),
        )),
    }
}

fn read_input(path: &PathBuf) -> Result<Value, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("--input: {e}")))?;
        s
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("--input {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("--input: invalid JSON: {e}")))
}

/// Haken vectors carry a `layout` field, quad vectors `blocks`.
fn read_haken(value: Value) -> Result<(Triangulation, HakenVector), Failure> {
    if value.get("blocks").is_some() {
        let qv: QVector =
            serde_json::from_value(value).map_err(|e| Failure::Usage(format!("--input: {e}")))?;
        let tri = Triangulation::build(qv.params())?;
        let h = reconstruct_tdisks(&tri, &qv)?;
        Ok((tri, h))
    } else {
        let h: HakenVector =
            serde_json::from_value(value).map_err(|e| Failure::Usage(format!("--input: {e}")))?;
        let tri = Triangulation::build(h.params())?;
        Ok((tri, h))
    }
}

fn params(pq: &PQ) -> Result<LensParams, Failure> {
    Ok(LensParams::new(pq.p, pq.q)?)
}

fn theorem_threads() -> Option<usize> {
    std::env::var("LENSURF_THREADS")
        .ok()?
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Triangulate(pq) => {
            let tri = Triangulation::build(params(pq)?)?;
            Ok(Output::pass(render(&to_json(&tri.to_json()), format)?))
        }
        Command::Sequence { kappa, n } => {
            let seq = lens_sequence(*kappa, *n)?;
            if format == Format::Csv {
                let mut out = String::from("k,p,q\n");
                for (k, (p, q)) in seq.terms.iter().enumerate() {
                    out.push_str(&format!("{k},{p},{q}\n"));
                }
                return Ok(Output::pass(out));
            }
            Ok(Output::pass(render(&to_json(&seq), format)?))
        }
        Command::Formulae { kappa, n } => {
            if *n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let report = check_formulae(*kappa, *n)?;
            let failures = report
                .failures()
                .map(|c| {
                    format!(
                        "formula ({}) at {}: {} != {}",
                        c.formula, c.instance, c.lhs, c.rhs
                    )
                })
                .collect();
            let body = if format == Format::Csv {
                let mut out = String::from("formula,instance,lhs,rhs,pass\n");
                for c in &report.checks {
                    out.push_str(&format!(
                        "{},\"{}\",{},{},{}\n",
                        c.formula, c.instance, c.lhs, c.rhs, c.pass
                    ));
                }
                out
            } else {
                render(&to_json(&report), format)?
            };
            Ok(Output { body, failures })
        }
        Command::Crosscap(pq) => {
            let report = bredon_wood_crosscap(&BigInt::from(pq.p), &BigInt::from(pq.q))?;
            Ok(Output::pass(render(&to_json(&report), format)?))
        }
        Command::Basis(pq) => {
            let params = params(pq)?;
            let basis = q_basis(params)?;
            let blocks = |v: &QVector| v.blocks().collect::<Vec<_>>();
            let value = json!({
                "p": params.p(),
                "q": params.q(),
                "rank": basis.rank(),
                "s": basis.s.iter().map(blocks).collect::<Vec<_>>(),
                "t": basis.t.iter().map(blocks).collect::<Vec<_>>(),
            });
            Ok(Output::pass(render(&value, format)?))
        }
        Command::H0(pq) => {
            let params = params(pq)?;
            let h = construction::h0(params)?;
            let tri = Triangulation::build(params)?;
            let haken = reconstruct_tdisks(&tri, &h)?;
            if format == Format::Csv {
                return Ok(Output::pass(haken.to_csv()));
            }
            let fmt = |xs: &[_]| xs.iter().map(format_rational).collect::<Vec<_>>();
            let coefficients =
                in_solution_space(&h)?.map(|c| json!({"a": fmt(&c.a), "b": fmt(&c.b)}));
            let value = json!({
                "qvector": to_json(&h),
                "haken": to_json(&haken),
                "euler": euler_characteristic(&tri, &haken)?,
                "coefficients": coefficients,
            });
            if format == Format::Pretty {
                return Ok(Output::pass(format!(
                    "h_0 in L({},{}):\n{h}\neuler characteristic {}\n",
                    params.p(),
                    params.q(),
                    value["euler"]
                )));
            }
            Ok(Output::pass(render(&value, format)?))
        }
        Command::Construct { n, disk_limit } => {
            let report = construct_surface_with_limit(*n, *disk_limit)?;
            let failures: Vec<String> = report
                .failures()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect();
            if format == Format::Csv {
                return Ok(Output {
                    body: report.surface.haken.to_csv(),
                    failures,
                });
            }
            if format == Format::Pretty {
                return Ok(Output {
                    body: summary::construction(&report),
                    failures,
                });
            }
            Ok(Output {
                body: render(&to_json(&report), format)?,
                failures,
            })
        }
        Command::Schedule { n } => {
            let schedule = compression_schedule(*n)?;
            if format == Format::Csv {
                return Ok(Output::pass(schedule.to_csv()));
            }
            Ok(Output::pass(render(&to_json(&schedule), format)?))
        }
        Command::VerifyPlacements { n } => {
            let report = verify_placements(*n)?;
            let failures = report
                .checks
                .iter()
                .flat_map(|c| {
                    c.violations
                        .iter()
                        .map(move |v| format!("({}) {v}", c.label))
                })
                .collect();
            Ok(Output {
                body: render(&to_json(&report), format)?,
                failures,
            })
        }
        Command::Analyze { input, disk_limit } => {
            let (tri, haken) = read_haken(read_input(input)?)?;
            let report = analyze_haken(&tri, &haken, *disk_limit)?;
            if format == Format::Csv {
                return Ok(Output::pass(report.haken.to_csv()));
            }
            Ok(Output::pass(render(&to_json(&report), format)?))
        }
        Command::FundamentalCheck {
            coords,
            input,
            budget,
        } => {
            let value = read_input(input)?;
            let verdict = match coords {
                Coords::Haken => {
                    let (tri, haken) = read_haken(value)?;
                    json!({"coords": "haken", "verdict": to_json(&minimality_oracle(&tri, &haken, *budget)?)})
                }
                Coords::Q => {
                    let qv: QVector = serde_json::from_value(value)
                        .map_err(|e| Failure::Usage(format!("--input: {e}")))?;
                    json!({"coords": "q", "verdict": to_json(&q_minimality_oracle(&qv, *budget)?)})
                }
            };
            Ok(Output::pass(render(&verdict, format)?))
        }
        Command::VerifyTheorem {
            n,
            n_range,
            max_n,
            disk_limit,
        } => {
            let (lo, hi) = match (n, n_range) {
                (Some(n), _) => (*n, *n),
                (None, Some(r)) => *r,
                (None, None) => unreachable!("clap requires one of --n, --n-range"),
            };
            if lo < 2 {
                return Err(Failure::Usage(format!("n must be at least 2, got {lo}")));
            }
            if hi > *max_n {
                return Err(Failure::Usage(format!("n = {hi} exceeds --max-n {max_n}")));
            }
            let reports = verify_range(lo, hi, *disk_limit)?;
            let ok = reports.iter().all(|r| r.passed);
            let failures: Vec<String> = reports
                .iter()
                .flat_map(|r| {
                    r.failures()
                        .map(move |c| format!("n = {}: {} {}", r.n, c.name, c.detail))
                })
                .collect();
            if format == Format::Pretty {
                return Ok(Output {
                    body: reports.iter().map(summary::theorem_pretty).collect(),
                    failures,
                });
            }
            let summaries: Vec<Value> = reports.iter().map(summary::theorem).collect();
            let value = if n.is_some() {
                summaries.into_iter().next().unwrap()
            } else {
                json!({"passed": ok, "results": summaries})
            };
            Ok(Output {
                body: render(&value, format)?,
                failures,
            })
        }
    }
}

fn verify_range(lo: usize, hi: usize, disk_limit: usize) -> Result<Vec<TheoremReport>, Failure> {
    use rayon::prelude::*;
    let work = || {
        (lo..=hi)
            .into_par_iter()
            .map(|n| verify_theorem_with_limit(n, disk_limit))
            .collect::<Result<Vec<_>, _>>()
    };
    let result = match theorem_threads() {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure::Usage(format!("LENSURF_THREADS: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(result?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut body = out.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            let written = match &cli.output {
                Some(path) => fs::write(path, body.as_bytes()),
                None => io::stdout().lock().write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if out.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in &out.failures {
                    eprintln!("FAIL {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..6"), Ok((2, 6)));
        assert_eq!(parse_range("3..=5"), Ok((3, 5)));
        assert_eq!(parse_range("4..4"), Ok((4, 4)));
        assert!(parse_range("6..2").is_err());
        assert!(parse_range("6").is_err());
    }

    #[test]
    fn error_classes() {
        let usage: Failure = LensError::NonCoprime { p: 8, q: 6 }.into();
        assert!(matches!(usage, Failure::Usage(_)));
        let bug: Failure = LensError::NegativeCoordinate {
            block: 1,
            entry: 2,
            value: -1,
        }
        .into();
        assert!(matches!(bug, Failure::Verification(_)));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

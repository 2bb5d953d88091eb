use std::io::Write;
use std::process::ExitCode;

use chowforge::cone_engine::{cone_rational_pieces, expand_sum, RationalCone};
use chowforge::delpezzo::{minus_one_classes, minus_one_explorer_r9, DelPezzo};
use chowforge::json::{small_int, vector, SCHEMA_VERSION};
use chowforge::k3_blowup::{euler_chow_k3, euler_chow_k3_rational};
use chowforge::lattice_pic::mukai_q0;
use chowforge::oracle::h0_interpolation_report;
use chowforge::series_algebra::Grading;
use chowforge::verify::verify;
use chowforge::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Exact codimension-one Euler-Chow series and their cross-checks.
#[derive(Parser)]
#[command(name = "chowforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// (-1)-classes on the plane blown up in r points.
    NegCurves {
        r: usize,
        /// Degree cap; required for r = 9.
        #[arg(long)]
        dmax: Option<i64>,
    },
    /// Extreme rays and facets of the nef cone.
    NefCone { r: usize },
    /// Rational generating function of a cone read from a file of generator rows.
    ConeSeries {
        #[arg(long)]
        generators: std::path::PathBuf,
        /// Also expand up to this degree.
        #[arg(long)]
        bound: Option<i64>,
        /// Comma-separated grading weights; defaults to a positive functional of the cone.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grading: Option<Vec<i64>>,
    },
    /// Euler-Chow series.
    EulerChow {
        #[command(subcommand)]
        surface: Surface,
    },
    /// Interpolation oracle.
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Bounded explorations.
    Explore {
        #[command(subcommand)]
        target: ExploreTarget,
    },
    /// Run every cross-check for P_r and print a pass/fail table.
    Verify { r: usize },
    /// Smallest q > r with 1/p + 1/r + 1/(q - r) <= 1.
    MukaiQ0 { r: i64, p: i64 },
}

#[derive(Subcommand)]
enum Surface {
    /// The plane blown up in r points, graded by (-K)-degree.
    Delpezzo {
        r: usize,
        #[arg(long)]
        bound: i64,
        #[arg(long, value_enum, default_value_t = Format::Series)]
        format: Format,
        /// Permit r >= 5.
        #[arg(long)]
        allow_large: bool,
    },
    /// The blown-up quartic K3, graded by a + b.
    K3 {
        #[arg(long)]
        bound: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Series,
    Rational,
    Both,
}

#[derive(Subcommand)]
enum OracleQuery {
    /// h^0 of degree-d curves with the given multiplicities at random points.
    H0 {
        #[arg(long)]
        d: i64,
        #[arg(long, value_delimiter = ',', default_value = "")]
        mults: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        trials: usize,
    },
}

#[derive(Subcommand)]
enum ExploreTarget {
    /// (-1)-classes on nine points with extremality certificates.
    R9 {
        #[arg(long)]
        dmax: i64,
        /// Confirm every certificate with an exact LP as well.
        #[arg(long)]
        lp: bool,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn classes_json(classes: &[chowforge::PicClass]) -> Value {
    Value::Array(classes.iter().map(|c| vector(c.coeffs())).collect())
}

fn neg_curves(r: usize, dmax: Option<i64>) -> Outcome {
    let classes = minus_one_classes(r, dmax)?;
    Ok(json!({ "r": r, "count": classes.len(), "classes": classes_json(&classes) }))
}

fn nef_cone(r: usize) -> Outcome {
    let x = DelPezzo::new(r)?;
    let mut v = x.nef_cone().to_json();
    v["r"] = json!(r);
    Ok(v)
}

fn read_generators(path: &std::path::Path) -> Result<Vec<Vec<i64>>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<i64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::parse).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if rows.is_empty() {
        return Err(Failure::Input("no generators given".into()));
    }
    Ok(rows)
}

fn cone_series(path: &std::path::Path, bound: Option<i64>, grading: Option<Vec<i64>>) -> Outcome {
    let rows = read_generators(path)?;
    let rank = rows[0].len();
    let cone = RationalCone::new(rank, rows)?;
    let pieces = cone_rational_pieces(&cone)?;
    let mut out = json!({
        "generators": cone.generators().iter().map(|g| vector(g)).collect::<Vec<_>>(),
        "facets": cone.facets().iter().map(|g| vector(g)).collect::<Vec<_>>(),
        "pieces": pieces.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
    });
    if let Some(b) = bound {
        let g = Grading::new(grading.unwrap_or_else(|| cone.positive_functional()));
        out["expansion"] = expand_sum(&pieces, &g, b)?.to_json();
    }
    Ok(out)
}

fn euler_chow_delpezzo(r: usize, bound: i64, format: Format, allow_large: bool) -> Outcome {
    let x = DelPezzo::new(r)?;
    let mut out = json!({ "r": r, "bound": bound });
    if format != Format::Rational {
        out["series"] = x.euler_chow(&x.anticanonical_grading(), bound, allow_large)?.to_json();
    }
    if format != Format::Series {
        let parts = x.euler_chow_rational(allow_large)?;
        out["rational"] = Value::Array(parts.iter().map(|p| p.to_json()).collect());
    }
    Ok(out)
}

fn euler_chow_k3_cmd(bound: i64) -> Outcome {
    let series = euler_chow_k3(bound)?;
    let coefficients: Vec<Value> =
        series.iter().map(|(p, c)| json!({ "a": p[0], "b": p[1], "h0": chowforge::json::int(c) })).collect();
    let rational = euler_chow_k3_rational()?;
    Ok(json!({
        "bound": bound,
        "coefficients": coefficients,
        "rational": rational.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
    }))
}

fn oracle_h0(d: i64, mults: &[String], seed: u64, trials: usize) -> Outcome {
    let mults: Vec<i64> = mults
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|e| Failure::Input(format!("bad multiplicity {s:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    let report = h0_interpolation_report(d, &mults, trials, seed)?;
    Ok(json!({
        "d": d,
        "mults": vector(&mults),
        "seed": seed,
        "h0": small_int(report.h0),
        "ranks": report.ranks,
        "disagreements": report.disagreements,
    }))
}

fn explore_r9(dmax: i64, lp: bool) -> Outcome {
    let entries = minus_one_explorer_r9(dmax, lp)?;
    let all_certified = entries.iter().all(|e| e.certified && e.lp_confirmed != Some(false));
    let out = json!({
        "dmax": dmax,
        "count": entries.len(),
        "classes": entries.iter().map(|e| vector(e.class.coeffs())).collect::<Vec<_>>(),
        "certified": entries.iter().map(|e| e.certified).collect::<Vec<_>>(),
        "lp_confirmed": entries.iter().map(|e| e.lp_confirmed).collect::<Vec<_>>(),
        "all_certified": all_certified,
    });
    if !all_certified {
        return Err(Failure::Internal(format!("certificate failure: {out}")));
    }
    Ok(out)
}

fn verify_cmd(r: usize) -> Outcome {
    let checks = verify(r)?;
    for c in &checks {
        eprintln!("{:<28} {:<4} {}", c.name, if c.passed { "PASS" } else { "FAIL" }, c.detail);
    }
    let all = checks.iter().all(|c| c.passed);
    let out = json!({ "r": r, "passed": all, "checks": checks });
    if !all {
        return Err(Failure::Internal(out.to_string()));
    }
    Ok(out)
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::NegCurves { r, dmax } => neg_curves(r, dmax),
        Command::NefCone { r } => nef_cone(r),
        Command::ConeSeries { generators, bound, grading } => cone_series(&generators, bound, grading),
        Command::EulerChow { surface: Surface::Delpezzo { r, bound, format, allow_large } } => {
            euler_chow_delpezzo(r, bound, format, allow_large)
        }
        Command::EulerChow { surface: Surface::K3 { bound } } => euler_chow_k3_cmd(bound),
        Command::Oracle { query: OracleQuery::H0 { d, mults, seed, trials } } => oracle_h0(d, &mults, seed, trials),
        Command::Explore { target: ExploreTarget::R9 { dmax, lp } } => explore_r9(dmax, lp),
        Command::Verify { r } => verify_cmd(r),
        Command::MukaiQ0 { r, p } => Ok(json!({ "r": r, "p": p, "q0": mukai_q0(r, p)? })),
    }
}

fn with_schema(v: Value) -> Value {
    let mut doc = json!({ "schema": SCHEMA_VERSION });
    if let (Value::Object(d), Value::Object(body)) = (&mut doc, v) {
        d.extend(body);
    }
    doc
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(n) = std::env::var("CHOWFORGE_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    log::warn!("could not size the thread pool: {e}");
                }
            }
            _ => {
                eprintln!("CHOWFORGE_THREADS must be a positive integer, got {n:?}");
                return ExitCode::from(1);
            }
        }
    }
    match dispatch(cli.command) {
        Ok(v) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", with_schema(v));
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal consistency failure: {msg}");
            ExitCode::from(2)
        }
    }
}

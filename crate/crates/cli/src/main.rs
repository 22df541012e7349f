//! `qppt`: construct and analyse two-qutrit PPT entangled states of rank four.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qutrit_ppt::action::orbit;
use qutrit_ppt::builders::{
    checkerboard_canonical, checkerboard_raw, choi_state, omega, CanonicalParams, CheckerboardParams, CheckerboardRaw,
    ChoiParam,
};
use qutrit_ppt::checkerboard::checkerboard_class;
use qutrit_ppt::equivalence::{candidates_of, canonicalize, is_equivalent, kernel_sextuple, preferred_candidate};
use qutrit_ppt::finder::{in_general_position, Finder, SubspaceSpec, DEFAULT_SEED};
use qutrit_ppt::group::Permutation;
use qutrit_ppt::invariants::{classify_symbol, sextuple_invariants, symbol_census, InvariantQuadruple};
use qutrit_ppt::io::{Provenance, StateFile};
use qutrit_ppt::upb::{pyramid_fixture, tiles_fixture, upb_state};
use qutrit_ppt::{BipartiteState, Error, ToleranceProfile};

#[derive(Parser)]
#[command(name = "qppt", version, about = "Two-qutrit PPT entangled states of rank four")]
struct Cli {
    /// Relative threshold for numerical rank.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Relative threshold for matching invariants.
    #[arg(long, global = true)]
    tol_match: Option<f64>,
    /// Print a single line of JSON instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the product-vector search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Omega,
    Checkerboard,
    CheckerboardRaw,
    Choi,
    UpbPyramid,
    UpbTiles,
}

#[derive(Subcommand)]
enum Command {
    /// Write a state file.
    Construct {
        kind: Kind,
        /// Parameters: `a b c d` (omega), `u v` (checkerboard), `λ` (choi),
        /// none for the UPB states. `checkerboard-raw` takes a JSON file with
        /// the eighteen slots instead.
        #[arg(allow_negative_numbers = true)]
        params: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Birank, product vectors, census, box coordinates and checkerboard test.
    Analyze { state: PathBuf },
    /// Product vectors in the kernel.
    KernelPvs { state: PathBuf },
    /// Product vectors in the range.
    RangePvs { state: PathBuf },
    /// Invariants of an ordering of the kernel sextuple.
    Invariants {
        state: PathBuf,
        /// Six 0-based indices into the sorted kernel vectors, e.g. `0,1,3,2,4,5`.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// SLOCC equivalence; exit code 0 if equivalent, 1 if not.
    Equiv { first: PathBuf, second: PathBuf },
    /// Canonical parameters of an equivalent state.
    Canonicalize { state: PathBuf },
    /// Checkerboard test; exit code 0 if the state is a checkerboard state.
    Checkerboard { state: PathBuf },
    /// Orbit of a box point under the stabilizer.
    Orbit {
        #[arg(allow_negative_numbers = true, num_args = 4)]
        point: Vec<f64>,
    },
}

/// Command outcome: report plus whether a yes/no verdict was negative.
struct Outcome {
    report: Value,
    negative: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Self { report, negative: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Some(out)) => {
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = writeln!(std::io::stdout(), "{}", render(&round_value(&out.report), cli.json));
            ExitCode::from(if out.negative { 1 } else { 0 })
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    let numeric = e.is_numeric_indeterminate()
        || matches!(
            e,
            Error::Defect(_)
                | Error::ReconstructionFailed(_)
                | Error::RootMismatch { .. }
                | Error::RootOrdering(_)
                | Error::ReductionStep { .. }
                | Error::DenominatorVanishes(_)
                | Error::DegenerateQuintuple(..)
                | Error::NoPpPNNpOrdering
        );
    if numeric {
        3
    } else {
        2
    }
}

fn tolerance(cli: &Cli) -> Result<ToleranceProfile, Error> {
    let mut tol = ToleranceProfile::default();
    if let Some(r) = cli.tol_rank {
        tol = tol.with_rank(r)?;
    }
    if let Some(m) = cli.tol_match {
        tol = tol.with_matching(m)?;
    }
    Ok(tol)
}

fn load(path: &Path, tol: ToleranceProfile) -> Result<BipartiteState, Error> {
    StateFile::read(path)?.to_state(tol)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn numbers(params: &[String], n: usize, kind: &str) -> Result<Vec<f64>, Error> {
    if params.len() != n {
        return Err(Error::Format(format!("{kind} takes {n} parameter(s), got {}", params.len())));
    }
    params
        .iter()
        .map(|s| s.parse::<f64>().map_err(|_| Error::Format(format!("not a number: {s}"))))
        .collect()
}

fn construct(kind: Kind, params: &[String]) -> Result<(BipartiteState, Provenance), Error> {
    let prov = |name: &str, params: Vec<f64>| Provenance {
        constructor: name.into(),
        params,
    };
    Ok(match kind {
        Kind::Omega => {
            let p = numbers(params, 4, "omega")?;
            (omega(&CanonicalParams::new(p[0], p[1], p[2], p[3])?)?, prov("omega", p))
        }
        Kind::Checkerboard => {
            let p = numbers(params, 2, "checkerboard")?;
            (checkerboard_canonical(&CheckerboardParams::new(p[0], p[1])?)?, prov("checkerboard", p))
        }
        Kind::CheckerboardRaw => {
            let [path] = params else {
                return Err(Error::Format("checkerboard-raw takes one JSON file".into()));
            };
            let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{path}: {e}")))?;
            let raw: CheckerboardRaw = serde_json::from_str(&text).map_err(|e| Error::Format(e.to_string()))?;
            (checkerboard_raw(&raw)?, prov("checkerboard-raw", Vec::new()))
        }
        Kind::Choi => {
            let p = numbers(params, 1, "choi")?;
            (choi_state(ChoiParam::new(p[0])?)?, prov("choi", p))
        }
        Kind::UpbPyramid => {
            numbers(params, 0, "upb-pyramid")?;
            (upb_state(&pyramid_fixture()?)?, prov("upb-pyramid", Vec::new()))
        }
        Kind::UpbTiles => {
            numbers(params, 0, "upb-tiles")?;
            (upb_state(&tiles_fixture()?)?, prov("upb-tiles", Vec::new()))
        }
    })
}

fn search(spec: &SubspaceSpec, seed: u64) -> Value {
    to_value(&Finder::new(seed).search(spec))
}

fn census_summary(census: &BTreeMap<qutrit_ppt::invariants::Symbol, usize>) -> Value {
    if census.len() == 12 && census.values().all(|&n| n == 60) {
        json!("12x60")
    } else {
        Value::Object(census.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
    }
}

fn or_error(r: Result<Value, Error>) -> Value {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() }))
}

fn analyze(rho: &BipartiteState, seed: u64) -> Result<Value, Error> {
    let tol = *rho.tolerance();
    let mut report = Map::new();
    let (r, s) = rho.birank();
    report.insert("birank".into(), json!([r, s]));
    report.insert("ppt".into(), json!(rho.is_ppt()));
    report.insert("trace".into(), json!(rho.trace()));
    let kernel = SubspaceSpec::kernel_of(rho.matrix(), &tol)?;
    let found = Finder::new(seed).search(&kernel);
    report.insert("kernel_status".into(), to_value(&found.status));
    report.insert("kernel_pvs".into(), json!(found.vectors.len()));
    report.insert("kernel_vectors".into(), to_value(&found.vectors));
    report.insert("general_position".into(), json!(in_general_position(&found.vectors, &tol)));
    match kernel_sextuple(rho) {
        Ok(six) => {
            report.insert(
                "census".into(),
                or_error(symbol_census(&six, &tol).map(|c| census_summary(&c))),
            );
            report.insert(
                "quadruple".into(),
                or_error(candidates_of(&six, &tol).and_then(preferred_candidate).map(|c| to_value(&c.quadruple))),
            );
            report.insert("checkerboard".into(), or_error(checkerboard_class(rho).map(|v| to_value(&v))));
        }
        Err(e) => {
            let msg = json!({ "error": e.to_string() });
            for key in ["census", "quadruple", "checkerboard"] {
                report.insert(key.into(), msg.clone());
            }
        }
    }
    Ok(Value::Object(report))
}

fn run(cli: &Cli) -> Result<Option<Outcome>, Error> {
    let tol = tolerance(cli)?;
    Ok(Some(match &cli.command {
        Command::Construct { kind, params, output } => {
            let (rho, prov) = construct(*kind, params)?;
            let file = StateFile::from_state(&rho, Some(prov));
            match output {
                Some(path) => file.write(path)?,
                None => {
                    let _ = writeln!(std::io::stdout(), "{}", file.to_json());
                }
            }
            return Ok(None);
        }
        Command::Analyze { state } => Outcome::ok(analyze(&load(state, tol)?, cli.seed)?),
        Command::KernelPvs { state } => {
            let rho = load(state, tol)?;
            Outcome::ok(search(&SubspaceSpec::kernel_of(rho.matrix(), &tol)?, cli.seed))
        }
        Command::RangePvs { state } => {
            let rho = load(state, tol)?;
            Outcome::ok(search(&SubspaceSpec::range_of(rho.matrix(), &tol)?, cli.seed))
        }
        Command::Invariants { state, order } => {
            let six = kernel_sextuple(&load(state, tol)?)?;
            let p = match order {
                None => Permutation::IDENTITY,
                Some(v) => {
                    let arr: [usize; 6] = v
                        .as_slice()
                        .try_into()
                        .map_err(|_| Error::Format(format!("--order needs 6 indices, got {}", v.len())))?;
                    Permutation::new(arr).ok_or_else(|| Error::Format(format!("{arr:?} is not a permutation of 0..6")))?
                }
            };
            let t = sextuple_invariants(&p.apply(&six), &tol)?;
            let symbol = classify_symbol(&t, &tol)?;
            Outcome::ok(json!({
                "order": p,
                "tuple": t,
                "symbol": symbol,
                "quadruple": t.quadruple(),
            }))
        }
        Command::Equiv { first, second } => {
            let verdict = is_equivalent(&load(first, tol)?, &load(second, tol)?)?;
            Outcome {
                negative: !verdict.equivalent,
                report: to_value(&verdict),
            }
        }
        Command::Canonicalize { state } => {
            let c = canonicalize(&load(state, tol)?)?;
            Outcome::ok(json!({
                "params": c.params.as_array(),
                "quadruple": c.quadruple,
                "order": c.permutation,
            }))
        }
        Command::Checkerboard { state } => {
            let verdict = checkerboard_class(&load(state, tol)?)?;
            Outcome {
                negative: !verdict.is_checkerboard,
                report: to_value(&verdict),
            }
        }
        Command::Orbit { point } => {
            let q = InvariantQuadruple::from_array([point[0], point[1], point[2], point[3]]);
            if !q.in_box() {
                return Err(Error::OutOfBox(point[0], point[1], point[2], point[3]));
            }
            let mut points: Vec<[f64; 4]> = orbit(&q, &tol)?.iter().map(|p| p.as_array()).collect();
            points.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
            Outcome::ok(json!({ "size": points.len(), "points": points }))
        }
    }))
}

/// Round every number to 12 significant digits.
fn round_value(v: &Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
            // Drop the sign of zero.
            json!(if r == 0.0 { 0.0 } else { r })
        }
        Value::Array(a) => Value::Array(a.iter().map(round_value).collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), round_value(v))).collect()),
        other => other.clone(),
    }
}

fn render(v: &Value, as_json: bool) -> String {
    match v {
        Value::Object(m) if !as_json => m
            .iter()
            .map(|(k, v)| format!("{k}: {}", serde_json::to_string(v).expect("json")))
            .collect::<Vec<_>>()
            .join("\n"),
        _ => serde_json::to_string(v).expect("json"),
    }
}

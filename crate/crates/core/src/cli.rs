//! `schatten` command-line interface.
//!
//! Every command prints one JSON object on standard output. Failures also
//! print a one-line message on standard error. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, or the pair is conjugate |
//! | 1 | valid input, but not conjugate (or oracle mismatch) |
//! | 2 | I/O, parse or shape failure |
//! | 3 | invalid argument |
//! | 4 | zero matrix |
//! | 5 | oracle did not converge |

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::demos::{discontinuity, strict_convexity, CONVEXITY_ALPHAS, DISCONTINUITY_KS};
use crate::duality::{
    classify_saturation, dual_map_sp, sinf_conjugate_set, sinf_membership, sinf_rank1_conjugate,
    sparse_dual_map_s1, verify_conjugate_pair, SInfMembership, SaturationForm, SaturationTag,
};
use crate::error::Error;
use crate::io::{read_matrix, write_matrix, MatrixFormat};
use crate::linalg::{effective_rank, singular_values, Matrix, ToleranceConfig};
use crate::norms::schatten_norm;
use crate::oracle::{maximize_pairing, OracleConfig};
use crate::vector::{ConjugacyReport, HolderExponent, RealVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CONJUGATE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INVALID_ARGUMENT: i32 = 3;
pub const EXIT_ZERO_MATRIX: i32 = 4;
pub const EXIT_NOT_CONVERGED: i32 = 5;

/// Largest matrix side accepted by `oracle-check`.
pub const ORACLE_MAX_DIM: usize = 64;
/// Agreement required between oracle and closed form.
pub const ORACLE_AGREEMENT_TOL: f64 = 1e-5;

#[derive(Debug, Parser)]
#[command(
    name = "schatten",
    version,
    about = "Duality mappings for Schatten-p norms"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Matrix file format; inferred from the extension when omitted.
    #[arg(long, global = true)]
    format: Option<MatrixFormat>,
    /// Relative cutoff for the effective rank.
    #[arg(long, global = true)]
    rank_tol: Option<f64>,
    /// Relative tolerance grouping singular values tied with the largest.
    #[arg(long, global = true)]
    mult_tol: Option<f64>,
    /// Relative tolerance for the saturation and norm conditions.
    #[arg(long, global = true)]
    sat_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Schatten norm, effective rank and singular values.
    Norm {
        input: PathBuf,
        #[arg(long)]
        p: HolderExponent,
    },
    /// Duality map for 1 < p < inf, rank-minimal selector for p = 1.
    DualMap {
        input: PathBuf,
        #[arg(long)]
        p: HolderExponent,
        /// Where to write the image; its format follows its extension.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Conjugacy report and saturation form of a pair.
    VerifyPair {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        p: HolderExponent,
    },
    /// Conjugate set of the spectral norm, optionally one rank-one member.
    ConjugateSet {
        input: PathBuf,
        /// Comma-separated direction of length r1.
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
    },
    /// Numerical maximizer of the pairing against the closed form.
    OracleCheck {
        input: PathBuf,
        #[arg(long)]
        p: HolderExponent,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reproduce a counterexample: discontinuity or strict-convexity.
    Demo { name: String },
}

/// A command outcome: JSON report plus exit code.
struct Outcome {
    code: i32,
    reason: &'static str,
    body: Value,
}

impl Outcome {
    fn ok(body: Value) -> Self {
        Outcome {
            code: EXIT_OK,
            reason: "ok",
            body,
        }
    }

    fn verdict(ok: bool, reason: &'static str, body: Value) -> Self {
        if ok {
            Outcome::ok(body)
        } else {
            Outcome {
                code: EXIT_NOT_CONJUGATE,
                reason,
                body,
            }
        }
    }
}

struct Failure {
    code: i32,
    reason: &'static str,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID_ARGUMENT,
            reason: "invalid_argument",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, reason) = match &e {
            Error::Io(_) => (EXIT_IO, "io_error"),
            Error::Parse(_) | Error::InvalidShape(_) | Error::NonFinite(_) => {
                (EXIT_IO, "parse_error")
            }
            Error::ShapeMismatch { .. } => (EXIT_IO, "shape_mismatch"),
            Error::NumericalFailure(_) => (EXIT_IO, "numerical_failure"),
            Error::ZeroMatrix => (EXIT_ZERO_MATRIX, "zero_matrix"),
            Error::ZeroVector
            | Error::DimensionMismatch { .. }
            | Error::DimensionTooLarge { .. }
            | Error::InvalidExponent(..)
            | Error::InvalidTolerance { .. }
            | Error::InvalidConfig(_) => (EXIT_INVALID_ARGUMENT, "invalid_argument"),
        };
        Failure {
            code,
            reason,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<Outcome, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let failure = Failure::invalid(e.kind().to_string());
            let _ = write!(stderr, "{e}");
            emit(stdout, &failure_body(None, &failure));
            return failure.code;
        }
    };
    let name = cli.command.name();
    let result = tolerances(&cli.global).and_then(|tol| dispatch(&cli.command, &cli.global, &tol));
    match result {
        Ok(outcome) => {
            let mut body = outcome.body;
            decorate(&mut body, name, outcome.reason);
            emit(stdout, &body);
            outcome.code
        }
        Err(failure) => {
            let _ = writeln!(stderr, "schatten {name}: {}", failure.message);
            emit(stdout, &failure_body(Some(name), &failure));
            failure.code
        }
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::DualMap { .. } => "dual-map",
            Command::VerifyPair { .. } => "verify-pair",
            Command::ConjugateSet { .. } => "conjugate-set",
            Command::OracleCheck { .. } => "oracle-check",
            Command::Demo { .. } => "demo",
        }
    }
}

fn emit(out: &mut dyn Write, body: &Value) {
    let text = serde_json::to_string_pretty(body).expect("JSON values always serialize");
    let _ = writeln!(out, "{text}");
}

fn decorate(body: &mut Value, command: &str, reason: &str) {
    if let Value::Object(map) = body {
        map.insert("command".into(), json!(command));
        map.insert("exit_reason".into(), json!(reason));
    }
}

fn failure_body(command: Option<&str>, failure: &Failure) -> Value {
    json!({
        "command": command,
        "exit_reason": failure.reason,
        "error": failure.message,
    })
}

fn tolerances(g: &GlobalArgs) -> std::result::Result<ToleranceConfig, Failure> {
    let d = ToleranceConfig::default();
    Ok(ToleranceConfig::new(
        g.rank_tol.unwrap_or(d.rank_rel_tol),
        g.mult_tol.unwrap_or(d.mult_rel_tol),
        g.sat_tol.unwrap_or(d.sat_rel_tol),
    )?)
}

fn dispatch(cmd: &Command, g: &GlobalArgs, tol: &ToleranceConfig) -> CmdResult {
    let read = |path: &Path| read_matrix(path, g.format).map_err(Failure::from);
    match cmd {
        Command::Norm { input, p } => cmd_norm(&read(input)?, *p, tol),
        Command::DualMap { input, p, output } => {
            cmd_dual_map(&read(input)?, *p, output.as_deref(), g.format, tol)
        }
        Command::VerifyPair { a, b, p } => cmd_verify_pair(&read(a)?, &read(b)?, *p, tol),
        Command::ConjugateSet { input, direction } => {
            cmd_conjugate_set(&read(input)?, direction.as_deref(), tol)
        }
        Command::OracleCheck { input, p, seed } => cmd_oracle_check(&read(input)?, *p, *seed, tol),
        Command::Demo { name } => cmd_demo(name, tol),
    }
}

fn matrix_json(a: &Matrix) -> Value {
    serde_json::to_value(a).expect("matrices always serialize")
}

fn report_json(r: &ConjugacyReport) -> Value {
    json!({
        "pairing": r.pairing,
        "norm_primal": r.norm_primal,
        "norm_dual": r.norm_dual,
        "residuals": {
            "saturation": r.saturation_residual,
            "norm_equality": r.norm_equality_residual,
        },
        "is_conjugate": r.is_conjugate,
    })
}

fn saturation_json(s: &SaturationForm) -> Value {
    let (x, reason) = match &s.tag {
        SaturationTag::GeneralP1 { x } => (Some(matrix_json(x)), None),
        SaturationTag::Invalid { reason } => (None, Some(reason.clone())),
        _ => (None, None),
    };
    json!({
        "tag": s.tag.name(),
        "c": s.tag.scale(),
        "x": x,
        "reason": reason,
        "witness_residual": s.witness_residual,
        "roles_swapped": s.roles_swapped,
        "relative_gap": s.relative_gap,
    })
}

fn membership_json(m: &SInfMembership) -> Value {
    json!({
        "is_member": m.is_member(),
        "report": report_json(&m.report),
        "factor": matrix_json(&m.factor),
        "symmetry_residual": m.symmetry_residual,
        "factor_nuclear_norm": m.factor_nuclear_norm,
        "factor_trace": m.factor_trace,
        "factor_min_eigenvalue": m.factor_min_eigenvalue,
        "reconstruction_residual": m.reconstruction_residual,
    })
}

fn cmd_norm(a: &Matrix, p: HolderExponent, tol: &ToleranceConfig) -> CmdResult {
    let rank = match effective_rank(a, tol) {
        Ok(r) => r,
        Err(Error::ZeroMatrix) => 0,
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome::ok(json!({
        "p": p.to_string(),
        "norm": schatten_norm(a, p)?,
        "rank": rank,
        "singular_values": singular_values(a)?,
    })))
}

fn cmd_dual_map(
    a: &Matrix,
    p: HolderExponent,
    output: Option<&Path>,
    format: Option<MatrixFormat>,
    tol: &ToleranceConfig,
) -> CmdResult {
    if p.is_infinite() {
        return Err(Failure::invalid(
            "p = inf has a set of conjugates; use the conjugate-set command",
        ));
    }
    let (image, map) = if p.is_one() {
        (sparse_dual_map_s1(a, tol)?, "sparse_s1")
    } else {
        (dual_map_sp(a, p, tol)?, "sp")
    };
    if let Some(path) = output {
        let format = MatrixFormat::from_path(path)
            .or(format)
            .unwrap_or(MatrixFormat::Csv);
        write_matrix(path, &image, Some(format))?;
    }
    let report = verify_conjugate_pair(a, &image, p, tol)?;
    let mut body = report_json(&report);
    let map_obj = body.as_object_mut().expect("object");
    map_obj.insert("p".into(), json!(p.to_string()));
    map_obj.insert("map".into(), json!(map));
    map_obj.insert("rank".into(), json!(effective_rank(a, tol)?));
    map_obj.insert(
        "output".into(),
        json!(output.map(|o| o.display().to_string())),
    );
    map_obj.insert("result".into(), matrix_json(&image));
    Ok(Outcome::verdict(report.is_conjugate, "not_conjugate", body))
}

fn cmd_verify_pair(a: &Matrix, b: &Matrix, p: HolderExponent, tol: &ToleranceConfig) -> CmdResult {
    let report = verify_conjugate_pair(a, b, p, tol)?;
    let saturation = classify_saturation(a, b, p, tol)?;
    let mut body = report_json(&report);
    let obj = body.as_object_mut().expect("object");
    obj.insert("p".into(), json!(p.to_string()));
    if let Value::Object(sat) = saturation_json(&saturation) {
        obj.extend(sat);
    }
    Ok(Outcome::verdict(report.is_conjugate, "not_conjugate", body))
}

fn parse_direction(text: &str) -> std::result::Result<RealVector, Failure> {
    let entries = text
        .split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|_| {
                Failure::invalid(format!("direction entry '{}' is not a number", t.trim()))
            })
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    RealVector::new(entries).map_err(|e| Failure::invalid(e.to_string()))
}

fn cmd_conjugate_set(a: &Matrix, direction: Option<&str>, tol: &ToleranceConfig) -> CmdResult {
    let set = sinf_conjugate_set(a, tol)?;
    let mut body = json!({
        "sigma1": set.sigma1,
        "r1": set.multiplicity,
        "dimension": set.dimension,
        "mult_rel_tol": set.mult_rel_tol,
        "member": null,
        "membership": null,
    });
    let Some(text) = direction else {
        return Ok(Outcome::ok(body));
    };
    let p = parse_direction(text)?;
    if p.len() != set.multiplicity {
        return Err(Failure::invalid(format!(
            "direction has length {}, expected r1 = {}",
            p.len(),
            set.multiplicity
        )));
    }
    let member = sinf_rank1_conjugate(&set, &p)?;
    let membership = sinf_membership(&set, a, &member, tol)?;
    body["member"] = matrix_json(&member);
    body["membership"] = membership_json(&membership);
    Ok(Outcome::verdict(membership.is_member(), "not_member", body))
}

fn cmd_oracle_check(a: &Matrix, p: HolderExponent, seed: u64, tol: &ToleranceConfig) -> CmdResult {
    let (m, n) = a.shape();
    if m.max(n) > ORACLE_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            max: ORACLE_MAX_DIM,
            found: m.max(n),
        }
        .into());
    }
    let result = maximize_pairing(a, p, &OracleConfig::with_seed(seed))?;
    let norm = schatten_norm(a, p)?;
    let expected_value = norm * norm;
    let value_discrepancy = (result.value - expected_value).abs() / expected_value;
    let maximizer_discrepancy = if p.is_interior() {
        let closed = dual_map_sp(a, p, tol)?;
        Some(result.maximizer.distance(&closed)? / closed.frobenius_norm())
    } else {
        None
    };
    let membership = if p.is_infinite() {
        let set = sinf_conjugate_set(a, tol)?;
        Some(membership_json(&sinf_membership(
            &set,
            a,
            &result.maximizer,
            tol,
        )?))
    } else {
        None
    };
    let report = verify_conjugate_pair(a, &result.maximizer, p, tol)?;
    let agrees = value_discrepancy <= ORACLE_AGREEMENT_TOL
        && maximizer_discrepancy.is_none_or(|d| d <= ORACLE_AGREEMENT_TOL);
    let body = json!({
        "p": p.to_string(),
        "seed": seed,
        "value": result.value,
        "expected_value": expected_value,
        "residuals": {
            "value": value_discrepancy,
            "maximizer": maximizer_discrepancy,
        },
        "tolerance": ORACLE_AGREEMENT_TOL,
        "converged": result.converged,
        "restarts": result.restarts_used,
        "pairing": report.pairing,
        "is_conjugate": report.is_conjugate,
        "membership": membership,
        "maximizer": matrix_json(&result.maximizer),
    });
    if !result.converged {
        return Ok(Outcome {
            code: EXIT_NOT_CONVERGED,
            reason: "not_converged",
            body,
        });
    }
    Ok(Outcome::verdict(agrees, "oracle_mismatch", body))
}

fn cmd_demo(name: &str, tol: &ToleranceConfig) -> CmdResult {
    match name {
        "discontinuity" => {
            let demo = discontinuity(&DISCONTINUITY_KS, tol)?;
            Ok(Outcome::ok(json!({
                "name": name,
                "steps": demo.steps,
                "limit_image": demo.limit_image,
                "limit_point": demo.limit_point,
                "limit_point_image": demo.limit_point_image,
                "jump": demo.jump,
            })))
        }
        "strict-convexity" => Ok(Outcome::ok(json!({
            "name": name,
            "rows": strict_convexity(&CONVEXITY_ALPHAS, 2)?,
        }))),
        other => Err(Failure::invalid(format!(
            "unknown demo '{other}'; expected discontinuity or strict-convexity"
        ))),
    }
}

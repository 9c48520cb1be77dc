#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schatten_core::sampling::{gaussian, rank_deficient, unit_vector, with_spectrum};
use schatten_core::{
    schatten_norm, singular_values, svd_reduced, HolderExponent, Matrix, RealVector,
    ToleranceConfig,
};
use serde_json::Value;

pub const CORPUS_SEED: u64 = 0x5eed_2024;
pub const CORPUS_SIZE: usize = 500;
/// Smallest accepted `sigma_r / sigma_1` of the intended rank `r`; keeps the
/// `(p - 1)`-th power of the spectrum for `p <= 4` well above the rank cutoff.
pub const MIN_CONDITION: f64 = 1e-3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random matrices of shape up to 8 x 6; every third one has forced rank
/// deficiency.
pub fn corpus(seed: u64, count: usize) -> Vec<Matrix> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let rows = rng.random_range(1..=8);
        let cols = rng.random_range(1..=6);
        let full = rows.min(cols);
        let (a, rank) = if out.len() % 3 == 2 && full > 1 {
            let rank = rng.random_range(1..full);
            (rank_deficient(&mut rng, rows, cols, rank), rank)
        } else {
            (gaussian(&mut rng, rows, cols), full)
        };
        let s = singular_values(&a).unwrap();
        if s[rank - 1] >= MIN_CONDITION * s[0] {
            out.push(a);
        }
    }
    out
}

/// Corpus members whose rank is below `min(rows, cols)`.
pub fn rank_deficient_corpus(seed: u64, count: usize) -> Vec<Matrix> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let rows = rng.random_range(2..=8);
        let cols = rng.random_range(2..=6);
        let rank = rng.random_range(1..rows.min(cols));
        let a = rank_deficient(&mut rng, rows, cols, rank);
        let s = singular_values(&a).unwrap();
        if s[rank - 1] >= MIN_CONDITION * s[0] {
            out.push(a);
        }
    }
    out
}

/// `I - F F^T` for a factor `F` with orthonormal columns.
fn complement_projector(f: &Matrix) -> Matrix {
    &Matrix::identity(f.rows()) - &f.matmul(&f.transpose()).unwrap()
}

/// A conjugate of `a` under `(S_1, S_inf)` of rank above `rank(a)`:
/// `||a||_{S_1} (U_r V_r^T + W)` with `W` supported on the orthogonal
/// complements of the singular subspaces and `||W||_{S_inf} = t <= 1`.
pub fn s1_alternative<R: Rng>(rng: &mut R, a: &Matrix, t: f64) -> Matrix {
    let tol = ToleranceConfig::default();
    let svd = svd_reduced(a, &tol).unwrap();
    let (u, v) = (svd.u(), svd.v());
    let g = gaussian(rng, a.rows(), a.cols());
    let w = complement_projector(u)
        .matmul(&g)
        .unwrap()
        .matmul(&complement_projector(v))
        .unwrap();
    let w = w.scale(t / singular_values(&w).unwrap()[0]);
    let partial_isometry = u.matmul(&v.transpose()).unwrap();
    (&partial_isometry + &w).scale(schatten_norm(a, HolderExponent::ONE).unwrap())
}

/// Matrix of shape up to 6 x 5 whose largest singular value has multiplicity
/// `r1`, the remaining spectrum sitting below `0.9 sigma1`.
pub fn sinf_case<R: Rng>(rng: &mut R) -> (Matrix, usize) {
    let rows = rng.random_range(1..=6);
    let cols = rng.random_range(1..=5);
    let full = rows.min(cols);
    let r1 = rng.random_range(1..=full);
    let sigma1: f64 = rng.random_range(0.5..3.0);
    let mut spectrum: Vec<f64> = vec![sigma1; r1];
    let tail = rng.random_range(0..=full - r1);
    for _ in 0..tail {
        spectrum.push(sigma1 * rng.random_range(0.05..0.9));
    }
    spectrum[r1..].sort_by(|x, y| y.total_cmp(x));
    (with_spectrum(rng, rows, cols, &spectrum), r1)
}

pub fn random_direction<R: Rng>(rng: &mut R, n: usize) -> RealVector {
    RealVector::new(unit_vector(rng, n)).unwrap()
}

pub fn rel_err(x: f64, target: f64) -> f64 {
    (x - target).abs() / target.abs()
}

/// One CLI invocation with its expected exit code; `name` doubles as the
/// golden file stem.
pub struct CliCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

#[rustfmt::skip]
pub const CLI_CASES: &[CliCase] = &[
    CliCase { name: "norm_p1_diag21", args: &["norm", "--p", "1", "diag21.csv"], exit: 0 },
    CliCase { name: "norm_inf_identity3", args: &["norm", "--p", "inf", "identity3.csv"], exit: 0 },
    CliCase { name: "norm_p2_zero", args: &["norm", "--p", "2", "zero2.csv"], exit: 0 },
    CliCase { name: "norm_json_input", args: &["norm", "--p", "1.5", "random43.json"], exit: 0 },
    CliCase { name: "norm_bad_p", args: &["norm", "--p", "0.5", "diag21.csv"], exit: 3 },
    CliCase { name: "norm_missing_file", args: &["norm", "--p", "2", "missing.csv"], exit: 2 },
    CliCase { name: "norm_bad_tolerance", args: &["norm", "--p", "2", "--rank-tol", "2", "diag21.csv"], exit: 3 },
    CliCase { name: "dual_map_p2", args: &["dual-map", "--p", "2", "shear.csv"], exit: 0 },
    CliCase { name: "dual_map_p1_s100", args: &["dual-map", "--p", "1", "s100.csv", "--output", "image.json"], exit: 0 },
    CliCase { name: "dual_map_p1_5", args: &["dual-map", "--p", "1.5", "random43.json"], exit: 0 },
    CliCase { name: "dual_map_inf", args: &["dual-map", "--p", "inf", "diag21.csv"], exit: 3 },
    CliCase { name: "dual_map_zero", args: &["dual-map", "--p", "3", "zero2.csv"], exit: 4 },
    CliCase { name: "dual_map_garbage", args: &["dual-map", "--p", "3", "garbage.csv"], exit: 2 },
    CliCase { name: "verify_dual_pair", args: &["verify-pair", "--p", "3", "shear.csv", "shear_dual_p3.csv"], exit: 0 },
    CliCase { name: "verify_gap_inf", args: &["verify-pair", "--p", "inf", "diag21.csv", "identity2.csv"], exit: 1 },
    CliCase { name: "verify_rank_equal_p1", args: &["verify-pair", "--p", "1", "diag21.csv", "three_identity2.csv"], exit: 0 },
    CliCase { name: "verify_shape_mismatch", args: &["verify-pair", "--p", "2", "diag21.csv", "identity3.csv"], exit: 2 },
    CliCase { name: "verify_zero", args: &["verify-pair", "--p", "2", "diag21.csv", "zero2.csv"], exit: 4 },
    CliCase { name: "conjugate_set_identity_direction", args: &["conjugate-set", "identity2.csv", "--direction", "1,0"], exit: 0 },
    CliCase { name: "conjugate_set_diag21", args: &["conjugate-set", "diag21.csv"], exit: 0 },
    CliCase { name: "conjugate_set_diag551", args: &["conjugate-set", "diag551.csv"], exit: 0 },
    CliCase { name: "conjugate_set_bad_direction", args: &["conjugate-set", "diag551.csv", "--direction", "1,0,0"], exit: 3 },
    CliCase { name: "conjugate_set_zero", args: &["conjugate-set", "zero2.csv"], exit: 4 },
    CliCase { name: "oracle_p3_random", args: &["oracle-check", "--p", "3", "random43.json", "--seed", "7"], exit: 0 },
    CliCase { name: "oracle_p2_identity", args: &["oracle-check", "--p", "2", "identity2.csv"], exit: 0 },
    CliCase { name: "oracle_inf_diag21", args: &["oracle-check", "--p", "inf", "diag21.csv"], exit: 0 },
    CliCase { name: "oracle_zero", args: &["oracle-check", "--p", "2", "zero2.csv"], exit: 4 },
    CliCase { name: "oracle_too_large", args: &["oracle-check", "--p", "2", "wide65.csv"], exit: 3 },
    CliCase { name: "demo_discontinuity", args: &["demo", "discontinuity"], exit: 0 },
    CliCase { name: "demo_strict_convexity", args: &["demo", "strict-convexity"], exit: 0 },
    CliCase { name: "demo_unknown", args: &["demo", "nonsense"], exit: 3 },
    CliCase { name: "unknown_command", args: &["transpose", "diag21.csv"], exit: 3 },
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixtures_dir() -> PathBuf {
    crate_dir().join("tests").join("fixtures")
}

pub fn golden_dir() -> PathBuf {
    crate_dir().join("tests").join("golden")
}

/// Scratch directory holding a copy of every fixture, so relative paths in
/// the output are stable.
pub fn scratch_with_fixtures() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(fixtures_dir()).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, dir.path().join(path.file_name().unwrap())).unwrap();
    }
    dir
}

pub struct CliRun {
    pub code: i32,
    pub stdout: Value,
    pub stderr: String,
}

pub fn run_cli(bin: &Path, cwd: &Path, args: &[&str]) -> CliRun {
    let out = Command::new(bin)
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    CliRun {
        code: out.status.code().unwrap(),
        stdout: serde_json::from_str(&stdout)
            .unwrap_or_else(|e| panic!("stdout of {args:?} is not JSON ({e}): {stdout}")),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// Every key path in a JSON value; array elements share the path `[]`.
pub fn schema(v: &Value) -> BTreeSet<String> {
    fn walk(v: &Value, prefix: &str, out: &mut BTreeSet<String>) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let path = format!("{prefix}.{k}");
                    out.insert(path.clone());
                    walk(child, &path, out);
                }
            }
            Value::Array(items) => {
                for child in items {
                    walk(child, &format!("{prefix}[]"), out);
                }
            }
            _ => {}
        }
    }
    let mut out = BTreeSet::new();
    walk(v, "", &mut out);
    out
}

/// Structural equality with numbers compared to `tol` (absolute below 1,
/// relative above).
pub fn json_close(actual: &Value, expected: &Value, tol: f64, path: &str) -> Result<(), String> {
    match (actual, expected) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap(), b.as_f64().unwrap());
            if (a - b).abs() <= tol * b.abs().max(1.0) {
                Ok(())
            } else {
                Err(format!("{path}: {a} != {b}"))
            }
        }
        (Value::Object(a), Value::Object(b)) => {
            let ka: BTreeSet<_> = a.keys().collect();
            let kb: BTreeSet<_> = b.keys().collect();
            if ka != kb {
                return Err(format!("{path}: keys {ka:?} != {kb:?}"));
            }
            for (k, v) in a {
                json_close(v, &b[k], tol, &format!("{path}.{k}"))?;
            }
            Ok(())
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                return Err(format!("{path}: length {} != {}", a.len(), b.len()));
            }
            for (i, (x, y)) in a.iter().zip(b).enumerate() {
                json_close(x, y, tol, &format!("{path}[{i}]"))?;
            }
            Ok(())
        }
        (a, b) if a == b => Ok(()),
        (a, b) => Err(format!("{path}: {a} != {b}")),
    }
}

/// Residual-like fields depend on floating-point rounding at the 1e-16
/// level; they are compared against the golden value with this tolerance.
pub const GOLDEN_TOL: f64 = 1e-9;

/// Runs every CLI case against its golden file. Set `SCHATTEN_BLESS=1` to
/// rewrite the golden files.
pub fn check_cli_golden(bin: &Path) -> Vec<String> {
    let bless = std::env::var_os("SCHATTEN_BLESS").is_some();
    let scratch = scratch_with_fixtures();
    let mut failures = Vec::new();
    for case in CLI_CASES {
        let run = run_cli(bin, scratch.path(), case.args);
        if run.code != case.exit {
            failures.push(format!("{}: exit {} != {}", case.name, run.code, case.exit));
        }
        if case.exit == 0 && !run.stderr.is_empty() {
            failures.push(format!("{}: stderr on success: {}", case.name, run.stderr));
        }
        if case.exit >= 2 && run.stderr.is_empty() {
            failures.push(format!("{}: no message on stderr", case.name));
        }
        let golden = golden_dir().join(format!("{}.json", case.name));
        if bless {
            std::fs::create_dir_all(golden_dir()).unwrap();
            let text = serde_json::to_string_pretty(&run.stdout).unwrap();
            std::fs::write(&golden, text + "\n").unwrap();
            continue;
        }
        let expected: Value = match std::fs::read_to_string(&golden) {
            Ok(text) => serde_json::from_str(&text).unwrap(),
            Err(_) => {
                failures.push(format!(
                    "{}: missing golden file {}",
                    case.name,
                    golden.display()
                ));
                continue;
            }
        };
        if let Err(e) = json_close(&run.stdout, &expected, GOLDEN_TOL, case.name) {
            failures.push(e);
        }
    }
    failures
}

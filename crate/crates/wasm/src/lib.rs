//! Browser bindings for the static demo page in `www/`.
//!
//! Each operation has a plain Rust form returning JSON (tested natively) and a
//! `#[wasm_bindgen]` wrapper with the same arguments.

use schatten_core::demos::s_k;
use schatten_core::{
    dual_map_sp, schatten_norm, sinf_conjugate_set, sinf_membership, sinf_rank1_conjugate,
    singular_values, sparse_dual_map_s1, verify_conjugate_pair, HolderExponent, Matrix, RealVector,
    ToleranceConfig,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn matrix(rows: usize, cols: usize, entries: &[f64]) -> Result<Matrix, String> {
    Matrix::from_row_slice(rows, cols, entries).map_err(|e| e.to_string())
}

fn to_json(v: Value) -> String {
    v.to_string()
}

/// Duality map of `A` at exponent `p` (the rank-minimal selector at `p = 1`),
/// with both spectra and the conjugacy report.
pub fn dual_map_report(
    rows: usize,
    cols: usize,
    entries: &[f64],
    p: f64,
) -> Result<String, String> {
    let a = matrix(rows, cols, entries)?;
    let p = HolderExponent::new(p).map_err(|e| e.to_string())?;
    if p.is_infinite() {
        return Err("p = inf has a set of conjugates; see the conjugate-set panel".into());
    }
    let tol = ToleranceConfig::default();
    let image = if p.is_one() {
        sparse_dual_map_s1(&a, &tol)
    } else {
        dual_map_sp(&a, p, &tol)
    }
    .map_err(|e| e.to_string())?;
    let report = verify_conjugate_pair(&a, &image, p, &tol).map_err(|e| e.to_string())?;
    Ok(to_json(json!({
        "p": p.p(),
        "q": p.q(),
        "norm": schatten_norm(&a, p).map_err(|e| e.to_string())?,
        "singular_values": singular_values(&a).map_err(|e| e.to_string())?,
        "image": image.to_rows(),
        "image_singular_values": singular_values(&image).map_err(|e| e.to_string())?,
        "pairing": report.pairing,
        "is_conjugate": report.is_conjugate,
        "saturation_residual": report.saturation_residual,
        "norm_equality_residual": report.norm_equality_residual,
    })))
}

/// Rank-minimal `S_1` selector along `diag(1, 1/k)` against its limit.
pub fn discontinuity_step(k: u32) -> Result<String, String> {
    if k == 0 {
        return Err("k must be positive".into());
    }
    let tol = ToleranceConfig::default();
    let input = s_k(k as u64);
    let image = sparse_dual_map_s1(&input, &tol).map_err(|e| e.to_string())?;
    let limit_point = Matrix::diag(&[1.0, 0.0]).expect("finite");
    let limit_image = sparse_dual_map_s1(&limit_point, &tol).map_err(|e| e.to_string())?;
    Ok(to_json(json!({
        "k": k,
        "input": input.to_rows(),
        "image": image.to_rows(),
        "input_distance": input.distance(&limit_point).map_err(|e| e.to_string())?,
        "limit_point_image": limit_image.to_rows(),
        "image_distance": image.distance(&limit_image).map_err(|e| e.to_string())?,
    })))
}

/// Rank-one member of the spectral-norm conjugate set of `A` along the
/// direction `(cos t, sin t, 0, ...)` in the leading singular block.
pub fn sinf_member(
    rows: usize,
    cols: usize,
    entries: &[f64],
    angle: f64,
) -> Result<String, String> {
    let a = matrix(rows, cols, entries)?;
    let tol = ToleranceConfig::default();
    let set = sinf_conjugate_set(&a, &tol).map_err(|e| e.to_string())?;
    let mut direction = vec![0.0; set.multiplicity];
    direction[0] = angle.cos();
    if set.multiplicity > 1 {
        direction[1] = angle.sin();
    }
    let direction = RealVector::new(direction).map_err(|e| e.to_string())?;
    let member = sinf_rank1_conjugate(&set, &direction).map_err(|e| e.to_string())?;
    let m = sinf_membership(&set, &a, &member, &tol).map_err(|e| e.to_string())?;
    Ok(to_json(json!({
        "sigma1": set.sigma1,
        "r1": set.multiplicity,
        "dimension": set.dimension,
        "direction": direction.as_slice(),
        "member": member.to_rows(),
        "is_member": m.is_member(),
        "factor": m.factor.to_rows(),
        "factor_trace": m.factor_trace,
        "factor_min_eigenvalue": m.factor_min_eigenvalue,
        "pairing": m.report.pairing,
    })))
}

#[wasm_bindgen(js_name = dualMap)]
pub fn dual_map_js(rows: usize, cols: usize, entries: &[f64], p: f64) -> Result<String, JsError> {
    dual_map_report(rows, cols, entries, p).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = discontinuityStep)]
pub fn discontinuity_step_js(k: u32) -> Result<String, JsError> {
    discontinuity_step(k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = sinfMember)]
pub fn sinf_member_js(
    rows: usize,
    cols: usize,
    entries: &[f64],
    angle: f64,
) -> Result<String, JsError> {
    sinf_member(rows, cols, entries, angle).map_err(|e| JsError::new(&e))
}

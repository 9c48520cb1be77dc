//! Schatten-p norms, the trace pairing and Holder-gap diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, Matrix};
use crate::vector::{lp_norm_slice, HolderExponent};

/// `||A||_{S_p}`: the `l_p` norm of the singular values. Zero for the zero matrix.
pub fn schatten_norm(a: &Matrix, p: HolderExponent) -> Result<f64> {
    if p.p() == 2.0 {
        return Ok(a.frobenius_norm());
    }
    spectral_schatten_norm(a, p.p())
}

/// Schatten norm evaluated from the full spectrum for any `p` in `[1, inf]`.
pub(crate) fn spectral_schatten_norm(a: &Matrix, p: f64) -> Result<f64> {
    Ok(lp_norm_slice(&singular_values(a)?, p))
}

/// Trace pairing `<A, B> = Tr(A^T B)`.
pub fn frobenius_inner(a: &Matrix, b: &Matrix) -> Result<f64> {
    a.check_same_shape(b)?;
    Ok(a.as_dmatrix().dot(b.as_dmatrix()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HolderGap {
    pub pairing: f64,
    /// `||A||_{S_p} ||B||_{S_q}`.
    pub bound: f64,
    pub gap: f64,
    pub relative_gap: f64,
}

/// Slack in `Tr(A^T B) <= ||A||_{S_p} ||B||_{S_q}`.
pub fn holder_gap(a: &Matrix, b: &Matrix, p: HolderExponent) -> Result<HolderGap> {
    a.check_same_shape(b)?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let pairing = frobenius_inner(a, b)?;
    let bound = schatten_norm(a, p)? * schatten_norm(b, p.conjugate())?;
    let gap = bound - pairing;
    Ok(HolderGap {
        pairing,
        bound,
        gap,
        relative_gap: gap / bound,
    })
}

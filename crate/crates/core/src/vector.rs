//! `l_p` norms and duality mappings on `R^n`.
//!
//! These are the scalar kernels that the matrix mappings apply to singular
//! values. `sign(0) = 0` throughout, so zero entries need no special casing.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ToleranceConfig;

/// Finite real vector of length at least one.
#[derive(Clone, Debug, PartialEq)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidShape(
                "vector needs at least one entry".into(),
            ));
        }
        if let Some(pos) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(RealVector(entries))
    }

    /// Standard basis vector `e_index` of length `len`.
    pub fn basis(len: usize, index: usize) -> Self {
        assert!(index < len);
        let mut e = vec![0.0; len];
        e[index] = 1.0;
        RealVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn dot(&self, other: &RealVector) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(dot(&self.0, &other.0))
    }

    /// Number of nonzero entries.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&x| x != 0.0).count()
    }
}

impl std::ops::Index<usize> for RealVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Holder-conjugate pair `(p, q)` with `1/p + 1/q = 1`, `p` in `[1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolderExponent {
    p: f64,
    q: f64,
}

impl HolderExponent {
    pub const ONE: HolderExponent = HolderExponent {
        p: 1.0,
        q: f64::INFINITY,
    };
    pub const TWO: HolderExponent = HolderExponent { p: 2.0, q: 2.0 };
    pub const INFINITY: HolderExponent = HolderExponent {
        p: f64::INFINITY,
        q: 1.0,
    };

    /// Values of `p` just above 1 or very large are accepted but badly
    /// conditioned: the `p - 2` exponent of the duality map amplifies roundoff.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(
                p.to_string(),
                "p must lie in [1, inf]",
            ));
        }
        let q = if p == 1.0 {
            f64::INFINITY
        } else if p.is_infinite() {
            1.0
        } else {
            p / (p - 1.0)
        };
        Ok(HolderExponent { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The pair with roles exchanged, `(q, p)`.
    pub fn conjugate(&self) -> Self {
        HolderExponent {
            p: self.q,
            q: self.p,
        }
    }

    pub fn is_one(&self) -> bool {
        self.p == 1.0
    }

    pub fn is_infinite(&self) -> bool {
        self.p.is_infinite()
    }

    /// `1 < p < inf`, the regime with a single-valued duality map.
    pub fn is_interior(&self) -> bool {
        !self.is_one() && !self.is_infinite()
    }
}

impl FromStr for HolderExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let p = match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" | "∞" => f64::INFINITY,
            other => other
                .parse::<f64>()
                .map_err(|_| Error::InvalidExponent(t.to_string(), "not a number or 'inf'"))?,
        };
        HolderExponent::new(p)
    }
}

impl fmt::Display for HolderExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.p)
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `l_p` norm of a slice for `p` in `[1, inf]`, scaled by the largest entry
/// so large `p` neither overflows nor underflows.
pub(crate) fn lp_norm_slice(u: &[f64], p: f64) -> f64 {
    let max = u.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if max == 0.0 || p.is_infinite() {
        return max;
    }
    if p == 1.0 {
        return u.iter().map(|x| x.abs()).sum();
    }
    if p == 2.0 {
        let s: f64 = u.iter().map(|x| (x / max) * (x / max)).sum();
        return max * s.sqrt();
    }
    let s: f64 = u.iter().map(|x| (x.abs() / max).powf(p)).sum();
    max * s.powf(1.0 / p)
}

/// `J_p` on a slice, `1 < p < inf`, `u != 0`.
pub(crate) fn dual_map_lp_slice(u: &[f64], p: f64) -> Vec<f64> {
    let norm = lp_norm_slice(u, p);
    // |u|^(p-1) / ||u||^(p-2) == ||u|| (|u| / ||u||)^(p-1)
    u.iter()
        .map(|&x| sign(x) * norm * (x.abs() / norm).powf(p - 1.0))
        .collect()
}

pub fn lp_norm(u: &RealVector, p: HolderExponent) -> f64 {
    lp_norm_slice(u.as_slice(), p.p())
}

/// Single-valued duality map of `l_p`, `1 < p < inf`:
/// `v_i = sign(u_i) |u_i|^(p-1) / ||u||_p^(p-2)`.
pub fn dual_map_lp(u: &RealVector, p: HolderExponent) -> Result<RealVector> {
    if !p.is_interior() {
        return Err(Error::InvalidExponent(
            p.to_string(),
            "the single-valued map needs 1 < p < inf",
        ));
    }
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(RealVector(dual_map_lp_slice(u.as_slice(), p.p())))
}

/// Sparsest member of the `l_1` duality set: `sign(u_i) ||u||_1` on the support of `u`.
pub fn sparse_dual_map_l1(u: &RealVector) -> Result<RealVector> {
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n1 = lp_norm_slice(u.as_slice(), 1.0);
    Ok(RealVector(
        u.as_slice().iter().map(|&x| sign(x) * n1).collect(),
    ))
}

/// Extreme points `u_i e_i` of the `l_inf` duality set, one per index with
/// `|u_i| >= (1 - mult_rel_tol) ||u||_inf`, in index order.
pub fn linf_conjugate_extremes(u: &RealVector, tol: &ToleranceConfig) -> Result<Vec<RealVector>> {
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = u.len();
    let max = lp_norm_slice(u.as_slice(), f64::INFINITY);
    let floor = (1.0 - tol.mult_rel_tol) * max;
    Ok(u.as_slice()
        .iter()
        .enumerate()
        .filter(|(_, x)| x.abs() >= floor)
        .map(|(i, &x)| {
            let mut e = vec![0.0; n];
            e[i] = x;
            RealVector(e)
        })
        .collect())
}

/// Residuals of the two conjugacy conditions `<u,v> = ||u|| ||v||_*` and
/// `||v||_* = ||u||`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConjugacyReport {
    pub pairing: f64,
    pub norm_primal: f64,
    pub norm_dual: f64,
    /// `(||u|| ||v||_* - <u,v>) / (||u|| ||v||_*)`.
    pub saturation_residual: f64,
    /// `| ||v||_* - ||u|| | / ||u||`.
    pub norm_equality_residual: f64,
    pub is_conjugate: bool,
}

pub(crate) fn conjugacy_verdict(
    pairing: f64,
    norm_primal: f64,
    norm_dual: f64,
    tol: &ToleranceConfig,
) -> ConjugacyReport {
    let bound = norm_primal * norm_dual;
    let saturation_residual = (bound - pairing) / bound;
    let norm_equality_residual = (norm_dual - norm_primal).abs() / norm_primal;
    ConjugacyReport {
        pairing,
        norm_primal,
        norm_dual,
        saturation_residual,
        norm_equality_residual,
        is_conjugate: saturation_residual.abs() <= tol.sat_rel_tol
            && norm_equality_residual <= tol.sat_rel_tol,
    }
}

/// Tests whether `v` belongs to the `l_p` duality set of `u`.
pub fn is_lp_conjugate(
    u: &RealVector,
    v: &RealVector,
    p: HolderExponent,
    tol: &ToleranceConfig,
) -> Result<ConjugacyReport> {
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let pairing = u.dot(v)?;
    Ok(conjugacy_verdict(
        pairing,
        lp_norm(u, p),
        lp_norm_slice(v.as_slice(), p.q()),
        tol,
    ))
}

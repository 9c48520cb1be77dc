//! Reproductions of the two classic counterexamples: the jump of the
//! rank-minimal `S_1` selector at a rank drop, and the flat segments on the
//! `S_1` and `S_inf` unit spheres.

use serde::Serialize;

use crate::duality::sparse_dual_map_s1;
use crate::error::Result;
use crate::linalg::{Matrix, ToleranceConfig};
use crate::norms::schatten_norm;
use crate::vector::HolderExponent;

pub const DISCONTINUITY_KS: [u64; 4] = [1, 10, 100, 1000];
pub const CONVEXITY_ALPHAS: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscontinuityStep {
    pub k: u64,
    /// `S_k = diag(1, 1/k)`.
    pub input: Matrix,
    pub image: Matrix,
    /// `||S_k||_{S_1} = 1 + 1/k`, the factor in front of `U_r V_r^T`.
    pub scale: f64,
    /// `||image - J(S_inf)||_F`.
    pub distance_to_limit_point_image: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscontinuityDemo {
    pub steps: Vec<DiscontinuityStep>,
    /// `lim_k J(S_k)`.
    pub limit_image: Matrix,
    /// `S_inf = diag(1, 0) = lim_k S_k`.
    pub limit_point: Matrix,
    /// `J(S_inf)`.
    pub limit_point_image: Matrix,
    /// `||lim_k J(S_k) - J(S_inf)||_F`.
    pub jump: f64,
}

/// `S_k = diag(1, 1/k)`.
pub fn s_k(k: u64) -> Matrix {
    Matrix::diag(&[1.0, 1.0 / k as f64]).expect("finite diagonal")
}

/// Images of `S_k` under the rank-minimal `S_1` selector against the image of
/// their limit `diag(1, 0)`.
///
/// Every `J(S_k)` equals `||S_k||_{S_1} U_r V_r^T` with the same full-rank
/// `U_r V_r^T`; the limit of the images is that partial isometry times the
/// limiting nuclear norm, which differs from `J(diag(1, 0))`.
pub fn discontinuity(ks: &[u64], tol: &ToleranceConfig) -> Result<DiscontinuityDemo> {
    let limit_point = Matrix::diag(&[1.0, 0.0])?;
    let limit_point_image = sparse_dual_map_s1(&limit_point, tol)?;
    let mut steps = Vec::with_capacity(ks.len());
    for &k in ks {
        let input = s_k(k);
        let image = sparse_dual_map_s1(&input, tol)?;
        let scale = schatten_norm(&input, HolderExponent::ONE)?;
        let distance_to_limit_point_image = image.distance(&limit_point_image)?;
        steps.push(DiscontinuityStep {
            k,
            input,
            image,
            scale,
            distance_to_limit_point_image,
        });
    }
    // U_r V_r^T of any S_k, scaled by the nuclear norm of the limit
    let direction = {
        let probe = s_k(ks.iter().copied().max().unwrap_or(1));
        let image = sparse_dual_map_s1(&probe, tol)?;
        image.scale(1.0 / schatten_norm(&probe, HolderExponent::ONE)?)
    };
    let limit_image = direction.scale(schatten_norm(&limit_point, HolderExponent::ONE)?);
    let jump = limit_image.distance(&limit_point_image)?;
    Ok(DiscontinuityDemo {
        steps,
        limit_image,
        limit_point,
        limit_point_image,
        jump,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvexityRow {
    pub alpha: f64,
    /// `||alpha E_11 + (1 - alpha) E_nn||_{S_1}`.
    pub s1_norm: f64,
    /// `||alpha E_11 + (1 - alpha) I||_{S_inf}`.
    pub sinf_norm: f64,
}

/// Segments between unit-norm endpoints that stay on the unit sphere, for
/// `S_1` and `S_inf` in `n x n` matrices.
pub fn strict_convexity(alphas: &[f64], n: usize) -> Result<Vec<ConvexityRow>> {
    assert!(n >= 2, "needs at least 2x2 matrices");
    let mut e11 = vec![0.0; n];
    e11[0] = 1.0;
    let mut enn = vec![0.0; n];
    enn[n - 1] = 1.0;
    let e11 = Matrix::diag(&e11)?;
    let enn = Matrix::diag(&enn)?;
    let id = Matrix::identity(n);
    alphas
        .iter()
        .map(|&alpha| {
            let s1_mix = &e11.scale(alpha) + &enn.scale(1.0 - alpha);
            let sinf_mix = &e11.scale(alpha) + &id.scale(1.0 - alpha);
            Ok(ConvexityRow {
                alpha,
                s1_norm: schatten_norm(&s1_mix, HolderExponent::ONE)?,
                sinf_norm: schatten_norm(&sinf_mix, HolderExponent::INFINITY)?,
            })
        })
        .collect()
}

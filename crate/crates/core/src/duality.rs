//! Duality mappings of the Schatten spaces.
//!
//! * `1 < p < inf`: the map is single-valued, `A = U_r diag(s) V_r^T` goes to
//!   `U_r diag(J_p(s)) V_r^T` ([`dual_map_sp`]).
//! * `p = 1`: the duality set is a face of the spectral-norm ball; its unique
//!   member of minimal rank is `||s||_1 U_r V_r^T` ([`sparse_dual_map_s1`]).
//! * `p = inf`: the duality set is `{ s_1 U_1 X V_1^T }` over the leading
//!   singular block, described by [`SInfConjugateSet`].
//!
//! Membership questions are always settled by the two scalar conjugacy
//! conditions ([`verify_conjugate_pair`]); the parametric forms returned by
//! [`classify_saturation`] and [`sinf_membership`] are diagnostics checked
//! against that verdict.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{leading_multiplicity, singular_values, svd_reduced, Matrix, ToleranceConfig};
use crate::norms::{frobenius_inner, holder_gap, schatten_norm};
use crate::vector::{
    conjugacy_verdict, dual_map_lp_slice, lp_norm_slice, HolderExponent, RealVector,
};

pub use crate::vector::ConjugacyReport;

fn check_pair(a: &Matrix, b: &Matrix) -> Result<()> {
    a.check_same_shape(b)?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok(())
}

/// Single-valued duality map `J_{S_p}` for `1 < p < inf`.
///
/// The result does not depend on which reduced SVD of `a` is used.
pub fn dual_map_sp(a: &Matrix, p: HolderExponent, tol: &ToleranceConfig) -> Result<Matrix> {
    if !p.is_interior() {
        return Err(Error::InvalidExponent(
            p.to_string(),
            "the single-valued Schatten map needs 1 < p < inf",
        ));
    }
    let svd = svd_reduced(a, tol)?;
    Ok(svd.recombine(&dual_map_lp_slice(svd.singular_values(), p.p())))
}

/// Minimal-rank member of the `S_1` duality set: `||s||_1 U_r V_r^T`.
///
/// Discontinuous wherever the rank of `a` drops.
pub fn sparse_dual_map_s1(a: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    let svd = svd_reduced(a, tol)?;
    let nuclear: f64 = svd.singular_values().iter().sum();
    Ok(svd.recombine(&vec![nuclear; svd.rank()]))
}

/// Checks both conjugacy conditions for `(a, b)` under `(S_p, S_q)`.
pub fn verify_conjugate_pair(
    a: &Matrix,
    b: &Matrix,
    p: HolderExponent,
    tol: &ToleranceConfig,
) -> Result<ConjugacyReport> {
    check_pair(a, b)?;
    let pairing = frobenius_inner(a, b)?;
    Ok(conjugacy_verdict(
        pairing,
        schatten_norm(a, p)?,
        schatten_norm(b, p.conjugate())?,
        tol,
    ))
}

/// Parameters of the spectral-norm duality set
/// `{ sigma1 U1 X V1^T : X symmetric PSD, trace X = 1 }`.
#[derive(Clone, Debug, PartialEq)]
pub struct SInfConjugateSet {
    pub sigma1: f64,
    /// `m x r1` leading left singular vectors.
    pub u1: Matrix,
    /// `n x r1` leading right singular vectors.
    pub v1: Matrix,
    /// Multiplicity `r1` of the largest singular value.
    pub multiplicity: usize,
    /// Affine dimension `r1 (r1 + 1) / 2 - 1`.
    pub dimension: usize,
    /// Grouping tolerance that produced `multiplicity`. Near-degenerate
    /// spectra may group differently under a tighter value.
    pub mult_rel_tol: f64,
}

impl SInfConjugateSet {
    /// `sigma1 U1 X V1^T` for an `r1 x r1` factor `X`.
    pub fn embed(&self, x: &Matrix) -> Result<Matrix> {
        let r1 = self.multiplicity;
        if x.shape() != (r1, r1) {
            return Err(Error::ShapeMismatch {
                left: (r1, r1),
                right: x.shape(),
            });
        }
        Ok(self.embed_raw(x.as_dmatrix()))
    }

    fn embed_raw(&self, x: &DMatrix<f64>) -> Matrix {
        Matrix::wrap(self.u1.as_dmatrix() * x * self.v1.as_dmatrix().transpose() * self.sigma1)
    }

    /// `(1 / sigma1) U1^T B V1`.
    fn extract_factor(&self, b: &Matrix) -> DMatrix<f64> {
        self.u1.as_dmatrix().transpose() * b.as_dmatrix() * self.v1.as_dmatrix() / self.sigma1
    }
}

pub fn sinf_conjugate_set(a: &Matrix, tol: &ToleranceConfig) -> Result<SInfConjugateSet> {
    let svd = svd_reduced(a, tol)?;
    let r1 = leading_multiplicity(&svd, tol);
    let (u1, v1) = svd.leading_factors(r1);
    Ok(SInfConjugateSet {
        sigma1: svd.sigma1(),
        u1,
        v1,
        multiplicity: r1,
        dimension: r1 * (r1 + 1) / 2 - 1,
        mult_rel_tol: tol.mult_rel_tol,
    })
}

/// Rank-one member `sigma1 U1 p p^T V1^T` with `p = direction / ||direction||_2`.
pub fn sinf_rank1_conjugate(set: &SInfConjugateSet, direction: &RealVector) -> Result<Matrix> {
    if direction.len() != set.multiplicity {
        return Err(Error::DimensionMismatch {
            expected: set.multiplicity,
            found: direction.len(),
        });
    }
    if direction.is_zero() {
        return Err(Error::ZeroVector);
    }
    let norm = lp_norm_slice(direction.as_slice(), 2.0);
    let p = nalgebra::DVector::from_iterator(
        direction.len(),
        direction.as_slice().iter().map(|x| x / norm),
    );
    Ok(set.embed_raw(&(&p * p.transpose())))
}

/// Verdict and factor diagnostics for a candidate member of the `S_inf` duality set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SInfMembership {
    /// Ground truth: the conjugacy check at `p = inf`.
    pub report: ConjugacyReport,
    /// `X = (1 / sigma1) U1^T B V1`.
    pub factor: Matrix,
    /// `||X - X^T||_F / ||X||_F`.
    pub symmetry_residual: f64,
    pub factor_nuclear_norm: f64,
    pub factor_trace: f64,
    /// Smallest eigenvalue of the symmetric part of `X`.
    pub factor_min_eigenvalue: f64,
    /// `||B - sigma1 U1 X V1^T||_F`.
    pub reconstruction_residual: f64,
}

impl SInfMembership {
    pub fn is_member(&self) -> bool {
        self.report.is_conjugate
    }

    /// `X` is PSD with unit trace within `eps`.
    pub fn factor_in_spectraplex(&self, eps: f64) -> bool {
        self.factor_min_eigenvalue >= -eps && (self.factor_trace - 1.0).abs() <= eps
    }
}

pub fn sinf_membership(
    set: &SInfConjugateSet,
    a: &Matrix,
    b: &Matrix,
    tol: &ToleranceConfig,
) -> Result<SInfMembership> {
    check_pair(a, b)?;
    if b.shape() != (set.u1.rows(), set.v1.rows()) {
        return Err(Error::ShapeMismatch {
            left: (set.u1.rows(), set.v1.rows()),
            right: b.shape(),
        });
    }
    let report = verify_conjugate_pair(a, b, HolderExponent::INFINITY, tol)?;
    let x = set.extract_factor(b);
    let x_norm = x.norm();
    let symmetry_residual = if x_norm > 0.0 {
        (&x - x.transpose()).norm() / x_norm
    } else {
        0.0
    };
    let sym = (&x + x.transpose()) * 0.5;
    let factor_min_eigenvalue = SymmetricEigen::new(sym).eigenvalues.min();
    let factor = Matrix::wrap(x);
    let factor_nuclear_norm = singular_values(&factor)?.iter().sum();
    let factor_trace = factor.as_dmatrix().trace();
    let reconstruction_residual = set.embed_raw(factor.as_dmatrix()).distance(b)?;
    Ok(SInfMembership {
        report,
        factor,
        symmetry_residual,
        factor_nuclear_norm,
        factor_trace,
        factor_min_eigenvalue,
        reconstruction_residual,
    })
}

/// Candidate extreme point `(sigma1 / 2)(u_i v_j^T + u_j v_i^T)` built from the
/// leading singular vectors, `0 <= i <= j < r1`.
///
/// For `i == j` this is the rank-one member `sigma1 u_i v_i^T`. For `i != j`
/// the factor has zero trace, so the pairing with `A` vanishes and the matrix
/// is not a conjugate; it is offered as a test fixture only.
pub fn sinf_extreme_point_candidate(set: &SInfConjugateSet, i: usize, j: usize) -> Result<Matrix> {
    let r1 = set.multiplicity;
    if i > j || j >= r1 {
        return Err(Error::DimensionMismatch {
            expected: r1,
            found: j + 1,
        });
    }
    let mut x = DMatrix::zeros(r1, r1);
    x[(i, j)] += 0.5;
    x[(j, i)] += 0.5;
    Ok(set.embed_raw(&x))
}

/// Parametric form matched by a saturating pair.
#[derive(Clone, Debug, PartialEq)]
pub enum SaturationTag {
    NotSaturated,
    /// `B = c U_r diag(J_p(s)) V_r^T` with `c = ||B||_{S_q} / ||A||_{S_p}`.
    GeneralP {
        c: f64,
    },
    /// Equal ranks at `p = 1`: `B = c U_r V_r^T` with `c = ||B||_{S_inf}`.
    RankEqualP1 {
        c: f64,
    },
    /// `A = U1~ X V1~^T` over the leading singular block of `B`, `X` symmetric.
    GeneralP1 {
        x: Matrix,
    },
    /// Saturated within tolerance but no parametric form matched.
    Invalid {
        reason: String,
    },
}

impl SaturationTag {
    pub fn name(&self) -> &'static str {
        match self {
            SaturationTag::NotSaturated => "NotSaturated",
            SaturationTag::GeneralP { .. } => "GeneralP",
            SaturationTag::RankEqualP1 { .. } => "RankEqualP1",
            SaturationTag::GeneralP1 { .. } => "GeneralP1",
            SaturationTag::Invalid { .. } => "Invalid",
        }
    }

    pub fn scale(&self) -> Option<f64> {
        match self {
            SaturationTag::GeneralP { c } | SaturationTag::RankEqualP1 { c } => Some(*c),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaturationForm {
    pub tag: SaturationTag,
    /// Matrix rebuilt from the form; it reproduces the tested matrix when the
    /// tag is a proper form.
    pub witness: Option<Matrix>,
    /// Relative Frobenius error of `witness` against the tested matrix.
    pub witness_residual: Option<f64>,
    /// At `p = inf` the pair is classified as `(b, a)` under `p = 1`.
    pub roles_swapped: bool,
    pub relative_gap: f64,
}

impl SaturationForm {
    pub fn is_saturated(&self) -> bool {
        !matches!(self.tag, SaturationTag::NotSaturated)
    }
}

fn relative_distance(x: &Matrix, target: &Matrix) -> Result<f64> {
    Ok(x.distance(target)? / target.frobenius_norm())
}

/// Identifies which saturation form a pair `(a, b)` takes under `(S_p, S_q)`.
pub fn classify_saturation(
    a: &Matrix,
    b: &Matrix,
    p: HolderExponent,
    tol: &ToleranceConfig,
) -> Result<SaturationForm> {
    check_pair(a, b)?;
    let gap = holder_gap(a, b, p)?;
    if gap.relative_gap > tol.sat_rel_tol {
        return Ok(SaturationForm {
            tag: SaturationTag::NotSaturated,
            witness: None,
            witness_residual: None,
            roles_swapped: false,
            relative_gap: gap.relative_gap,
        });
    }
    let mut form = if p.is_one() {
        classify_nuclear(a, b, tol)?
    } else if p.is_infinite() {
        let mut f = classify_nuclear(b, a, tol)?;
        f.roles_swapped = true;
        f
    } else {
        let c = schatten_norm(b, p.conjugate())? / schatten_norm(a, p)?;
        let svd = svd_reduced(a, tol)?;
        let weights: Vec<f64> = dual_map_lp_slice(svd.singular_values(), p.p())
            .into_iter()
            .map(|w| c * w)
            .collect();
        let witness = svd.recombine(&weights);
        let residual = relative_distance(&witness, b)?;
        let tag = if residual <= tol.sat_rel_tol {
            SaturationTag::GeneralP { c }
        } else {
            SaturationTag::Invalid {
                reason: format!("GeneralP witness misses B by {residual:.3e}"),
            }
        };
        SaturationForm {
            tag,
            witness: Some(witness),
            witness_residual: Some(residual),
            roles_swapped: false,
            relative_gap: 0.0,
        }
    };
    form.relative_gap = gap.relative_gap;
    Ok(form)
}

/// Saturated pair with `nuclear` in the `S_1` role and `spectral` in the `S_inf` role.
fn classify_nuclear(
    nuclear: &Matrix,
    spectral: &Matrix,
    tol: &ToleranceConfig,
) -> Result<SaturationForm> {
    let svd_s = svd_reduced(spectral, tol)?;
    let svd_n = svd_reduced(nuclear, tol)?;
    let r1 = leading_multiplicity(&svd_s, tol);
    let (rank_n, rank_s) = (svd_n.rank(), svd_s.rank());
    let invalid = |reason: String, witness: Option<Matrix>, residual: Option<f64>| SaturationForm {
        tag: SaturationTag::Invalid { reason },
        witness,
        witness_residual: residual,
        roles_swapped: false,
        relative_gap: 0.0,
    };
    if !(rank_n <= r1 && r1 <= rank_s) {
        return Ok(invalid(
            format!("rank condition fails: rank {rank_n}, multiplicity {r1}, rank {rank_s}"),
            None,
            None,
        ));
    }

    if rank_n == rank_s {
        let c = svd_s.sigma1();
        let witness = svd_n.recombine(&vec![c; rank_n]);
        let residual = relative_distance(&witness, spectral)?;
        return Ok(if residual <= tol.sat_rel_tol {
            SaturationForm {
                tag: SaturationTag::RankEqualP1 { c },
                witness: Some(witness),
                witness_residual: Some(residual),
                roles_swapped: false,
                relative_gap: 0.0,
            }
        } else {
            invalid(
                format!("RankEqualP1 witness misses by {residual:.3e}"),
                Some(witness),
                Some(residual),
            )
        });
    }

    let (u1, v1) = svd_s.leading_factors(r1);
    let x = u1.as_dmatrix().transpose() * nuclear.as_dmatrix() * v1.as_dmatrix();
    let witness = Matrix::wrap(u1.as_dmatrix() * &x * v1.as_dmatrix().transpose());
    let residual = relative_distance(&witness, nuclear)?;
    let asym = (&x - x.transpose()).norm() / x.norm();
    Ok(if residual <= tol.sat_rel_tol && asym <= tol.sat_rel_tol {
        SaturationForm {
            tag: SaturationTag::GeneralP1 { x: Matrix::wrap(x) },
            witness: Some(witness),
            witness_residual: Some(residual),
            roles_swapped: false,
            relative_gap: 0.0,
        }
    } else {
        invalid(
            format!("GeneralP1 witness residual {residual:.3e}, asymmetry {asym:.3e}"),
            Some(witness),
            Some(residual),
        )
    })
}

//! Dense real matrices and the reduced singular value decomposition.
//!
//! Every other module reaches the spectrum of a matrix through
//! [`svd_reduced`]. Rank and multiplicity are decided with *relative*
//! thresholds anchored at the largest singular value, so the verdicts do not
//! change when a matrix is rescaled.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real `rows x cols` matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct Matrix(DMatrix<f64>);

impl Matrix {
    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape(format!("{rows}x{cols} has no entries")));
        }
        if rows * cols != data.len() {
            return Err(Error::InvalidShape(format!(
                "{rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Matrix(DMatrix::from_row_slice(rows, cols, data)))
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != ncols) {
            return Err(Error::InvalidShape("ragged rows".into()));
        }
        let data: Vec<f64> = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::from_row_slice(nrows, ncols, &data)
    }

    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidShape("empty matrix".into()));
        }
        if let Some(pos) = m.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Matrix(m))
    }

    /// Wraps results of arithmetic on already validated matrices.
    pub(crate) fn wrap(m: DMatrix<f64>) -> Self {
        debug_assert!(m.iter().all(|x| x.is_finite()));
        Matrix(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "matrix dimensions must be positive");
        Matrix(DMatrix::identity(n, n))
    }

    /// Square diagonal matrix.
    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::rect_diag(values.len(), values.len(), values)
    }

    /// `rows x cols` matrix with `values` on the main diagonal.
    pub fn rect_diag(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        if values.len() > rows.min(cols) {
            return Err(Error::InvalidShape(format!(
                "{} diagonal values do not fit {rows}x{cols}",
                values.len()
            )));
        }
        let mut m = DMatrix::zeros(rows, cols);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        Self::from_dmatrix(m)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<f64> {
        self.0.transpose().iter().copied().collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.0
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix(self.0.transpose())
    }

    pub fn scale(&self, c: f64) -> Self {
        Matrix::wrap(&self.0 * c)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    pub fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    /// Frobenius distance `||self - other||_F`.
    pub fn distance(&self, other: &Matrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok((&self.0 - &other.0).norm())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols() != other.rows() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(Matrix::wrap(&self.0 * &other.0))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix")
            .field("rows", &self.rows())
            .field("cols", &self.cols())
            .field("data", &self.to_rows())
            .finish()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    /// Panics on shape mismatch, like the underlying nalgebra operator.
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix::wrap(&self.0 + &rhs.0)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix::wrap(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: f64) -> Matrix {
        self.scale(rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix(-&self.0)
    }
}

/// Relative thresholds standing in for the exact comparisons of the theory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// `sigma_i` counts toward the rank iff `sigma_i > rank_rel_tol * sigma_1`.
    pub rank_rel_tol: f64,
    /// `sigma_i` joins the leading group iff `sigma_1 - sigma_i <= mult_rel_tol * sigma_1`.
    pub mult_rel_tol: f64,
    /// Relative tolerance for saturation and conjugacy verdicts.
    pub sat_rel_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            rank_rel_tol: 1e-10,
            mult_rel_tol: 1e-8,
            sat_rel_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel_tol: f64, mult_rel_tol: f64, sat_rel_tol: f64) -> Result<Self> {
        let tol = ToleranceConfig {
            rank_rel_tol,
            mult_rel_tol,
            sat_rel_tol,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("rank_rel_tol", self.rank_rel_tol),
            ("mult_rel_tol", self.mult_rel_tol),
            ("sat_rel_tol", self.sat_rel_tol),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}

/// Reduced factorization `A = U_r diag(sigma) V_r^T` keeping only the
/// singular values above the relative rank cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSvd {
    u: Matrix,
    sigma: Vec<f64>,
    v: Matrix,
}

impl ReducedSvd {
    /// Assembles factors supplied by the caller, checking the structural
    /// invariants: matching shapes, strictly positive non-increasing
    /// `sigma`, and orthonormal columns within `tol.mult_rel_tol`.
    pub fn from_parts(
        u: Matrix,
        sigma: Vec<f64>,
        v: Matrix,
        tol: &ToleranceConfig,
    ) -> Result<Self> {
        let r = sigma.len();
        if r == 0 {
            return Err(Error::InvalidShape("empty singular value list".into()));
        }
        if u.cols() != r || v.cols() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: if u.cols() != r { u.cols() } else { v.cols() },
            });
        }
        if sigma.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidShape(
                "singular values must be positive".into(),
            ));
        }
        if sigma.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::InvalidShape(
                "singular values must be non-increasing".into(),
            ));
        }
        for factor in [&u, &v] {
            if gram_defect(factor.as_dmatrix()) > tol.mult_rel_tol {
                return Err(Error::InvalidShape(
                    "factor columns are not orthonormal".into(),
                ));
            }
        }
        Ok(ReducedSvd { u, sigma, v })
    }

    /// `m x r` left factor.
    pub fn u(&self) -> &Matrix {
        &self.u
    }

    /// Positive singular values in non-increasing order.
    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    /// `n x r` right factor.
    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma1(&self) -> f64 {
        self.sigma[0]
    }

    /// `U_r diag(weights) V_r^T` for a weight vector of length `rank`.
    pub fn recombine(&self, weights: &[f64]) -> Matrix {
        assert_eq!(weights.len(), self.rank(), "one weight per singular triple");
        let u = self.u.as_dmatrix();
        let mut scaled = u.clone();
        for (j, w) in weights.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*w);
        }
        Matrix::wrap(scaled * self.v.as_dmatrix().transpose())
    }

    /// Leading `k` columns of both factors.
    pub fn leading_factors(&self, k: usize) -> (Matrix, Matrix) {
        assert!(k >= 1 && k <= self.rank());
        (
            Matrix::wrap(self.u.as_dmatrix().columns(0, k).into_owned()),
            Matrix::wrap(self.v.as_dmatrix().columns(0, k).into_owned()),
        )
    }
}

/// Largest entrywise deviation of `F^T F` from the identity.
pub(crate) fn gram_defect(f: &DMatrix<f64>) -> f64 {
    let g = f.transpose() * f;
    let n = g.nrows();
    (&g - DMatrix::<f64>::identity(n, n)).amax()
}

/// Thin SVD `A = U diag(s) V^T` with `min(m, n)` columns, unsorted.
struct ThinSvd {
    u: DMatrix<f64>,
    s: Vec<f64>,
    v: DMatrix<f64>,
}

fn full_svd(a: &Matrix) -> Result<ThinSvd> {
    let (m, n) = a.shape();
    let k = m.min(n);
    let src = a.as_dmatrix();
    let svd = faer::Mat::<f64>::from_fn(m, n, |i, j| src[(i, j)])
        .thin_svd()
        .map_err(|_| Error::NumericalFailure("singular value decomposition did not converge"))?;
    let (fu, fs, fv) = (svd.U(), svd.S().column_vector(), svd.V());
    let out = ThinSvd {
        u: DMatrix::from_fn(m, k, |i, j| fu[(i, j)]),
        s: (0..k).map(|i| fs[i]).collect(),
        v: DMatrix::from_fn(n, k, |i, j| fv[(i, j)]),
    };
    let rebuilt =
        &out.u * DMatrix::from_diagonal(&DVector::from_column_slice(&out.s)) * out.v.transpose();
    if (rebuilt - src).norm() > SVD_SELF_CHECK * a.frobenius_norm() * (m.max(n) as f64) {
        return Err(Error::NumericalFailure(
            "singular value decomposition failed its self-check",
        ));
    }
    Ok(out)
}

/// Relative reconstruction error, per unit of matrix side, above which a
/// decomposition is rejected.
const SVD_SELF_CHECK: f64 = 1e-12;

/// All `min(m, n)` singular values, non-increasing. Zero for the zero matrix.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    if a.is_zero() {
        return Ok(vec![0.0; a.rows().min(a.cols())]);
    }
    let mut s = full_svd(a)?.s;
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Reduced SVD keeping exactly the singular values `sigma_i > rank_rel_tol * sigma_1`.
///
/// Singular vector pairs are sign-normalized so the largest-magnitude entry of
/// each left vector is positive. The factorization is still not unique when
/// singular values repeat.
pub fn svd_reduced(a: &Matrix, tol: &ToleranceConfig) -> Result<ReducedSvd> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let svd = full_svd(a)?;

    let mut order: Vec<usize> = (0..svd.s.len()).collect();
    order.sort_by(|&i, &j| svd.s[j].total_cmp(&svd.s[i]));
    let sigma1 = svd.s[order[0]];
    if sigma1.is_nan() || sigma1 <= 0.0 {
        return Err(Error::NumericalFailure(
            "nonzero matrix with vanishing spectrum",
        ));
    }
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&i| svd.s[i] > tol.rank_rel_tol * sigma1)
        .collect();

    let (m, n) = a.shape();
    let r = kept.len();
    let mut ur = DMatrix::zeros(m, r);
    let mut vr = DMatrix::zeros(n, r);
    let mut sigma = Vec::with_capacity(r);
    for (col, &i) in kept.iter().enumerate() {
        let mut uc: DVector<f64> = svd.u.column(i).into_owned();
        let mut vc: DVector<f64> = svd.v.column(i).into_owned();
        if uc[uc.iamax()] < 0.0 {
            uc.neg_mut();
            vc.neg_mut();
        }
        ur.set_column(col, &uc);
        vr.set_column(col, &vc);
        sigma.push(svd.s[i]);
    }
    Ok(ReducedSvd {
        u: Matrix::wrap(ur),
        sigma,
        v: Matrix::wrap(vr),
    })
}

/// Number of singular values above `rank_rel_tol * sigma_1`; zero for the zero matrix.
pub fn effective_rank(a: &Matrix, tol: &ToleranceConfig) -> Result<usize> {
    let s = singular_values(a)?;
    let cutoff = tol.rank_rel_tol * s[0];
    Ok(if s[0] == 0.0 {
        0
    } else {
        s.iter().filter(|&&x| x > cutoff).count()
    })
}

/// Multiplicity `r_1` of the largest singular value under the relative grouping rule.
pub fn leading_multiplicity(svd: &ReducedSvd, tol: &ToleranceConfig) -> usize {
    let s = svd.singular_values();
    let band = tol.mult_rel_tol * s[0];
    s.iter().take_while(|&&x| s[0] - x <= band).count()
}

/// `U_r diag(sigma) V_r^T`.
pub fn reconstruct(svd: &ReducedSvd) -> Matrix {
    svd.recombine(svd.singular_values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(matches!(
            Matrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0]),
            Err(Error::InvalidShape(_))
        ));
        assert!(matches!(
            Matrix::from_row_slice(1, 2, &[1.0, f64::NAN]),
            Err(Error::NonFinite(1))
        ));
        assert!(Matrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(Matrix::from_row_slice(0, 3, &[]).is_err());
    }

    #[test]
    fn row_major_layout() {
        let a = Matrix::from_row_slice(2, 3, &[1., 2., 3., 4., 5., 6.]).unwrap();
        assert_eq!(a.get(0, 2), 3.0);
        assert_eq!(a.get(1, 0), 4.0);
        assert_eq!(a.to_row_major(), vec![1., 2., 3., 4., 5., 6.]);
    }

    #[test]
    fn tolerance_bounds() {
        assert!(ToleranceConfig::default().validate().is_ok());
        assert!(ToleranceConfig::new(0.0, 1e-8, 1e-8).is_err());
        assert!(ToleranceConfig::new(1e-10, 1.0, 1e-8).is_err());
        assert!(ToleranceConfig::new(1e-10, 1e-8, f64::NAN).is_err());
    }

    #[test]
    fn svd_of_rank_one_diagonal() {
        let a = Matrix::diag(&[3.0, 0.0]).unwrap();
        let svd = svd_reduced(&a, &tol()).unwrap();
        assert_eq!(svd.rank(), 1);
        assert_abs_diff_eq!(svd.singular_values()[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(svd.u().get(0, 0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(svd.u().get(1, 0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(svd.v().get(0, 0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(svd.v().get(1, 0), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn svd_of_identity() {
        let svd = svd_reduced(&Matrix::identity(3), &tol()).unwrap();
        assert_eq!(svd.rank(), 3);
        for s in svd.singular_values() {
            assert_abs_diff_eq!(*s, 1.0, epsilon = 1e-14);
        }
        let uvt = svd.recombine(&[1.0, 1.0, 1.0]);
        assert!(uvt.distance(&Matrix::identity(3)).unwrap() < 1e-14);
    }

    #[test]
    fn svd_of_permuted_diagonal() {
        let a = Matrix::from_rows(&[[0.0, 2.0], [1.0, 0.0]]).unwrap();
        let svd = svd_reduced(&a, &tol()).unwrap();
        assert_eq!(svd.rank(), 2);
        assert_abs_diff_eq!(svd.singular_values()[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(svd.singular_values()[1], 1.0, epsilon = 1e-14);
        assert!(reconstruct(&svd).distance(&a).unwrap() < 1e-14);
        assert!(gram_defect(svd.u().as_dmatrix()) < 1e-14);
        assert!(gram_defect(svd.v().as_dmatrix()) < 1e-14);
    }

    #[test]
    fn zero_matrix_is_rejected_by_svd_but_has_rank_zero() {
        let z = Matrix::zeros(2, 3);
        assert!(matches!(svd_reduced(&z, &tol()), Err(Error::ZeroMatrix)));
        assert_eq!(effective_rank(&z, &tol()).unwrap(), 0);
        assert_eq!(singular_values(&z).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn effective_rank_examples() {
        let t = tol();
        assert_eq!(
            effective_rank(&Matrix::diag(&[1.0, 1e-15]).unwrap(), &t).unwrap(),
            1
        );
        assert_eq!(
            effective_rank(&Matrix::diag(&[5.0, 3.0, 1.0]).unwrap(), &t).unwrap(),
            3
        );
    }

    #[test]
    fn leading_multiplicity_examples() {
        let t = tol();
        let cases: [(&[f64], usize); 3] = [
            (&[2.0, 2.0, 1.0], 2),
            (&[1.0], 1),
            (&[1.0, 1.0 - 1e-12, 0.5], 2),
        ];
        for (sigma, expected) in cases {
            let r = sigma.len();
            let e = Matrix::identity(r);
            let svd = ReducedSvd::from_parts(e.clone(), sigma.to_vec(), e, &t).unwrap();
            assert_eq!(
                leading_multiplicity(&svd, &t),
                expected,
                "sigma = {sigma:?}"
            );
        }
    }

    #[test]
    fn reconstruct_examples() {
        let t = tol();
        let e1 = Matrix::from_rows(&[[1.0], [0.0]]).unwrap();
        let e2 = Matrix::from_rows(&[[0.0], [1.0]]).unwrap();
        let svd = ReducedSvd::from_parts(e1.clone(), vec![3.0], e1.clone(), &t).unwrap();
        assert_eq!(reconstruct(&svd), Matrix::diag(&[3.0, 0.0]).unwrap());
        let svd = ReducedSvd::from_parts(e1, vec![2.0], e2, &t).unwrap();
        assert_eq!(
            reconstruct(&svd),
            Matrix::from_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap()
        );
    }

    #[test]
    fn from_parts_validates() {
        let t = tol();
        let e = Matrix::identity(2);
        assert!(ReducedSvd::from_parts(e.clone(), vec![1.0, 2.0], e.clone(), &t).is_err());
        assert!(ReducedSvd::from_parts(e.clone(), vec![1.0, 0.0], e.clone(), &t).is_err());
        assert!(ReducedSvd::from_parts(e.scale(2.0), vec![1.0, 1.0], e.clone(), &t).is_err());
        assert!(ReducedSvd::from_parts(e.clone(), vec![1.0], e, &t).is_err());
    }

    #[test]
    fn rank_cutoff_is_scale_invariant() {
        let t = tol();
        for scale in [1e-200, 1.0, 1e200] {
            let a = Matrix::diag(&[scale, scale * 1e-12]).unwrap();
            assert_eq!(svd_reduced(&a, &t).unwrap().rank(), 1);
            let a = Matrix::diag(&[scale, scale * 1e-9]).unwrap();
            assert_eq!(svd_reduced(&a, &t).unwrap().rank(), 2);
        }
    }

    #[test]
    fn wide_and_tall_shapes() {
        let t = tol();
        let a = Matrix::from_row_slice(2, 4, &[1., 2., 0., -1., 3., 0.5, 2., 1.]).unwrap();
        for m in [a.clone(), a.transpose()] {
            let svd = svd_reduced(&m, &t).unwrap();
            assert_eq!(svd.rank(), 2);
            assert_eq!(svd.u().rows(), m.rows());
            assert_eq!(svd.v().rows(), m.cols());
            assert!(reconstruct(&svd).distance(&m).unwrap() < 1e-13);
        }
    }
}

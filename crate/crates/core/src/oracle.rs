//! Numerical oracle for the dual-norm supremum.
//!
//! [`maximize_pairing`] searches for the `B` that maximizes
//! `<A, B> / ||B||_{S_q}` and rescales it to `||B||_{S_q} = ||A||_{S_p}`, so a
//! converged run reproduces a conjugate of `A` without ever calling the closed
//! forms in [`crate::duality`]. Norms and gradients here come from the
//! eigendecomposition of the smaller Gram matrix (`B^T B` or `B B^T`), not from
//! the SVD path the closed forms use.
//!
//! Regimes:
//! * `1 < q < inf`: gradient ascent with Barzilai-Borwein steps and Armijo
//!   backtracking on the scale-invariant ratio.
//! * `q = 1`: the ratio is maximized over the extreme points of the nuclear
//!   ball, `B = u v^T`, where it is smooth in `(u, v)`.
//! * `q = inf`: the ratio is maximized over the extreme points of the spectral
//!   ball, the matrices with orthonormal columns (or rows), by Riemannian
//!   gradient ascent with a polar retraction.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::sampling;
use crate::vector::{HolderExponent, RealVector};

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial step, relative to `||A||_F`.
    pub step_init: f64,
    /// Restart `i` draws its starting point from seed `seed + i`.
    pub seed: u64,
    /// Threshold on the relative objective change of an accepted step.
    pub convergence_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            restarts: 16,
            max_iters: 2000,
            step_init: 0.1,
            seed: 0,
            convergence_tol: 1e-10,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        OracleConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive"));
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return Err(Error::InvalidConfig("step_init must be positive"));
        }
        if !(self.convergence_tol > 0.0 && self.convergence_tol < 1.0) {
            return Err(Error::InvalidConfig("convergence_tol must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    /// Best `B`, rescaled so that `||B||_{S_q} = ||A||_{S_p}`.
    pub maximizer: Matrix,
    /// `<A, maximizer>`; equals `||A||_{S_p}^2` at the supremum.
    pub value: f64,
    /// Best ratio `<A, B> / ||B||_{S_q}`; equals `||A||_{S_p}` at the supremum.
    pub ratio: f64,
    /// Whether the restart that produced the best ratio met the stopping rule.
    pub converged: bool,
    pub restarts_used: usize,
    /// Final ratio of every restart, in seed order.
    pub best_restart_trace: Vec<f64>,
}

/// Spectrum of `B` read off the smaller Gram matrix.
struct GramSpectrum {
    /// Singular values (square roots of the clamped Gram eigenvalues).
    sigma: Vec<f64>,
    vectors: DMatrix<f64>,
    /// Eigenvectors live on the row side (`B B^T`) rather than the column side.
    row_side: bool,
}

impl GramSpectrum {
    fn of(b: &DMatrix<f64>) -> Self {
        let row_side = b.nrows() < b.ncols();
        let gram = if row_side {
            b * b.transpose()
        } else {
            b.transpose() * b
        };
        let eig = SymmetricEigen::new(gram);
        GramSpectrum {
            sigma: eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect(),
            vectors: eig.eigenvectors,
            row_side,
        }
    }

    fn max(&self) -> f64 {
        self.sigma.iter().fold(0.0, |m, &s| m.max(s))
    }

    fn schatten(&self, q: f64) -> f64 {
        let max = self.max();
        if max == 0.0 || q.is_infinite() {
            return max;
        }
        max * self
            .sigma
            .iter()
            .map(|s| (s / max).powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    }

    /// `B W diag(w) W^T` (or `W diag(w) W^T B`) with `w_i = weight(sigma_i)`.
    fn spectral_multiply(&self, b: &DMatrix<f64>, weight: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let mut scaled = self.vectors.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            scaled.column_mut(j).scale_mut(weight(*s));
        }
        let core = &scaled * self.vectors.transpose();
        if self.row_side {
            core * b
        } else {
            b * core
        }
    }
}

/// `||B||_{S_q}` through the Gram eigendecomposition.
fn gram_schatten(b: &DMatrix<f64>, q: f64) -> f64 {
    GramSpectrum::of(b).schatten(q)
}

/// Gradient of `||B||_{S_q}` for `1 < q < inf`: `B (B^T B)^{q/2 - 1} / ||B||^{q-1}`.
fn schatten_gradient(b: &DMatrix<f64>, q: f64) -> (f64, DMatrix<f64>) {
    let spec = GramSpectrum::of(b);
    let norm = spec.schatten(q);
    let floor = 1e-12 * spec.max();
    let grad = spec.spectral_multiply(b, |s| {
        if s <= floor {
            0.0
        } else {
            (s / norm).powf(q - 2.0) / norm
        }
    });
    (norm, grad)
}

fn check_interior(p: HolderExponent) -> Result<()> {
    if !p.is_interior() {
        return Err(Error::InvalidExponent(
            p.to_string(),
            "the smooth objective needs 1 < p < inf",
        ));
    }
    Ok(())
}

/// The ratio `<A, B> / ||B||_{S_q}` for any `p` in `[1, inf]`.
pub fn objective(a: &Matrix, b: &Matrix, p: HolderExponent) -> Result<f64> {
    a.check_same_shape(b)?;
    if b.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok(a.as_dmatrix().dot(b.as_dmatrix()) / gram_schatten(b.as_dmatrix(), p.q()))
}

/// Gradient of [`objective`] in `B`, for `1 < p < inf`.
pub fn objective_gradient(a: &Matrix, b: &Matrix, p: HolderExponent) -> Result<Matrix> {
    check_interior(p)?;
    a.check_same_shape(b)?;
    if b.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok(Matrix::wrap(
        smooth_gradient(a.as_dmatrix(), b.as_dmatrix(), p.q()).1,
    ))
}

/// Objective and gradient of the smooth ratio.
fn smooth_gradient(a: &DMatrix<f64>, b: &DMatrix<f64>, q: f64) -> (f64, DMatrix<f64>) {
    let (norm, dnorm) = schatten_gradient(b, q);
    let f = a.dot(b) / norm;
    (f, a / norm - dnorm * (f / norm))
}

/// One ascent problem on a normalized parameterization.
trait Ascent {
    type Point: Clone;

    /// Objective and (Riemannian) gradient at a normalized point.
    fn eval(&self, x: &Self::Point) -> (f64, DMatrix<f64>);
    /// Normalized point reached from `x` along `dir` with step `t`.
    fn step(&self, x: &Self::Point, dir: &DMatrix<f64>, t: f64) -> Self::Point;
    /// Flattened coordinates, for step-size estimates.
    fn coords(&self, x: &Self::Point) -> DMatrix<f64>;
}

struct Run<P> {
    point: P,
    value: f64,
    converged: bool,
}

fn ascend<A: Ascent>(
    problem: &A,
    start: A::Point,
    scale: f64,
    cfg: &OracleConfig,
) -> Run<A::Point> {
    let mut x = start;
    let (mut f, mut g) = problem.eval(&x);
    let mut t = cfg.step_init / scale;
    let mut converged = false;
    let mut calm_steps = 0;
    for _ in 0..cfg.max_iters {
        let g2 = g.norm_squared();
        if g2.sqrt() <= 1e-14 * scale {
            converged = true;
            break;
        }
        let mut accepted = None;
        let mut trial_t = t;
        for _ in 0..MAX_BACKTRACKS {
            let y = problem.step(&x, &g, trial_t);
            let (fy, gy) = problem.eval(&y);
            if fy >= f + ARMIJO * trial_t * g2 {
                accepted = Some((y, fy, gy));
                break;
            }
            trial_t *= 0.5;
        }
        let Some((y, fy, gy)) = accepted else {
            // no ascent left at machine precision
            converged = true;
            break;
        };
        let s = problem.coords(&y) - problem.coords(&x);
        let dg = &gy - &g;
        let change = (fy - f).abs() / f.abs().max(f64::MIN_POSITIVE);
        x = y;
        f = fy;
        g = gy;
        // Barzilai-Borwein step for the next iteration, falling back to growth
        let sy = s.dot(&dg);
        t = if sy < 0.0 {
            (s.norm_squared() / -sy).min(1e6 / scale)
        } else {
            trial_t * 2.0
        };
        if change < cfg.convergence_tol {
            calm_steps += 1;
            if calm_steps >= 3 {
                converged = true;
                break;
            }
        } else {
            calm_steps = 0;
        }
    }
    Run {
        point: x,
        value: f,
        converged,
    }
}

/// `1 < q < inf`, on the unit `S_q` sphere.
struct SmoothRatio<'a> {
    a: &'a DMatrix<f64>,
    q: f64,
}

impl Ascent for SmoothRatio<'_> {
    type Point = DMatrix<f64>;

    fn eval(&self, b: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
        smooth_gradient(self.a, b, self.q)
    }

    fn step(&self, b: &DMatrix<f64>, dir: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
        let y = b + dir * t;
        let n = gram_schatten(&y, self.q);
        y / n
    }

    fn coords(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        b.clone()
    }
}

/// `q = 1`: rank-one `B = u v^T` with unit `u`, `v`. The gradient is stored
/// as one column `[grad_u; grad_v]`.
struct RankOneRatio<'a> {
    a: &'a DMatrix<f64>,
}

impl RankOneRatio<'_> {
    fn split(&self, x: &DMatrix<f64>) -> (DVector<f64>, DVector<f64>) {
        let m = self.a.nrows();
        let n = self.a.ncols();
        (
            x.rows(0, m).column(0).into_owned(),
            x.rows(m, n).column(0).into_owned(),
        )
    }

    fn join(u: &DVector<f64>, v: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_iterator(u.len() + v.len(), 1, u.iter().chain(v.iter()).copied())
    }
}

impl Ascent for RankOneRatio<'_> {
    type Point = DMatrix<f64>;

    fn eval(&self, x: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
        let (u, v) = self.split(x);
        let av = self.a * &v;
        let f = u.dot(&av);
        let gu = av - &u * f;
        let gv = self.a.transpose() * &u - &v * f;
        (f, Self::join(&gu, &gv))
    }

    fn step(&self, x: &DMatrix<f64>, dir: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
        let (u, v) = self.split(&(x + dir * t));
        Self::join(&u.normalize(), &v.normalize())
    }

    fn coords(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        x.clone()
    }
}

/// `q = inf`: `W` with orthonormal columns, for a tall-or-square `A`.
struct StiefelPairing<'a> {
    a: &'a DMatrix<f64>,
}

/// `M (M^T M)^{-1/2}`.
fn polar(m: &DMatrix<f64>) -> DMatrix<f64> {
    let spec = GramSpectrum::of(m);
    debug_assert!(!spec.row_side);
    let floor = 1e-300;
    spec.spectral_multiply(m, |s| 1.0 / s.max(floor))
}

impl Ascent for StiefelPairing<'_> {
    type Point = DMatrix<f64>;

    fn eval(&self, w: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
        let f = self.a.dot(w);
        let wta = w.transpose() * self.a;
        let sym = (&wta + wta.transpose()) * 0.5;
        (f, self.a - w * sym)
    }

    fn step(&self, w: &DMatrix<f64>, dir: &DMatrix<f64>, t: f64) -> DMatrix<f64> {
        polar(&(w + dir * t))
    }

    fn coords(&self, w: &DMatrix<f64>) -> DMatrix<f64> {
        w.clone()
    }
}

/// Best `B` with unit dual norm and its ratio, for one restart.
fn single_restart(
    a: &DMatrix<f64>,
    q: f64,
    cfg: &OracleConfig,
    seed: u64,
) -> (DMatrix<f64>, f64, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = a.shape();
    let scale = a.norm();
    if q == 1.0 {
        let u = DVector::from_vec(sampling::unit_vector(&mut rng, m));
        let v = DVector::from_vec(sampling::unit_vector(&mut rng, n));
        let problem = RankOneRatio { a };
        let run = ascend(&problem, RankOneRatio::join(&u, &v), scale, cfg);
        let (u, v) = problem.split(&run.point);
        (&u * v.transpose(), run.value, run.converged)
    } else if q.is_infinite() {
        // work on the tall orientation so W has orthonormal columns
        let tall = if m >= n { a.clone() } else { a.transpose() };
        let start = polar(&sampling::gaussian(&mut rng, tall.nrows(), tall.ncols()).into_dmatrix());
        let run = ascend(&StiefelPairing { a: &tall }, start, scale, cfg);
        let w = if m >= n {
            run.point
        } else {
            run.point.transpose()
        };
        (w, run.value, run.converged)
    } else {
        let start = sampling::gaussian(&mut rng, m, n).into_dmatrix();
        let start = &start / gram_schatten(&start, q);
        let run = ascend(&SmoothRatio { a, q }, start, scale, cfg);
        (run.point, run.value, run.converged)
    }
}

/// Numerically maximizes `<A, B> / ||B||_{S_q}` from `cfg.restarts` random
/// starts and returns the best `B`, rescaled to `||B||_{S_q} = ||A||_{S_p}`.
///
/// A run that exhausts `max_iters` is reported with `converged = false`.
pub fn maximize_pairing(a: &Matrix, p: HolderExponent, cfg: &OracleConfig) -> Result<OracleResult> {
    cfg.validate()?;
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let q = p.q();
    let ad = a.as_dmatrix();
    let mut trace = Vec::with_capacity(cfg.restarts);
    let mut best: Option<(DMatrix<f64>, f64, bool)> = None;
    for i in 0..cfg.restarts {
        let (b, ratio, converged) = single_restart(ad, q, cfg, cfg.seed.wrapping_add(i as u64));
        trace.push(ratio);
        if best.as_ref().is_none_or(|(_, r, _)| ratio > *r) {
            best = Some((b, ratio, converged));
        }
    }
    let (b, ratio, converged) = best.expect("at least one restart");
    let target = gram_schatten(ad, p.p());
    let maximizer = b.clone() * (target / gram_schatten(&b, q));
    let value = ad.dot(&maximizer);
    Ok(OracleResult {
        maximizer: Matrix::from_dmatrix(maximizer)?,
        value,
        ratio,
        converged,
        restarts_used: cfg.restarts,
        best_restart_trace: trace,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridOracleResult {
    /// Best grid direction, normalized to unit `l_q` norm.
    pub best_direction: RealVector,
    /// `<u, best_direction>`; approaches `||u||_p`.
    pub best_value: f64,
}

impl GridOracleResult {
    /// Pairing after rescaling the direction to `||v||_q = ||u||_p`, the
    /// conjugate normalization; approaches `||u||_p^2`.
    pub fn conjugate_pairing(&self, u: &RealVector, p: HolderExponent) -> f64 {
        self.best_value * crate::vector::lp_norm(u, p)
    }
}

pub const GRID_MAX_DIM: usize = 3;

/// Exhaustive scan of directions on the unit `l_q` sphere of `R^n`, `n <= 3`.
///
/// Directions come from an angular grid with `resolution` steps around the
/// circle (`n = 2`), or `resolution x (resolution / 2 + 1)` longitude-latitude
/// nodes (`n = 3`), each rescaled onto the `l_q` sphere.
pub fn grid_oracle_vectors(
    u: &RealVector,
    p: HolderExponent,
    resolution: usize,
) -> Result<GridOracleResult> {
    let n = u.len();
    if n > GRID_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            max: GRID_MAX_DIM,
            found: n,
        });
    }
    if resolution < 64 {
        return Err(Error::InvalidConfig("grid resolution must be at least 64"));
    }
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    let q = p.q();
    let us = u.as_slice();
    let mut best_dir = vec![0.0; n];
    let mut best = f64::NEG_INFINITY;
    let mut consider = |d: &[f64]| {
        let norm = crate::vector::lp_norm_slice(d, q);
        let val = crate::vector::dot(us, d) / norm;
        if val > best {
            best = val;
            best_dir = d.iter().map(|x| x / norm).collect();
        }
    };
    let step = std::f64::consts::TAU / resolution as f64;
    match n {
        1 => {
            consider(&[1.0]);
            consider(&[-1.0]);
        }
        2 => {
            for k in 0..resolution {
                let th = k as f64 * step;
                consider(&[th.cos(), th.sin()]);
            }
        }
        _ => {
            let lat_steps = resolution / 2;
            for j in 0..=lat_steps {
                let phi = std::f64::consts::PI * j as f64 / lat_steps as f64;
                let (sp, cp) = phi.sin_cos();
                // the poles need a single longitude
                let lon = if j == 0 || j == lat_steps {
                    1
                } else {
                    resolution
                };
                for k in 0..lon {
                    let th = k as f64 * step;
                    consider(&[sp * th.cos(), sp * th.sin(), cp]);
                }
            }
        }
    }
    Ok(GridOracleResult {
        best_direction: RealVector::new(best_dir)?,
        best_value: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::dual_map_sp;
    use crate::linalg::ToleranceConfig;
    use approx::assert_relative_eq;

    fn hp(p: f64) -> HolderExponent {
        HolderExponent::new(p).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        for bad in [
            OracleConfig {
                restarts: 0,
                ..Default::default()
            },
            OracleConfig {
                max_iters: 0,
                ..Default::default()
            },
            OracleConfig {
                step_init: -1.0,
                ..Default::default()
            },
            OracleConfig {
                convergence_tol: 0.0,
                ..Default::default()
            },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn gram_norms_match_known_spectra() {
        let d = Matrix::from_row_slice(2, 3, &[3.0, 0.0, 0.0, 0.0, 4.0, 0.0]).unwrap();
        assert_relative_eq!(
            gram_schatten(d.as_dmatrix(), 2.0),
            5.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gram_schatten(d.as_dmatrix(), 1.0),
            7.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gram_schatten(d.as_dmatrix(), f64::INFINITY),
            4.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            gram_schatten(&d.as_dmatrix().transpose(), 3.0),
            91f64.cbrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn identity_at_p2() {
        let i2 = Matrix::identity(2);
        let r = maximize_pairing(&i2, HolderExponent::TWO, &OracleConfig::with_seed(3)).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-9);
        assert!(r.maximizer.distance(&i2).unwrap() < 1e-5);
    }

    #[test]
    fn spectral_case_value() {
        let a = Matrix::diag(&[2.0, 1.0]).unwrap();
        let r =
            maximize_pairing(&a, HolderExponent::INFINITY, &OracleConfig::with_seed(11)).unwrap();
        assert!(r.converged);
        assert_relative_eq!(r.value, 4.0, max_relative = 1e-9);
        let t = ToleranceConfig::default();
        let set = crate::duality::sinf_conjugate_set(&a, &t).unwrap();
        assert!(crate::duality::sinf_membership(&set, &a, &r.maximizer, &t)
            .unwrap()
            .is_member());
    }

    #[test]
    fn nuclear_case_value() {
        let a = Matrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, -1.0, 0.5, 3.0]).unwrap();
        let r = maximize_pairing(&a, HolderExponent::ONE, &OracleConfig::with_seed(5)).unwrap();
        let n1 = crate::norms::schatten_norm(&a, HolderExponent::ONE).unwrap();
        assert_relative_eq!(r.value, n1 * n1, max_relative = 1e-9);
    }

    #[test]
    fn recovers_the_closed_form_map() {
        let a = Matrix::from_row_slice(
            4,
            3,
            &[
                0.3, -1.2, 0.8, 1.1, 0.4, -0.2, -0.7, 0.9, 0.5, 0.2, 0.1, -1.3,
            ],
        )
        .unwrap();
        let j = dual_map_sp(&a, hp(3.0), &ToleranceConfig::default()).unwrap();
        let r = maximize_pairing(&a, hp(3.0), &OracleConfig::with_seed(1)).unwrap();
        assert!(r.converged);
        assert!(r.maximizer.distance(&j).unwrap() <= 1e-5 * j.frobenius_norm());
    }

    #[test]
    fn deterministic_given_seed() {
        let a = Matrix::from_row_slice(2, 2, &[1.0, 2.0, -0.5, 0.3]).unwrap();
        let cfg = OracleConfig {
            restarts: 3,
            ..OracleConfig::with_seed(42)
        };
        let r1 = maximize_pairing(&a, hp(1.5), &cfg).unwrap();
        let r2 = maximize_pairing(&a, hp(1.5), &cfg).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.best_restart_trace.len(), 3);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let a =
            Matrix::from_row_slice(3, 3, &[1.0, 2.0, -0.5, 0.3, 0.1, 0.7, -2.0, 0.4, 1.0]).unwrap();
        let cfg = OracleConfig {
            restarts: 1,
            max_iters: 2,
            ..Default::default()
        };
        let r = maximize_pairing(&a, hp(3.0), &cfg).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn rejects_zero_matrix() {
        assert!(matches!(
            maximize_pairing(&Matrix::zeros(2, 2), hp(2.0), &OracleConfig::default()),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn gradient_matches_central_differences() {
        let a = Matrix::from_row_slice(3, 2, &[0.5, -1.0, 1.5, 0.2, -0.3, 0.9]).unwrap();
        let b = Matrix::from_row_slice(3, 2, &[1.0, 0.4, -0.6, 1.3, 0.2, -0.8]).unwrap();
        for p in [1.5, 2.0, 3.0] {
            let g = objective_gradient(&a, &b, hp(p)).unwrap();
            let h = 1e-6;
            let mut fd = DMatrix::zeros(3, 2);
            for i in 0..3 {
                for j in 0..2 {
                    let mut plus = b.as_dmatrix().clone();
                    plus[(i, j)] += h;
                    let mut minus = b.as_dmatrix().clone();
                    minus[(i, j)] -= h;
                    let fp = objective(&a, &Matrix::wrap(plus), hp(p)).unwrap();
                    let fm = objective(&a, &Matrix::wrap(minus), hp(p)).unwrap();
                    fd[(i, j)] = (fp - fm) / (2.0 * h);
                }
            }
            let err = (g.as_dmatrix() - &fd).norm() / fd.norm();
            assert!(err < 1e-4, "p = {p}: relative gradient error {err}");
        }
        assert!(objective_gradient(&a, &b, HolderExponent::ONE).is_err());
    }

    #[test]
    fn grid_examples() {
        let r =
            grid_oracle_vectors(&RealVector::new(vec![1.0, 0.0]).unwrap(), hp(3.0), 1024).unwrap();
        assert_relative_eq!(r.best_direction[0], 1.0, epsilon = 1e-12);
        assert!(r.best_direction[1].abs() < 1e-12);

        let u = RealVector::new(vec![1.0, 2.0]).unwrap();
        let r = grid_oracle_vectors(&u, hp(3.0), 100_000).unwrap();
        assert_relative_eq!(
            r.conjugate_pairing(&u, hp(3.0)),
            9f64.powf(2.0 / 3.0),
            max_relative = 1e-8
        );
        assert_relative_eq!(r.conjugate_pairing(&u, hp(3.0)), 4.3267, epsilon = 1e-4);

        let u = RealVector::new(vec![1.0, 1.0]).unwrap();
        let r = grid_oracle_vectors(&u, HolderExponent::ONE, 1024).unwrap();
        assert_relative_eq!(r.best_value, 2.0, max_relative = 1e-12);
        assert_relative_eq!(r.best_direction[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(r.best_direction[1], 1.0, max_relative = 1e-12);
    }

    #[test]
    fn grid_in_three_dimensions() {
        let u = RealVector::new(vec![0.5, -1.0, 2.0]).unwrap();
        for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
            let p = hp(p);
            let r = grid_oracle_vectors(&u, p, 720).unwrap();
            let norm = crate::vector::lp_norm(&u, p);
            assert!(r.best_value <= norm * (1.0 + 1e-12));
            assert!(r.best_value >= (1.0 - 10.0 / 720.0) * norm);
        }
    }

    #[test]
    fn grid_errors() {
        let u4 = RealVector::new(vec![1.0; 4]).unwrap();
        assert!(matches!(
            grid_oracle_vectors(&u4, hp(2.0), 64),
            Err(Error::DimensionTooLarge { max: 3, found: 4 })
        ));
        let u = RealVector::new(vec![1.0]).unwrap();
        assert!(grid_oracle_vectors(&u, hp(2.0), 10).is_err());
    }
}

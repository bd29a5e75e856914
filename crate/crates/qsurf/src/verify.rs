//! Independent numerical verification of surface geometry.
//!
//! Nothing here trusts the construction: tangents come from centered
//! finite differences of the immersion, the first fundamental form from
//! their inner products, and the shape operators from finite differences
//! of the normal fields,
//!
//! ```text
//!     A = -G^{-1} M,   M[j][i] = < d_i(normal), f_j >.
//! ```
//!
//! Operators are conjugated into an orthonormal frame through the
//! Cholesky factor of the metric (Ahat = L^T A L^{-T}), where symmetry
//! and eigenvalues mean what they should. [`run_report`] then samples the
//! surface's chart at seeded random points and scores every identity the
//! construction promises:
//!
//! * membership in the quadric factor, unit normal, tangency;
//! * the vertical split d/dt = f_* T + nu eta and |T|^2 + nu^2 = 1;
//! * T is an eigenvector of the shape operator;
//! * the two normal shape operators commute (curved factor);
//! * the spectrum of the quadric-position operator is {-nu^2, -1, ..., -1};
//! * the trace of the shape operator matches the profile's target;
//! * the gradient identity  grad nu = -A T;
//! * self-adjointness of the measured shape operator.
//!
//! Checks of exact algebraic identities carry fixed tight tolerances;
//! checks that rest on finite differences use the caller's tolerance.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ambient::{inner, space_form_residual, AmbientVector, Signature, MEMBERSHIP_TOL};
use crate::error::{Error, Result};

/// Metrics with a worse condition number than this are refused.
pub const METRIC_COND_LIMIT: f64 = 1e8;

/// Floor protecting relative residuals of near-zero operators.
pub const ZERO_OP_FLOOR: f64 = 1e-12;

/// Tolerance for identities that hold to machine precision.
const EXACT_TOL: f64 = 1e-10;

/// Anything verifiable: an immersed hypersurface of the product presented
/// in a single chart, with its analytic unit normal.
///
/// The optional methods expose analytic structure when the surface has it;
/// defaults make the verifier fall back to finite differences.
pub trait SurfaceEval {
    fn signature(&self) -> Signature;

    /// Intrinsic dimension; charts use this many coordinates.
    fn dim(&self) -> usize;

    /// Closed coordinate box that sampling may draw from.
    fn sample_box(&self) -> Vec<(f64, f64)>;

    /// The immersion.
    fn position(&self, x: &[f64]) -> AmbientVector;

    /// Analytic unit normal within the product.
    fn unit_normal(&self, x: &[f64]) -> AmbientVector;

    /// Position in the quadric factor, a second unit normal when that
    /// factor is curved.
    fn quadric_normal(&self, _x: &[f64]) -> Option<AmbientVector> {
        None
    }

    /// Analytic (T chart coordinates, nu) for the vertical split, if known.
    fn vertical_data(&self, _x: &[f64]) -> Option<(Vec<f64>, f64)> {
        None
    }

    /// Analytic pushforward of the last chart coordinate, if known.
    fn profile_tangent(&self, _x: &[f64]) -> Option<AmbientVector> {
        None
    }

    /// The constant mean curvature the surface was built for, if any.
    fn target_mean_curvature(&self) -> Option<f64> {
        None
    }

    /// Expected trace of the shape operator at a point, if known.
    fn mean_curvature_at(&self, _x: &[f64]) -> Option<f64> {
        None
    }
}

/// First and second fundamental data measured by finite differences.
#[derive(Debug)]
pub struct FundamentalData {
    /// First fundamental form G in chart coordinates.
    pub metric: DMatrix<f64>,
    /// Centered-difference pushforwards of the chart directions.
    pub tangents: Vec<AmbientVector>,
    /// Shape operator of the unit normal, chart-coordinate representation.
    pub a_eta: DMatrix<f64>,
    /// The same operator in the orthonormal (hat) frame.
    pub a_eta_hat: DMatrix<f64>,
    /// Shape operator of the quadric position in the hat frame.
    pub a_xi_hat: Option<DMatrix<f64>>,
    /// Transposed Cholesky factor L^T with G = L L^T; maps chart
    /// coordinates to hat coordinates.
    pub chol_lt: DMatrix<f64>,
    /// Condition number of the metric.
    pub condition: f64,
}

impl FundamentalData {
    /// Chart-coordinate vector to hat-frame coordinates.
    pub fn to_hat(&self, v: &[f64]) -> DVector<f64> {
        &self.chol_lt * DVector::from_column_slice(v)
    }

    /// Eigenvalues of the symmetrized shape operator, ascending.
    pub fn eta_eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.a_eta_hat)
    }

    /// Eigenvalues of the symmetrized quadric-position operator, ascending.
    pub fn xi_eigenvalues(&self) -> Option<Vec<f64>> {
        self.a_xi_hat.as_ref().map(symmetric_eigenvalues)
    }
}

fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = 0.5 * (m + m.transpose());
    let mut eig: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().cloned().collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eig
}

/// Centered differences of an ambient-vector field over the chart.
fn fd_derivatives<F: Fn(&[f64]) -> AmbientVector>(
    field: F,
    x: &[f64],
    h: f64,
) -> Vec<AmbientVector> {
    (0..x.len())
        .map(|j| {
            let mut up = x.to_vec();
            let mut dn = x.to_vec();
            up[j] += h;
            dn[j] -= h;
            field(&up).sub(&field(&dn)).scale(0.5 / h)
        })
        .collect()
}

/// Measure the metric and shape eigenvalues of a hypersurface of the
/// quadric factor given by a chart map u -> (point, unit normal).
///
/// Used to cross-examine catalog data: the eigenvalues come purely from
/// finite differences of the supplied maps. Returns the metric and the
/// shape-operator spectrum sorted ascending.
pub fn measure_base_shape<F: Fn(&[f64]) -> (AmbientVector, AmbientVector)>(
    eval: F,
    chart_dim: usize,
    u: &[f64],
    fd_step: f64,
) -> Result<(DMatrix<f64>, Vec<f64>)> {
    assert_eq!(u.len(), chart_dim, "chart point has wrong dimension");
    let tangents = fd_derivatives(|x| eval(x).0, u, fd_step);
    let normal_derivs = fd_derivatives(|x| eval(x).1, u, fd_step);
    let (metric, chol_lt, condition) = metric_and_frame(&tangents, u)?;
    if condition > METRIC_COND_LIMIT {
        return Err(Error::IllConditioned(format!(
            "metric condition number {condition:.3e} at u = {u:?} exceeds {METRIC_COND_LIMIT:.0e}"
        )));
    }
    let a = shape_in_coords(&metric, &tangents, &normal_derivs)?;
    let a_hat = hat_conjugate(&chol_lt, &a)?;
    Ok((metric, symmetric_eigenvalues(&a_hat)))
}

fn metric_and_frame(
    tangents: &[AmbientVector],
    at: &[f64],
) -> Result<(DMatrix<f64>, DMatrix<f64>, f64)> {
    let d = tangents.len();
    let metric = DMatrix::from_fn(d, d, |j, k| inner(&tangents[j], &tangents[k]));
    let sv = metric.clone().svd(false, false).singular_values;
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let chol = nalgebra::Cholesky::new(metric.clone()).ok_or_else(|| {
        Error::IllConditioned(format!(
            "first fundamental form is not positive definite at {at:?}"
        ))
    })?;
    Ok((metric, chol.l().transpose(), condition))
}

fn shape_in_coords(
    metric: &DMatrix<f64>,
    tangents: &[AmbientVector],
    normal_derivs: &[AmbientVector],
) -> Result<DMatrix<f64>> {
    let d = tangents.len();
    let m = DMatrix::from_fn(d, d, |j, i| inner(&tangents[j], &normal_derivs[i]));
    let chol = nalgebra::Cholesky::new(metric.clone())
        .ok_or_else(|| Error::IllConditioned("first fundamental form lost definiteness".into()))?;
    Ok(-chol.solve(&m))
}

fn hat_conjugate(chol_lt: &DMatrix<f64>, a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let inv = chol_lt
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::IllConditioned("orthonormal frame factor is singular".into()))?;
    Ok(chol_lt * a * inv)
}

/// Measure the fundamental data of a surface at one chart point.
pub fn measure_fundamental(
    surf: &dyn SurfaceEval,
    x: &[f64],
    fd_step: f64,
) -> Result<FundamentalData> {
    let tangents = fd_derivatives(|y| surf.position(y), x, fd_step);
    let (metric, chol_lt, condition) = metric_and_frame(&tangents, x)?;
    if condition > METRIC_COND_LIMIT {
        return Err(Error::IllConditioned(format!(
            "metric condition number {condition:.3e} at x = {x:?} exceeds {METRIC_COND_LIMIT:.0e}"
        )));
    }
    let eta_derivs = fd_derivatives(|y| surf.unit_normal(y), x, fd_step);
    let a_eta = shape_in_coords(&metric, &tangents, &eta_derivs)?;
    let a_eta_hat = hat_conjugate(&chol_lt, &a_eta)?;
    let a_xi_hat = if surf.quadric_normal(x).is_some() {
        let xi_derivs = fd_derivatives(
            |y| surf.quadric_normal(y).expect("quadric normal vanished mid-chart"),
            x,
            fd_step,
        );
        let a_xi = shape_in_coords(&metric, &tangents, &xi_derivs)?;
        Some(hat_conjugate(&chol_lt, &a_xi)?)
    } else {
        None
    };
    Ok(FundamentalData {
        metric,
        tangents,
        a_eta,
        a_eta_hat,
        a_xi_hat,
        chol_lt,
        condition,
    })
}

/// T in chart coordinates and nu: analytic when the surface provides
/// them, otherwise projections of the vertical direction.
fn vertical_data(surf: &dyn SurfaceEval, fund: &FundamentalData, x: &[f64]) -> (Vec<f64>, f64, bool) {
    if let Some((coords, nu)) = surf.vertical_data(x) {
        return (coords, nu, true);
    }
    let dt = AmbientVector::vertical(surf.signature());
    let d = surf.dim();
    let rhs = DVector::from_fn(d, |j, _| inner(&dt, &fund.tangents[j]));
    let chol = nalgebra::Cholesky::new(fund.metric.clone())
        .expect("metric definiteness already checked");
    let coords: Vec<f64> = chol.solve(&rhs).iter().cloned().collect();
    let nu = inner(&dt, &surf.unit_normal(x));
    (coords, nu, false)
}

/// Frobenius norm.
fn fro(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Outcome of one identity checked at one or more points.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: &str, residual: f64, tol: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            residual,
            tol,
            pass: residual.is_finite() && residual <= tol,
        }
    }
}

/// All checks evaluated at one sample point.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleReport {
    pub x: Vec<f64>,
    pub checks: Vec<CheckResult>,
}

/// Full verification run: per-sample results plus the worst residual seen
/// for each check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config_digest: Option<String>,
    pub fd_step: f64,
    pub tol: f64,
    pub seed: u64,
    pub sample_count: usize,
    pub all_pass: bool,
    pub checks: Vec<CheckResult>,
    pub samples: Vec<SampleReport>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.all_pass
    }

    /// Worst-case entry for a named check, if it ran.
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Knobs for [`run_report`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub fd_step: f64,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub config_digest: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            fd_step: 1e-4,
            tol: 1e-5,
            samples: 100,
            seed: 0,
            config_digest: None,
        }
    }
}

/// Evaluate every applicable check at seeded random chart points.
///
/// Sampling stays `2 * fd_step` away from the chart boundary so centered
/// stencils never leave the domain.
pub fn run_report(surf: &dyn SurfaceEval, opts: &VerifyOptions) -> Result<VerificationReport> {
    if !(opts.fd_step > 0.0 && opts.fd_step.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "fd_step: must be positive (got {})",
            opts.fd_step
        )));
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tol: must be positive (got {})", opts.tol)));
    }
    if opts.samples == 0 {
        return Err(Error::InvalidParameter("samples: must be at least 1".into()));
    }
    let boxes = surf.sample_box();
    let margin = 2.0 * opts.fd_step;
    for (i, &(lo, hi)) in boxes.iter().enumerate() {
        if !(hi - lo > 2.0 * margin) {
            return Err(Error::EmptyDomain(format!(
                "chart interval {i} = ({lo:.6}, {hi:.6}) is too thin to sample with \
                 fd_step = {:e}",
                opts.fd_step
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut samples = Vec::with_capacity(opts.samples);
    let mut worst: Vec<CheckResult> = Vec::new();
    for _ in 0..opts.samples {
        let x: Vec<f64> = boxes
            .iter()
            .map(|&(lo, hi)| {
                let a = lo + margin;
                let b = hi - margin;
                a + (b - a) * rng.gen::<f64>()
            })
            .collect();
        let checks = sample_checks(surf, &x, opts.fd_step, opts.tol)?;
        for c in &checks {
            match worst.iter_mut().find(|w| w.name == c.name) {
                Some(w) => {
                    if !(c.residual <= w.residual) {
                        w.residual = c.residual;
                        w.pass = c.pass;
                    }
                }
                None => worst.push(c.clone()),
            }
        }
        samples.push(SampleReport { x, checks });
    }
    let all_pass = worst.iter().all(|c| c.pass);
    Ok(VerificationReport {
        config_digest: opts.config_digest.clone(),
        fd_step: opts.fd_step,
        tol: opts.tol,
        seed: opts.seed,
        sample_count: opts.samples,
        all_pass,
        checks: worst,
        samples,
    })
}

/// Run every applicable check at one chart point.
pub fn sample_checks(
    surf: &dyn SurfaceEval,
    x: &[f64],
    fd_step: f64,
    tol: f64,
) -> Result<Vec<CheckResult>> {
    let sig = surf.signature();
    let fund = measure_fundamental(surf, x, fd_step)?;
    let eta = surf.unit_normal(x);
    let dt = AmbientVector::vertical(sig);
    let (t_coords, nu, analytic) = vertical_data(surf, &fund, x);
    let mut out = Vec::new();

    // Membership of the quadric part in the space form.
    if sig.epsilon() != 0 {
        let res = space_form_residual(&surf.position(x));
        out.push(CheckResult::new("space_form_membership", res, MEMBERSHIP_TOL));
    }

    // The normal is a unit vector.
    out.push(CheckResult::new(
        "eta_unit",
        (inner(&eta, &eta) - 1.0).abs(),
        EXACT_TOL,
    ));

    // ... and orthogonal to all measured tangents.
    let tangency = fund
        .tangents
        .iter()
        .map(|f| inner(&eta, f).abs())
        .fold(0.0f64, f64::max);
    out.push(CheckResult::new("eta_tangency", tangency, tol));

    // Vertical split d/dt = f_* T + nu eta.
    let (decomp_res, decomp_tol) = {
        let mut t_amb = AmbientVector::zeros(sig);
        let mut exact = analytic;
        let last = surf.dim() - 1;
        for (j, &c) in t_coords.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if j == last {
                if let (true, Some(fs)) = (analytic, surf.profile_tangent(x)) {
                    t_amb = t_amb.axpy(c, &fs);
                    continue;
                }
            }
            exact = false;
            t_amb = t_amb.axpy(c, &fund.tangents[j]);
        }
        let res = dt.sub(&t_amb).axpy(-nu, &eta).euclidean_norm();
        (res, if exact { EXACT_TOL } else { tol })
    };
    out.push(CheckResult::new("vertical_decomposition", decomp_res, decomp_tol));

    // |T|^2 + nu^2 = 1.
    let (norm_res, norm_tol) = if analytic {
        if let Some(fs) = surf.profile_tangent(x) {
            let c = *t_coords.last().unwrap();
            (((c * c * inner(&fs, &fs)) + nu * nu - 1.0).abs(), EXACT_TOL)
        } else {
            (f64::NAN, EXACT_TOL)
        }
    } else {
        let tv = DVector::from_column_slice(&t_coords);
        let t_norm2 = (tv.transpose() * &fund.metric * &tv)[(0, 0)];
        ((t_norm2 + nu * nu - 1.0).abs(), tol)
    };
    out.push(CheckResult::new("norm_identity", norm_res, norm_tol));

    // T is an eigenvector of the shape operator.
    let t_hat = fund.to_hat(&t_coords);
    let a_norm = fro(&fund.a_eta_hat).max(ZERO_OP_FLOOR);
    let t_len2 = t_hat.norm_squared();
    let principal = if t_len2 > 0.0 {
        let at = &fund.a_eta_hat * &t_hat;
        let proj = &t_hat * (at.dot(&t_hat) / t_len2);
        (at - proj).norm() / a_norm
    } else {
        f64::NAN
    };
    out.push(CheckResult::new("principal_direction", principal, tol));

    // The measured operator is self-adjoint in the hat frame.
    let asym = fro(&(&fund.a_eta_hat - fund.a_eta_hat.transpose())) / a_norm;
    out.push(CheckResult::new("self_adjointness", asym, tol));

    if let Some(a_xi_hat) = &fund.a_xi_hat {
        // Shape operators of the two normals commute.
        let comm = &fund.a_eta_hat * a_xi_hat - a_xi_hat * &fund.a_eta_hat;
        let scale = (fro(&fund.a_eta_hat) * fro(a_xi_hat)).max(ZERO_OP_FLOOR);
        out.push(CheckResult::new("normal_commutator", fro(&comm) / scale, tol));

        // Spectrum {-1 (n-1 times), -nu^2}.
        let eigs = symmetric_eigenvalues(a_xi_hat);
        let mut expected = vec![-1.0; surf.dim() - 1];
        expected.push(-nu * nu);
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let res = eigs
            .iter()
            .zip(expected.iter())
            .map(|(g, e)| (g - e).abs())
            .fold(0.0f64, f64::max);
        out.push(CheckResult::new("xi_spectrum", res, tol));
    }

    // Trace of the shape operator against the construction's prediction.
    if let Some(expected) = surf.mean_curvature_at(x) {
        let trace = fund.a_eta_hat.trace();
        out.push(CheckResult::new("mean_curvature", (trace - expected).abs(), tol));
    }

    // Gradient identity grad nu = -A T, compared as covectors:
    // d(nu)_j = -(G A T)_j.
    let nu_of = |y: &[f64]| -> f64 {
        match surf.vertical_data(y) {
            Some((_, nu)) => nu,
            None => inner(&dt, &surf.unit_normal(y)),
        }
    };
    let d = surf.dim();
    let mut dnu = vec![0.0; d];
    for (j, slot) in dnu.iter_mut().enumerate() {
        let mut up = x.to_vec();
        let mut dn = x.to_vec();
        up[j] += fd_step;
        dn[j] -= fd_step;
        *slot = (nu_of(&up) - nu_of(&dn)) / (2.0 * fd_step);
    }
    let gat = &fund.metric * (&fund.a_eta * DVector::from_column_slice(&t_coords));
    let nu_res = dnu
        .iter()
        .zip(gat.iter())
        .map(|(l, r)| (l + r).abs())
        .fold(0.0f64, f64::max);
    out.push(CheckResult::new("nu_derivative", nu_res, tol));

    Ok(out)
}

/// Residual of the principal-direction check alone, for convergence studies.
pub fn principal_direction_residual(
    surf: &dyn SurfaceEval,
    x: &[f64],
    fd_step: f64,
) -> Result<f64> {
    let fund = measure_fundamental(surf, x, fd_step)?;
    let (t_coords, _, _) = vertical_data(surf, &fund, x);
    let t_hat = fund.to_hat(&t_coords);
    let at = &fund.a_eta_hat * &t_hat;
    let proj = &t_hat * (at.dot(&t_hat) / t_hat.norm_squared());
    Ok((at - proj).norm() / fro(&fund.a_eta_hat).max(ZERO_OP_FLOOR))
}

/// Residual of the commuting-normals check alone. Fails when the quadric
/// factor is flat (there is no second normal to compare).
pub fn commutator_residual(surf: &dyn SurfaceEval, x: &[f64], fd_step: f64) -> Result<f64> {
    let fund = measure_fundamental(surf, x, fd_step)?;
    let Some(a_xi_hat) = &fund.a_xi_hat else {
        return Err(Error::InvalidParameter(
            "normal commutator: needs a curved quadric factor (epsilon != 0)".into(),
        ));
    };
    let comm = &fund.a_eta_hat * a_xi_hat - a_xi_hat * &fund.a_eta_hat;
    let scale = (fro(&fund.a_eta_hat) * fro(a_xi_hat)).max(ZERO_OP_FLOOR);
    Ok(fro(&comm) / scale)
}

//! Height profiles along the parallel parameter.
//!
//! A surface is built as "parallel hypersurface at offset s, lifted to
//! height a(s)". The choice of a decides the geometry:
//!
//! * `linear` -- a(s) = A s keeps the vertical angle constant;
//! * `solve_cmc` -- integrates a'' = a'(1 + a'^2) Hs(s) + H (1 + a'^2)^{3/2},
//!   which pins the mean curvature of the lifted surface to the constant H
//!   (Hs is the mean-curvature function of the parallel family);
//! * `minimal` -- the H = 0 case in closed form: with
//!   h(s) = h0 exp(2 int_0^s Hs), the slope is a' = +-sqrt(h / (1 - h)).
//!
//! Profiles evaluate to the triple (a, a', a''). The ODE solver is a
//! fixed-step classical fourth-order scheme with cubic Hermite dense
//! output: a is interpolated from (a, a') node data and a' from (a', a''),
//! so at the nodes the returned triple satisfies the ODE to machine
//! precision. All quadrature is adaptive Simpson with absolute tolerance
//! `QUAD_TOL`.

use crate::ambient::cs_pair;
use crate::error::{Error, Result};
use crate::parallel::ParallelFamily;

/// Absolute tolerance of all profile quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// Slopes beyond this magnitude end ODE integration (graph blow-up).
pub const SLOPE_LIMIT: f64 = 1e6;

/// The minimal-profile domain keeps h below 1 by this margin.
pub const H_CEILING_MARGIN: f64 = 1e-9;

/// Mean curvature of a parallel family as a function of the offset,
/// available in closed form because catalog bases are isoparametric.
///
/// Hs(s) is the trace of the shape operator of the offset hypersurface:
/// the sum over principal branches of m_i (eps S + lambda_i C)/(C - lambda_i S).
#[derive(Clone, Debug)]
pub struct ParallelMeanCurvature {
    epsilon: i32,
    branches: Vec<(f64, usize)>,
}

impl ParallelMeanCurvature {
    /// Extract the mean-curvature function of a family. Fails if the base
    /// does not have constant principal curvatures.
    pub fn of_family(fam: &ParallelFamily) -> Result<Self> {
        if !fam.base().is_isoparametric() {
            return Err(Error::NotIsoparametric);
        }
        Ok(ParallelMeanCurvature {
            epsilon: fam.base().signature().epsilon(),
            branches: fam
                .base()
                .shape_eigen()
                .iter()
                .map(|b| (b.lambda, b.multiplicity))
                .collect(),
        })
    }

    /// Build directly from constant curvature branches.
    pub fn from_branches(epsilon: i32, branches: &[(f64, usize)]) -> Self {
        ParallelMeanCurvature { epsilon, branches: branches.to_vec() }
    }

    /// Hs(s), the trace of the offset hypersurface's shape operator.
    pub fn eval(&self, s: f64) -> f64 {
        let (c, sn) = cs_pair(self.epsilon, s);
        let eps = self.epsilon as f64;
        self.branches
            .iter()
            .map(|&(lambda, m)| m as f64 * (eps * sn + lambda * c) / (c - lambda * sn))
            .sum()
    }

    /// int_0^s Hs(t) dt by adaptive quadrature.
    pub fn integral_from_zero(&self, s: f64) -> f64 {
        adaptive_simpson(&|t| self.eval(t), 0.0, s, QUAD_TOL)
    }
}

/// A height profile with dense evaluation of (a, a', a'').
#[derive(Clone, Debug)]
pub struct Profile {
    variant: Variant,
}

#[derive(Clone, Debug)]
enum Variant {
    Linear { slope: f64 },
    Cmc(CmcGrid),
    Minimal(Minimal),
}

#[derive(Clone, Debug)]
struct CmcGrid {
    h_target: f64,
    lo: f64,
    step: f64,
    /// (a, a', a'') at uniformly spaced nodes; a'' is the ODE right side.
    nodes: Vec<(f64, f64, f64)>,
    trunc_lo: Option<String>,
    trunc_hi: Option<String>,
}

#[derive(Clone, Debug)]
struct Minimal {
    lo: f64,
    step: f64,
    /// (a, a', a'') at uniformly spaced nodes; the derivatives come from
    /// the transported first integral, the values from cellwise Simpson.
    nodes: Vec<(f64, f64, f64)>,
    trunc_lo: Option<String>,
    trunc_hi: Option<String>,
}

impl Profile {
    /// Constant-slope profile a(s) = slope * s. The slope must be nonzero
    /// or the lift degenerates (the vertical direction becomes normal).
    pub fn linear(slope: f64) -> Result<Profile> {
        if slope == 0.0 || !slope.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "A: linear profile slope must be finite and nonzero (got {slope})"
            )));
        }
        Ok(Profile { variant: Variant::Linear { slope } })
    }

    /// Integrate the constant-mean-curvature profile equation
    ///
    /// ```text
    ///     a'' = a' (1 + a'^2) Hs(s) + H (1 + a'^2)^{3/2}
    /// ```
    ///
    /// from (a, a')(0) = (a0, a1) across `interval` (which must contain 0)
    /// with fixed step `step`.
    ///
    /// Integration stops early where |a'| crosses `SLOPE_LIMIT` or where
    /// a' would reach zero (the construction needs a' of one sign); the
    /// domain is truncated there and the reason recorded. If nothing
    /// beyond s = 0 survives, the profile is reported as blown up.
    pub fn solve_cmc(
        h_target: f64,
        hs: &ParallelMeanCurvature,
        a0: f64,
        a1: f64,
        interval: (f64, f64),
        step: f64,
    ) -> Result<Profile> {
        if a1 == 0.0 || !a1.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "a1: initial slope must be finite and nonzero (got {a1})"
            )));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!("step: must be positive (got {step})")));
        }
        let (lo, hi) = interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "interval: must be a finite range with lo < hi (got [{lo}, {hi}])"
            )));
        }
        if !(lo <= 0.0 && 0.0 <= hi) {
            return Err(Error::InvalidParameter(format!(
                "interval: must contain s = 0, where the initial data are posed (got [{lo}, {hi}])"
            )));
        }
        if !h_target.is_finite() {
            return Err(Error::InvalidParameter("H_target: must be finite".into()));
        }

        let rhs = |s: f64, ap: f64| {
            let b2 = 1.0 + ap * ap;
            ap * b2 * hs.eval(s) + h_target * b2 * b2.sqrt()
        };

        // March both directions from 0 on the uniform grid j * step.
        let sign0 = a1.signum();
        let march = |dir: f64, count: usize| -> (Vec<(f64, f64, f64)>, Option<String>) {
            let mut out = Vec::with_capacity(count);
            let mut a = a0;
            let mut ap = a1;
            let mut trunc = None;
            for j in 0..count {
                let s = dir * step * j as f64;
                let (na, nap) = rk4_step(&rhs, s, a, ap, dir * step);
                if !(na.is_finite() && nap.is_finite()) || nap.abs() > SLOPE_LIMIT {
                    trunc = Some(format!(
                        "integration stopped at s = {:.6}: |a'| exceeded {SLOPE_LIMIT:.0e}",
                        s + dir * step
                    ));
                    break;
                }
                if nap == 0.0 || nap.signum() != sign0 {
                    trunc = Some(format!(
                        "integration stopped at s = {:.6}: a' would cross zero",
                        s + dir * step
                    ));
                    break;
                }
                a = na;
                ap = nap;
                let s_next = dir * step * (j + 1) as f64;
                out.push((a, ap, rhs(s_next, ap)));
            }
            (out, trunc)
        };

        let fwd_count = ((hi / step) + 1e-9).floor() as usize;
        let bwd_count = ((-lo / step) + 1e-9).floor() as usize;
        let (fwd, trunc_hi) = march(1.0, fwd_count);
        let (bwd, trunc_lo) = march(-1.0, bwd_count);

        let mut nodes: Vec<(f64, f64, f64)> = bwd.iter().rev().cloned().collect();
        nodes.push((a0, a1, rhs(0.0, a1)));
        nodes.extend(fwd.iter().cloned());
        if nodes.len() < 2 {
            return Err(Error::ProfileBlowUp(format!(
                "no step of size {step} survives on [{lo}, {hi}] from (a0, a1) = ({a0}, {a1})"
            )));
        }
        let grid_lo = -(bwd.len() as f64) * step;
        Ok(Profile {
            variant: Variant::Cmc(CmcGrid {
                h_target,
                lo: grid_lo,
                step,
                nodes,
                trunc_lo,
                trunc_hi,
            }),
        })
    }

    /// Minimal (H = 0) profile in first-order form: h(s) = h0 exp(2 int Hs),
    /// a' = sign * sqrt(h / (1 - h)), starting from a(0) = a0. Requires
    /// 0 < h0 < 1; the domain is the largest part of `interval` around 0 on
    /// which h stays below 1 (by `H_CEILING_MARGIN`).
    pub fn minimal(
        hs: &ParallelMeanCurvature,
        a0: f64,
        h0: f64,
        sign: i8,
        interval: (f64, f64),
    ) -> Result<Profile> {
        if !(h0 > 0.0 && h0 < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "h0: must satisfy 0 < h0 < 1 (got {h0})"
            )));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter(format!("sign: must be 1 or -1 (got {sign})")));
        }
        let (lo, hi) = interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "interval: must be a finite range with lo < hi (got [{lo}, {hi}])"
            )));
        }
        if !(lo <= 0.0 && 0.0 <= hi) {
            return Err(Error::InvalidParameter(format!(
                "interval: must contain s = 0 (got [{lo}, {hi}])"
            )));
        }

        let h_of = |t: f64| h0 * (2.0 * hs.integral_from_zero(t)).exp();
        // Truncate each side at the first crossing of h = 1 - margin.
        let ceiling = 1.0 - H_CEILING_MARGIN;
        let scan = |from: f64, to: f64| -> Option<f64> {
            let steps = 512;
            let mut prev = from;
            for k in 1..=steps {
                let t = from + (to - from) * k as f64 / steps as f64;
                if !(h_of(t) < ceiling) {
                    // Bisect the crossing between prev and t.
                    let (mut good, mut bad) = (prev, t);
                    for _ in 0..80 {
                        let mid = 0.5 * (good + bad);
                        if h_of(mid) < ceiling {
                            good = mid;
                        } else {
                            bad = mid;
                        }
                    }
                    return Some(good);
                }
                prev = t;
            }
            None
        };
        let mut domain = (lo, hi);
        let mut trunc_lo = None;
        let mut trunc_hi = None;
        if let Some(t) = scan(0.0, hi) {
            domain.1 = t;
            trunc_hi = Some(format!("h reached 1 near s = {t:.6}"));
        }
        if let Some(t) = scan(0.0, lo) {
            domain.0 = t;
            trunc_lo = Some(format!("h reached 1 near s = {t:.6}"));
        }
        if !(domain.0 < domain.1) {
            return Err(Error::ProfileBlowUp(format!(
                "minimal profile domain collapsed inside [{lo}, {hi}]"
            )));
        }

        let (grid_lo, step, nodes) = minimal_grid(hs, a0, h0, sign as f64, domain);
        if nodes.len() < 2 {
            return Err(Error::ProfileBlowUp(format!(
                "minimal profile domain collapsed inside [{lo}, {hi}]"
            )));
        }
        Ok(Profile {
            variant: Variant::Minimal(Minimal { lo: grid_lo, step, nodes, trunc_lo, trunc_hi }),
        })
    }

    /// Evaluate (a, a', a''). Arguments outside the domain are clamped to
    /// its boundary.
    pub fn eval(&self, s: f64) -> (f64, f64, f64) {
        match &self.variant {
            Variant::Linear { slope } => (slope * s, *slope, 0.0),
            Variant::Cmc(grid) => grid.eval(s),
            Variant::Minimal(m) => m.eval(s),
        }
    }

    /// Interval on which the profile is defined.
    pub fn domain(&self) -> (f64, f64) {
        match &self.variant {
            Variant::Linear { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Variant::Cmc(grid) => {
                (grid.lo, grid.lo + grid.step * (grid.nodes.len() - 1) as f64)
            }
            Variant::Minimal(m) => (m.lo, m.lo + m.step * (m.nodes.len() - 1) as f64),
        }
    }

    /// Truncation messages for the (low, high) side of the domain, if the
    /// requested interval had to be cut.
    pub fn truncation(&self) -> (Option<&str>, Option<&str>) {
        match &self.variant {
            Variant::Linear { .. } => (None, None),
            Variant::Cmc(g) => (g.trunc_lo.as_deref(), g.trunc_hi.as_deref()),
            Variant::Minimal(m) => (m.trunc_lo.as_deref(), m.trunc_hi.as_deref()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.variant {
            Variant::Linear { .. } => "linear",
            Variant::Cmc(_) => "cmc",
            Variant::Minimal(_) => "minimal",
        }
    }

    /// The constant mean curvature this profile was built for: H for the
    /// ODE solution, 0 for minimal, none for linear.
    pub fn cmc_target(&self) -> Option<f64> {
        match &self.variant {
            Variant::Linear { .. } => None,
            Variant::Cmc(g) => Some(g.h_target),
            Variant::Minimal(_) => Some(0.0),
        }
    }
}

/// Residual of the constant-mean-curvature equation at one sample.
pub fn cmc_ode_residual(sample: (f64, f64, f64), hs_value: f64, h_target: f64) -> f64 {
    let (_, ap, app) = sample;
    let b2 = 1.0 + ap * ap;
    (app - ap * b2 * hs_value - h_target * b2 * b2.sqrt()).abs()
}

impl CmcGrid {
    fn eval(&self, s: f64) -> (f64, f64, f64) {
        let n = self.nodes.len();
        let hi = self.lo + self.step * (n - 1) as f64;
        let sc = s.clamp(self.lo, hi);
        let mut j = ((sc - self.lo) / self.step).floor() as usize;
        j = j.min(n - 2);
        let s_j = self.lo + self.step * j as f64;
        let th = (sc - s_j) / self.step;
        let (a0, ap0, app0) = self.nodes[j];
        let (a1, ap1, app1) = self.nodes[j + 1];
        let a = hermite(self.step, th, a0, ap0, a1, ap1);
        let ap = hermite(self.step, th, ap0, app0, ap1, app1);
        let app = hermite_deriv(self.step, th, ap0, app0, ap1, app1);
        (a, ap, app)
    }
}

impl Minimal {
    fn eval(&self, s: f64) -> (f64, f64, f64) {
        let n = self.nodes.len();
        let hi = self.lo + self.step * (n - 1) as f64;
        let sc = s.clamp(self.lo, hi);
        let mut j = ((sc - self.lo) / self.step).floor() as usize;
        j = j.min(n - 2);
        let s_j = self.lo + self.step * j as f64;
        let th = (sc - s_j) / self.step;
        let (a0, ap0, app0) = self.nodes[j];
        let (a1, ap1, app1) = self.nodes[j + 1];
        let a = hermite(self.step, th, a0, ap0, a1, ap1);
        let ap = hermite(self.step, th, ap0, app0, ap1, app1);
        let app = hermite_deriv(self.step, th, ap0, app0, ap1, app1);
        (a, ap, app)
    }
}

/// Tabulate the first-order minimal profile on a uniform grid across
/// `domain`, marching outward from s = 0. The transported integral of
/// the family mean curvature is accumulated cell by cell with Simpson's
/// rule (so no quadrature ever restarts from zero), the slope and its
/// derivative then follow pointwise from h = h0 exp(2 int Hs), and the
/// height is the cellwise Simpson integral of the slope.
fn minimal_grid(
    hs: &ParallelMeanCurvature,
    a0: f64,
    h0: f64,
    sign: f64,
    domain: (f64, f64),
) -> (f64, f64, Vec<(f64, f64, f64)>) {
    let (d_lo, d_hi) = domain;
    let step = 1e-3f64.min((d_hi - d_lo) / 8.0);
    let n_pos = ((d_hi / step) + 1e-9).floor().max(0.0) as usize;
    let n_neg = ((-d_lo / step) + 1e-9).floor().max(0.0) as usize;

    // Slope and its s-derivative from the accumulated integral; h is
    // capped just under 1 so roundoff at a truncated edge cannot produce
    // a negative radicand.
    let slope_data = |i_acc: f64, s: f64| -> (f64, f64) {
        let h = (h0 * (2.0 * i_acc).exp()).min(1.0 - H_CEILING_MARGIN);
        let ap = sign * (h / (1.0 - h)).sqrt();
        let app = sign * hs.eval(s) * h.sqrt() / (1.0 - h).powf(1.5);
        (ap, app)
    };
    let march = |dir: f64, count: usize| -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(count);
        let mut a = a0;
        let mut i_acc = 0.0f64;
        let mut s = 0.0f64;
        let (mut ap, _) = slope_data(0.0, 0.0);
        for _ in 0..count {
            let dcell = dir * step;
            let i_mid = i_acc
                + (dcell / 12.0)
                    * (hs.eval(s) + 4.0 * hs.eval(s + 0.25 * dcell) + hs.eval(s + 0.5 * dcell));
            let i_next = i_mid
                + (dcell / 12.0)
                    * (hs.eval(s + 0.5 * dcell)
                        + 4.0 * hs.eval(s + 0.75 * dcell)
                        + hs.eval(s + dcell));
            let (ap_mid, _) = slope_data(i_mid, s + 0.5 * dcell);
            let (ap_next, app_next) = slope_data(i_next, s + dcell);
            a += (dcell / 6.0) * (ap + 4.0 * ap_mid + ap_next);
            s += dcell;
            i_acc = i_next;
            ap = ap_next;
            out.push((a, ap_next, app_next));
        }
        out
    };

    let fwd = march(1.0, n_pos);
    let back = march(-1.0, n_neg);
    let mut nodes = Vec::with_capacity(n_neg + n_pos + 1);
    nodes.extend(back.iter().rev().copied());
    let (ap0, app0) = slope_data(0.0, 0.0);
    nodes.push((a0, ap0, app0));
    nodes.extend(fwd);
    (-(n_neg as f64) * step, step, nodes)
}

fn hermite(h: f64, th: f64, y0: f64, m0: f64, y1: f64, m1: f64) -> f64 {
    let t2 = th * th;
    let t3 = t2 * th;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + h * (t3 - 2.0 * t2 + th) * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + h * (t3 - t2) * m1
}

fn hermite_deriv(h: f64, th: f64, y0: f64, m0: f64, y1: f64, m1: f64) -> f64 {
    let t2 = th * th;
    ((6.0 * t2 - 6.0 * th) * y0
        + h * (3.0 * t2 - 4.0 * th + 1.0) * m0
        + (-6.0 * t2 + 6.0 * th) * y1
        + h * (3.0 * t2 - 2.0 * th) * m1)
        / h
}

/// One classical fourth-order step of (a, a')' = (a', rhs(s, a')).
fn rk4_step<F: Fn(f64, f64) -> f64>(rhs: &F, s: f64, a: f64, ap: f64, h: f64) -> (f64, f64) {
    let k1a = ap;
    let k1p = rhs(s, ap);
    let k2a = ap + 0.5 * h * k1p;
    let k2p = rhs(s + 0.5 * h, k2a);
    let k3a = ap + 0.5 * h * k2p;
    let k3p = rhs(s + 0.5 * h, k3a);
    let k4a = ap + h * k3p;
    let k4p = rhs(s + h, k4a);
    (
        a + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
        ap + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
    )
}

/// Adaptive Simpson quadrature with Richardson correction, absolute
/// tolerance `tol`, handles reversed limits.
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if b < a {
        return -adaptive_simpson(f, b, a, tol);
    }
    let c = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fc = f(c);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_refine(f, a, b, fa, fb, fc, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let fd = f(d);
    let fe = f(e);
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_refine(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
            + simpson_refine(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
    }
}

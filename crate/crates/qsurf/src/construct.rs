//! Assembly of product hypersurfaces from a parallel family and a profile.
//!
//! The immersion is
//!
//! ```text
//!     f(u, s) = ( g_s(u), a(s) )
//! ```
//!
//! where g_s is the offset-s member of a parallel family in the quadric
//! factor and a the height profile. Writing b = sqrt(1 + a'^2), the fields
//! attached to f are
//!
//! * unit normal        eta = (-(a'/b) N_s, 1/b),
//! * quadric position   xi  = (g_s, 0)  (a second unit normal when the
//!   quadric factor is curved),
//! * vertical tangent   T   = (a'/b^2) f_* d/ds  with  d/dt = f_* T + nu eta
//!   and nu = 1/b.
//!
//! Because a' never vanishes on the working range, T is nonzero everywhere
//! and, by construction, a principal direction of the surface.
//!
//! `ProductHypersurface::new` intersects the requested offset range with
//! the profile domain and the family's regular range, then pulls the ends
//! in until every pushforward scale factor clears `FOCAL_SCALE_MARGIN`;
//! anything it had to cut is reported through `clip_notes`.

use crate::ambient::{AmbientVector, Signature};
use crate::error::{Error, Result};
use crate::parallel::ParallelFamily;
use crate::profile::Profile;
use crate::verify::SurfaceEval;

/// Offsets keep all pushforward scale factors at least this large.
pub const FOCAL_SCALE_MARGIN: f64 = 1e-6;

/// A hypersurface of the product built from a parallel family and a profile.
#[derive(Clone, Debug)]
pub struct ProductHypersurface {
    fam: ParallelFamily,
    profile: Profile,
    requested: (f64, f64),
    s_range: (f64, f64),
    regularity: (f64, f64),
    clip_notes: Vec<String>,
}

impl ProductHypersurface {
    /// Combine a family and a profile over the offset range `s_range`.
    ///
    /// The working range is the requested one intersected with the profile
    /// domain and with the family's regular offsets; ends are nudged inward
    /// until the smallest |scale factor| is at least `FOCAL_SCALE_MARGIN`.
    /// Returns `EmptyDomain` when nothing survives.
    pub fn new(fam: ParallelFamily, profile: Profile, s_range: (f64, f64)) -> Result<Self> {
        let (req_lo, req_hi) = s_range;
        if !(req_lo.is_finite() && req_hi.is_finite() && req_lo < req_hi) {
            return Err(Error::InvalidParameter(format!(
                "s_range: must be a finite range with lo < hi (got [{req_lo}, {req_hi}])"
            )));
        }
        let center = fam.base().chart_center();
        let reg = fam.regularity_interval(&center);
        let prof_dom = profile.domain();

        let mut lo = req_lo;
        let mut hi = req_hi;
        let mut notes = Vec::new();
        if prof_dom.0 > lo {
            lo = prof_dom.0;
            notes.push(format!("low end raised to {lo:.6}: the profile domain starts there"));
        }
        if prof_dom.1 < hi {
            hi = prof_dom.1;
            notes.push(format!("high end lowered to {hi:.6}: the profile domain ends there"));
        }
        if reg.0 > lo {
            lo = reg.0;
            notes.push(format!(
                "low end raised to the focal offset {:.6} of the parallel family",
                reg.0
            ));
        }
        if reg.1 < hi {
            hi = reg.1;
            notes.push(format!(
                "high end lowered to the focal offset {:.6} of the parallel family",
                reg.1
            ));
        }
        if !(lo < hi) {
            return Err(Error::EmptyDomain(format!(
                "requested s range [{req_lo}, {req_hi}] misses the usable offsets: \
                 profile domain is [{:.6}, {:.6}], regular family offsets are ({:.6}, {:.6})",
                prof_dom.0, prof_dom.1, reg.0, reg.1
            )));
        }

        // Clear the focal margin at both ends.
        let clear = |s: f64| fam.min_abs_scale(&center, s) >= FOCAL_SCALE_MARGIN;
        let seed = (0..=64)
            .map(|k| lo + (hi - lo) * k as f64 / 64.0)
            .find(|&s| clear(s));
        let Some(seed) = seed else {
            return Err(Error::EmptyDomain(format!(
                "every offset in [{lo:.6}, {hi:.6}] is within {FOCAL_SCALE_MARGIN:e} of a \
                 focal value of the parallel family"
            )));
        };
        let pull_in = |mut bad: f64, mut good: f64| -> f64 {
            for _ in 0..80 {
                let mid = 0.5 * (bad + good);
                if clear(mid) {
                    good = mid;
                } else {
                    bad = mid;
                }
            }
            good
        };
        if !clear(lo) {
            lo = pull_in(lo, seed);
        }
        if !clear(hi) {
            hi = pull_in(hi, seed);
        }
        if !(lo < hi) {
            return Err(Error::EmptyDomain(format!(
                "offset range collapsed while clearing the focal margin near [{lo:.6}, {hi:.6}]"
            )));
        }

        Ok(ProductHypersurface {
            fam,
            profile,
            requested: (req_lo, req_hi),
            s_range: (lo, hi),
            regularity: reg,
            clip_notes: notes,
        })
    }

    pub fn family(&self) -> &ParallelFamily {
        &self.fam
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn signature(&self) -> Signature {
        self.fam.base().signature()
    }

    /// Working offset range after all clipping.
    pub fn s_range(&self) -> (f64, f64) {
        self.s_range
    }

    /// The range originally asked for.
    pub fn requested_range(&self) -> (f64, f64) {
        self.requested
    }

    /// Human-readable reasons the working range differs from the request.
    pub fn clip_notes(&self) -> &[String] {
        &self.clip_notes
    }

    pub fn was_clipped(&self) -> bool {
        let slack = 1e-12;
        (self.s_range.0 - self.requested.0).abs() > slack
            || (self.s_range.1 - self.requested.1).abs() > slack
    }

    /// Dimension of the surface (chart coordinates: base chart + offset).
    pub fn dim(&self) -> usize {
        self.fam.base().chart_dim() + 1
    }

    fn check(&self, u: &[f64], s: f64) -> Result<()> {
        let b = self.fam.base();
        if u.len() != b.chart_dim() {
            return Err(Error::InvalidParameter(format!(
                "u: expected {} chart coordinates, got {}",
                b.chart_dim(),
                u.len()
            )));
        }
        for (i, (&ui, &(lo, hi))) in u.iter().zip(b.chart_domain().iter()).enumerate() {
            if !(ui > lo && ui < hi) {
                return Err(Error::OutOfDomain(format!(
                    "u[{i}] = {ui}: outside the chart interval ({lo:.6}, {hi:.6})"
                )));
            }
        }
        let (lo, hi) = self.s_range;
        if !(s >= lo && s <= hi) {
            if s <= self.regularity.0 || s >= self.regularity.1 {
                return Err(Error::OutOfDomain(format!(
                    "s = {s}: at or beyond a focal offset of the parallel family \
                     (regular offsets are ({:.6}, {:.6}))",
                    self.regularity.0, self.regularity.1
                )));
            }
            return Err(Error::OutOfDomain(format!(
                "s = {s}: outside the working offset range [{lo:.6}, {hi:.6}]"
            )));
        }
        Ok(())
    }

    /// All per-point data in one sweep: offset point and normal in the
    /// quadric, and the profile triple.
    fn parts(&self, u: &[f64], s: f64) -> (AmbientVector, AmbientVector, f64, f64, f64) {
        let g = self.fam.point(u, s);
        let n = self.fam.normal(u, s);
        let (a, ap, app) = self.profile.eval(s);
        (g, n, a, ap, app)
    }

    /// The immersion f(u, s) = (g_s(u), a(s)).
    pub fn point(&self, u: &[f64], s: f64) -> Result<AmbientVector> {
        self.check(u, s)?;
        let (g, _, a, _, _) = self.parts(u, s);
        Ok(g.with_t(a))
    }

    /// Unit normal eta = (-(a'/b) N_s, 1/b).
    pub fn eta(&self, u: &[f64], s: f64) -> Result<AmbientVector> {
        self.check(u, s)?;
        let (_, n, _, ap, _) = self.parts(u, s);
        let b = (1.0 + ap * ap).sqrt();
        Ok(n.scale(-ap / b).with_t(1.0 / b))
    }

    /// Quadric position xi = (g_s, 0), a second unit normal when the
    /// quadric factor is curved; undefined in the flat case.
    pub fn xi(&self, u: &[f64], s: f64) -> Result<AmbientVector> {
        if self.signature().epsilon() == 0 {
            return Err(Error::InvalidParameter(
                "xi: only defined when the quadric factor is curved (epsilon != 0)".into(),
            ));
        }
        self.check(u, s)?;
        let (g, _, _, _, _) = self.parts(u, s);
        Ok(g.with_t(0.0))
    }

    /// Pushforward of d/ds: (N_s, a'(s)).
    pub fn s_tangent(&self, u: &[f64], s: f64) -> Result<AmbientVector> {
        self.check(u, s)?;
        let (_, n, _, ap, _) = self.parts(u, s);
        Ok(n.with_t(ap))
    }

    /// The split d/dt = f_* T + nu eta: returns (T as an ambient vector,
    /// its chart coefficient along d/ds, nu).
    pub fn vertical_split(&self, u: &[f64], s: f64) -> Result<(AmbientVector, f64, f64)> {
        self.check(u, s)?;
        let (_, n, _, ap, _) = self.parts(u, s);
        let b2 = 1.0 + ap * ap;
        let coeff = ap / b2;
        Ok((n.with_t(ap).scale(coeff), coeff, 1.0 / b2.sqrt()))
    }

    /// Trace the construction expects for the shape operator of eta:
    /// -(a'/b) Hs(s) + a''/b^3 with Hs the family's mean curvature.
    pub fn expected_shape_trace(&self, hs_value: f64, s: f64) -> f64 {
        let (_, ap, app) = self.profile.eval(s);
        let b2 = 1.0 + ap * ap;
        let b = b2.sqrt();
        -(ap / b) * hs_value + app / (b2 * b)
    }
}

impl SurfaceEval for ProductHypersurface {
    fn signature(&self) -> Signature {
        self.signature()
    }

    fn dim(&self) -> usize {
        self.dim()
    }

    fn sample_box(&self) -> Vec<(f64, f64)> {
        let mut out = self.fam.base().chart_domain().to_vec();
        out.push(self.s_range);
        out
    }

    fn position(&self, x: &[f64]) -> AmbientVector {
        let (u, s) = split_chart(x);
        let (g, _, a, _, _) = self.parts(u, s);
        g.with_t(a)
    }

    fn unit_normal(&self, x: &[f64]) -> AmbientVector {
        let (u, s) = split_chart(x);
        let (_, n, _, ap, _) = self.parts(u, s);
        let b = (1.0 + ap * ap).sqrt();
        n.scale(-ap / b).with_t(1.0 / b)
    }

    fn quadric_normal(&self, x: &[f64]) -> Option<AmbientVector> {
        if self.signature().epsilon() == 0 {
            return None;
        }
        let (u, s) = split_chart(x);
        let (g, _, _, _, _) = self.parts(u, s);
        Some(g.with_t(0.0))
    }

    fn vertical_data(&self, x: &[f64]) -> Option<(Vec<f64>, f64)> {
        let (_, s) = split_chart(x);
        let (_, ap, _) = self.profile.eval(s);
        let b2 = 1.0 + ap * ap;
        let mut coords = vec![0.0; self.dim()];
        *coords.last_mut().unwrap() = ap / b2;
        Some((coords, 1.0 / b2.sqrt()))
    }

    fn profile_tangent(&self, x: &[f64]) -> Option<AmbientVector> {
        let (u, s) = split_chart(x);
        let (_, n, _, ap, _) = self.parts(u, s);
        Some(n.with_t(ap))
    }

    fn target_mean_curvature(&self) -> Option<f64> {
        self.profile.cmc_target()
    }

    fn mean_curvature_at(&self, x: &[f64]) -> Option<f64> {
        let (_, s) = split_chart(x);
        let hs = crate::profile::ParallelMeanCurvature::of_family(&self.fam).ok()?;
        Some(self.expected_shape_trace(hs.eval(s), s))
    }
}

fn split_chart(x: &[f64]) -> (&[f64], f64) {
    let (last, head) = x.split_last().expect("chart coordinates must be nonempty");
    (head, *last)
}

//! Parallel families: sliding a base hypersurface along its unit normal
//! geodesics.
//!
//! For a base g with unit normal N the family is
//!
//! ```text
//!     g_s = C(s) g + S(s) N,      N_s = -eps S(s) g + C(s) N,
//! ```
//!
//! with (C, S) the cosine/sine-like pair of the curvature sign (for the
//! flat case this is just g + s N). Each curve s -> g_s(x) is a unit-speed
//! geodesic of the space form and N_s stays its velocity, so N_s is again a
//! unit normal of g_s.
//!
//! A principal direction of g with curvature lambda is stretched by the
//! scale factor
//!
//! ```text
//!     sigma(s) = C(s) - lambda S(s),
//! ```
//!
//! which vanishes exactly at the focal values of the family. Writing
//! lambda = cot(theta), 1/theta or coth(theta) per curvature sign turns the
//! focal values into angles theta; the connected component of 0 in the
//! complement of the focal set is the regular range on which the family
//! stays immersed.

use nalgebra::DMatrix;

use crate::ambient::{cs_pair, AmbientVector};
use crate::basecat::BaseHypersurface;

/// Focal angles closer than this are reported once.
pub const THETA_MERGE_TOL: f64 = 1e-10;

/// One focal angle with the multiplicity of directions collapsing there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FocalAngle {
    pub theta: f64,
    pub multiplicity: usize,
}

/// The family of hypersurfaces parallel to a catalog base.
#[derive(Clone, Debug)]
pub struct ParallelFamily {
    base: BaseHypersurface,
}

impl ParallelFamily {
    pub fn new(base: BaseHypersurface) -> Self {
        ParallelFamily { base }
    }

    pub fn base(&self) -> &BaseHypersurface {
        &self.base
    }

    /// Point of the parallel hypersurface at offset `s`.
    ///
    /// No regularity is required here: focal points are legitimate
    /// evaluations (the map just stops being an immersion there).
    pub fn point(&self, u: &[f64], s: f64) -> AmbientVector {
        let (g, nrm) = self.base.eval(u);
        let (c, sn) = cs_pair(self.base.signature().epsilon(), s);
        g.scale(c).axpy(sn, &nrm)
    }

    /// Unit normal of the parallel hypersurface at offset `s` (the velocity
    /// of the normal geodesic through g(u)).
    pub fn normal(&self, u: &[f64], s: f64) -> AmbientVector {
        let (g, nrm) = self.base.eval(u);
        let eps = self.base.signature().epsilon();
        let (c, sn) = cs_pair(eps, s);
        nrm.scale(c).axpy(-(eps as f64) * sn, &g)
    }

    /// Stretch factor sigma_i(s) = C(s) - lambda_i S(s) applied to the i-th
    /// principal-direction branch of the base (branch order follows
    /// `base.shape_eigen()`). sigma_i(0) = 1; zeros are focal values.
    pub fn pushforward_scale(&self, branch: usize, _u: &[f64], s: f64) -> f64 {
        let lambda = self.base.shape_eigen()[branch].lambda;
        let (c, sn) = cs_pair(self.base.signature().epsilon(), s);
        c - lambda * sn
    }

    /// Smallest |sigma_i(s)| over all branches.
    pub fn min_abs_scale(&self, u: &[f64], s: f64) -> f64 {
        (0..self.base.shape_eigen().len())
            .map(|i| self.pushforward_scale(i, u, s).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Principal curvature of the parallel hypersurface g_s along branch
    /// `branch`, under the same orientation transport. Blows up at focal
    /// values.
    pub fn parallel_eigenvalue(&self, branch: usize, s: f64) -> f64 {
        let eps = self.base.signature().epsilon() as f64;
        let lambda = self.base.shape_eigen()[branch].lambda;
        let (c, sn) = cs_pair(self.base.signature().epsilon(), s);
        (eps * sn + lambda * c) / (c - lambda * sn)
    }

    /// Focal angles theta_i of the family, sorted increasing, angles closer
    /// than `THETA_MERGE_TOL` merged. Branches without a focal value
    /// (curvatures of modulus <= 1 in the hyperbolic case, flat directions
    /// in the Euclidean one) are omitted.
    ///
    /// The chart point is accepted for interface symmetry; the catalog is
    /// isoparametric so the angles are constant.
    pub fn focal_angles(&self, _u: &[f64]) -> Vec<FocalAngle> {
        let eps = self.base.signature().epsilon();
        let mut thetas: Vec<(f64, usize)> = Vec::new();
        for br in self.base.shape_eigen() {
            let lambda = br.lambda;
            let theta = match eps {
                // cot(theta) = lambda has a unique solution in (0, pi).
                1 => Some(f64::atan2(1.0, lambda)),
                0 => {
                    if lambda != 0.0 {
                        Some(1.0 / lambda)
                    } else {
                        None
                    }
                }
                -1 => {
                    if lambda.abs() > 1.0 {
                        // coth(theta) = lambda.
                        Some((1.0 / lambda).atanh())
                    } else {
                        None
                    }
                }
                _ => unreachable!(),
            };
            if let Some(t) = theta {
                thetas.push((t, br.multiplicity));
            }
        }
        thetas.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<FocalAngle> = Vec::new();
        for (t, m) in thetas {
            match merged.last_mut() {
                Some(last) if (t - last.theta).abs() <= THETA_MERGE_TOL => {
                    last.multiplicity += m;
                }
                _ => merged.push(FocalAngle { theta: t, multiplicity: m }),
            }
        }
        merged
    }

    /// Open interval of offsets around s = 0 on which every stretch factor
    /// stays nonzero.
    ///
    /// On the sphere the focal angles repeat with period pi, so the range
    /// is (theta_max - pi, theta_min); elsewhere it runs between the
    /// nearest negative and positive focal angles, with infinities when a
    /// side has none.
    pub fn regularity_interval(&self, u: &[f64]) -> (f64, f64) {
        let thetas = self.focal_angles(u);
        match self.base.signature().epsilon() {
            1 => {
                let lo = thetas.last().unwrap().theta - std::f64::consts::PI;
                let hi = thetas.first().unwrap().theta;
                (lo, hi)
            }
            _ => {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for fa in &thetas {
                    if fa.theta > 0.0 {
                        hi = hi.min(fa.theta);
                    } else if fa.theta < 0.0 {
                        lo = lo.max(fa.theta);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Smallest singular value of the finite-difference chart Jacobian of
    /// g_s (Euclidean singular values of the coordinate matrix). Decays to
    /// zero as s approaches a focal value, which is how degeneration is
    /// observed rather than inferred.
    pub fn jacobian_smallest_singular_value(&self, u: &[f64], s: f64, fd_step: f64) -> f64 {
        let k = self.base.chart_dim();
        let dim = self.base.signature().ambient_dim();
        let mut jac = DMatrix::<f64>::zeros(dim, k);
        for i in 0..k {
            let mut up = u.to_vec();
            let mut um = u.to_vec();
            up[i] += fd_step;
            um[i] -= fd_step;
            let col = self.point(&up, s).sub(&self.point(&um, s)).scale(0.5 / fd_step);
            for (r, v) in col.coords().iter().enumerate() {
                jac[(r, i)] = *v;
            }
        }
        let svd = jac.svd(false, false);
        svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{self, inner, q_inner, Signature};
    use crate::basecat::{make_base, CatalogEntry};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn fam(entry: CatalogEntry, eps: i32, n: usize) -> ParallelFamily {
        let sig = Signature::new(eps, n).unwrap();
        ParallelFamily::new(make_base(&entry, sig).unwrap())
    }

    #[test]
    fn offset_zero_is_the_base() {
        for (entry, eps, n) in [
            (CatalogEntry::GeodesicSphere { r: 0.8 }, 1, 2),
            (CatalogEntry::Horosphere {}, -1, 3),
            (CatalogEntry::RoundSphere { r: 2.0 }, 0, 2),
        ] {
            let f = fam(entry, eps, n);
            let u = f.base().chart_center();
            let (g, nrm) = f.base().eval(&u);
            assert!(f.point(&u, 0.0).sub(&g).euclidean_norm() < 1e-15);
            assert!(f.normal(&u, 0.0).sub(&nrm).euclidean_norm() < 1e-15);
            for b in 0..f.base().shape_eigen().len() {
                assert_eq!(f.pushforward_scale(b, &u, 0.0), 1.0);
            }
        }
    }

    #[test]
    fn parallel_points_stay_on_the_quadric() {
        for (entry, eps, n, svals) in [
            (CatalogEntry::GeodesicSphere { r: 0.8 }, 1, 2, vec![-0.5, 0.3, 1.1]),
            (CatalogEntry::Equidistant { d: 0.4 }, -1, 2, vec![-2.0, 0.7, 3.0]),
            (CatalogEntry::Horosphere {}, -1, 3, vec![-1.5, 2.5]),
            (CatalogEntry::HyperbolicGeodesicSphere { r: 0.6 }, -1, 2, vec![-0.3, 1.8]),
        ] {
            let f = fam(entry, eps, n);
            let u = f.base().chart_center();
            for s in svals {
                let p = f.point(&u, s);
                let nrm = f.normal(&u, s);
                assert!(ambient::on_space_form(&p, ambient::MEMBERSHIP_TOL), "s = {s}");
                assert!((inner(&nrm, &nrm) - 1.0).abs() < 1e-9);
                assert!(q_inner(&p, &nrm).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn normal_curves_are_unit_speed_geodesics() {
        // c(s) = point(u, s): <c', c'> = 1 and c'' = -eps c by centered
        // finite differences.
        let h = 1e-4;
        for (entry, eps, n) in [
            (CatalogEntry::GeodesicSphere { r: 1.1 }, 1, 2),
            (CatalogEntry::Hyperplane {}, 0, 3),
            (CatalogEntry::HyperbolicGeodesicSphere { r: 0.9 }, -1, 2),
        ] {
            let f = fam(entry, eps, n);
            let u = f.base().chart_center();
            for s in [-0.4, 0.0, 0.6] {
                let cp = f.point(&u, s + h);
                let cm = f.point(&u, s - h);
                let c0 = f.point(&u, s);
                let vel = cp.sub(&cm).scale(0.5 / h);
                assert!((inner(&vel, &vel) - 1.0).abs() < 1e-6, "speed at s = {s}");
                let acc = cp.add(&cm).sub(&c0.scale(2.0)).scale(1.0 / (h * h));
                let resid = acc.axpy(eps as f64, &c0).euclidean_norm();
                assert!(resid < 1e-6, "geodesic equation at s = {s}: {resid:e}");
                // The stored normal is the curve's velocity.
                assert!(vel.sub(&f.normal(&u, s)).euclidean_norm() < 1e-6);
            }
        }
    }

    #[test]
    fn equator_family_sweeps_to_the_poles() {
        let f = fam(CatalogEntry::Equator {}, 1, 2);
        let u = f.base().chart_center();
        // At offset pi/2 every point lands on the pole -e0 (the normal
        // points at -e0), and at -pi/2 on e0.
        let pole = f.point(&u, FRAC_PI_2);
        assert!((pole.coords()[0] + 1.0).abs() < 1e-12);
        assert!(pole.coords()[1].abs() < 1e-12 && pole.coords()[2].abs() < 1e-12);
        // At offset pi the surface returns reflected: g_pi = -g, N_pi = -N.
        let (g, nrm) = f.base().eval(&u);
        assert!(f.point(&u, PI).add(&g).euclidean_norm() < 1e-12);
        assert!(f.normal(&u, PI).add(&nrm).euclidean_norm() < 1e-12);
    }

    #[test]
    fn scale_reduces_to_angle_form_on_the_sphere() {
        // For eps = 1 and lambda = cot(theta): sigma(s) = sin(theta - s)/sin(theta).
        let f = fam(CatalogEntry::GeodesicSphere { r: 1.2 }, 1, 2);
        let u = f.base().chart_center();
        let theta = f.focal_angles(&u)[0].theta;
        for s in [-0.9, -0.1, 0.4, 1.0] {
            let direct = f.pushforward_scale(0, &u, s);
            let angled = (theta - s).sin() / theta.sin();
            assert!((direct - angled).abs() < 1e-12, "s = {s}");
        }
        // Totally geodesic branch: lambda = 0 gives sigma = cos s.
        let eq = fam(CatalogEntry::Equator {}, 1, 2);
        assert!((eq.pushforward_scale(0, &u, 0.3) - 0.3f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn clifford_focal_angles_and_regular_range() {
        let f = fam(
            CatalogEntry::CliffordTorus { p: 1, q: 1, r: FRAC_1_SQRT_2 },
            1,
            3,
        );
        let u = f.base().chart_center();
        let fa = f.focal_angles(&u);
        assert_eq!(fa.len(), 2);
        assert!((fa[0].theta - FRAC_PI_4).abs() < 1e-12);
        assert!((fa[1].theta - 3.0 * FRAC_PI_4).abs() < 1e-12);
        let (lo, hi) = f.regularity_interval(&u);
        assert!((lo + FRAC_PI_4).abs() < 1e-12 && (hi - FRAC_PI_4).abs() < 1e-12);
        // The q-branch scale vanishes at the near focal angle.
        assert!(f.pushforward_scale(1, &u, FRAC_PI_4).abs() < 1e-12);
        assert!(f.min_abs_scale(&u, 0.0) > 0.99);
    }

    #[test]
    fn flat_and_hyperbolic_regular_ranges() {
        // Flat branches with lambda = 0 never focalize.
        let f = fam(CatalogEntry::Hyperplane {}, 0, 2);
        let u = f.base().chart_center();
        assert_eq!(f.regularity_interval(&u), (f64::NEG_INFINITY, f64::INFINITY));
        assert!(f.focal_angles(&u).is_empty());

        // Outward round sphere: single focal angle at theta = -r.
        let f = fam(CatalogEntry::RoundSphere { r: 1.0 }, 0, 2);
        let fa = f.focal_angles(&u);
        assert_eq!(fa.len(), 1);
        assert!((fa[0].theta + 1.0).abs() < 1e-15);
        assert_eq!(f.regularity_interval(&u), (-1.0, f64::INFINITY));

        // Horospheres and shallow equidistants have |lambda| <= 1: immersed
        // for all offsets.
        let f = fam(CatalogEntry::Horosphere {}, -1, 2);
        assert_eq!(f.regularity_interval(&u), (f64::NEG_INFINITY, f64::INFINITY));
        let f = fam(CatalogEntry::Equidistant { d: 0.5 }, -1, 2);
        assert_eq!(f.regularity_interval(&u), (f64::NEG_INFINITY, f64::INFINITY));

        // A hyperbolic distance sphere focalizes at its center: theta = -r.
        let f = fam(CatalogEntry::HyperbolicGeodesicSphere { r: 0.8 }, -1, 2);
        let fa = f.focal_angles(&u);
        assert_eq!(fa.len(), 1);
        assert!((fa[0].theta + 0.8).abs() < 1e-12);
    }

    #[test]
    fn geodesic_sphere_parallels_are_geodesic_spheres() {
        // Moving the family by s shifts the radius by s, in all three
        // geometries, including the measured curvature of the offset.
        let f = fam(CatalogEntry::GeodesicSphere { r: 1.0 }, 1, 2);
        for s in [-0.4, 0.3] {
            let expect = -1.0 / (1.0f64 + s).tan();
            assert!((f.parallel_eigenvalue(0, s) - expect).abs() < 1e-12, "sphere s = {s}");
        }
        let f = fam(CatalogEntry::RoundSphere { r: 1.0 }, 0, 2);
        for s in [-0.5, 0.0, 1.5] {
            let expect = -1.0 / (1.0 + s);
            assert!((f.parallel_eigenvalue(0, s) - expect).abs() < 1e-12, "flat s = {s}");
        }
        let f = fam(CatalogEntry::Horosphere {}, -1, 2);
        for s in [-1.0, 0.7] {
            assert!((f.parallel_eigenvalue(0, s) + 1.0).abs() < 1e-12, "horo s = {s}");
        }
    }

    #[test]
    fn equator_offsets_measure_like_small_spheres() {
        // The offset of the equator at s is a geodesic sphere of radius
        // pi/2 + s, so its eigenvalue is tan(s); cross-check by the
        // finite-difference shape operator of (point, normal) at fixed s.
        let f = fam(CatalogEntry::Equator {}, 1, 2);
        let u = f.base().chart_center();
        for s in [-0.6, 0.0, 0.45] {
            let measured =
                crate::verify::measure_base_shape(|x| (f.point(x, s), f.normal(x, s)), 1, &u, 1e-4)
                    .unwrap()
                    .1;
            assert!((measured[0] - s.tan()).abs() < 5e-6, "s = {s}");
        }
    }

    #[test]
    fn jacobian_collapses_toward_the_focal_angle() {
        let f = fam(
            CatalogEntry::CliffordTorus { p: 1, q: 1, r: FRAC_1_SQRT_2 },
            1,
            3,
        );
        let u = f.base().chart_center();
        let mut last = f64::INFINITY;
        for k in 2..=5 {
            let s = FRAC_PI_4 - 10f64.powi(-k);
            let sv = f.jacobian_smallest_singular_value(&u, s, 1e-4);
            assert!(sv < last, "singular value should shrink (k = {k}): {sv:e} vs {last:e}");
            last = sv;
        }
        assert!(last < 1e-4);
    }
}

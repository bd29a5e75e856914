//! Catalog of base hypersurfaces inside a single space form.
//!
//! Every entry is isoparametric: its principal curvatures are constant
//! across the chart, which is what makes the parallel family and the
//! profile ODE tractable downstream. The catalog is closed; there is no
//! plug-in mechanism for user-defined bases.
//!
//! Orientation fixes the signs everywhere else, so it is part of each
//! entry's definition. The shape operator convention is
//!
//! ```text
//!     A X = -(tangential part of the derivative of N along X),
//! ```
//!
//! under which the outward-oriented unit circle in the plane has shape
//! eigenvalue -1. With the orientations below the catalog reads:
//!
//! | kind                             | sign | eigenvalues (multiplicity)    |
//! |----------------------------------|------|-------------------------------|
//! | `geodesic_sphere(r)`             |  +1  | -cot r              (n-1)     |
//! | `equator`                        |  +1  | 0                   (n-1)     |
//! | `clifford_torus(p, q, r)`        |  +1  | -r'/r (p), r/r' (q), r'=sqrt(1-r^2) |
//! | `hyperplane`                     |   0  | 0                   (n-1)     |
//! | `round_sphere(r)`                |   0  | -1/r                (n-1)     |
//! | `horosphere`                     |  -1  | -1                  (n-1)     |
//! | `equidistant(d)`                 |  -1  | -tanh d             (n-1)     |
//! | `hyperbolic_geodesic_sphere(r)`  |  -1  | -coth r             (n-1)     |
//!
//! Charts use angles for sphere factors (poles trimmed off by a small
//! margin) and plain boxes for the flat-style kinds.

use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientVector, Signature};
use crate::error::{Error, Result};

/// Margin kept between chart boxes and the coordinate singularities of
/// angular charts (sphere poles).
pub const POLE_MARGIN: f64 = 1e-3;

/// Serializable catalog entry: the `kind`/`params` pair accepted verbatim
/// in CLI config files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum CatalogEntry {
    /// Distance sphere of geodesic radius r about a pole of the sphere.
    GeodesicSphere { r: f64 },
    /// Totally geodesic equatorial hypersphere.
    Equator {},
    /// Product S^p(r) x S^q(r') in the unit sphere, r^2 + r'^2 = 1.
    CliffordTorus { p: usize, q: usize, r: f64 },
    /// Flat hyperplane through the origin.
    Hyperplane {},
    /// Round sphere of radius r in flat space, oriented outward.
    RoundSphere { r: f64 },
    /// Horosphere, oriented away from its ideal point.
    Horosphere {},
    /// Equidistant hypersurface at signed distance d from a totally
    /// geodesic hyperplane of hyperbolic space.
    Equidistant { d: f64 },
    /// Distance sphere of geodesic radius r in hyperbolic space.
    HyperbolicGeodesicSphere { r: f64 },
}

impl CatalogEntry {
    /// Catalog name as it appears in configs and listings.
    pub fn kind_name(&self) -> &'static str {
        match self {
            CatalogEntry::GeodesicSphere { .. } => "geodesic_sphere",
            CatalogEntry::Equator {} => "equator",
            CatalogEntry::CliffordTorus { .. } => "clifford_torus",
            CatalogEntry::Hyperplane {} => "hyperplane",
            CatalogEntry::RoundSphere { .. } => "round_sphere",
            CatalogEntry::Horosphere {} => "horosphere",
            CatalogEntry::Equidistant { .. } => "equidistant",
            CatalogEntry::HyperbolicGeodesicSphere { .. } => "hyperbolic_geodesic_sphere",
        }
    }

    /// The only curvature sign this entry lives in.
    pub fn required_epsilon(&self) -> i32 {
        match self {
            CatalogEntry::GeodesicSphere { .. }
            | CatalogEntry::Equator {}
            | CatalogEntry::CliffordTorus { .. } => 1,
            CatalogEntry::Hyperplane {} | CatalogEntry::RoundSphere { .. } => 0,
            CatalogEntry::Horosphere {}
            | CatalogEntry::Equidistant { .. }
            | CatalogEntry::HyperbolicGeodesicSphere { .. } => -1,
        }
    }
}

/// One constant principal curvature with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenBranch {
    pub lambda: f64,
    pub multiplicity: usize,
}

/// A catalog base hypersurface, ready to evaluate.
#[derive(Clone, Debug)]
pub struct BaseHypersurface {
    sig: Signature,
    entry: CatalogEntry,
    chart_domain: Vec<(f64, f64)>,
    eigen: Vec<EigenBranch>,
}

/// Validate a catalog entry against a signature and build the hypersurface.
///
/// Error messages name the violated constraint by its config field path.
pub fn make_base(entry: &CatalogEntry, sig: Signature) -> Result<BaseHypersurface> {
    let eps = sig.epsilon();
    let need = entry.required_epsilon();
    if eps != need {
        return Err(Error::InvalidParameter(format!(
            "base.kind: {} requires epsilon = {need} (config has epsilon = {eps})",
            entry.kind_name()
        )));
    }
    let n = sig.n();
    let k = n - 1; // chart dimension

    let (chart_domain, eigen) = match *entry {
        CatalogEntry::GeodesicSphere { r } => {
            if !(r > 0.0 && r < std::f64::consts::PI) {
                return Err(Error::InvalidParameter(format!(
                    "base.params.r: geodesic_sphere needs 0 < r < pi (got {r})"
                )));
            }
            (
                sphere_chart_domain(k),
                vec![EigenBranch { lambda: -1.0 / r.tan(), multiplicity: k }],
            )
        }
        CatalogEntry::Equator {} => (
            sphere_chart_domain(k),
            vec![EigenBranch { lambda: 0.0, multiplicity: k }],
        ),
        CatalogEntry::CliffordTorus { p, q, r } => {
            if p < 1 || q < 1 || p + q != n - 1 {
                return Err(Error::InvalidParameter(format!(
                    "base.params.p/q: clifford_torus needs p >= 1, q >= 1 and p + q = n - 1 \
                     (got p = {p}, q = {q} with n = {n})"
                )));
            }
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "base.params.r: clifford_torus needs 0 < r < 1 (got {r})"
                )));
            }
            let r2 = (1.0 - r * r).sqrt();
            let mut dom = sphere_chart_domain(p);
            dom.extend(sphere_chart_domain(q));
            (
                dom,
                vec![
                    EigenBranch { lambda: -r2 / r, multiplicity: p },
                    EigenBranch { lambda: r / r2, multiplicity: q },
                ],
            )
        }
        CatalogEntry::Hyperplane {} => (
            box_chart_domain(k),
            vec![EigenBranch { lambda: 0.0, multiplicity: k }],
        ),
        CatalogEntry::RoundSphere { r } => {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "base.params.r: round_sphere needs r > 0 (got {r})"
                )));
            }
            (
                sphere_chart_domain(k),
                vec![EigenBranch { lambda: -1.0 / r, multiplicity: k }],
            )
        }
        CatalogEntry::Horosphere {} => (
            box_chart_domain(k),
            vec![EigenBranch { lambda: -1.0, multiplicity: k }],
        ),
        CatalogEntry::Equidistant { d } => {
            if !d.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "base.params.d: equidistant needs a finite distance (got {d})"
                )));
            }
            (
                box_chart_domain(k),
                vec![EigenBranch { lambda: -d.tanh(), multiplicity: k }],
            )
        }
        CatalogEntry::HyperbolicGeodesicSphere { r } => {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "base.params.r: hyperbolic_geodesic_sphere needs r > 0 (got {r})"
                )));
            }
            (
                sphere_chart_domain(k),
                vec![EigenBranch { lambda: -1.0 / r.tanh(), multiplicity: k }],
            )
        }
    };

    Ok(BaseHypersurface {
        sig,
        entry: entry.clone(),
        chart_domain,
        eigen,
    })
}

impl BaseHypersurface {
    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn entry(&self) -> &CatalogEntry {
        &self.entry
    }

    /// Chart dimension n - 1.
    pub fn chart_dim(&self) -> usize {
        self.sig.n() - 1
    }

    /// Per-axis open chart box (angular singularities already trimmed).
    pub fn chart_domain(&self) -> &[(f64, f64)] {
        &self.chart_domain
    }

    /// Center of the chart box, a convenient sample point.
    pub fn chart_center(&self) -> Vec<f64> {
        self.chart_domain.iter().map(|(a, b)| 0.5 * (a + b)).collect()
    }

    /// Constant principal curvatures with multiplicities.
    pub fn shape_eigen(&self) -> &[EigenBranch] {
        &self.eigen
    }

    /// All catalog entries have u-independent principal curvatures.
    pub fn is_isoparametric(&self) -> bool {
        true
    }

    /// Trace of the shape operator (not normalized by n - 1). The chart
    /// point is accepted for interface symmetry; catalog curvatures do not
    /// depend on it.
    pub fn mean_curvature(&self, _u: &[f64]) -> f64 {
        self.eigen
            .iter()
            .map(|b| b.lambda * b.multiplicity as f64)
            .sum()
    }

    /// Evaluate position and unit normal at chart point `u`, embedded in
    /// the full ambient space with vertical component 0.
    pub fn eval(&self, u: &[f64]) -> (AmbientVector, AmbientVector) {
        assert_eq!(u.len(), self.chart_dim(), "chart point has wrong dimension");
        let qd = self.sig.q_dim();
        let mut g = vec![0.0; qd];
        let mut nrm = vec![0.0; qd];
        match self.entry {
            CatalogEntry::GeodesicSphere { r } => {
                // g = (cos r, sin r w), N = (-sin r, cos r w): N points in
                // the direction of growing radius.
                let w = unit_sphere_point(u);
                g[0] = r.cos();
                nrm[0] = -r.sin();
                for i in 0..w.len() {
                    g[1 + i] = r.sin() * w[i];
                    nrm[1 + i] = r.cos() * w[i];
                }
            }
            CatalogEntry::Equator {} => {
                let w = unit_sphere_point(u);
                nrm[0] = -1.0;
                g[1..1 + w.len()].copy_from_slice(&w);
            }
            CatalogEntry::CliffordTorus { p, q: _, r } => {
                let r2 = (1.0 - r * r).sqrt();
                let wp = unit_sphere_point(&u[..p]);
                let wq = unit_sphere_point(&u[p..]);
                for i in 0..wp.len() {
                    g[i] = r * wp[i];
                    nrm[i] = r2 * wp[i];
                }
                for j in 0..wq.len() {
                    g[wp.len() + j] = r2 * wq[j];
                    nrm[wp.len() + j] = -r * wq[j];
                }
            }
            CatalogEntry::Hyperplane {} => {
                g[..u.len()].copy_from_slice(u);
                nrm[qd - 1] = 1.0;
            }
            CatalogEntry::RoundSphere { r } => {
                let w = unit_sphere_point(u);
                for i in 0..w.len() {
                    g[i] = r * w[i];
                    nrm[i] = w[i];
                }
            }
            CatalogEntry::Horosphere {} => {
                // Level set <p, l> = -1 of the null direction l = e0 + e1,
                // with N = p - l pointing away from the ideal point.
                let half = 0.5 * u.iter().map(|x| x * x).sum::<f64>();
                g[0] = 1.0 + half;
                g[1] = half;
                g[2..2 + u.len()].copy_from_slice(u);
                nrm[0] = half;
                nrm[1] = half - 1.0;
                nrm[2..2 + u.len()].copy_from_slice(u);
            }
            CatalogEntry::Equidistant { d } => {
                // Push a totally geodesic hyperplane a distance d along its
                // unit normal (the last space-form coordinate).
                let p0 = (1.0 + u.iter().map(|x| x * x).sum::<f64>()).sqrt();
                g[0] = d.cosh() * p0;
                nrm[0] = d.sinh() * p0;
                for i in 0..u.len() {
                    g[1 + i] = d.cosh() * u[i];
                    nrm[1 + i] = d.sinh() * u[i];
                }
                g[qd - 1] = d.sinh();
                nrm[qd - 1] = d.cosh();
            }
            CatalogEntry::HyperbolicGeodesicSphere { r } => {
                let w = unit_sphere_point(u);
                g[0] = r.cosh();
                nrm[0] = r.sinh();
                for i in 0..w.len() {
                    g[1 + i] = r.sinh() * w[i];
                    nrm[1 + i] = r.cosh() * w[i];
                }
            }
        }
        (
            AmbientVector::from_q_and_t(self.sig, &g, 0.0),
            AmbientVector::from_q_and_t(self.sig, &nrm, 0.0),
        )
    }
}

/// Point of the unit sphere S^k from k angles: nested polar coordinates,
/// first k-1 angles in (0, pi), last in (0, 2 pi).
fn unit_sphere_point(u: &[f64]) -> Vec<f64> {
    let k = u.len();
    let mut w = vec![0.0; k + 1];
    let mut prod = 1.0;
    for j in 0..k {
        w[j] = prod * u[j].cos();
        prod *= u[j].sin();
    }
    w[k] = prod;
    w
}

fn sphere_chart_domain(k: usize) -> Vec<(f64, f64)> {
    let pi = std::f64::consts::PI;
    let mut dom = Vec::with_capacity(k);
    for _ in 0..k.saturating_sub(1) {
        dom.push((POLE_MARGIN, pi - POLE_MARGIN));
    }
    dom.push((0.0, 2.0 * pi));
    dom
}

fn box_chart_domain(k: usize) -> Vec<(f64, f64)> {
    vec![(-1.0, 1.0); k]
}

/// Human-oriented description of one catalog kind, used by the CLI listing.
#[derive(Clone, Debug, Serialize)]
pub struct KindInfo {
    pub name: &'static str,
    pub epsilon: i32,
    pub params: &'static str,
    pub constraint: &'static str,
}

/// The full catalog, in listing order.
pub fn catalog_listing() -> Vec<KindInfo> {
    vec![
        KindInfo {
            name: "geodesic_sphere",
            epsilon: 1,
            params: "r",
            constraint: "0 < r < pi",
        },
        KindInfo {
            name: "equator",
            epsilon: 1,
            params: "(none)",
            constraint: "totally geodesic",
        },
        KindInfo {
            name: "clifford_torus",
            epsilon: 1,
            params: "p, q, r",
            constraint: "p + q = n - 1, 0 < r < 1",
        },
        KindInfo {
            name: "hyperplane",
            epsilon: 0,
            params: "(none)",
            constraint: "totally geodesic",
        },
        KindInfo {
            name: "round_sphere",
            epsilon: 0,
            params: "r",
            constraint: "r > 0",
        },
        KindInfo {
            name: "horosphere",
            epsilon: -1,
            params: "(none)",
            constraint: "unit principal curvatures",
        },
        KindInfo {
            name: "equidistant",
            epsilon: -1,
            params: "d",
            constraint: "finite d (d = 0 is totally geodesic)",
        },
        KindInfo {
            name: "hyperbolic_geodesic_sphere",
            epsilon: -1,
            params: "r",
            constraint: "r > 0",
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{self, inner, q_inner};
    use crate::verify;

    fn sig(eps: i32, n: usize) -> Signature {
        Signature::new(eps, n).unwrap()
    }

    fn sample_points(b: &BaseHypersurface) -> Vec<Vec<f64>> {
        // A few deterministic interior points of the chart box.
        let dom = b.chart_domain();
        let fracs = [0.27, 0.52, 0.81];
        fracs
            .iter()
            .map(|f| {
                dom.iter()
                    .enumerate()
                    .map(|(i, (lo, hi))| lo + (f + 0.11 * i as f64).fract() * (hi - lo))
                    .collect()
            })
            .collect()
    }

    fn all_entries() -> Vec<(CatalogEntry, Signature)> {
        vec![
            (CatalogEntry::GeodesicSphere { r: 0.7 }, sig(1, 2)),
            (CatalogEntry::GeodesicSphere { r: std::f64::consts::FRAC_PI_2 }, sig(1, 2)),
            (CatalogEntry::Equator {}, sig(1, 3)),
            (
                CatalogEntry::CliffordTorus { p: 1, q: 1, r: std::f64::consts::FRAC_1_SQRT_2 },
                sig(1, 3),
            ),
            (CatalogEntry::Hyperplane {}, sig(0, 2)),
            (CatalogEntry::RoundSphere { r: 1.0 }, sig(0, 3)),
            (CatalogEntry::Horosphere {}, sig(-1, 2)),
            (CatalogEntry::Equidistant { d: 0.5 }, sig(-1, 3)),
            (CatalogEntry::HyperbolicGeodesicSphere { r: 1.0 }, sig(-1, 2)),
        ]
    }

    #[test]
    fn frame_orthonormality_everywhere() {
        // <g,g> = eps and <g,N> = 0 (curved cases), <N,N> = 1 always.
        for (entry, s) in all_entries() {
            let b = make_base(&entry, s).unwrap();
            for u in sample_points(&b) {
                let (g, nrm) = b.eval(&u);
                assert!(
                    ambient::on_space_form(&g, ambient::MEMBERSHIP_TOL),
                    "{} not on its quadric at {u:?}",
                    entry.kind_name()
                );
                assert!((inner(&nrm, &nrm) - 1.0).abs() < 1e-9, "{}", entry.kind_name());
                if s.epsilon() != 0 {
                    assert!(q_inner(&g, &nrm).abs() < 1e-9, "{}", entry.kind_name());
                }
            }
        }
    }

    #[test]
    fn normal_is_orthogonal_to_chart_tangents() {
        // Centered finite differences of g against N.
        let h = 1e-5;
        for (entry, s) in all_entries() {
            let b = make_base(&entry, s).unwrap();
            for u in sample_points(&b) {
                let (_, nrm) = b.eval(&u);
                for i in 0..b.chart_dim() {
                    let mut up = u.clone();
                    let mut um = u.clone();
                    up[i] += h;
                    um[i] -= h;
                    let (gp, _) = b.eval(&up);
                    let (gm, _) = b.eval(&um);
                    let tang = gp.sub(&gm).scale(0.5 / h);
                    assert!(
                        inner(&nrm, &tang).abs() < 1e-7,
                        "{} direction {i}",
                        entry.kind_name()
                    );
                }
            }
        }
    }

    #[test]
    fn catalog_eigenvalues_match_finite_difference_measurement() {
        // The stated constant principal curvatures are measured, not
        // trusted: compare against the finite-difference shape operator.
        for (entry, s) in all_entries() {
            let b = make_base(&entry, s).unwrap();
            for u in sample_points(&b) {
                let (_, shape) = verify::measure_base_shape(|x| b.eval(x), b.chart_dim(), &u, 1e-4)
                    .unwrap();
                let measured = shape;
                let mut expected: Vec<f64> = Vec::new();
                for br in b.shape_eigen() {
                    expected.extend(std::iter::repeat_n(br.lambda, br.multiplicity));
                }
                expected.sort_by(f64::total_cmp);
                assert_eq!(measured.len(), expected.len());
                for (m, e) in measured.iter().zip(&expected) {
                    assert!(
                        (m - e).abs() < 5e-6,
                        "{}: measured {m} vs analytic {e} at {u:?}",
                        entry.kind_name()
                    );
                }
            }
        }
    }

    #[test]
    fn named_curvature_values() {
        // Spot values under the outward/growing-radius orientations.
        let b = make_base(&CatalogEntry::GeodesicSphere { r: std::f64::consts::FRAC_PI_2 }, sig(1, 2))
            .unwrap();
        assert!(b.shape_eigen()[0].lambda.abs() < 1e-15); // great circle

        let b = make_base(
            &CatalogEntry::CliffordTorus { p: 1, q: 1, r: std::f64::consts::FRAC_1_SQRT_2 },
            sig(1, 3),
        )
        .unwrap();
        let mut ls: Vec<f64> = b.shape_eigen().iter().map(|e| e.lambda).collect();
        ls.sort_by(f64::total_cmp);
        assert!((ls[0] + 1.0).abs() < 1e-12 && (ls[1] - 1.0).abs() < 1e-12);
        assert!(b.mean_curvature(&[0.0, 0.0]).abs() < 1e-12); // minimal

        let b = make_base(&CatalogEntry::RoundSphere { r: 1.0 }, sig(0, 2)).unwrap();
        assert!((b.mean_curvature(&[0.0]) + 1.0).abs() < 1e-15); // unit circle, outward

        let b = make_base(&CatalogEntry::Hyperplane {}, sig(0, 4)).unwrap();
        assert_eq!(b.mean_curvature(&[0.0; 3]), 0.0);

        let b = make_base(&CatalogEntry::Equidistant { d: 0.0 }, sig(-1, 2)).unwrap();
        assert_eq!(b.shape_eigen()[0].lambda, 0.0); // totally geodesic
    }

    #[test]
    fn parameter_validation_names_the_constraint() {
        let err = make_base(&CatalogEntry::GeodesicSphere { r: 3.5 }, sig(1, 2)).unwrap_err();
        assert!(err.to_string().contains("0 < r < pi"), "{err}");

        let err = make_base(&CatalogEntry::CliffordTorus { p: 1, q: 1, r: 0.5 }, sig(1, 2))
            .unwrap_err();
        assert!(err.to_string().contains("p + q = n - 1"), "{err}");

        let err = make_base(&CatalogEntry::CliffordTorus { p: 1, q: 1, r: 1.5 }, sig(1, 3))
            .unwrap_err();
        assert!(err.to_string().contains("0 < r < 1"), "{err}");

        let err = make_base(&CatalogEntry::RoundSphere { r: -2.0 }, sig(0, 2)).unwrap_err();
        assert!(err.to_string().contains("r > 0"), "{err}");

        // Wrong curvature sign is rejected up front.
        let err = make_base(&CatalogEntry::Horosphere {}, sig(1, 2)).unwrap_err();
        assert!(err.to_string().contains("requires epsilon = -1"), "{err}");
    }

    #[test]
    fn serde_round_trip_uses_kind_and_params() {
        let e = CatalogEntry::CliffordTorus { p: 1, q: 1, r: 0.5 };
        let j = serde_json::to_string(&e).unwrap();
        assert!(j.contains("\"kind\":\"clifford_torus\""), "{j}");
        assert!(j.contains("\"params\""), "{j}");
        let back: CatalogEntry = serde_json::from_str(&j).unwrap();
        assert_eq!(back, e);

        let parsed: CatalogEntry =
            serde_json::from_str("{\"kind\":\"equidistant\",\"params\":{\"d\":0.25}}").unwrap();
        assert_eq!(parsed, CatalogEntry::Equidistant { d: 0.25 });
    }
}

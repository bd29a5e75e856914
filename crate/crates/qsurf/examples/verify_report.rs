//! Produce a full verification report for one surface and print it as
//! JSON, the same payload the `qsurf verify` command emits.
//!
//! Also demonstrates what the verifier is for: a deliberately corrupted
//! surface (a height ripple that varies across the base chart) fails the
//! principal-direction check while still passing the generic sanity
//! checks, so the suite isolates the property that makes these surfaces
//! special.
//!
//! Run with: cargo run --example verify_report

use qsurf::ambient::Signature;
use qsurf::basecat::{make_base, CatalogEntry};
use qsurf::construct::ProductHypersurface;
use qsurf::parallel::ParallelFamily;
use qsurf::profile::Profile;
use qsurf::verify::{principal_direction_residual, run_report, SurfaceEval, VerifyOptions};

/// A product surface with its height perturbed chart-dependently: no
/// longer one of ours, and the verifier should say so.
struct Rippled {
    inner: ProductHypersurface,
    delta: f64,
}

impl SurfaceEval for Rippled {
    fn signature(&self) -> Signature {
        self.inner.signature()
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn sample_box(&self) -> Vec<(f64, f64)> {
        self.inner.sample_box()
    }
    fn position(&self, x: &[f64]) -> qsurf::ambient::AmbientVector {
        let p = self.inner.position(x);
        let bump = self.delta * (2.0 * x[0]).sin() * (1.5 * x[1]).cos();
        p.with_t(p.t_part() + bump)
    }
    fn unit_normal(&self, x: &[f64]) -> qsurf::ambient::AmbientVector {
        // Finite-difference tangents, then the unique unit vector normal
        // to all of them (and tangent to the sphere factor).
        numeric_normal(self, x)
    }
    fn quadric_normal(&self, x: &[f64]) -> Option<qsurf::ambient::AmbientVector> {
        self.inner.quadric_normal(x)
    }
}

fn numeric_normal(surf: &dyn SurfaceEval, x: &[f64]) -> qsurf::ambient::AmbientVector {
    use nalgebra::{DMatrix, DVector};
    use qsurf::ambient::{inner, AmbientVector};
    let h = 1e-5;
    let k = x.len();
    let mut frame: Vec<AmbientVector> = Vec::new();
    for i in 0..k {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += h;
        xm[i] -= h;
        frame.push(surf.position(&xp).sub(&surf.position(&xm)).scale(1.0 / (2.0 * h)));
    }
    if let Some(q) = surf.quadric_normal(x) {
        frame.push(q);
    }
    let dt = AmbientVector::vertical(surf.signature());
    let gram = DMatrix::from_fn(frame.len(), frame.len(), |i, j| inner(&frame[i], &frame[j]));
    let rhs = DVector::from_fn(frame.len(), |i, _| inner(&frame[i], &dt));
    let coeffs = gram.lu().solve(&rhs).expect("independent frame");
    let mut v = dt;
    for (c, b) in coeffs.iter().zip(&frame) {
        v = v.axpy(-*c, b);
    }
    v.scale(1.0 / inner(&v, &v).sqrt())
}

fn main() {
    let sig = Signature::new(1, 2).expect("valid signature");
    let base = make_base(&CatalogEntry::GeodesicSphere { r: 1.0 }, sig).expect("valid entry");
    let surf = ProductHypersurface::new(
        ParallelFamily::new(base),
        Profile::linear(1.0).expect("valid slope"),
        (-0.5, 0.5),
    )
    .expect("usable range");

    let report = run_report(
        &surf,
        &VerifyOptions { samples: 50, seed: 2024, ..Default::default() },
    )
    .expect("verification should run");
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));

    let rippled = Rippled { inner: surf, delta: 0.15 };
    let x = [1.3, 0.1];
    let clean_res = {
        let clean = Rippled { inner: rippled.inner.clone(), delta: 0.0 };
        principal_direction_residual(&clean, &x, 1e-4).expect("measurable")
    };
    let broken_res = principal_direction_residual(&rippled, &x, 1e-4).expect("measurable");
    eprintln!();
    eprintln!("principal-direction residual, genuine surface:   {clean_res:.3e}");
    eprintln!("principal-direction residual, rippled imitation: {broken_res:.3e}");
    eprintln!("the check accepts the first and rejects the second.");
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}

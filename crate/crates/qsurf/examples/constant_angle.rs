//! Build a constant-angle surface: a linear profile over a parallel
//! family makes the unit vertical field meet the normal at a fixed angle
//! everywhere, and the angle is set by the slope alone.
//!
//! Run with: cargo run --example constant_angle

use qsurf::ambient::{inner, AmbientVector};
use qsurf::basecat::CatalogEntry;
use qsurf::basecat::make_base;
use qsurf::ambient::Signature;
use qsurf::construct::ProductHypersurface;
use qsurf::parallel::ParallelFamily;
use qsurf::profile::Profile;
use qsurf::verify::{run_report, SurfaceEval, VerifyOptions};

fn main() {
    let slope = 0.75;
    let sig = Signature::new(-1, 2).expect("valid signature");
    let base = make_base(&CatalogEntry::Equidistant { d: 0.4 }, sig).expect("valid entry");
    let surf = ProductHypersurface::new(
        ParallelFamily::new(base),
        Profile::linear(slope).expect("valid slope"),
        (-0.8, 0.8),
    )
    .expect("usable offset range");

    println!("Constant-angle surface over an equidistant hypersurface of H^2");
    println!("==============================================================\n");
    let expected = 1.0 / (1.0 + slope * slope).sqrt();
    println!("slope A = {slope}; expected vertical angle cosine nu = {expected:.12}\n");

    // Sample nu = <d/dt, normal> across the chart: it never moves.
    let boxes = surf.sample_box();
    let dt = AmbientVector::vertical(surf.signature());
    let mut worst: f64 = 0.0;
    for i in 0..7 {
        for j in 0..7 {
            let x = [
                boxes[0].0 + (boxes[0].1 - boxes[0].0) * (0.05 + 0.9 * i as f64 / 6.0),
                boxes[1].0 + (boxes[1].1 - boxes[1].0) * (0.05 + 0.9 * j as f64 / 6.0),
            ];
            let nu = inner(&dt, &surf.unit_normal(&x));
            worst = worst.max((nu - expected).abs());
        }
    }
    println!("worst |nu - expected| over a 7x7 sweep: {worst:.3e}\n");

    // And the full identity suite still holds.
    let report = run_report(
        &surf,
        &VerifyOptions { samples: 60, seed: 42, ..Default::default() },
    )
    .expect("verification should run");
    for check in &report.checks {
        println!(
            "[{}] {:<24} worst residual {:.3e}",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.residual
        );
    }
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}

//! Solve the profile equation that makes the built surface have constant
//! mean curvature, then confirm the promise by measuring the trace of the
//! shape operator at random points.
//!
//! The equation couples the profile to the parallel family through the
//! family's mean curvature function: a'' = a' (1 + a'^2) Hs(s) + H (1 + a'^2)^(3/2).
//!
//! Run with: cargo run --example cmc_profile

use qsurf::ambient::Signature;
use qsurf::basecat::{make_base, CatalogEntry};
use qsurf::construct::ProductHypersurface;
use qsurf::parallel::ParallelFamily;
use qsurf::profile::{cmc_ode_residual, ParallelMeanCurvature, Profile};
use qsurf::verify::{run_report, VerifyOptions};

fn main() {
    let target_h = 0.6;
    let sig = Signature::new(1, 2).expect("valid signature");
    let base = make_base(&CatalogEntry::GeodesicSphere { r: 1.0 }, sig).expect("valid entry");
    let fam = ParallelFamily::new(base);
    let hs = ParallelMeanCurvature::of_family(&fam).expect("isoparametric base");

    let profile = Profile::solve_cmc(target_h, &hs, 0.0, 1.0, (-0.25, 0.25), 1e-3)
        .expect("solvable initial data");

    println!("Constant-mean-curvature profile over a geodesic sphere of S^2");
    println!("=============================================================\n");
    println!("target mean curvature H = {target_h}\n");
    println!("{:>8} {:>12} {:>12} {:>12} {:>12}", "s", "a", "a'", "a''", "eq residual");
    for k in -5..=5 {
        let s = 0.05 * k as f64;
        let (a, ap, app) = profile.eval(s);
        let resid = cmc_ode_residual((a, ap, app), hs.eval(s), target_h);
        println!("{s:>8.3} {a:>12.6} {ap:>12.6} {app:>12.6} {resid:>12.2e}");
    }

    let surf = ProductHypersurface::new(fam, profile, (-0.25, 0.25)).expect("usable range");
    let report = run_report(
        &surf,
        &VerifyOptions { samples: 80, seed: 9, ..Default::default() },
    )
    .expect("verification should run");
    let mc = report.check("mean_curvature").expect("trace check ran");
    println!("\nmeasured |trace of shape operator - H| over {} random points: {:.3e}", report.sample_count, mc.residual);
    println!("all identity checks pass: {}", report.all_pass());
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}

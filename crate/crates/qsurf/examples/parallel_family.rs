//! Follow the family of hypersurfaces parallel to a Clifford torus.
//!
//! Each principal curvature is transported along the family by a Moebius
//! formula, the pushforward of the offset map scales each curvature
//! direction, and where a scale hits zero the family collapses onto a
//! focal set. This example prints the transported curvatures and the
//! collapsing jacobian as the offset approaches the focal value.
//!
//! Run with: cargo run --example parallel_family

use qsurf::ambient::Signature;
use qsurf::basecat::{make_base, CatalogEntry};
use qsurf::parallel::ParallelFamily;

fn main() {
    let sig = Signature::new(1, 3).expect("valid signature");
    let entry = CatalogEntry::CliffordTorus { p: 1, q: 1, r: std::f64::consts::FRAC_1_SQRT_2 };
    let base = make_base(&entry, sig).expect("valid catalog entry");
    let fam = ParallelFamily::new(base);
    let u = fam.base().chart_center();

    println!("Parallel family over a Clifford torus in the 3-sphere");
    println!("=====================================================\n");

    let (lo, hi) = fam.regularity_interval(&u);
    println!("regular offsets: ({lo:+.6}, {hi:+.6})  (+-pi/4 = +-{:.6})\n", std::f64::consts::FRAC_PI_4);

    println!("{:>8}  {:>12}  {:>12}  {:>12}  {:>12}", "s", "lambda_0(s)", "lambda_1(s)", "scale_0", "scale_1");
    for k in -6..=6 {
        let s = 0.12 * k as f64;
        let l0 = fam.parallel_eigenvalue(0, s);
        let l1 = fam.parallel_eigenvalue(1, s);
        let s0 = fam.pushforward_scale(0, &u, s);
        let s1 = fam.pushforward_scale(1, &u, s);
        println!("{s:>8.3}  {l0:>12.5}  {l1:>12.5}  {s0:>12.5}  {s1:>12.5}");
    }

    println!("\nfocal collapse: smallest singular value of the offset map");
    println!("{:>14}  {:>14}", "pi/4 - s", "sigma_min");
    for k in 1..=6 {
        let gap = 10f64.powi(-k);
        let s = std::f64::consts::FRAC_PI_4 - gap;
        let sv = fam.jacobian_smallest_singular_value(&u, s, 1e-7);
        println!("{gap:>14.1e}  {sv:>14.6e}");
    }
    println!("\nThe singular value tracks the gap linearly: the offset map is a");
    println!("diffeomorphism strictly between focal offsets and degenerates at them.");
}

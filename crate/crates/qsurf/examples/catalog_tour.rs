//! Walk the whole catalog of base hypersurfaces: build one instance of
//! each kind, print its principal curvatures, and measure its shape
//! operator with finite differences to show the catalog numbers are the
//! real ones.
//!
//! Run with: cargo run --example catalog_tour

use qsurf::ambient::Signature;
use qsurf::basecat::{catalog_listing, make_base, CatalogEntry};
use qsurf::verify::measure_base_shape;

fn main() {
    println!("Catalog of base hypersurfaces");
    println!("=============================\n");
    for info in catalog_listing() {
        println!("{:<28} epsilon = {:+}  params: {}", info.name, info.epsilon, info.params);
        if !info.constraint.is_empty() {
            println!("{:<28} {}", "", info.constraint);
        }
    }

    println!("\nOne instance of each, measured vs cataloged");
    println!("-------------------------------------------");
    let demos: Vec<(CatalogEntry, i32, usize)> = vec![
        (CatalogEntry::GeodesicSphere { r: 0.9 }, 1, 2),
        (CatalogEntry::Equator {}, 1, 2),
        (CatalogEntry::CliffordTorus { p: 1, q: 2, r: 0.6 }, 1, 4),
        (CatalogEntry::Hyperplane {}, 0, 3),
        (CatalogEntry::RoundSphere { r: 1.5 }, 0, 2),
        (CatalogEntry::Horosphere {}, -1, 2),
        (CatalogEntry::Equidistant { d: 0.7 }, -1, 3),
        (CatalogEntry::HyperbolicGeodesicSphere { r: 1.1 }, -1, 2),
    ];
    for (entry, eps, n) in demos {
        let sig = Signature::new(eps, n).expect("valid signature");
        let base = make_base(&entry, sig).expect("valid catalog entry");
        let u = base.chart_center();

        // Predicted spectrum, with multiplicities.
        let spectrum: Vec<String> = base
            .shape_eigen()
            .iter()
            .map(|b| format!("{:+.4} (x{})", b.lambda, b.multiplicity))
            .collect();

        // Measured spectrum: finite differences of the unit normal.
        let (_, measured) =
            measure_base_shape(|u: &[f64]| base.eval(u), base.chart_dim(), &u, 1e-5)
                .expect("measurement at the chart center");
        let shown: Vec<String> = measured.iter().map(|l| format!("{l:+.4}")).collect();

        println!(
            "{:<28} catalog [{}]  measured [{}]  mean curvature {:+.4}",
            base.entry().kind_name(),
            spectrum.join(", "),
            shown.join(", "),
            base.mean_curvature(&u),
        );
    }
}

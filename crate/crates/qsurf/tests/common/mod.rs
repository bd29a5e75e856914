//! Shared fixtures for the integration suites.
//!
//! Each test binary links this module and uses its own subset of the helpers.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qsurf::ambient::{inner, AmbientVector, Signature};
use qsurf::basecat::{make_base, CatalogEntry};
use qsurf::construct::ProductHypersurface;
use qsurf::parallel::ParallelFamily;
use qsurf::profile::{ParallelMeanCurvature, Profile};
use qsurf::verify::SurfaceEval;

pub fn family(eps: i32, n: usize, entry: CatalogEntry) -> ParallelFamily {
    let sig = Signature::new(eps, n).unwrap();
    ParallelFamily::new(make_base(&entry, sig).unwrap())
}

pub fn hs_of(fam: &ParallelFamily) -> ParallelMeanCurvature {
    ParallelMeanCurvature::of_family(fam).unwrap()
}

pub fn linear_surface(
    eps: i32,
    n: usize,
    entry: CatalogEntry,
    slope: f64,
    range: (f64, f64),
) -> ProductHypersurface {
    let fam = family(eps, n, entry);
    ProductHypersurface::new(fam, Profile::linear(slope).unwrap(), range).unwrap()
}

/// CMC fixture; panics if the ODE had to truncate, so fixtures never
/// sample the ill-resolved cells next to a blow-up.
pub fn cmc_surface(
    eps: i32,
    n: usize,
    entry: CatalogEntry,
    h: f64,
    a0: f64,
    a1: f64,
    range: (f64, f64),
) -> ProductHypersurface {
    let fam = family(eps, n, entry);
    let hs = hs_of(&fam);
    let prof = Profile::solve_cmc(h, &hs, a0, a1, range, 1e-3).unwrap();
    assert_eq!(
        prof.truncation(),
        (None, None),
        "fixture profile truncated; shrink the range"
    );
    ProductHypersurface::new(fam, prof, range).unwrap()
}

pub fn minimal_surface(
    eps: i32,
    n: usize,
    entry: CatalogEntry,
    a0: f64,
    h0: f64,
    sign: i8,
    range: (f64, f64),
) -> ProductHypersurface {
    let fam = family(eps, n, entry);
    let hs = hs_of(&fam);
    let prof = Profile::minimal(&hs, a0, h0, sign, range).unwrap();
    ProductHypersurface::new(fam, prof, range).unwrap()
}

/// Negative control: keeps the quadric offsets of a product surface but
/// adds a height ripple that varies across the base chart, so the
/// vertical direction is no longer principal and the two normal shape
/// operators no longer commute.
///
/// Only `position` is closed-form; the unit normal is recovered
/// numerically (orthogonal complement of the finite-difference tangents
/// and, in the curved case, the quadric position), which keeps this
/// fixture honest: nothing about the broken surface is assumed.
pub struct Bumped {
    pub inner: ProductHypersurface,
    pub delta: f64,
    pub freq: f64,
}

impl Bumped {
    pub fn new(inner: ProductHypersurface, delta: f64, freq: f64) -> Self {
        Bumped { inner, delta, freq }
    }

    fn bump(&self, x: &[f64]) -> f64 {
        let s = x[x.len() - 1];
        self.delta * (self.freq * x[0]).sin() * (self.freq * s).cos()
    }

    /// Basis of the subspace the normal must be orthogonal to.
    fn frame(&self, x: &[f64], h: f64) -> Vec<AmbientVector> {
        let mut frame: Vec<AmbientVector> = (0..self.dim())
            .map(|j| {
                let mut up = x.to_vec();
                let mut dn = x.to_vec();
                up[j] += h;
                dn[j] -= h;
                self.position(&up).sub(&self.position(&dn)).scale(0.5 / h)
            })
            .collect();
        if let Some(xi) = self.quadric_normal(x) {
            frame.push(xi);
        }
        frame
    }
}

impl SurfaceEval for Bumped {
    fn signature(&self) -> Signature {
        self.inner.signature()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn sample_box(&self) -> Vec<(f64, f64)> {
        self.inner.sample_box()
    }

    fn position(&self, x: &[f64]) -> AmbientVector {
        let p = self.inner.position(x);
        p.with_t(p.t_part() + self.bump(x))
    }

    fn unit_normal(&self, x: &[f64]) -> AmbientVector {
        // Solve the Gram system to project the vertical direction onto
        // span{tangents, xi} with respect to the ambient (possibly
        // Lorentzian) inner product; the remainder spans the normal line.
        let frame = self.frame(x, 1e-5);
        let k = frame.len();
        let gram = DMatrix::from_fn(k, k, |i, j| inner(&frame[i], &frame[j]));
        let dt = AmbientVector::vertical(self.inner.signature());
        let rhs = DVector::from_fn(k, |i, _| inner(&frame[i], &dt));
        let coeff = gram
            .lu()
            .solve(&rhs)
            .expect("bumped-surface frame is degenerate");
        let mut v = dt;
        for (c, b) in coeff.iter().zip(frame.iter()) {
            v = v.axpy(-*c, b);
        }
        let len = inner(&v, &v).sqrt();
        v.scale(1.0 / len)
    }

    fn quadric_normal(&self, x: &[f64]) -> Option<AmbientVector> {
        self.inner.quadric_normal(x)
    }
}

//! Flat ambient coordinates for the three space forms crossed with a line.
//!
//! The curved space forms are carried as quadrics inside a flat space: the
//! unit sphere sits in Euclidean R^{n+1}, hyperbolic space is the upper
//! sheet of the two-sheeted hyperboloid in Lorentzian L^{n+1} (one minus
//! sign, on coordinate 0), and the flat case is just R^n with no quadric
//! around it. Product points additionally carry one vertical coordinate t,
//! stored last. So the full ambient dimension is n + 2 for curvature sign
//! +-1 and n + 1 for curvature sign 0.
//!
//! `cs_pair` bundles the cosine-like/sine-like solution pair of y'' = -eps y
//! that drives all parallel-family formulas: (cos s, sin s), (1, s) or
//! (cosh s, sinh s) depending on the curvature sign.

use crate::error::{Error, Result};

/// Curvature sign (+1, 0, -1) plus space-form dimension n >= 2.
///
/// Every vector carries its `Signature`; inner products and component
/// accessors are meaningless across different signatures and assert they
/// are not mixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    epsilon: i32,
    n: usize,
}

impl Signature {
    pub fn new(epsilon: i32, n: usize) -> Result<Self> {
        if !matches!(epsilon, -1..=1) {
            return Err(Error::InvalidParameter(format!(
                "epsilon: must be one of -1, 0, 1 (got {epsilon})"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "n: space-form dimension must be at least 2 (got {n})"
            )));
        }
        Ok(Signature { epsilon, n })
    }

    pub fn epsilon(&self) -> i32 {
        self.epsilon
    }

    /// Space-form dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of flat coordinates: n + 2 for curved space forms, n + 1 for
    /// the flat one (which needs no quadric embedding).
    pub fn ambient_dim(&self) -> usize {
        if self.epsilon == 0 {
            self.n + 1
        } else {
            self.n + 2
        }
    }

    /// Number of coordinates occupied by the space-form factor.
    pub fn q_dim(&self) -> usize {
        self.ambient_dim() - 1
    }

    /// Index of the vertical coordinate (always stored last).
    pub fn t_index(&self) -> usize {
        self.ambient_dim() - 1
    }

    /// True when the flat metric has a minus sign (hyperbolic case).
    pub fn is_lorentzian(&self) -> bool {
        self.epsilon == -1
    }

    /// Metric weight of coordinate `i`: -1 on coordinate 0 in the
    /// Lorentzian case, +1 everywhere else.
    pub fn weight(&self, i: usize) -> f64 {
        if self.epsilon == -1 && i == 0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Vector (or point) of the flat ambient space, tagged with its signature.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientVector {
    sig: Signature,
    coords: Vec<f64>,
}

impl AmbientVector {
    pub fn zeros(sig: Signature) -> Self {
        AmbientVector {
            sig,
            coords: vec![0.0; sig.ambient_dim()],
        }
    }

    pub fn from_coords(sig: Signature, coords: Vec<f64>) -> Self {
        assert_eq!(
            coords.len(),
            sig.ambient_dim(),
            "coordinate count must match the ambient dimension"
        );
        AmbientVector { sig, coords }
    }

    /// Standard basis vector e_i.
    pub fn basis(sig: Signature, i: usize) -> Self {
        let mut v = Self::zeros(sig);
        v.coords[i] = 1.0;
        v
    }

    /// Unit vector along the vertical factor.
    pub fn vertical(sig: Signature) -> Self {
        Self::basis(sig, sig.t_index())
    }

    /// Embed space-form coordinates with a given vertical component.
    pub fn from_q_and_t(sig: Signature, q: &[f64], t: f64) -> Self {
        assert_eq!(q.len(), sig.q_dim(), "space-form component has wrong length");
        let mut coords = Vec::with_capacity(sig.ambient_dim());
        coords.extend_from_slice(q);
        coords.push(t);
        AmbientVector { sig, coords }
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Coordinates of the space-form component (everything but t).
    pub fn q_part(&self) -> &[f64] {
        &self.coords[..self.sig.q_dim()]
    }

    /// Vertical component.
    pub fn t_part(&self) -> f64 {
        self.coords[self.sig.t_index()]
    }

    /// Copy with the vertical component replaced.
    pub fn with_t(&self, t: f64) -> Self {
        let mut v = self.clone();
        v.coords[v.sig.t_index()] = t;
        v
    }

    pub fn add(&self, other: &AmbientVector) -> AmbientVector {
        assert_eq!(self.sig, other.sig, "signature mismatch in add");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        AmbientVector { sig: self.sig, coords }
    }

    pub fn sub(&self, other: &AmbientVector) -> AmbientVector {
        assert_eq!(self.sig, other.sig, "signature mismatch in sub");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        AmbientVector { sig: self.sig, coords }
    }

    pub fn scale(&self, c: f64) -> AmbientVector {
        AmbientVector {
            sig: self.sig,
            coords: self.coords.iter().map(|a| c * a).collect(),
        }
    }

    /// self + c * other, the workhorse of frame formulas.
    pub fn axpy(&self, c: f64, other: &AmbientVector) -> AmbientVector {
        assert_eq!(self.sig, other.sig, "signature mismatch in axpy");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + c * b)
            .collect();
        AmbientVector { sig: self.sig, coords }
    }

    pub fn dot(&self, other: &AmbientVector) -> f64 {
        inner(self, other)
    }

    /// Euclidean norm of the raw coordinates, signature ignored. Useful for
    /// residual magnitudes where a positive definite yardstick is wanted.
    pub fn euclidean_norm(&self) -> f64 {
        self.coords.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// Flat inner product with the metric weights of the signature: Euclidean
/// for curvature signs 0 and +1, one minus sign on coordinate 0 for -1.
pub fn inner(u: &AmbientVector, v: &AmbientVector) -> f64 {
    assert_eq!(u.sig, v.sig, "signature mismatch in inner product");
    let mut acc = 0.0;
    for i in 0..u.coords.len() {
        acc += u.sig.weight(i) * u.coords[i] * v.coords[i];
    }
    acc
}

/// Inner product of the space-form components only (same weights, vertical
/// coordinate ignored).
pub fn q_inner(u: &AmbientVector, v: &AmbientVector) -> f64 {
    assert_eq!(u.sig, v.sig, "signature mismatch in inner product");
    let q = u.sig.q_dim();
    let mut acc = 0.0;
    for i in 0..q {
        acc += u.sig.weight(i) * u.coords[i] * v.coords[i];
    }
    acc
}

/// Cosine-like and sine-like pair for a curvature sign: the solutions of
/// y'' = -eps y with (y, y')(0) = (1, 0) and (0, 1).
///
/// C' = -eps S and S' = C, and C^2 + eps S^2 = 1. The hyperbolic branch is
/// computed from a single exponential so the quadratic identity survives in
/// floating point to a few 1e-13.
pub fn cs_pair(epsilon: i32, s: f64) -> (f64, f64) {
    match epsilon {
        1 => (s.cos(), s.sin()),
        0 => (1.0, s),
        -1 => {
            let es = s.exp();
            let inv = 1.0 / es;
            (0.5 * (es + inv), 0.5 * (es - inv))
        }
        _ => panic!("epsilon must be one of -1, 0, 1 (got {epsilon})"),
    }
}

/// Default tolerance for quadric membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Whether the space-form component of `p` lies on its quadric: unit sphere
/// for +1, upper hyperboloid sheet for -1, everywhere for 0.
pub fn on_space_form(p: &AmbientVector, tol: f64) -> bool {
    space_form_residual(p) <= tol && sheet_ok(p)
}

/// |<p_Q, p_Q> - eps| for curved signs, 0 for the flat one.
pub fn space_form_residual(p: &AmbientVector) -> f64 {
    match p.sig.epsilon() {
        0 => 0.0,
        e => (q_inner(p, p) - e as f64).abs(),
    }
}

fn sheet_ok(p: &AmbientVector) -> bool {
    // Hyperbolic points must sit on the upper sheet.
    p.sig.epsilon() != -1 || p.coords[0] > 0.0
}

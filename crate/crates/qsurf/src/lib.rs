//! Hypersurfaces of the product spaces S^n x R, R^n x R and H^n x R.
//!
//! The crate builds hypersurfaces of a space form cross a line out of three
//! ingredients: a base hypersurface of the space form taken from a small
//! catalog, the family of hypersurfaces parallel to it, and a profile
//! function along the vertical factor. Surfaces built this way have the
//! tangential part of the vertical direction as a principal direction, and
//! everything that follows from that (a shape operator that commutes with
//! the second normal, a vertical-angle function depending only on the
//! parallel parameter, an ODE characterizing constant mean curvature, and a
//! first-order reduction for minimal profiles) is checked numerically with
//! finite differences rather than assumed.
//!
//! Modules mirror the pipeline:
//!
//! * [`ambient`] -- flat ambient coordinates, signed inner products, and the
//!   trigonometric/hyperbolic pair attached to each curvature sign
//! * [`basecat`] -- the catalog of base hypersurfaces
//! * [`parallel`] -- parallel families, focal angles, regular ranges
//! * [`profile`] -- linear, constant-mean-curvature and minimal profiles
//! * [`construct`] -- assembly of the product hypersurface and its frame
//! * [`verify`] -- finite-difference measurement and identity checks
//! * [`cli`] -- config-driven commands (`catalog`, `build`, `verify`,
//!   `profile`) behind the thin `qsurf` binary
//!
//! Runnable walkthroughs live in `examples/`; start with
//! `cargo run --example catalog_tour`.

// Guards written as `!(a < b)` are deliberate: unlike `a >= b`, the negated
// form also rejects NaN, which must never pass a domain or tolerance check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ambient;
pub mod basecat;
pub mod cli;
pub mod construct;
pub mod error;
pub mod parallel;
pub mod profile;
pub mod verify;

pub use error::{Error, Result};

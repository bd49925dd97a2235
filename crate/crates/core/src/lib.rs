//! Value regions of normalized bounded univalent functions.
//!
//! The set of values `f(z0)` taken by univalent self-maps `f` of the unit
//! disk with `f(0) = 0`, `f'(0) >= 0` is bounded by two arcs of hyperbolic
//! Archimedean spirals. This crate computes those regions exactly, integrates
//! the radial and chordal Loewner equations that generate them, and checks the
//! closed forms against numerical integration and random-driver ensembles.
//!
//! Module map:
//!
//! * [`hyp_geom`]: hyperbolic distance and polar coordinates in the disk.
//! * [`spirals`]: hyperbolic and euclidean Archimedean spirals, boundary arcs.
//! * [`value_region`]: membership and shape predicates for the disk region.
//! * [`radial`]: radial Loewner equation, optimal controls and trajectories.
//! * [`chordal`]: chordal Loewner equation in the upper half-plane.
//! * [`ensemble`]: seeded random-driver Monte-Carlo runs (rayon when enabled).
//! * [`verify`]: the report behind `loewner verify`.
//! * [`io`]: CSV and SVG emitters.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chordal;
pub mod driver;
pub mod ensemble;
pub mod error;
pub mod hyp_geom;
pub mod io;
pub mod ode;
pub mod quadrature;
pub mod radial;
pub mod spirals;
pub mod value_region;
pub mod verify;

pub use error::{Error, Result};
pub use hyp_geom::{DiskPoint, HypPolar};
pub use num_complex::Complex64;
pub use spirals::Sign;

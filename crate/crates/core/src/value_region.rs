//! The disk value region `V(z0)`: all values `f(z0)` of univalent
//! `f: D -> D` with `f(0) = 0`, `f'(0) >= 0`.
//!
//! `V(z0) ∪ {0}` is the set of `z = |z| e^{i phi}` with
//! `d(0, z) - d(0, z0) <= -|phi - arg z0|` for some real `phi`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyp_geom::{lift_angle, rho_of, DiskPoint};
use crate::spirals::{anchor_polar, gamma_arc, hyp_arc_length, Sign, SpiralArc};

/// Default slack for boundary membership queries.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-9;

/// `tanh(pi/4)`: largest `|z0|` with a convex region.
pub fn convexity_threshold() -> f64 {
    FRAC_PI_4.tanh()
}

/// `tanh(pi/2)`: `|z0|` beyond which the origin is an isolated boundary point.
pub fn isolation_threshold() -> f64 {
    FRAC_PI_2.tanh()
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Boundary {
    rho0: f64,
    phi0: f64,
    plus: SpiralArc,
    minus: SpiralArc,
}

/// Exact description of `V(z0)` with a membership tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionSpec {
    z0: DiskPoint,
    boundary: Option<Boundary>,
    tol: f64,
}

/// One vertex of the boundary polyline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryVertex {
    /// `0..=1` along `gamma^+`, `1..=2` back along `gamma^-`.
    pub param: f64,
    pub point: DiskPoint,
    pub rho: f64,
    pub phi: f64,
}

impl RegionSpec {
    /// Region for `z0`; `z0 = 0` gives the degenerate region `{0}`.
    pub fn new(z0: DiskPoint) -> Self {
        let boundary = anchor_polar(z0).ok().map(|(rho0, phi0)| Boundary {
            rho0,
            phi0,
            plus: gamma_arc(z0, Sign::Plus).expect("non-zero anchor"),
            minus: gamma_arc(z0, Sign::Minus).expect("non-zero anchor"),
        });
        Self {
            z0,
            boundary,
            tol: DEFAULT_MEMBERSHIP_TOL,
        }
    }

    /// Replace the membership tolerance; `0` is exact mode.
    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "membership tolerance {tol} must be finite and >= 0"
            )));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn z0(&self) -> DiskPoint {
        self.z0
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn is_degenerate(&self) -> bool {
        self.boundary.is_none()
    }

    /// `d(0, z0)`, zero when degenerate.
    pub fn rho0(&self) -> f64 {
        self.boundary.map_or(0.0, |b| b.rho0)
    }

    pub fn phi0(&self) -> f64 {
        self.boundary.map_or(0.0, |b| b.phi0)
    }

    pub fn arc(&self, sign: Sign) -> Option<&SpiralArc> {
        self.boundary.as_ref().map(|b| match sign {
            Sign::Plus => &b.plus,
            Sign::Minus => &b.minus,
        })
    }

    /// `d(0, z) - rho0 + |phi - phi0|` with `phi` the lift of `arg z`
    /// nearest `phi0`. Non-positive exactly on the closed region; `None` for
    /// `z = 0` or a degenerate region.
    pub fn residual(&self, z: DiskPoint) -> Option<f64> {
        let b = self.boundary?;
        if z.is_origin() {
            return None;
        }
        // other lifts only increase |phi - phi0|
        let phi = lift_angle(z.arg(), b.phi0);
        Some(rho_of(z) - b.rho0 + (phi - b.phi0).abs())
    }

    /// Membership in `V(z0) ∪ {0}`.
    pub fn contains_closure(&self, z: DiskPoint) -> bool {
        if z.is_origin() {
            return true;
        }
        match self.residual(z) {
            Some(res) => res <= self.tol,
            None => false,
        }
    }

    /// Membership in `V(z0)` itself. The origin is excluded: a univalent `f`
    /// with `f(0) = 0` cannot take the value `0` at `z0 != 0`.
    pub fn contains_value(&self, z: DiskPoint) -> bool {
        !z.is_origin() && self.contains_closure(z)
    }

    pub fn is_convex(&self) -> bool {
        self.z0.modulus() <= convexity_threshold()
    }

    pub fn origin_isolated(&self) -> bool {
        self.z0.modulus() > isolation_threshold()
    }

    /// Hyperbolic lengths of `(gamma^+, gamma^-)` by quadrature.
    pub fn arc_lengths(&self) -> Option<(f64, f64)> {
        let b = self.boundary.as_ref()?;
        Some((hyp_arc_length(&b.plus), hyp_arc_length(&b.minus)))
    }

    /// Closed Jordan polyline: `n` samples of `gamma^+` from `z0` to `z1`,
    /// then `n` samples of `gamma^-` from `z1` back to `z0`. The degenerate
    /// region yields the single vertex `0`.
    pub fn boundary_vertices(&self, n: usize) -> Result<Vec<BoundaryVertex>> {
        let Some(b) = self.boundary.as_ref() else {
            return Ok(vec![BoundaryVertex {
                param: 0.0,
                point: DiskPoint::ORIGIN,
                rho: 0.0,
                phi: 0.0,
            }]);
        };
        let plus = b.plus.sample(n)?;
        let mut minus = b.minus.sample(n)?;
        minus.reverse();
        let last = (n - 1) as f64;
        let vertices = plus
            .iter()
            .enumerate()
            .map(|(k, s)| (k as f64 / last, s))
            .chain(
                minus
                    .iter()
                    .enumerate()
                    .map(|(k, s)| (1.0 + k as f64 / last, s)),
            )
            .map(|(param, s)| BoundaryVertex {
                param,
                point: s.point,
                rho: s.rho,
                phi: s.phi,
            })
            .collect();
        Ok(vertices)
    }

    pub fn boundary_polyline(&self, n: usize) -> Result<Vec<Complex64>> {
        Ok(self
            .boundary_vertices(n)?
            .into_iter()
            .map(|v| v.point.to_complex())
            .collect())
    }
}

/// Sampled convexity test: every turn of the closed polyline has the same
/// orientation. Repeated vertices are skipped.
pub fn polyline_is_convex(points: &[Complex64]) -> bool {
    let mut pts: Vec<Complex64> = Vec::with_capacity(points.len());
    for &p in points {
        if pts.last().is_none_or(|&q| (p - q).norm() > 1e-15) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() <= 1e-15 {
        pts.pop();
    }
    let n = pts.len();
    if n < 3 {
        return true;
    }
    let (mut pos, mut neg) = (false, false);
    for k in 0..n {
        let e1 = pts[(k + 1) % n] - pts[k];
        let e2 = pts[(k + 2) % n] - pts[(k + 1) % n];
        let cross = e1.re * e2.im - e1.im * e2.re;
        let scale = e1.norm() * e2.norm();
        if cross > 1e-12 * scale {
            pos = true;
        } else if cross < -1e-12 * scale {
            neg = true;
        }
    }
    !(pos && neg)
}

/// Grunsky's disk of values `log(f(z0) / z0)` over the normalized class
/// `S`: `(center, radius) = (log(1 / (1 - |z0|^2)), log((1 + |z0|) / (1 - |z0|)))`.
pub fn grunsky_disk(z0: DiskPoint) -> Result<(Complex64, f64)> {
    if z0.is_origin() {
        return Err(Error::DegeneratePoint);
    }
    let center = -z0.one_minus_norm_sqr().ln();
    Ok((Complex64::new(center, 0.0), rho_of(z0)))
}

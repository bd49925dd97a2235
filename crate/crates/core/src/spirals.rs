//! Hyperbolic and euclidean Archimedean spirals through the origin, and the
//! boundary arcs of the disk value region.
//!
//! The hyperbolic spiral through `0` and `z0` with sign `s` is the curve
//! `rho = s (phi - phi0) + rho0` in hyperbolic polar coordinates, where
//! `rho0 = d(0, z0)` and `phi0 = arg z0`. Its arc `gamma` runs from `z0`
//! toward the origin and stops at the origin, or after half a turn if
//! `rho0 > pi`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyp_geom::{from_polar, rho_of, DiskPoint, HypPolar};
use crate::quadrature::adaptive_simpson;

/// Absolute tolerance of the arc-length quadrature.
pub const ARC_LENGTH_TOL: f64 = 1e-10;

/// Default number of samples per arc for export.
pub const DEFAULT_ARC_SAMPLES: usize = 512;

/// Orientation of a spiral: `+` has `rho` increasing with the angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Sign::Plus),
            "minus" | "-" => Ok(Sign::Minus),
            _ => Err(Error::InvalidArgument(format!("unknown sign '{s}'"))),
        }
    }
}

/// `(rho0, phi0)` of a non-zero anchor, `phi0` the principal argument.
pub(crate) fn anchor_polar(z0: DiskPoint) -> Result<(f64, f64)> {
    if z0.is_origin() {
        return Err(Error::DegeneratePoint);
    }
    Ok((rho_of(z0), z0.arg()))
}

/// Radius on the spiral at angle `phi`, or `None` outside its half-line.
fn spiral_radius(rho0: f64, phi0: f64, sign: Sign, phi: f64) -> Option<f64> {
    let rho = sign.factor() * (phi - phi0) + rho0;
    let slack = 1e-12 * (1.0 + rho0 + phi0.abs());
    if rho >= 0.0 {
        Some(rho)
    } else if rho >= -slack {
        Some(0.0)
    } else {
        None
    }
}

fn half_line(anchor_radius: f64, anchor_angle: f64, sign: Sign) -> (f64, f64) {
    match sign {
        Sign::Plus => (anchor_angle - anchor_radius, f64::INFINITY),
        Sign::Minus => (f64::NEG_INFINITY, anchor_angle + anchor_radius),
    }
}

/// Point of the hyperbolic spiral `S_h^sign(z0)` at lifted angle `phi`.
pub fn hyp_spiral_point(z0: DiskPoint, sign: Sign, phi: f64) -> Result<DiskPoint> {
    let (rho0, phi0) = anchor_polar(z0)?;
    let rho = spiral_radius(rho0, phi0, sign, phi).ok_or_else(|| {
        let (lo, hi) = half_line(rho0, phi0, sign);
        Error::SpiralDomain { phi, lo, hi }
    })?;
    Ok(from_polar(HypPolar { rho, phi }))
}

/// Point of the euclidean Archimedean spiral `S_e^sign(w0)` at angle `phi`.
pub fn euclid_spiral_point(w0: Complex64, sign: Sign, phi: f64) -> Result<Complex64> {
    if w0 == Complex64::new(0.0, 0.0) {
        return Err(Error::DegeneratePoint);
    }
    let (radius, angle) = w0.to_polar();
    let r = spiral_radius(radius, angle, sign, phi).ok_or_else(|| {
        let (lo, hi) = half_line(radius, angle, sign);
        Error::SpiralDomain { phi, lo, hi }
    })?;
    Ok(Complex64::from_polar(r, phi))
}

/// One sample along an arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcSample {
    pub phi: f64,
    pub rho: f64,
    pub point: DiskPoint,
}

/// The arc `gamma^sign(z0)` of `S_h^sign(z0)` between `z0` and its terminal
/// point `z1`. All angles are lifted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpiralArc {
    anchor: DiskPoint,
    sign: Sign,
    rho0: f64,
    phi0: f64,
    terminal: DiskPoint,
    terminal_phi: f64,
}

/// Build `gamma^sign(z0)`.
pub fn gamma_arc(z0: DiskPoint, sign: Sign) -> Result<SpiralArc> {
    let (rho0, phi0) = anchor_polar(z0)?;
    let span = rho0.min(PI);
    let terminal_phi = phi0 - sign.factor() * span;
    let terminal = if rho0 <= PI {
        DiskPoint::ORIGIN
    } else {
        hyp_spiral_point(z0, sign, terminal_phi)?
    };
    Ok(SpiralArc {
        anchor: z0,
        sign,
        rho0,
        phi0,
        terminal,
        terminal_phi,
    })
}

impl SpiralArc {
    pub fn anchor(&self) -> DiskPoint {
        self.anchor
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    /// `z1`: the origin when `rho0 <= pi`, otherwise the point half a turn
    /// from `z0` at hyperbolic distance `rho0 - pi`.
    pub fn terminal(&self) -> DiskPoint {
        self.terminal
    }

    pub fn terminal_phi(&self) -> f64 {
        self.terminal_phi
    }

    pub fn ends_at_origin(&self) -> bool {
        self.rho0 <= PI
    }

    /// Closed interval of lifted angles covered by the arc, `lo <= hi`.
    pub fn phi_range(&self) -> (f64, f64) {
        match self.sign {
            Sign::Plus => (self.terminal_phi, self.phi0),
            Sign::Minus => (self.phi0, self.terminal_phi),
        }
    }

    /// Hyperbolic distance from the origin at lifted angle `phi`.
    #[inline]
    pub fn rho_at(&self, phi: f64) -> f64 {
        (self.sign.factor() * (phi - self.phi0) + self.rho0).max(0.0)
    }

    pub fn point_at(&self, phi: f64) -> DiskPoint {
        from_polar(HypPolar {
            rho: self.rho_at(phi),
            phi,
        })
    }

    /// `n >= 2` samples uniform in the angle, ordered from `z0` to `z1`.
    /// The end samples are exactly `z0` and `z1`.
    pub fn sample(&self, n: usize) -> Result<Vec<ArcSample>> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 samples per arc, got {n}"
            )));
        }
        let last = (n - 1) as f64;
        let samples = (0..n)
            .map(|k| {
                let s = k as f64 / last;
                let phi = self.phi0 + s * (self.terminal_phi - self.phi0);
                let point = match k {
                    0 => self.anchor,
                    _ if k == n - 1 => self.terminal,
                    _ => self.point_at(phi),
                };
                let rho = match k {
                    0 => self.rho0,
                    _ => self.rho_at(phi),
                };
                ArcSample { phi, rho, point }
            })
            .collect();
        Ok(samples)
    }

    /// Hyperbolic length element `2 |gamma'(phi)| / (1 - |gamma(phi)|^2)` for
    /// the angle parametrization `gamma(phi) = r(phi) e^{i phi}`.
    pub fn length_density(&self, phi: f64) -> f64 {
        let half = 0.5 * self.rho_at(phi);
        let r = half.tanh();
        let one_minus_r_sqr = 1.0 / (half.cosh() * half.cosh());
        // dr/dphi = s (1 - r^2) / 2 since drho/dphi = s
        let dr = 0.5 * one_minus_r_sqr;
        2.0 * dr.hypot(r) / one_minus_r_sqr
    }
}

/// Hyperbolic length of an arc by adaptive quadrature of its length element.
pub fn hyp_arc_length(arc: &SpiralArc) -> f64 {
    let (lo, hi) = arc.phi_range();
    adaptive_simpson(|phi| arc.length_density(phi), lo, hi, ARC_LENGTH_TOL)
}

/// Closed-form hyperbolic length of `gamma^pm(z0)` for `rho0 = d(0, z0)`.
pub fn arc_length_closed_form(rho0: f64) -> f64 {
    if rho0 <= PI {
        rho0.sinh()
    } else {
        rho0.sinh() - (rho0 - PI).sinh()
    }
}

//! The chordal Loewner equation `w' = -2 / (w - U(t))` in the upper
//! half-plane, and the straight-line driver that steers `z0` to any point
//! with larger imaginary part.

use std::ops::ControlFlow;

use num_complex::Complex64;

use crate::driver::{Driver, PiecewiseDriver};
use crate::error::{Error, Result};
use crate::ode::{integrate_visit, State};

/// Smallest admissible `|w - U|^2` before the step is declared singular.
pub const SINGULAR_DIST_SQR: f64 = 1e-20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint {
    pub x: f64,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && y > 0.0 {
            Ok(Self { x, y })
        } else {
            Err(Error::OutsideHalfPlane { x, y })
        }
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Real-valued chordal driving function.
#[derive(Clone, Debug, PartialEq)]
pub enum RealDriver {
    /// `U(t) = 2c sqrt(4t / (1 + c^2) + y0^2) + x0 - c y0`: keeps the
    /// trajectory on the line `x - x0 = c (y - y0)`.
    Line {
        c: f64,
        x0: f64,
        y0: f64,
    },
    Piecewise(PiecewiseDriver),
}

impl Driver for RealDriver {
    fn value(&self, t: f64) -> f64 {
        match self {
            RealDriver::Line { c, x0, y0 } => 2.0 * c * line_height(*c, *y0, t) + x0 - c * y0,
            RealDriver::Piecewise(d) => d.value(t),
        }
    }

    fn left_limit(&self, t: f64) -> f64 {
        match self {
            RealDriver::Piecewise(d) => d.left_limit(t),
            _ => self.value(t),
        }
    }

    fn breakpoints(&self, horizon: f64) -> Vec<f64> {
        match self {
            RealDriver::Piecewise(d) => d.breakpoints(horizon),
            _ => Vec::new(),
        }
    }
}

#[inline]
fn line_height(c: f64, y0: f64, t: f64) -> f64 {
    (4.0 * t / (1.0 + c * c) + y0 * y0).sqrt()
}

/// Closed-form solution under [`RealDriver::Line`].
pub fn line_solution(c: f64, z0: HalfPlanePoint, t: f64) -> HalfPlanePoint {
    let y = line_height(c, z0.y, t);
    HalfPlanePoint {
        x: c * y + z0.x - c * z0.y,
        y,
    }
}

/// Driver moving `z0` along the straight segment to `target`, and the time
/// at which the target is hit.
pub fn line_driver(z0: HalfPlanePoint, target: HalfPlanePoint) -> Result<(RealDriver, f64)> {
    if !(target.y > z0.y) {
        return Err(Error::Unreachable {
            y0: z0.y,
            target_y: target.y,
        });
    }
    let c = (target.x - z0.x) / (target.y - z0.y);
    let t_hit = (1.0 + c * c) * (target.y * target.y - z0.y * z0.y) / 4.0;
    Ok((
        RealDriver::Line {
            c,
            x0: z0.x,
            y0: z0.y,
        },
        t_hit,
    ))
}

/// Reachable set from `z0`: `z0` itself and everything strictly higher.
pub fn halfplane_region_contains(z0: HalfPlanePoint, z: HalfPlanePoint) -> bool {
    z == z0 || z.y > z0.y
}

/// `(x', y') = (2(U - x), 2y) / ((U - x)^2 + y^2)`.
pub fn rhs_chordal(x: f64, y: f64, u: f64) -> Result<(f64, f64)> {
    let d = u - x;
    let dist_sqr = d * d + y * y;
    if !(dist_sqr >= SINGULAR_DIST_SQR) {
        return Err(Error::Singularity { t: f64::NAN });
    }
    Ok((2.0 * d / dist_sqr, 2.0 * y / dist_sqr))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChordalSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    /// Driver value `U(t)`.
    pub u: f64,
}

impl ChordalSample {
    pub fn point(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChordalTrace {
    pub z0: HalfPlanePoint,
    pub samples: Vec<ChordalSample>,
}

impl ChordalTrace {
    pub fn last(&self) -> &ChordalSample {
        self.samples.last().expect("trace has an initial sample")
    }
}

/// RK4 integration visiting every sample.
pub fn visit_chordal<D, V>(
    z0: HalfPlanePoint,
    driver: &D,
    horizon: f64,
    step: f64,
    mut visit: V,
) -> Result<()>
where
    D: Driver + ?Sized,
    V: FnMut(&ChordalSample),
{
    let field = |y: &State, u: f64| rhs_chordal(y[0], y[1], u).map(|(dx, dy)| [dx, dy]);
    let mut last_t = 0.0;
    integrate_visit(field, driver, [z0.x, z0.y], horizon, step, |s| {
        last_t = s.t;
        visit(&ChordalSample {
            t: s.t,
            x: s.y[0],
            y: s.y[1],
            u: s.u,
        });
        ControlFlow::Continue(())
    })
    .map_err(|e| match e {
        Error::Singularity { .. } => Error::Singularity { t: last_t },
        other => other,
    })?;
    Ok(())
}

pub fn integrate_chordal<D: Driver + ?Sized>(
    z0: HalfPlanePoint,
    driver: &D,
    horizon: f64,
    step: f64,
) -> Result<ChordalTrace> {
    let mut samples = Vec::with_capacity((horizon / step).ceil().min(1e7) as usize + 2);
    visit_chordal(z0, driver, horizon, step, |s| samples.push(*s))?;
    Ok(ChordalTrace { z0, samples })
}

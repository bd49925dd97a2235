//! Hyperbolic geometry of the unit disk with the curvature -1 metric
//! `2|dz| / (1 - |z|^2)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest pseudo-hyperbolic distance fed to `artanh`.
pub const PSEUDO_DIST_CLAMP: f64 = 1.0 - 1e-15;

/// A point strictly inside the unit disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskPoint {
    re: f64,
    im: f64,
}

impl DiskPoint {
    pub const ORIGIN: DiskPoint = DiskPoint { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() && re * re + im * im < 1.0 {
            Ok(Self { re, im })
        } else {
            Err(Error::OutsideDisk { re, im })
        }
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.re
    }

    #[inline]
    pub fn im(self) -> f64 {
        self.im
    }

    #[inline]
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    #[inline]
    pub fn modulus(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Principal argument in `(-pi, pi]`. Zero at the origin.
    #[inline]
    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    #[inline]
    pub fn is_origin(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    /// `1 - |z|^2`, evaluated with fused multiply-adds so that points close
    /// to the unit circle keep their relative accuracy.
    #[inline]
    pub fn one_minus_norm_sqr(self) -> f64 {
        (-self.re).mul_add(self.re, (-self.im).mul_add(self.im, 1.0))
    }

    /// Rotation `e^{i alpha} z` about the origin.
    pub fn rotate(self, alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        let z = Self {
            re: c * self.re - s * self.im,
            im: s * self.re + c * self.im,
        };
        // rotation preserves the modulus; guard the last ulp
        if z.re * z.re + z.im * z.im < 1.0 {
            z
        } else {
            self.scale_into_disk(alpha)
        }
    }

    fn scale_into_disk(self, alpha: f64) -> Self {
        let m = self.modulus().min(1.0 - f64::EPSILON);
        let (s, c) = (self.arg() + alpha).sin_cos();
        Self {
            re: m * c,
            im: m * s,
        }
    }

    /// Radial scaling `r z` for `0 <= r <= 1`.
    pub fn scale(self, r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::InvalidArgument(format!(
                "scale factor {r} not in [0, 1]"
            )));
        }
        Ok(Self {
            re: r * self.re,
            im: r * self.im,
        })
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        Self::from_complex(z)
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.to_complex()
    }
}

/// Hyperbolic polar coordinates: distance from the origin and a lifted
/// (unbounded) angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HypPolar {
    pub rho: f64,
    pub phi: f64,
}

impl HypPolar {
    pub fn new(rho: f64, phi: f64) -> Result<Self> {
        if rho.is_finite() && rho >= 0.0 && phi.is_finite() {
            Ok(Self { rho, phi })
        } else {
            Err(Error::InvalidArgument(format!(
                "hyperbolic polar coordinates need finite rho >= 0 and finite phi, got ({rho}, {phi})"
            )))
        }
    }
}

/// Hyperbolic distance `log((1 + m) / (1 - m))`, `m` the pseudo-hyperbolic
/// distance `|(a - b) / (1 - conj(b) a)|`.
///
/// `1 - m^2` is taken from `(1 - |a|^2)(1 - |b|^2) / |1 - conj(b) a|^2`,
/// which avoids cancellation near the boundary.
pub fn hyp_dist(a: DiskPoint, b: DiskPoint) -> f64 {
    if a == b {
        return 0.0;
    }
    let (za, zb) = (a.to_complex(), b.to_complex());
    let denom = Complex64::new(1.0, 0.0) - zb.conj() * za;
    let denom_sqr = denom.norm_sqr();
    let m = ((za - zb).norm_sqr() / denom_sqr).sqrt();
    if m > PSEUDO_DIST_CLAMP {
        return 2.0 * PSEUDO_DIST_CLAMP.atanh();
    }
    let one_minus_m_sqr = a.one_minus_norm_sqr() * b.one_minus_norm_sqr() / denom_sqr;
    // (1 + m)^2 / (1 - m^2) = (1 + m) / (1 - m)
    2.0 * m.ln_1p() - one_minus_m_sqr.ln()
}

/// Hyperbolic distance from the origin, `2 artanh |z|`.
pub fn rho_of(z: DiskPoint) -> f64 {
    hyp_dist(z, DiskPoint::ORIGIN)
}

/// Shift `angle` by a multiple of `2 pi` into `(hint - pi, hint + pi]`.
pub fn lift_angle(angle: f64, hint: f64) -> f64 {
    let k = ((angle - hint - PI) / TAU).ceil();
    angle - k * TAU
}

/// Hyperbolic polar coordinates of `z` with the angle lifted near
/// `branch_hint`.
pub fn to_polar(z: DiskPoint, branch_hint: f64) -> Result<HypPolar> {
    if z.is_origin() {
        return Err(Error::DegeneratePoint);
    }
    Ok(HypPolar {
        rho: rho_of(z),
        phi: lift_angle(z.arg(), branch_hint),
    })
}

/// `tanh(rho / 2) e^{i phi}`.
pub fn from_polar(p: HypPolar) -> DiskPoint {
    let r = (0.5 * p.rho).tanh().min(1.0 - f64::EPSILON / 2.0);
    let (s, c) = p.phi.sin_cos();
    DiskPoint {
        re: r * c,
        im: r * s,
    }
}

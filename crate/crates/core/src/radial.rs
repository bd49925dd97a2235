//! The radial Loewner equation `w' = -w (kappa + w) / (kappa - w)`,
//! `w(0) = z0`, driven by `kappa(t) = e^{i theta(t)}` on the unit circle.
//!
//! Trajectories are integrated in hyperbolic polar coordinates
//! `w = tanh(rho / 2) e^{i phi}`:
//!
//! ```text
//! rho' = -2 |w| / |kappa - w|^2
//! phi' = -2 Im(conj(kappa) w) / |kappa - w|^2
//! ```
//!
//! Since `|w| >= ±Im(conj(kappa) w)`, every trajectory obeys
//! `rho(t) - rho0 <= -|phi(t) - phi0|`. Equality along the whole trajectory
//! forces `conj(kappa) w = ±i |w|`, which yields the two optimal controls
//! `kappa^+ = -i e^{i phi^+}` and `kappa^- = +i e^{i phi^-}` with
//! `rho(t) = asinh(e^{-t} sinh rho0)` and `phi^±(t) = phi0 ± (rho(t) - rho0)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::ControlFlow;

use num_complex::Complex64;

use crate::driver::{Driver, PiecewiseDriver};
use crate::error::{Error, Result};
use crate::hyp_geom::{from_polar, DiskPoint, HypPolar};
use crate::ode::{integrate_visit, State};
use crate::spirals::{anchor_polar, Sign};

/// Default RK4 step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Integration stops once the trajectory is this close to the origin.
pub const RHO_FLOOR: f64 = 1e-14;

/// Right-hand side in `(rho, phi)` as a function of `(rho, phi, theta)`.
pub type PolarField = fn(f64, f64, f64) -> (f64, f64);

/// Control on the unit circle, represented by its angle.
#[derive(Clone, Debug, PartialEq)]
pub enum CircleDriver {
    /// `kappa^±` for an anchor with polar coordinates `(rho0, phi0)`.
    Optimal {
        sign: Sign,
        rho0: f64,
        phi0: f64,
    },
    Piecewise(PiecewiseDriver),
}

impl Driver for CircleDriver {
    fn value(&self, t: f64) -> f64 {
        match self {
            // -i = e^{-i pi/2}, +i = e^{i pi/2}
            CircleDriver::Optimal { sign, rho0, phi0 } => {
                optimal_phi(*rho0, *phi0, *sign, t) - sign.factor() * FRAC_PI_2
            }
            CircleDriver::Piecewise(d) => d.value(t),
        }
    }

    fn left_limit(&self, t: f64) -> f64 {
        match self {
            CircleDriver::Piecewise(d) => d.left_limit(t),
            _ => self.value(t),
        }
    }

    fn breakpoints(&self, horizon: f64) -> Vec<f64> {
        match self {
            CircleDriver::Piecewise(d) => d.breakpoints(horizon),
            _ => Vec::new(),
        }
    }
}

/// `d(0, w(t)) = asinh(e^{-t} sinh rho0)` on both optimal trajectories.
#[inline]
pub fn optimal_rho(rho0: f64, t: f64) -> f64 {
    ((-t).exp() * rho0.sinh()).asinh()
}

/// Lifted angle `phi^±(t) = phi0 ± (rho(t) - rho0)`.
#[inline]
pub fn optimal_phi(rho0: f64, phi0: f64, sign: Sign, t: f64) -> f64 {
    phi0 + sign.factor() * (optimal_rho(rho0, t) - rho0)
}

/// Optimal control `kappa^±` for `z0`.
pub fn optimal_driver(z0: DiskPoint, sign: Sign) -> Result<CircleDriver> {
    let (rho0, phi0) = anchor_polar(z0)?;
    Ok(CircleDriver::Optimal { sign, rho0, phi0 })
}

/// Closed-form optimal trajectory in hyperbolic polar coordinates.
pub fn optimal_polar(z0: DiskPoint, sign: Sign, t: f64) -> Result<HypPolar> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time must be >= 0, got {t}"
        )));
    }
    let (rho0, phi0) = anchor_polar(z0)?;
    if t == 0.0 {
        return Ok(HypPolar {
            rho: rho0,
            phi: phi0,
        });
    }
    Ok(HypPolar {
        rho: optimal_rho(rho0, t),
        phi: optimal_phi(rho0, phi0, sign, t),
    })
}

/// `w^±_{z0}(t)`.
pub fn optimal_trajectory(z0: DiskPoint, sign: Sign, t: f64) -> Result<DiskPoint> {
    if t == 0.0 {
        anchor_polar(z0)?;
        return Ok(z0);
    }
    optimal_polar(z0, sign, t).map(from_polar)
}

/// Time after which the optimal trajectories stop being optimal:
/// `+inf` for `rho0 <= pi`, else `-log(sinh(rho0 - pi) / sinh(rho0))`.
pub fn t_max(z0: DiskPoint) -> Result<f64> {
    let (rho0, _) = anchor_polar(z0)?;
    if rho0 <= PI {
        return Ok(f64::INFINITY);
    }
    Ok(-((rho0 - PI).sinh() / rho0.sinh()).ln())
}

#[inline]
fn polar_field(rho: f64, phi: f64, theta: f64) -> (f64, f64) {
    let r = (0.5 * rho).tanh();
    let (s, c) = (phi - theta).sin_cos();
    // |kappa - w|^2 = 1 - 2 r cos(phi - theta) + r^2, Im(conj(kappa) w) = r sin(phi - theta)
    let dist_sqr = 1.0 - 2.0 * r * c + r * r;
    let scale = -2.0 * r / dist_sqr;
    (scale, scale * s)
}

/// `(d rho/dt, d phi/dt)` at `w = tanh(rho/2) e^{i phi}` for
/// `kappa = e^{i theta}`.
pub fn rhs_polar(rho: f64, phi: f64, theta: f64) -> Result<(f64, f64)> {
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "rhs_polar needs rho > 0, got {rho}"
        )));
    }
    Ok(polar_field(rho, phi, theta))
}

/// Complex form `-w (kappa + w) / (kappa - w)`.
pub fn rhs_complex(w: Complex64, theta: f64) -> Complex64 {
    let kappa = Complex64::from_polar(1.0, theta);
    -w * (kappa + w) / (kappa - w)
}

/// `|w| - s Im(conj(kappa) w)`; non-negative for both signs, zero exactly
/// in the optimal configuration of that sign.
pub fn q1_slack(w: DiskPoint, theta: f64, sign: Sign) -> f64 {
    let kappa = Complex64::from_polar(1.0, theta);
    w.modulus() - sign.factor() * (kappa.conj() * w.to_complex()).im
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub rho: f64,
    /// Lifted angle, continuous along the trace.
    pub phi: f64,
    /// Driver angle `theta(t)`.
    pub theta: f64,
}

impl TraceSample {
    pub fn point(&self) -> DiskPoint {
        from_polar(HypPolar {
            rho: self.rho.max(0.0),
            phi: self.phi,
        })
    }
}

/// A trajectory sampled at every integrator step.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarTrace {
    pub z0: DiskPoint,
    pub samples: Vec<TraceSample>,
    /// Set when integration stopped before the horizon (origin reached or a
    /// non-finite state).
    pub truncated: bool,
}

impl PolarTrace {
    pub fn rho0(&self) -> f64 {
        self.samples[0].rho
    }

    pub fn phi0(&self) -> f64 {
        self.samples[0].phi
    }

    pub fn last(&self) -> &TraceSample {
        self.samples.last().expect("trace has an initial sample")
    }
}

/// Integrate with a custom right-hand side, visiting every sample. Returns
/// whether the run was truncated.
pub fn visit_with_field<D, V>(
    z0: DiskPoint,
    driver: &D,
    horizon: f64,
    step: f64,
    field: PolarField,
    mut visit: V,
) -> Result<bool>
where
    D: Driver + ?Sized,
    V: FnMut(&TraceSample),
{
    let (rho0, phi0) = anchor_polar(z0)?;
    let f = |y: &State, theta: f64| {
        let (dr, dp) = field(y[0], y[1], theta);
        Ok([dr, dp])
    };
    let mut truncated = false;
    integrate_visit(f, driver, [rho0, phi0], horizon, step, |s| {
        let [rho, phi] = s.y;
        if !(rho.is_finite() && phi.is_finite()) {
            truncated = true;
            return ControlFlow::Break(());
        }
        visit(&TraceSample {
            t: s.t,
            rho,
            phi,
            theta: s.u,
        });
        if rho < RHO_FLOOR {
            truncated = true;
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    Ok(truncated)
}

/// RK4 integration of the radial equation on `[0, horizon]`.
pub fn integrate<D: Driver + ?Sized>(
    z0: DiskPoint,
    driver: &D,
    horizon: f64,
    step: f64,
) -> Result<PolarTrace> {
    integrate_with_field(z0, driver, horizon, step, polar_field)
}

/// [`integrate`] with a replaceable right-hand side.
pub fn integrate_with_field<D: Driver + ?Sized>(
    z0: DiskPoint,
    driver: &D,
    horizon: f64,
    step: f64,
    field: PolarField,
) -> Result<PolarTrace> {
    let mut samples = Vec::with_capacity((horizon / step).ceil().min(1e7) as usize + 2);
    let truncated = visit_with_field(z0, driver, horizon, step, field, |s| samples.push(*s))?;
    Ok(PolarTrace {
        z0,
        samples,
        truncated,
    })
}

/// The Loewner right-hand side as a [`PolarField`].
pub fn loewner_field() -> PolarField {
    polar_field
}

/// Result of checking `rho(t) - rho0 <= -|phi(t) - phi0|` along a trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityReport {
    pub samples: usize,
    /// Largest `rho - rho0 + |phi - phi0|`; `<= 0` for a valid trajectory.
    pub max_excess: f64,
    /// Largest `|rho - rho0 + |phi - phi0||`; `~0` on an optimal trajectory.
    pub max_abs_excess: f64,
    /// Samples whose excess is above the tolerance.
    pub violations: usize,
    pub strictly_decreasing: bool,
}

impl InequalityReport {
    pub fn holds(&self) -> bool {
        self.violations == 0 && self.strictly_decreasing
    }
}

/// Check the integrated inequality at every sample.
pub fn check_differential_inequality(trace: &PolarTrace, tol: f64) -> InequalityReport {
    let (rho0, phi0) = (trace.rho0(), trace.phi0());
    let mut report = InequalityReport {
        samples: trace.samples.len(),
        max_excess: f64::NEG_INFINITY,
        max_abs_excess: 0.0,
        violations: 0,
        strictly_decreasing: true,
    };
    for s in &trace.samples {
        let excess = s.rho - rho0 + (s.phi - phi0).abs();
        report.max_excess = report.max_excess.max(excess);
        report.max_abs_excess = report.max_abs_excess.max(excess.abs());
        if excess > tol {
            report.violations += 1;
        }
    }
    report.strictly_decreasing = trace.samples.windows(2).all(|w| w[1].rho < w[0].rho);
    report
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::hyp_geom::{rho_of, to_polar};
    use crate::value_region::RegionSpec;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(re, im).unwrap()
    }

    /// Polar RHS converted back to `dw/dt`.
    fn polar_to_complex_rate(rho: f64, phi: f64, theta: f64) -> Complex64 {
        let (drho, dphi) = rhs_polar(rho, phi, theta).unwrap();
        let r = (0.5 * rho).tanh();
        let dr = 0.5 * (1.0 - r * r) * drho;
        Complex64::from_polar(1.0, phi) * Complex64::new(dr, r * dphi)
    }

    #[test]
    fn rhs_examples() {
        let (drho, dphi) = rhs_polar(0.7, 0.0, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(drho, -dphi, epsilon = 1e-15);
        assert!(drho < 0.0);

        let rho: f64 = 0.7;
        let r = (0.5 * rho).tanh();
        let (drho, dphi) = rhs_polar(rho, 0.0, 0.0).unwrap();
        assert_eq!(dphi, 0.0);
        assert_abs_diff_eq!(drho, -2.0 * r / ((1.0 - r) * (1.0 - r)), epsilon = 1e-14);

        let (drho, _) = rhs_polar(3f64.ln(), 0.0, PI).unwrap();
        assert_abs_diff_eq!(drho, -4.0 / 9.0, epsilon = 1e-15);

        assert!(rhs_polar(0.0, 0.0, 0.0).is_err());
        assert!(rhs_polar(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn antipodal_driver_keeps_ray() {
        let z0 = p(0.6, 0.0);
        let trace = integrate(z0, &PiecewiseDriver::constant(PI), 2.0, 1e-3).unwrap();
        assert!(trace.samples.iter().all(|s| s.phi.abs() < 1e-14));
        let report = check_differential_inequality(&trace, 0.0);
        assert!(report.holds());
        assert!(trace.samples[1..]
            .iter()
            .all(|s| s.rho - trace.rho0() < 0.0));
    }

    #[test]
    fn small_anchor_follows_linearization() {
        let z0 = p(0.0, 1e-3);
        for theta in [0.0, 1.0, 4.0] {
            let trace = integrate(z0, &PiecewiseDriver::constant(theta), 1.0, 1e-3).unwrap();
            let m = trace.last().point().modulus();
            let lin = 1e-3 * (-1f64).exp();
            assert!((m - lin).abs() < 0.01 * lin, "theta {theta}: {m} vs {lin}");
        }
    }

    #[test]
    fn optimal_driver_reproduces_closed_form() {
        let z0 = p(0.5, 0.4);
        for sign in [Sign::Plus, Sign::Minus] {
            let driver = optimal_driver(z0, sign).unwrap();
            let trace = integrate(z0, &driver, 2.0, 1e-3).unwrap();
            let s = trace.last();
            let exact = optimal_polar(z0, sign, 2.0).unwrap();
            assert_abs_diff_eq!(s.rho, exact.rho, epsilon = 1e-8);
            assert_abs_diff_eq!(s.phi, exact.phi, epsilon = 1e-8);
        }
    }

    #[test]
    fn literal_minus_prefactor_is_not_optimal() {
        // kappa^- = -i e^{i phi^-} drives the trajectory off the spiral
        let z0 = p(0.5, 0.4);
        let (rho0, phi0) = anchor_polar(z0).unwrap();
        let wrong = WrongMinus { rho0, phi0 };
        let trace = integrate(z0, &wrong, 2.0, 1e-3).unwrap();
        let report = check_differential_inequality(&trace, 1e-9);
        assert!(report.max_abs_excess > 1e-2);
    }

    struct WrongMinus {
        rho0: f64,
        phi0: f64,
    }

    impl Driver for WrongMinus {
        fn value(&self, t: f64) -> f64 {
            optimal_phi(self.rho0, self.phi0, Sign::Minus, t) - FRAC_PI_2
        }
    }

    #[test]
    fn optimal_driver_at_time_zero() {
        let z0 = p(0.5, 0.4);
        let d = optimal_driver(z0, Sign::Plus).unwrap();
        let kappa = Complex64::from_polar(1.0, d.value(0.0));
        let expected = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, z0.arg());
        assert_abs_diff_eq!((kappa - expected).norm(), 0.0, epsilon = 1e-15);
        assert!(optimal_driver(DiskPoint::ORIGIN, Sign::Plus).is_err());
    }

    #[test]
    fn optimal_driver_equality_configuration() {
        let z0 = p(-0.3, 0.6);
        for sign in [Sign::Plus, Sign::Minus] {
            let driver = optimal_driver(z0, sign).unwrap();
            let trace = integrate(z0, &driver, 4.0, 1e-3).unwrap();
            for s in &trace.samples {
                let w = s.point();
                let kw = Complex64::from_polar(1.0, s.theta).conj() * w.to_complex();
                let target = Complex64::new(0.0, sign.factor() * w.modulus());
                assert!((kw - target).norm() < 1e-9);
                assert!(q1_slack(w, s.theta, sign).abs() < 1e-9);
                assert!(q1_slack(w, s.theta, sign.flip()) >= 0.0);
            }
        }
    }

    #[test]
    fn optimal_trajectory_limits() {
        let z0 = p(0.5, 0.4);
        assert_eq!(optimal_trajectory(z0, Sign::Plus, 0.0).unwrap(), z0);
        let far = optimal_polar(z0, Sign::Plus, 60.0).unwrap();
        assert!(far.rho < 1e-20);
        assert_abs_diff_eq!(far.phi, z0.arg() - rho_of(z0), epsilon = 1e-12);
        assert!(optimal_trajectory(z0, Sign::Plus, -1.0).is_err());
    }

    #[test]
    fn t_max_cases() {
        assert_eq!(t_max(p((PI / 4.0).tanh(), 0.0)).unwrap(), f64::INFINITY);
        // rho0 lands within an ulp of pi: t_max is infinite or huge
        assert!(t_max(from_polar(HypPolar { rho: PI, phi: 0.0 })).unwrap() > 30.0);
        // mpmath: -log(sinh(pi) / sinh(2 pi)) = log(2 cosh pi)
        let z0 = p(PI.tanh(), 0.0);
        assert_abs_diff_eq!(
            t_max(z0).unwrap(),
            3.143458354818091314106789615252758016101,
            epsilon = 1e-12
        );
    }

    #[test]
    fn at_t_max_arc_reaches_terminal() {
        let z0 = p(0.99, 0.0);
        let tm = t_max(z0).unwrap();
        let pol = optimal_polar(z0, Sign::Plus, tm).unwrap();
        assert_abs_diff_eq!(pol.rho, rho_of(z0) - PI, epsilon = 1e-12);
        assert_abs_diff_eq!(pol.phi, -PI, epsilon = 1e-12);
    }

    #[test]
    fn constant_driver_strict_inequality() {
        let trace = integrate(p(0.4, 0.0), &PiecewiseDriver::constant(PI), 1.0, 1e-2).unwrap();
        for s in &trace.samples[1..] {
            assert!(s.rho - trace.rho0() < -(s.phi - trace.phi0()).abs());
        }
    }

    #[test]
    fn optimal_rho_rate_is_minus_tanh() {
        let z0 = p(0.5, 0.4);
        let h = 1e-3;
        let trace = integrate(z0, &optimal_driver(z0, Sign::Plus).unwrap(), 3.0, h).unwrap();
        let mut worst: f64 = 0.0;
        for w in trace.samples.windows(3) {
            let fd = (w[2].rho - w[0].rho) / (2.0 * h);
            worst = worst.max((fd + w[1].rho.tanh()).abs());
        }
        assert!(worst < 1e-6, "max error {worst}");
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        let d = PiecewiseDriver::constant(0.0);
        assert_eq!(
            integrate(DiskPoint::ORIGIN, &d, 1.0, 1e-3),
            Err(Error::DegeneratePoint)
        );
        assert!(integrate(p(0.5, 0.0), &d, -1.0, 1e-3).is_err());
        assert!(integrate(p(0.5, 0.0), &d, 1.0, 0.0).is_err());
    }

    #[test]
    fn long_run_truncates_near_origin() {
        let trace = integrate(p(0.5, 0.0), &PiecewiseDriver::constant(PI), 60.0, 1e-2).unwrap();
        assert!(trace.truncated);
        assert!(trace.last().rho < RHO_FLOOR);
        assert!(trace.last().t < 60.0);
    }

    fn anchor() -> impl Strategy<Value = DiskPoint> {
        (0.05..0.99f64, -PI..PI).prop_map(|(r, t)| p(r * t.cos(), r * t.sin()))
    }

    proptest! {
        #[test]
        fn polar_and_complex_forms_agree(rho in 0.01..6.0f64, phi in -PI..PI, theta in -PI..PI) {
            let r = (0.5 * rho).tanh();
            let w = Complex64::from_polar(r, phi);
            prop_assume!((Complex64::from_polar(1.0, theta) - w).norm() > 1e-3);
            let a = rhs_complex(w, theta);
            let b = polar_to_complex_rate(rho, phi, theta);
            prop_assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
        }

        #[test]
        fn basic_inequality_pointwise(rho in 0.01..6.0f64, phi in -PI..PI, theta in -PI..PI) {
            let w = from_polar(HypPolar { rho, phi });
            prop_assert!(q1_slack(w, theta, Sign::Plus) >= -1e-15);
            prop_assert!(q1_slack(w, theta, Sign::Minus) >= -1e-15);
            let (drho, dphi) = rhs_polar(rho, phi, theta).unwrap();
            prop_assert!(drho + dphi.abs() <= 1e-12 * drho.abs());
        }

        #[test]
        fn optimal_points_on_boundary(z0 in anchor(), t in 0.0..8.0f64, plus in any::<bool>()) {
            let sign = if plus { Sign::Plus } else { Sign::Minus };
            prop_assume!(t <= t_max(z0).unwrap());
            let spec = RegionSpec::new(z0);
            let w = optimal_trajectory(z0, sign, t).unwrap();
            let res = spec.residual(w).unwrap();
            prop_assert!(res.abs() < 1e-10, "residual {}", res);
        }

        #[test]
        fn closed_form_polar_lifting_consistent(z0 in anchor(), t in 0.0..4.0f64) {
            let pol = optimal_polar(z0, Sign::Minus, t).unwrap();
            let back = to_polar(from_polar(pol), pol.phi).unwrap();
            prop_assert!((back.phi - pol.phi).abs() < 1e-9);
        }
    }
}

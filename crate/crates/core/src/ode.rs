//! Fixed-step classical Runge-Kutta for two-dimensional non-autonomous
//! systems `y' = F(y, u(t))` driven by a [`Driver`].
//!
//! The horizon is split at the driver's breakpoints and each piece is covered
//! by equal steps no longer than the requested one, so steps land exactly on
//! knots and on the final time. Stage values of the control are taken as
//! `u(t)`, `u(t + h/2)` and the left limit `u(t + h)`, so a piecewise-constant
//! driver is seen as constant on every step.

use std::ops::ControlFlow;

use crate::driver::Driver;
use crate::error::{Error, Result};

pub type State = [f64; 2];

/// One accepted step (or the initial state).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub t: f64,
    pub y: State,
    /// Control value `u(t)` (right-continuous).
    pub u: f64,
}

#[inline]
fn axpy(y: &State, h: f64, k: &State) -> State {
    [y[0] + h * k[0], y[1] + h * k[1]]
}

/// One RK4 step of size `h` from `(t, y)`.
#[inline]
pub fn rk4_step<F, D>(field: &F, driver: &D, t: f64, y: &State, h: f64) -> Result<State>
where
    F: Fn(&State, f64) -> Result<State>,
    D: Driver + ?Sized,
{
    let u_mid = driver.value(t + 0.5 * h);
    let k1 = field(y, driver.value(t))?;
    let k2 = field(&axpy(y, 0.5 * h, &k1), u_mid)?;
    let k3 = field(&axpy(y, 0.5 * h, &k2), u_mid)?;
    let k4 = field(&axpy(y, h, &k3), driver.left_limit(t + h))?;
    Ok([
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ])
}

/// Step boundaries on `[0, horizon]`: every breakpoint is hit, every step is
/// at most `step` long.
pub fn step_grid(breakpoints: &[f64], horizon: f64, step: f64) -> Vec<f64> {
    let mut nodes: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t < horizon)
        .collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes.push(horizon);

    let mut grid = vec![0.0];
    let mut a = 0.0;
    for b in nodes {
        let n = ((b - a) / step * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        grid.extend((1..n).map(|k| a + k as f64 * h));
        grid.push(b);
        a = b;
    }
    grid
}

/// Integrate from `y0` at `t = 0` to `horizon`, calling `visit` on the
/// initial state and after every step. `visit` may stop the run early by
/// returning `Break`; the return value tells whether that happened.
pub fn integrate_visit<F, D, V>(
    field: F,
    driver: &D,
    y0: State,
    horizon: f64,
    step: f64,
    mut visit: V,
) -> Result<bool>
where
    F: Fn(&State, f64) -> Result<State>,
    D: Driver + ?Sized,
    V: FnMut(&Step) -> ControlFlow<()>,
{
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "horizon must be positive and finite, got {horizon}"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive and finite, got {step}"
        )));
    }
    let grid = step_grid(&driver.breakpoints(horizon), horizon, step);
    let mut y = y0;
    if visit(&Step {
        t: 0.0,
        y,
        u: driver.value(0.0),
    })
    .is_break()
    {
        return Ok(true);
    }
    for w in grid.windows(2) {
        let (t, t_next) = (w[0], w[1]);
        y = rk4_step(&field, driver, t, &y, t_next - t)?;
        let s = Step {
            t: t_next,
            y,
            u: driver.value(t_next),
        };
        if visit(&s).is_break() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::{Interp, PiecewiseDriver};
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_lands_on_knots_and_horizon() {
        let g = step_grid(&[0.25, 0.3], 1.0, 0.1);
        assert_eq!(g[0], 0.0);
        assert!(g.contains(&0.25) && g.contains(&0.3));
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!(g
            .windows(2)
            .all(|w| w[1] > w[0] && w[1] - w[0] <= 0.1 + 1e-15));
        assert_eq!(step_grid(&[], 5.0, 1e-3).len(), 5001);
    }

    #[test]
    fn exponential_decay_fourth_order() {
        // y' = -u y with u = 1; error of RK4 is O(h^4)
        let field = |y: &State, u: f64| Ok([-u * y[0], 0.0]);
        let driver = PiecewiseDriver::constant(1.0);
        let run = |h: f64| {
            let mut last = [0.0; 2];
            integrate_visit(field, &driver, [1.0, 0.0], 2.0, h, |s| {
                last = s.y;
                ControlFlow::Continue(())
            })
            .unwrap();
            (last[0] - (-2f64).exp()).abs()
        };
        let (e1, e2) = (run(0.1), run(0.05));
        assert!(e1 / e2 > 14.0 && e1 / e2 < 18.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn piecewise_constant_driver_integrated_exactly_per_segment() {
        // y' = u: exact for piecewise-constant u when steps land on knots
        let driver = PiecewiseDriver::new(
            vec![(0.0, 1.0), (0.33, -2.0), (0.71, 0.5)],
            Interp::Constant,
        )
        .unwrap();
        let mut last = 0.0;
        integrate_visit(
            |_y: &State, u| Ok([u, 0.0]),
            &driver,
            [0.0; 2],
            1.0,
            0.1,
            |s| {
                last = s.y[0];
                ControlFlow::Continue(())
            },
        )
        .unwrap();
        assert_abs_diff_eq!(last, 0.33 - 2.0 * 0.38 + 0.5 * 0.29, epsilon = 1e-14);
    }

    #[test]
    fn early_stop_and_bad_arguments() {
        let driver = PiecewiseDriver::constant(0.0);
        let field = |_y: &State, _u: f64| Ok([1.0, 0.0]);
        let mut count = 0;
        let stopped = integrate_visit(field, &driver, [0.0; 2], 1.0, 0.1, |_| {
            count += 1;
            if count == 3 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
        .unwrap();
        assert!(stopped);
        assert_eq!(count, 3);
        assert!(integrate_visit(field, &driver, [0.0; 2], 0.0, 0.1, |_| {
            ControlFlow::Continue(())
        })
        .is_err());
        assert!(integrate_visit(field, &driver, [0.0; 2], 1.0, -0.1, |_| {
            ControlFlow::Continue(())
        })
        .is_err());
    }
}

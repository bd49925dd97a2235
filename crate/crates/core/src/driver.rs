//! Driving functions sampled at knots, and the plain-text driver file format.
//!
//! File format, one knot per line:
//!
//! ```text
//! # comment
//! interp: constant
//! 0.0   1.5707963267948966
//! 0.25  3.0
//! ```
//!
//! The value column is the angle `theta` of `kappa = e^{i theta}` for the
//! radial equation, or `U` for the chordal one. The `interp:` header is
//! optional and defaults to `constant`. The first knot must be at `t <= 0`;
//! the last value is held beyond the last knot.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A real-valued control `t -> u(t)`.
pub trait Driver {
    fn value(&self, t: f64) -> f64;

    /// Limit from the left at `t`; differs from [`Driver::value`] only at
    /// jumps.
    fn left_limit(&self, t: f64) -> f64 {
        self.value(t)
    }

    /// Times in `(0, horizon)` where the driver is not smooth. The
    /// integrators land a step on each of them.
    fn breakpoints(&self, _horizon: f64) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interp {
    Constant,
    Linear,
}

impl FromStr for Interp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Interp::Constant),
            "linear" => Ok(Interp::Linear),
            _ => Err(Error::InvalidArgument(format!(
                "unknown interpolation '{s}'"
            ))),
        }
    }
}

impl Interp {
    fn name(self) -> &'static str {
        match self {
            Interp::Constant => "constant",
            Interp::Linear => "linear",
        }
    }
}

/// Knots `(t_i, u_i)` with strictly increasing `t_i`, `t_0 <= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseDriver {
    times: Vec<f64>,
    values: Vec<f64>,
    interp: Interp,
}

impl PiecewiseDriver {
    pub fn new(knots: Vec<(f64, f64)>, interp: Interp) -> Result<Self> {
        let Some(&(t0, _)) = knots.first() else {
            return Err(Error::InvalidArgument(
                "driver needs at least one knot".into(),
            ));
        };
        if t0 > 0.0 {
            return Err(Error::InvalidArgument(format!(
                "first knot at t = {t0}, must be <= 0"
            )));
        }
        if knots.iter().any(|(t, u)| !t.is_finite() || !u.is_finite()) {
            return Err(Error::InvalidArgument("driver knots must be finite".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidArgument(
                "driver knot times must be strictly increasing".into(),
            ));
        }
        let (times, values) = knots.into_iter().unzip();
        Ok(Self {
            times,
            values,
            interp,
        })
    }

    pub fn constant(u: f64) -> Self {
        Self {
            times: vec![0.0],
            values: vec![u],
            interp: Interp::Constant,
        }
    }

    pub fn interp(&self) -> Interp {
        self.interp
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Index of the last knot with `t_i <= t`.
    #[inline]
    fn segment(&self, t: f64) -> usize {
        self.times.partition_point(|&ti| ti <= t).saturating_sub(1)
    }

    /// Index of the last knot with `t_i < t`.
    #[inline]
    fn segment_left(&self, t: f64) -> usize {
        self.times.partition_point(|&ti| ti < t).saturating_sub(1)
    }

    fn eval_in(&self, k: usize, t: f64) -> f64 {
        match self.interp {
            Interp::Constant => self.values[k],
            Interp::Linear => {
                if k + 1 == self.times.len() || t <= self.times[k] {
                    return self.values[k];
                }
                let (t0, t1) = (self.times[k], self.times[k + 1]);
                let s = (t - t0) / (t1 - t0);
                self.values[k] + s * (self.values[k + 1] - self.values[k])
            }
        }
    }

    /// Parse the driver file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut interp = Interp::Constant;
        let mut knots = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("interp:") {
                interp = rest.trim().parse().map_err(|_| Error::DriverParse {
                    line: line_no,
                    msg: format!("unknown interpolation '{}'", rest.trim()),
                })?;
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut next = |name: &str| -> Result<f64> {
                let tok = fields.next().ok_or_else(|| Error::DriverParse {
                    line: line_no,
                    msg: format!("missing {name} column"),
                })?;
                tok.parse::<f64>().map_err(|_| Error::DriverParse {
                    line: line_no,
                    msg: format!("cannot parse {name} value '{tok}'"),
                })
            };
            let t = next("time")?;
            let u = next("driver")?;
            if fields.next().is_some() {
                return Err(Error::DriverParse {
                    line: line_no,
                    msg: "expected exactly two columns".into(),
                });
            }
            knots.push((t, u));
        }
        Self::new(knots, interp).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::DriverParse { line: 0, msg },
            other => other,
        })
    }

    /// Serialize in the driver file format, 17 significant digits.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("interp: {}\n", self.interp.name());
        for (t, u) in self.knots() {
            let _ = writeln!(out, "{t:.16e} {u:.16e}");
        }
        out
    }
}

impl Driver for PiecewiseDriver {
    fn value(&self, t: f64) -> f64 {
        let k = self.segment(t);
        self.eval_in(k, t)
    }

    fn left_limit(&self, t: f64) -> f64 {
        let k = self.segment_left(t);
        self.eval_in(k, t)
    }

    fn breakpoints(&self, horizon: f64) -> Vec<f64> {
        self.times
            .iter()
            .copied()
            .filter(|&t| t > 0.0 && t < horizon)
            .collect()
    }
}

impl<D: Driver + ?Sized> Driver for &D {
    fn value(&self, t: f64) -> f64 {
        (**self).value(t)
    }

    fn left_limit(&self, t: f64) -> f64 {
        (**self).left_limit(t)
    }

    fn breakpoints(&self, horizon: f64) -> Vec<f64> {
        (**self).breakpoints(horizon)
    }
}

//! Seeded random-driver ensembles.
//!
//! Each trial draws a piecewise-constant driver with exponentially
//! distributed knot spacing from its own ChaCha stream (`stream = trial`),
//! so results do not depend on scheduling. Trials run on rayon when the
//! `parallel` feature is enabled and [`Execution::Parallel`] is selected.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Uniform};

use crate::chordal::{visit_chordal, HalfPlanePoint};
use crate::driver::{Interp, PiecewiseDriver};
use crate::error::{Error, Result};
use crate::hyp_geom::DiskPoint;
use crate::radial::{loewner_field, visit_with_field, PolarField};
use crate::value_region::RegionSpec;

/// Mean spacing of driver knots.
pub const DEFAULT_MEAN_SPACING: f64 = 0.1;

/// Half-width, in units of `Im z0`, of the window chordal driver values are
/// drawn from.
pub const CHORDAL_WINDOW: f64 = 5.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when built with the `parallel` feature, otherwise runs
    /// sequentially.
    #[default]
    Parallel,
}

/// Evaluate `f(0), ..., f(n - 1)`, results in index order.
pub fn run_indexed<T, F>(exec: Execution, n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..n).map(f).collect(),
        Execution::Parallel => par_map(n, f),
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, F>(n: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// RNG for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn knot_times<R: Rng + ?Sized>(rng: &mut R, horizon: f64, mean_spacing: f64) -> Result<Vec<f64>> {
    if !(mean_spacing > 0.0 && mean_spacing.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "mean knot spacing {mean_spacing} must be positive and finite"
        )));
    }
    let gap = Exp::new(1.0 / mean_spacing).map_err(|_| {
        Error::InvalidArgument(format!("mean knot spacing {mean_spacing} is too small"))
    })?;
    let mut times = vec![0.0];
    let mut t: f64 = 0.0;
    loop {
        t += gap.sample(rng);
        if t >= horizon {
            return Ok(times);
        }
        if t > *times.last().unwrap() {
            times.push(t);
        }
    }
}

/// Piecewise-constant angle driver, `theta_i ~ U[0, 2 pi)`.
pub fn random_circle_driver<R: Rng + ?Sized>(
    rng: &mut R,
    horizon: f64,
    mean_spacing: f64,
) -> Result<PiecewiseDriver> {
    let times = knot_times(rng, horizon, mean_spacing)?;
    let angle = Uniform::new(0.0, TAU).expect("valid range");
    let knots = times.into_iter().map(|t| (t, angle.sample(rng))).collect();
    PiecewiseDriver::new(knots, Interp::Constant)
}

/// Piecewise-constant real driver, `U_i ~ x0 + y0 U[-5, 5]`.
pub fn random_real_driver<R: Rng + ?Sized>(
    rng: &mut R,
    z0: HalfPlanePoint,
    horizon: f64,
    mean_spacing: f64,
) -> Result<PiecewiseDriver> {
    let times = knot_times(rng, horizon, mean_spacing)?;
    let offset = Uniform::new_inclusive(-CHORDAL_WINDOW, CHORDAL_WINDOW).expect("valid range");
    let knots = times
        .into_iter()
        .map(|t| (t, z0.x + z0.y * offset.sample(rng)))
        .collect();
    PiecewiseDriver::new(knots, Interp::Constant)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleConfig {
    pub trials: u64,
    pub seed: u64,
    pub horizon: f64,
    pub step: f64,
    pub tolerance: f64,
    pub mean_spacing: f64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            trials: 10_000,
            seed: 0,
            horizon: 3.0,
            step: 1e-3,
            tolerance: 1e-7,
            mean_spacing: DEFAULT_MEAN_SPACING,
        }
    }
}

impl EnsembleConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("need at least one trial".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance {} must be >= 0",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Aggregate over radial trials. Sample counts exclude `t = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RadialStats {
    pub trials: u64,
    pub samples: u64,
    /// Largest `rho - rho0 + |phi - phi0|` seen at `t > 0`.
    pub max_excess: f64,
    /// Samples with excess above the tolerance.
    pub inequality_violations: u64,
    /// Samples with `contains_value` false.
    pub containment_failures: u64,
    /// Steps where `rho` did not strictly decrease.
    pub monotonicity_failures: u64,
    pub truncated_trials: u64,
}

impl RadialStats {
    pub fn passed(&self) -> bool {
        self.inequality_violations == 0
            && self.containment_failures == 0
            && self.monotonicity_failures == 0
    }

    fn merge(mut self, other: &Self) -> Self {
        self.trials += other.trials;
        self.samples += other.samples;
        self.max_excess = self.max_excess.max(other.max_excess);
        self.inequality_violations += other.inequality_violations;
        self.containment_failures += other.containment_failures;
        self.monotonicity_failures += other.monotonicity_failures;
        self.truncated_trials += other.truncated_trials;
        self
    }
}

/// Random radial drivers from `z0`; every sample is checked against the
/// integrated inequality and against `contains_value` on `V(z0)`.
pub fn radial_ensemble(
    z0: DiskPoint,
    cfg: &EnsembleConfig,
    exec: Execution,
) -> Result<RadialStats> {
    radial_ensemble_with_field(z0, cfg, exec, loewner_field())
}

/// [`radial_ensemble`] with a replaceable right-hand side.
pub fn radial_ensemble_with_field(
    z0: DiskPoint,
    cfg: &EnsembleConfig,
    exec: Execution,
    field: PolarField,
) -> Result<RadialStats> {
    cfg.validate()?;
    let region = RegionSpec::new(z0).with_tolerance(cfg.tolerance)?;
    if region.is_degenerate() {
        return Err(Error::DegeneratePoint);
    }
    let (rho0, phi0) = (region.rho0(), region.phi0());
    let per_trial = run_indexed(exec, cfg.trials, |trial| -> Result<RadialStats> {
        let mut rng = trial_rng(cfg.seed, trial);
        let driver = random_circle_driver(&mut rng, cfg.horizon, cfg.mean_spacing)?;
        let mut stats = RadialStats {
            trials: 1,
            max_excess: f64::NEG_INFINITY,
            ..Default::default()
        };
        let mut prev_rho = f64::INFINITY;
        let truncated = visit_with_field(z0, &driver, cfg.horizon, cfg.step, field, |s| {
            if s.t > 0.0 {
                stats.samples += 1;
                let excess = s.rho - rho0 + (s.phi - phi0).abs();
                stats.max_excess = stats.max_excess.max(excess);
                if excess > cfg.tolerance {
                    stats.inequality_violations += 1;
                }
                if !region.contains_value(s.point()) {
                    stats.containment_failures += 1;
                }
                if !(s.rho < prev_rho) {
                    stats.monotonicity_failures += 1;
                }
            }
            prev_rho = s.rho;
        })?;
        stats.truncated_trials = u64::from(truncated);
        Ok(stats)
    });
    let init = RadialStats {
        max_excess: f64::NEG_INFINITY,
        ..Default::default()
    };
    per_trial
        .into_iter()
        .try_fold(init, |acc, r| r.map(|s| acc.merge(&s)))
}

/// Aggregate over chordal trials. Sample counts exclude `t = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ChordalStats {
    pub trials: u64,
    pub samples: u64,
    /// Smallest `Im w(t) - Im z0` at `t > 0`.
    pub min_height_gain: f64,
    /// Samples outside the reachable set `{Im z > Im z0}`.
    pub containment_failures: u64,
    pub monotonicity_failures: u64,
    pub singular_trials: u64,
}

impl ChordalStats {
    pub fn passed(&self) -> bool {
        self.containment_failures == 0
            && self.monotonicity_failures == 0
            && self.singular_trials == 0
    }

    fn merge(mut self, other: &Self) -> Self {
        self.trials += other.trials;
        self.samples += other.samples;
        self.min_height_gain = self.min_height_gain.min(other.min_height_gain);
        self.containment_failures += other.containment_failures;
        self.monotonicity_failures += other.monotonicity_failures;
        self.singular_trials += other.singular_trials;
        self
    }
}

/// Random chordal drivers from `z0`; every sample at `t > 0` must lie
/// strictly above `z0`.
pub fn chordal_ensemble(
    z0: HalfPlanePoint,
    cfg: &EnsembleConfig,
    exec: Execution,
) -> Result<ChordalStats> {
    cfg.validate()?;
    let per_trial = run_indexed(exec, cfg.trials, |trial| -> Result<ChordalStats> {
        let mut rng = trial_rng(cfg.seed, trial);
        let driver = random_real_driver(&mut rng, z0, cfg.horizon, cfg.mean_spacing)?;
        let mut stats = ChordalStats {
            trials: 1,
            min_height_gain: f64::INFINITY,
            ..Default::default()
        };
        let mut prev_y = f64::NEG_INFINITY;
        let run = visit_chordal(z0, &driver, cfg.horizon, cfg.step, |s| {
            if s.t > 0.0 {
                stats.samples += 1;
                stats.min_height_gain = stats.min_height_gain.min(s.y - z0.y);
                if !(s.y > z0.y) {
                    stats.containment_failures += 1;
                }
                if !(s.y > prev_y) {
                    stats.monotonicity_failures += 1;
                }
            }
            prev_y = s.y;
        });
        match run {
            Ok(()) => {}
            Err(Error::Singularity { .. }) => stats.singular_trials = 1,
            Err(e) => return Err(e),
        }
        Ok(stats)
    });
    let init = ChordalStats {
        min_height_gain: f64::INFINITY,
        ..Default::default()
    };
    per_trial
        .into_iter()
        .try_fold(init, |acc, r| r.map(|s| acc.merge(&s)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::Driver;

    fn small_cfg() -> EnsembleConfig {
        EnsembleConfig {
            trials: 64,
            horizon: 1.0,
            step: 1e-2,
            ..Default::default()
        }
    }

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: u64 = trial_rng(7, 3).random();
        let b: u64 = trial_rng(7, 3).random();
        let c: u64 = trial_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_drivers_are_well_formed() {
        let mut rng = trial_rng(1, 0);
        let d = random_circle_driver(&mut rng, 3.0, 0.1).unwrap();
        assert!(d.len() > 5);
        assert!(d
            .knots()
            .all(|(t, th)| (0.0..3.0).contains(&t) && (0.0..TAU).contains(&th)));
        let z0 = HalfPlanePoint::new(2.0, 0.5).unwrap();
        let d = random_real_driver(&mut rng, z0, 3.0, 0.1).unwrap();
        assert!(d.knots().all(|(_, u)| (-0.5..=4.5).contains(&u)));
        assert!(random_circle_driver(&mut rng, 3.0, 0.0).is_err());
        assert_eq!(d.value(0.0), d.knots().next().unwrap().1);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let z0 = DiskPoint::new(0.5, 0.4).unwrap();
        let a = radial_ensemble(z0, &small_cfg(), Execution::Sequential).unwrap();
        let b = radial_ensemble(z0, &small_cfg(), Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
        assert_eq!(a.trials, 64);
        assert!(a.samples >= 64 * 100);

        let w0 = HalfPlanePoint::new(0.0, 1.0).unwrap();
        let a = chordal_ensemble(w0, &small_cfg(), Execution::Sequential).unwrap();
        let b = chordal_ensemble(w0, &small_cfg(), Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
        assert!(a.min_height_gain > 0.0);
    }

    #[test]
    fn corrupted_field_is_caught() {
        fn flipped(rho: f64, phi: f64, theta: f64) -> (f64, f64) {
            let (dr, dp) = (loewner_field())(rho, phi, theta);
            (-dr, dp)
        }
        let z0 = DiskPoint::new(0.5, 0.4).unwrap();
        let stats =
            radial_ensemble_with_field(z0, &small_cfg(), Execution::Parallel, flipped).unwrap();
        assert!(!stats.passed());
        assert!(stats.containment_failures > 0);
        assert!(stats.max_excess > 0.1);
    }

    #[test]
    fn degenerate_inputs() {
        let cfg = EnsembleConfig {
            trials: 0,
            ..small_cfg()
        };
        assert!(radial_ensemble(
            DiskPoint::new(0.5, 0.0).unwrap(),
            &cfg,
            Execution::Sequential
        )
        .is_err());
        assert_eq!(
            radial_ensemble(DiskPoint::ORIGIN, &small_cfg(), Execution::Sequential),
            Err(Error::DegeneratePoint)
        );
    }
}

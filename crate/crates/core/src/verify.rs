//! Monte-Carlo verification report: random-driver ensembles plus the
//! optimal (disk) or straight-line (half-plane) constructions.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::chordal::{integrate_chordal, line_driver, HalfPlanePoint};
use crate::ensemble::{
    chordal_ensemble, radial_ensemble_with_field, ChordalStats, EnsembleConfig, Execution,
    RadialStats,
};
use crate::error::{Error, Result};
use crate::hyp_geom::DiskPoint;
use crate::io::fmt_f64;
use crate::radial::{
    check_differential_inequality, integrate_with_field, loewner_field, optimal_driver,
    optimal_polar, t_max, PolarField,
};
use crate::spirals::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Disk,
    HalfPlane,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disk" => Ok(Mode::Disk),
            "halfplane" => Ok(Mode::HalfPlane),
            _ => Err(Error::InvalidArgument(format!("unknown mode '{s}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Disk => "disk",
            Mode::HalfPlane => "halfplane",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub mode: Mode,
    pub z0: Complex64,
    pub ensemble: EnsembleConfig,
    pub exec: Execution,
}

/// Equality check of one optimal trajectory integrated by RK4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimalCheck {
    pub sign: Sign,
    pub horizon: f64,
    /// Max `|rho - rho0 + |phi - phi0||` along the trace.
    pub equality_residual: f64,
    /// Max deviation from the closed form in `rho` and lifted `phi`.
    pub closed_form_deviation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineCheck {
    pub target: HalfPlanePoint,
    pub t_hit: f64,
    pub miss: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Findings {
    Disk {
        stats: RadialStats,
        optimal: Vec<OptimalCheck>,
    },
    HalfPlane {
        stats: ChordalStats,
        lines: Vec<LineCheck>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub findings: Findings,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        let tol = self.config.ensemble.tolerance;
        match &self.findings {
            Findings::Disk { stats, optimal } => {
                stats.passed()
                    && optimal
                        .iter()
                        .all(|o| o.equality_residual <= tol && o.closed_form_deviation <= tol)
            }
            Findings::HalfPlane { stats, lines } => {
                stats.passed() && lines.iter().all(|l| l.miss <= tol)
            }
        }
    }

    /// 0 when every check is within tolerance, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        let e = &c.ensemble;
        writeln!(f, "mode: {}", c.mode)?;
        writeln!(f, "z0: {} {}", fmt_f64(c.z0.re), fmt_f64(c.z0.im))?;
        writeln!(f, "seed: {}", e.seed)?;
        writeln!(f, "trials: {}", e.trials)?;
        writeln!(f, "horizon: {}", fmt_f64(e.horizon))?;
        writeln!(f, "step: {}", fmt_f64(e.step))?;
        writeln!(f, "tolerance: {}", fmt_f64(e.tolerance))?;
        match &self.findings {
            Findings::Disk { stats, optimal } => {
                writeln!(f, "samples: {}", stats.samples)?;
                writeln!(f, "max_inequality_excess: {}", fmt_f64(stats.max_excess))?;
                writeln!(f, "inequality_violations: {}", stats.inequality_violations)?;
                writeln!(f, "containment_failures: {}", stats.containment_failures)?;
                writeln!(f, "monotonicity_failures: {}", stats.monotonicity_failures)?;
                writeln!(f, "truncated_trials: {}", stats.truncated_trials)?;
                for o in optimal {
                    writeln!(f, "optimal_{}_horizon: {}", o.sign, fmt_f64(o.horizon))?;
                    writeln!(
                        f,
                        "optimal_{}_equality_residual: {}",
                        o.sign,
                        fmt_f64(o.equality_residual)
                    )?;
                    writeln!(
                        f,
                        "optimal_{}_closed_form_deviation: {}",
                        o.sign,
                        fmt_f64(o.closed_form_deviation)
                    )?;
                }
            }
            Findings::HalfPlane { stats, lines } => {
                writeln!(f, "samples: {}", stats.samples)?;
                writeln!(f, "min_height_gain: {}", fmt_f64(stats.min_height_gain))?;
                writeln!(f, "containment_failures: {}", stats.containment_failures)?;
                writeln!(f, "monotonicity_failures: {}", stats.monotonicity_failures)?;
                writeln!(f, "singular_trials: {}", stats.singular_trials)?;
                for l in lines {
                    writeln!(
                        f,
                        "line_target {} {}: t_hit {} miss {}",
                        fmt_f64(l.target.x),
                        fmt_f64(l.target.y),
                        fmt_f64(l.t_hit),
                        fmt_f64(l.miss)
                    )?;
                }
            }
        }
        writeln!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    run_with_field(cfg, loewner_field())
}

/// [`run`] with a replaceable radial right-hand side (disk mode only).
pub fn run_with_field(cfg: &VerifyConfig, field: PolarField) -> Result<VerifyReport> {
    let findings = match cfg.mode {
        Mode::Disk => disk_findings(cfg, field)?,
        Mode::HalfPlane => halfplane_findings(cfg)?,
    };
    Ok(VerifyReport {
        config: *cfg,
        findings,
    })
}

fn disk_findings(cfg: &VerifyConfig, field: PolarField) -> Result<Findings> {
    let z0 = DiskPoint::from_complex(cfg.z0)?;
    let e = &cfg.ensemble;
    let stats = radial_ensemble_with_field(z0, e, cfg.exec, field)?;
    let horizon = t_max(z0)?.min(e.horizon);
    let optimal = [Sign::Plus, Sign::Minus]
        .into_iter()
        .map(|sign| -> Result<OptimalCheck> {
            let driver = optimal_driver(z0, sign)?;
            let trace = integrate_with_field(z0, &driver, horizon, e.step, field)?;
            let report = check_differential_inequality(&trace, e.tolerance);
            let mut deviation: f64 = 0.0;
            for s in &trace.samples {
                let exact = optimal_polar(z0, sign, s.t)?;
                deviation = deviation
                    .max((s.rho - exact.rho).abs())
                    .max((s.phi - exact.phi).abs());
            }
            Ok(OptimalCheck {
                sign,
                horizon,
                equality_residual: report.max_abs_excess,
                closed_form_deviation: deviation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Findings::Disk { stats, optimal })
}

/// Targets at heights `{1.1, 2, 5} Im z0` and offsets `{-3, 0, 3}` from
/// `Re z0`.
pub fn line_targets(z0: HalfPlanePoint) -> Vec<HalfPlanePoint> {
    let mut out = Vec::with_capacity(9);
    for k in [1.1, 2.0, 5.0] {
        for dx in [-3.0, 0.0, 3.0] {
            out.push(HalfPlanePoint {
                x: z0.x + dx,
                y: k * z0.y,
            });
        }
    }
    out
}

fn halfplane_findings(cfg: &VerifyConfig) -> Result<Findings> {
    let z0 = HalfPlanePoint::from_complex(cfg.z0)?;
    let e = &cfg.ensemble;
    let stats = chordal_ensemble(z0, e, cfg.exec)?;
    let lines = line_targets(z0)
        .into_iter()
        .map(|target| -> Result<LineCheck> {
            let (driver, t_hit) = line_driver(z0, target)?;
            let trace = integrate_chordal(z0, &driver, t_hit, e.step)?;
            let end = trace.last();
            Ok(LineCheck {
                target,
                t_hit,
                miss: (end.x - target.x).hypot(end.y - target.y),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Findings::HalfPlane { stats, lines })
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {re}{im:+}i is not inside the unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("point {x}{y:+}i is not in the upper half-plane")]
    OutsideHalfPlane { x: f64, y: f64 },

    #[error("argument of the origin is undefined")]
    DegeneratePoint,

    #[error("angle {phi} is outside the spiral domain [{lo}, {hi}]")]
    SpiralDomain { phi: f64, lo: f64, hi: f64 },

    #[error("target is unreachable: Im target ({target_y}) must exceed Im z0 ({y0})")]
    Unreachable { y0: f64, target_y: f64 },

    #[error("driving function collided with the trajectory at t = {t}")]
    Singularity { t: f64 },

    #[error("driver file, line {line}: {msg}")]
    DriverParse { line: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

use std::path::PathBuf;

use thiserror::Error;

use crate::kinematics::FootPoint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("morphology out of range: femur {femur} mm, tibia {tibia} mm")]
    InvalidMorphology { femur: f64, tibia: f64 },

    #[error(
        "target {target} unreachable: distance {distance:.3} mm outside [{:.3}, {:.3}] mm",
        limits.0,
        limits.1
    )]
    Unreachable {
        target: FootPoint,
        distance: f64,
        limits: (f64, f64),
    },

    #[error("invalid gait parameters: {0}")]
    InvalidGait(String),

    #[error("spline control points all coincide")]
    DegenerateSpline,

    #[error("actuator target {target} mm outside stroke [0, {stroke}] mm")]
    OutOfStroke { target: f64, stroke: f64 },

    #[error("all samples identical; rank test undefined")]
    DegenerateSamples,

    #[error("empty sample")]
    EmptySample,

    #[error("unknown {kind} `{name}`; expected one of: {}", candidates.join(", "))]
    UnknownName {
        kind: &'static str,
        name: String,
        candidates: Vec<String>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

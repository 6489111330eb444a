use thiserror::Error;

use crate::ac_model::AcError;
use crate::experiments::ExperimentError;
use crate::formats::FormatError;
use crate::geometry::GeometryError;
use crate::simulator::SimError;
use crate::synthesis::SynthesisError;

/// Top-level error, classified for process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Ac(#[from] AcError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

fn ac_code(e: &AcError) -> u8 {
    match e {
        AcError::PhaseNotQuantized { .. } | AcError::WindingOutOfRange { .. } => 3,
        AcError::Geometry(_) => 4,
        _ => 1,
    }
}

impl Error {
    /// 2 parse error, 3 quantization error, 4 geometry error, 1 anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Format(FormatError::Parse { .. }) => 2,
            Error::Format(FormatError::Invalid { source, .. }) => match source {
                AcError::InvalidSchedule(_) => 4,
                other => ac_code(other),
            },
            Error::Ac(e) => ac_code(e),
            Error::Geometry(_) => 4,
            Error::Synthesis(SynthesisError::Ac(e)) => ac_code(e),
            Error::Experiment(ExperimentError::Ac(e)) => ac_code(e),
            Error::Experiment(ExperimentError::Synthesis(SynthesisError::Ac(e))) => ac_code(e),
            Error::Experiment(ExperimentError::Geometry(_)) => 4,
            _ => 1,
        }
    }
}

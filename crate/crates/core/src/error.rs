use std::fmt;

use thiserror::Error;

/// Pipeline stage in which a [`Error::Stage`] failure occurred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Profile,
    Homogeneous,
    DphiDc,
    F1,
    Spectrum,
    Matrices,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Profile => "profile",
            Stage::Homogeneous => "homogeneous",
            Stage::DphiDc => "dphi_dc",
            Stage::F1 => "f1",
            Stage::Spectrum => "spectrum",
            Stage::Matrices => "matrices",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// A derivative or boundary formula hit a vanishing denominator.
    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("integration failed at x = {at}: step size underflow")]
    Integration { at: f64 },

    /// A computed quantity violated an invariant it must satisfy (e.g. a
    /// solution that should be periodic is not).
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("no sign change of det(P) on the scan")]
    NoThreshold { scan: Vec<(f64, f64)> },

    #[error("stage {stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn at_stage(self, stage: Stage) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage { stage, source: Box::new(e) },
        }
    }

    /// The stage tag, if the error was raised inside the stability pipeline.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }

    /// Strips a stage wrapper, if any.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: Stage) -> Result<T> {
        self.map_err(|e| e.at_stage(stage))
    }
}

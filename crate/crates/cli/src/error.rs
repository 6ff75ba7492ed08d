use std::path::PathBuf;

use thiserror::Error;

use torigid_core::cohomology::CohomologyError;
use torigid_core::geometry::GeometryError;

use crate::doc::DocError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Document {
        path: PathBuf,
        #[source]
        source: DocError,
    },
    #[error("{path}: pair fails validation ({count} violations); run `torigid validate` for details")]
    InvalidPair { path: PathBuf, count: usize },
    #[error("bad --plane {0:?}: expected \"c1,...,cn;d\"")]
    Plane(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("search budget exhausted: {0}")]
    Budget(String),
}

impl CliError {
    /// Stable identifier printed on stderr next to the message.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "parse",
            CliError::Document { source, .. } => match source {
                DocError::FormatVersion(_) => "format-version",
                DocError::Integer(_) | DocError::Rational(_) => "parse",
                DocError::Dimension { .. } | DocError::Pair(_) | DocError::Linalg(_) => "dimension-mismatch",
                DocError::Geometry(_) => "geometry",
            },
            CliError::InvalidPair { .. } => "invalid-pair",
            CliError::Plane(_) => "bad-plane",
            CliError::Geometry(GeometryError::DimensionMismatch { .. }) => "dimension-mismatch",
            CliError::Geometry(_) => "geometry",
            CliError::Cohomology(_) => "cohomology",
            CliError::Budget(_) => "budget",
        }
    }
}

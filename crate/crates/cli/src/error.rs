use geomkit::GeomError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown catalog name {0:?}")]
    UnknownCatalogName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Geom(#[from] GeomError),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownCatalogName(_) => 2,
            CliError::Parse(_) => 4,
            CliError::Io { .. } => 4,
            CliError::Geom(e) => match e {
                GeomError::UnsupportedParameters(_) | GeomError::TooThin => 3,
                GeomError::InvalidSubgroupComplex(_) => 5,
                GeomError::NonSphericalResidue => 6,
                _ => 1,
            },
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

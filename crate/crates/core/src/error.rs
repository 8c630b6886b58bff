use thiserror::Error;

#[derive(Debug, Error)]
pub enum HerzError {
    #[error("unsupported dimension {0}: only n = 1 and n = 2 are implemented")]
    Dimension(usize),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("coefficient field has empty support")]
    EmptySupport,

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("truncation window: {0}")]
    Window(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("input does not decay at the box boundary: max boundary sample {boundary:e} exceeds {limit:e}")]
    BoundaryMass { boundary: f64, limit: f64 },

    #[error("construction invariant violated: {0}")]
    Construction(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HerzError>;

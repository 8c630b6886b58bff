use std::fmt::Display;

use herzlab::HerzError;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PARAMS: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }

    pub fn params(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARAMS, message: message.into() }
    }

    pub fn internal(e: impl Display) -> Self {
        CliError { code: EXIT_INTERNAL, message: e.to_string() }
    }

    pub fn context(self, what: impl Display) -> Self {
        CliError { message: format!("{what}: {}", self.message), ..self }
    }
}

impl From<HerzError> for CliError {
    fn from(e: HerzError) -> Self {
        let code = match e {
            HerzError::Parse(_) | HerzError::Io(_) | HerzError::Data(_) | HerzError::EmptySupport | HerzError::Degenerate(_) => {
                EXIT_INPUT
            }
            HerzError::Dimension(_)
            | HerzError::Inadmissible(_)
            | HerzError::Resolution(_)
            | HerzError::Window(_)
            | HerzError::BoundaryMass { .. } => EXIT_PARAMS,
            HerzError::Construction(_) => EXIT_INTERNAL,
        };
        CliError { code, message: e.to_string() }
    }
}

use alrfit_core::Error;

/// Process exit statuses; the values are part of the CLI contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    ReproductionFailure = 1,
    Input = 2,
    Numerical = 3,
    Usage = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Input,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Usage,
            message: message.into(),
        }
    }

    pub fn numerical(err: Error) -> Self {
        Self {
            code: ExitCode::Numerical,
            message: err.to_string(),
        }
    }

    /// Classifies a core error by origin: malformed data is an input error,
    /// anything else a numerical failure.
    pub fn from_core(err: Error) -> Self {
        if err.is_input_error() {
            Self::input(err.to_string())
        } else {
            Self::numerical(err)
        }
    }
}

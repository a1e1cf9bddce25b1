use qevo_core::QevoError;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Precondition(m) => write!(f, "precondition failed: {m}"),
        }
    }
}

impl From<QevoError> for CliError {
    fn from(e: QevoError) -> Self {
        match e {
            QevoError::InvalidSpec(_) | QevoError::InvalidDimension(_) | QevoError::DimensionMismatch { .. } => {
                CliError::Config(e.to_string())
            }
            _ if e.is_precondition() => CliError::Precondition(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Numeric(format!("cannot write {}: {e}", path.display()))
}

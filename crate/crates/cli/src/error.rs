use citex_core::CitexError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<CitexError> for CliError {
    fn from(e: CitexError) -> Self {
        match e {
            CitexError::Io { .. } | CitexError::UnknownFormat(_) => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

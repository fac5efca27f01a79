use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Precondition(String),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("malformed channel file: {0}")]
    ChannelFile(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) | CliError::Usage(_) => 2,
            CliError::UnknownCommand(_) => 64,
            CliError::ChannelFile(_) => 65,
            CliError::Io(_) | CliError::Compute(_) => 1,
        }
    }
}

impl From<psc_channels::Error> for CliError {
    fn from(e: psc_channels::Error) -> Self {
        match e {
            psc_channels::Error::InvalidParameter(m) => CliError::Precondition(m),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<psc_entropies::Error> for CliError {
    fn from(e: psc_entropies::Error) -> Self {
        match e {
            psc_entropies::Error::InvalidParameter(m) => CliError::Precondition(m),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<psc_degradable::Error> for CliError {
    fn from(e: psc_degradable::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<psc_converse::Error> for CliError {
    fn from(e: psc_converse::Error) -> Self {
        match e {
            psc_converse::Error::Precondition(m) | psc_converse::Error::InvalidCode(m) => CliError::Precondition(m),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<psc_symsdp::Error> for CliError {
    fn from(e: psc_symsdp::Error) -> Self {
        match e {
            psc_symsdp::Error::InvalidParameter(m) => CliError::Precondition(m),
            g @ psc_symsdp::Error::Guard(..) => CliError::Precondition(g.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

impl From<psc_matqi::Error> for CliError {
    fn from(e: psc_matqi::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

use std::fmt;

/// Anything that stops a command before it can print a verdict.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Exhausted(String),
    Hypothesis(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Exhausted(_) => 2,
            Failure::Hypothesis(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "error: {m}"),
            Failure::Exhausted(m) => write!(f, "search exhausted: {m}"),
            Failure::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
        }
    }
}

impl From<alignlab::Error> for Failure {
    fn from(e: alignlab::Error) -> Self {
        use alignlab::Error as E;
        match e {
            E::SearchExhausted { .. } => Failure::Exhausted(e.to_string()),
            E::Hypothesis(m) => Failure::Hypothesis(m),
            E::UnverifiedProper(_) => Failure::Hypothesis(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, Failure>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

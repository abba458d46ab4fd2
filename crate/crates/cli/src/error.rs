use std::fmt;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_GUARD: u8 = 2;
pub const EXIT_CONSISTENCY: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn consistency(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONSISTENCY,
            message: message.into(),
        }
    }
}

impl From<davkit::Error> for CliError {
    fn from(e: davkit::Error) -> Self {
        let code = if e.is_guard() {
            EXIT_GUARD
        } else if e.is_consistency() {
            EXIT_CONSISTENCY
        } else {
            EXIT_USAGE
        };
        let message = if e.is_guard() {
            format!("{e} (set DAVKIT_GUARD to raise the cap)")
        } else {
            e.to_string()
        };
        CliError { code, message }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_errors_map_to_exit_statuses() {
        let guard = davkit::Error::Guard {
            what: "ground-set cardinality",
            needed: 20,
            cap: 10,
        };
        assert_eq!(CliError::from(guard).code, EXIT_GUARD);
        assert_eq!(
            CliError::from(davkit::Error::Consistency("x".into())).code,
            EXIT_CONSISTENCY
        );
        assert_eq!(
            CliError::from(davkit::Error::InvalidArgument("x".into())).code,
            EXIT_USAGE
        );
        assert_eq!(CliError::from(davkit::Error::EmptySequence).code, EXIT_USAGE);
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad scenario, flags or parameters.
    #[error("{0}")]
    Input(String),
    /// A solver gave up on otherwise valid input.
    #[error("{label}: {source}")]
    Solver {
        label: String,
        #[source]
        source: fracsis::Error,
    },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("validation failed")]
    Validation,
}

impl CliError {
    /// Attaches a scenario label; parameter-level errors count as input errors.
    pub fn from_solver(label: &str, err: fracsis::Error) -> Self {
        use fracsis::Error as E;
        match err {
            E::InvalidParameter { .. } | E::Assumption(_) | E::Domain(_) => {
                CliError::Input(format!("{label}: {err}"))
            }
            source => CliError::Solver {
                label: label.to_owned(),
                source,
            },
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// 1 validation failure, 2 input error, 3 solver or output failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation => 1,
            CliError::Input(_) => 2,
            CliError::Solver { .. } | CliError::Io { .. } => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Validation.exit_code(), 1);
        assert_eq!(
            CliError::from_solver("x", fracsis::Error::Domain("d".into())).exit_code(),
            2
        );
        let e = CliError::from_solver("x", fracsis::Error::NonConvergence { t: 1.0, y: 2.0 });
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().starts_with("x: "));
    }
}

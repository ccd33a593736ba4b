use thiserror::Error;

use crate::sis::Trajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// One of the Caputo-Fabrizio model assumptions does not hold.
    #[error("assumption violated: {0}")]
    Assumption(String),

    /// The explicit scheme left the region `S + I > 0`. `partial` holds the
    /// samples computed before the failing step.
    #[error("population collapse at step {step}: S + I = {total}")]
    PopulationCollapse {
        step: usize,
        total: f64,
        partial: Box<Trajectory<f64>>,
    },

    #[error("right-hand side failed at step {step}: {source}")]
    Field {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("step size underflow at t = {t} (y = {y})")]
    StepUnderflow { t: f64, y: f64 },

    #[error("maximum number of steps ({max_steps}) exceeded at t = {t} (y = {y})")]
    MaxStepsExceeded { max_steps: usize, t: f64, y: f64 },

    #[error("implicit solve did not converge at t = {t} (y = {y})")]
    NonConvergence { t: f64, y: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

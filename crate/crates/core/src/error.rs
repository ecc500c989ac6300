use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix factorization broke down (or came too close to breaking
    /// down) at the working precision.
    #[error("conditioning error at pivot {pivot}: {message}")]
    Conditioning { pivot: usize, message: String },

    /// A quadrature did not reach its accuracy target.
    #[error("accuracy error: achieved relative error estimate {achieved:e}, target {target:e}")]
    Accuracy { achieved: f64, target: f64 },

    #[error("parse error at position {position}: {message}\n  {input}\n  {caret:>width$}", caret = "^", width = position + 1)]
    Parse {
        input: String,
        position: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Conditioning { .. } | Error::Accuracy { .. } => 2,
            _ => 1,
        }
    }
}

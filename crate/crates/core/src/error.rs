//! Error type shared by every module in the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building a sheet description or
/// evaluating the force model.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition (non-positive
    /// dimension, displacement out of range, empty table, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A name lookup failed; `available` lists what would have matched.
    #[error("unknown {kind} `{name}` (available: {})", available.join(", "))]
    NotFound {
        kind: &'static str,
        name: String,
        available: Vec<String>,
    },

    /// An iterative solve did not reach its tolerance. `residual` is the
    /// quantity the solver was trying to drive to zero, in its natural
    /// units, so callers can judge how badly it missed.
    #[error("{context}: failed to converge (residual {residual:.3e})")]
    NumericalFailure {
        context: &'static str,
        residual: f64,
    },

    /// A tabular input file could not be parsed. `row` is the 1-based line
    /// number in the file (the header is line 1).
    #[error("malformed table row {row}: {message}")]
    Format { row: usize, message: String },

    /// A configuration file could not be read or parsed.
    #[error("config {path}: {message}", path = .path.display())]
    Config { path: PathBuf, message: String },

    /// Underlying file I/O failure.
    #[error("{path}: {source}", path = .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Wraps another error with the component or operating point that was
    /// being evaluated when it occurred.
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attach a component name or operating point to an existing error.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True if the root cause is a solver that failed to converge (as
    /// opposed to bad input or I/O). The CLI uses this to pick exit codes.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NumericalFailure { .. } => true,
            Error::Context { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

/// Extension trait so call sites can write `result.context("...")`.
pub trait ResultExt<T> {
    /// Wrap the error, if any, with the given context string.
    fn context(self, context: impl Into<String>) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn context(self, context: impl Into<String>) -> Result<T> {
        self.map_err(|e| e.context(context))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn not_found_lists_alternatives() {
        let err = Error::NotFound {
            kind: "material",
            name: "nylon".into(),
            available: vec!["PET".into(), "TPU".into()],
        };
        assert_eq!(
            err.to_string(),
            "unknown material `nylon` (available: PET, TPU)"
        );
    }

    #[test]
    fn context_chains_and_preserves_numerical_flag() {
        let inner = Error::NumericalFailure {
            context: "half-width solve",
            residual: 1.0e-3,
        };
        let wrapped = inner.context("displacement 0.010 m");
        assert!(wrapped.is_numerical());
        assert!(wrapped.to_string().starts_with("displacement 0.010 m: "));

        let usage = Error::InvalidArgument("radius must be positive".into());
        assert!(!usage.context("sheet A").is_numerical());
    }
}

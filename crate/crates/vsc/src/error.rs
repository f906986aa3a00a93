//! Error type shared across the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, VscError>;

/// All the ways library operations can fail.
#[derive(Debug, Error)]
pub enum VscError {
    /// Dimension or shape mismatch between inputs.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A NaN or infinity showed up where only finite values are allowed.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// An invalid parameter value (out of range, zero where positive
    /// required, and so on).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A linear system was singular or numerically indefinite.
    #[error("linear system is singular or not positive definite")]
    Singular,

    /// A numeric post-condition failed (for example the solve residual
    /// exceeded its bound).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A class required for fitting has no members in the training data.
    #[error("training data contains no samples with label {0:+}")]
    ClassMissing(i32),

    /// The two points of a pair coincide (within tolerance), so no
    /// separating hyperplane exists.
    #[error("degenerate pair: points coincide within tolerance")]
    DegeneratePair,

    /// Pair sampling kept drawing degenerate pairs and gave up.
    #[error("pair sampling failed: {attempts} consecutive draws were degenerate")]
    SamplingExhausted { attempts: usize },

    /// A text input (dataset file or record stream) could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A categorical feature column was found where only numeric features
    /// are supported.
    #[error("categorical attribute '{0}' is not supported as a feature")]
    Categorical(String),

    /// Inputs that must describe the same experiment disagree.
    #[error("mismatched inputs: {0}")]
    Mismatch(String),

    /// A cross-validation fold failed; wraps the underlying error.
    #[error("fold {fold} failed: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<VscError>,
    },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn messages_are_informative() {
        let err = VscError::Parse {
            line: 12,
            msg: "bad number".into(),
        };
        assert_eq!(err.to_string(), "parse error at line 12: bad number");

        let err = VscError::ClassMissing(1);
        assert!(err.to_string().contains("+1"));

        let err = VscError::Fold {
            fold: 3,
            source: Box::new(VscError::Singular),
        };
        assert!(err.to_string().starts_with("fold 3 failed"));
    }
}

use thiserror::Error;

/// Errors raised anywhere in the elimination pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("context error: {0}")]
    Context(String),

    /// An ordering atom with a non-real side was found in strict mode.
    #[error("ordering atom with a non-real side: {0}")]
    Realness(String),

    #[error("variable `{variable}` occurs with degree > 2 in `{atom}`")]
    DegreeTooHigh { variable: String, atom: String },

    #[error("backend error: {0}")]
    Backend(String),

    #[error("backend timed out after {0} s")]
    Timeout(u64),

    #[error("auxiliary name `{0}` collides with a user variable")]
    NameCollision(String),

    #[error("cost graph expects real equations: {0}")]
    Shape(String),

    #[error("decision did not simplify to T or F: {0}")]
    IncompleteSimplification(String),

    #[error("input is not a sentence, free variables: {0}")]
    FreeVariable(String),

    #[error("problem file: {0}")]
    ProblemFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn syntax(text: &str, offset: usize, message: impl Into<String>) -> Self {
        let before = &text[..offset.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for failures of the real elimination step rather than of the input.
    pub fn is_backend_failure(&self) -> bool {
        matches!(
            self,
            Error::DegreeTooHigh { .. } | Error::Backend(_) | Error::Timeout(_)
        )
    }
}

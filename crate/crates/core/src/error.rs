use thiserror::Error;

/// Errors raised across the library.
///
/// The CLI maps `Precondition`-style variants to exit code 2 and
/// `PrecisionExhausted` to exit code 3.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degree {requested} exceeds truncation bound {bound}")]
    BoundOverflow { requested: u32, bound: u32 },
    #[error("precision exhausted at ({s},{t}): torsion of order p^{k} or beyond detected; raise the precision")]
    PrecisionExhausted { s: u32, t: u32, k: u32 },
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("field is not Tate-orientable at p={0}")]
    NotTateOrientable(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("lookup outside table window: {0}")]
    OutsideWindow(i64),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CoreError {
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            CoreError::Precondition(_)
                | CoreError::BoundOverflow { .. }
                | CoreError::PrimeMismatch(..)
                | CoreError::NotTateOrientable(_)
                | CoreError::Unsupported(_)
                | CoreError::OutsideWindow(_)
                | CoreError::UnknownName(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;

pub(crate) fn pre<T>(msg: impl Into<String>) -> Result<T> {
    Err(CoreError::Precondition(msg.into()))
}

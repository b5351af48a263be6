use alloc::string::String;

/// Errors raised by the exact computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Shapes do not fit together (dimension or length mismatch, bad index).
    #[error("structural error: {0}")]
    Structural(String),
    /// Input is well formed but outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A verification that must hold by construction failed.
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

macro_rules! structural {
    ($($arg:tt)*) => { $crate::Error::Structural(alloc::format!($($arg)*)) };
}
macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! inconsistent {
    ($($arg:tt)*) => { $crate::Error::Inconsistent(alloc::format!($($arg)*)) };
}
pub(crate) use {domain, inconsistent, structural};

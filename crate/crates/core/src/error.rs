//! Error type shared by all modules.

/// Alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or checking a finite model.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Two objects that must share a carrier do not.
    #[error("carrier mismatch: expected size {expected}, found {found}")]
    CarrierMismatch { expected: usize, found: usize },

    /// An element index points outside its carrier.
    #[error("index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    /// An enumeration or search would exceed its explicit budget.
    #[error("size cap exceeded: {what} needs {required}, cap is {cap}")]
    SizeCapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    /// A structure failed its construction-time laws.
    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    /// A theorem-level precondition does not hold for the given input.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// A textual input (rig table, family literal) could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True when the error reports a sizing budget, as opposed to bad input.
    pub fn is_sizing(&self) -> bool {
        matches!(self, Error::SizeCapExceeded { .. })
    }
}

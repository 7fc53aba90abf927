use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("modulus is not irreducible over F_{p}")]
    NotIrreducible { p: u32 },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("{what}: estimated size {estimate} exceeds cap {cap}")]
    CapExceeded { what: String, estimate: u128, cap: u128 },
    #[error("form parameters differ")]
    ParameterMismatch,
    #[error("invalid form parameters: {0}")]
    InvalidParameters(String),
    #[error("radical is not an F-subspace")]
    RadicalNotSubspace,
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("Z0 is not an isotropic subspace meeting U-perp trivially")]
    BadZ0,
    #[error("formed space is degenerate")]
    Degenerate,
    #[error("witness does not fit: {0}")]
    WitnessMismatch(String),
    #[error("rescaling factor must be nonzero")]
    BadAlpha,
    #[error("not an element of the building: {0}")]
    NotInBuilding(String),
    #[error("poset is not graded: {0}")]
    NotGraded(String),
    #[error("poset is not Cohen-Macaulay: {0}")]
    NotCohenMacaulay(String),
    #[error("matrix does not permute the poset")]
    NotAnAutomorphism,
    #[error("group does not act on the poset")]
    NotAnAction,
    #[error("group element list unavailable")]
    ElementsUnavailable,
    #[error("exact sequence check failed: {0}")]
    SequenceBroken(String),
    #[error("integer entries outgrew 64 bits in {0}")]
    Overflow(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn cap_check(what: &str, estimate: u128, cap: u128) -> Result<()> {
    if estimate > cap {
        return Err(Error::CapExceeded { what: what.to_string(), estimate, cap });
    }
    Ok(())
}

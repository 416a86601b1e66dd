use thiserror::Error;

/// Domain errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CapExceeded { what: String, size: u64, cap: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("the finite model degenerates for m = 1 (the group is abelian)")]
    DegenerateModel,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("form is not even: q{elt:?} != q(-{elt:?})")]
    NotEven { elt: Vec<u64> },
    #[error("associated pairing is not biadditive at {a:?}, {b:?}, {c:?}")]
    NotBilinear { a: Vec<u64>, b: Vec<u64>, c: Vec<u64> },
    #[error("form is degenerate; radical has order {}", radical.len())]
    Degenerate { radical: Vec<Vec<u64>> },
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("section is not valid: {0}")]
    SectionInvalid(String),
    #[error("no lift of group element {0} satisfies the triviality condition")]
    EmptyFiber(usize),
    #[error("lift is not valid: {0}")]
    LiftInvalid(String),
    #[error("S-matrix is singular")]
    SingularS,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable code used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NotPrime(_) => "NotPrime",
            Error::DegenerateModel => "DegenerateModel",
            Error::NotASubgroup(_) => "NotASubgroup",
            Error::NotEven { .. } => "NotEven",
            Error::NotBilinear { .. } => "NotBilinear",
            Error::Degenerate { .. } => "Degenerate",
            Error::NotIsotropic => "NotIsotropic",
            Error::NotACocycle(_) => "NotACocycle",
            Error::SectionInvalid(_) => "SectionInvalid",
            Error::EmptyFiber(_) => "EmptyFiber",
            Error::LiftInvalid(_) => "LiftInvalid",
            Error::SingularS => "SingularS",
            Error::Invalid(_) => "Invalid",
            Error::Unsupported(_) => "Unsupported",
        }
    }

    pub(crate) fn cap(what: &str, size: u64, cap: u64) -> Self {
        Error::CapExceeded { what: what.to_string(), size, cap }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

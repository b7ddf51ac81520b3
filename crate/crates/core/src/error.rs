use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid family arguments: {0}")]
    FamilyArguments(String),
    #[error("{0} is not a unit of the coefficient ring")]
    NotAUnit(String),
    #[error("duplicate entry: {0}")]
    Duplicate(String),
    #[error("ill-formed presentation: {0}")]
    IllFormed(String),
    #[error("rewrite budget of {0} steps exceeded")]
    RewriteBudget(usize),
    #[error("elements belong to different presentations")]
    MixedPresentations,
    #[error("element is not in the subalgebra R_{0}")]
    NotInSubalgebra(usize),
    #[error("negative power of polynomial generator `{0}`")]
    NegativePower(String),
    #[error("q-binomial ({n} choose {i}) needs i <= n")]
    BinomialRange { n: u64, i: u64 },
    #[error("cannot localize at `{0}`: {1}")]
    NotAdmissible(String, String),
    #[error("adjoint iteration did not close within {0} steps")]
    DegreeCap(usize),
    #[error("minimal polynomial has a root outside the candidate set: {0}")]
    RootNotFound(String),
    #[error("Ad is not diagonalizable: repeated root {0}")]
    RepeatedRoot(String),
    #[error("lattice is not a direct summand: {0}")]
    NotDirectSummand(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("specialization error: {0}")]
    Specialization(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

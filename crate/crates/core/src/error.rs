use thiserror::Error;

/// Errors shared by all modules of the crate.
///
/// Verification *failures* (a connection violating an axiom, a gluing
/// family violating the cocycle condition, ...) are not errors; they are
/// reported as values by the corresponding check. Errors signal malformed
/// inputs or violated preconditions.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("multiplication table is not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),

    #[error("unit axiom fails at basis vector {0}")]
    UnitAxiom(usize),

    #[error("subspace is not a two-sided ideal (basis vector {0} escapes under multiplication)")]
    NotAnIdeal(usize),

    #[error("linear map is not multiplicative at basis pair ({0}, {1})")]
    NotMultiplicative(usize, usize),

    #[error("linear map does not preserve the unit")]
    NotUnital,

    #[error("map is not surjective")]
    NotSurjective,

    #[error("map is not colinear")]
    NotColinear,

    #[error("coalgebra axiom fails: {0}")]
    CoalgebraAxiom(String),

    #[error("coaction axiom fails: {0}")]
    CoactionAxiom(String),

    #[error("element is not group-like")]
    NotGroupLike,

    #[error("Hopf algebra is not co-commutative")]
    NotCocommutative,

    #[error("antipode is not bijective")]
    AntipodeNotBijective,

    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),

    #[error("subspace containment violated")]
    ContainmentViolated,

    #[error("subspace is not a unital subalgebra")]
    NotASubalgebra,

    #[error("lattice closure incomplete after {0} elements")]
    ClosureIncomplete(usize),

    #[error("subspace family does not generate a distributive lattice")]
    NotDistributive,

    #[error("empty preimage: no section value exists inside the designated subspace")]
    EmptyPreimage,

    #[error("linear system is inconsistent")]
    Inconsistent,

    #[error("splitting identity pi . section = id fails")]
    NotASplitting,

    #[error("section precondition fails: image of kernel escapes the kernel (pair ({0}, {1}), third index {2})")]
    KernelConditionViolated(usize, usize, usize),

    #[error("gluing family is invalid: {0}")]
    InvalidGluingFamily(String),

    #[error("pullback membership fails for the constructed tuple")]
    NotInPullback,

    #[error("connection verification failed: {0}")]
    ConnectionInvalid(String),

    #[error("legs of the connection are linearly dependent; projector construction declined")]
    DependentLegs,

    #[error("cutoff too small: need at least {0}")]
    CutoffTooSmall(usize),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

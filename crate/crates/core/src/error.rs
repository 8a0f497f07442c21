//! Error types for the crate, grouped by subsystem.

use thiserror::Error;

/// Errors from exact arithmetic and symbolic linear algebra.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("linear system is singular (determinant vanishes identically)")]
    SingularSystem,
    #[error("variable list mismatch: {0}")]
    VariableMismatch(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("substitution assigns `{0}` but the replacement still mentions an assigned variable")]
    SubstitutionOverlap(String),
    #[error("denominator vanishes at the evaluation point")]
    EvalDivisionByZero,
    #[error("expression error at {line}:{col}: {msg}")]
    Expr { line: usize, col: usize, msg: String },
}

/// Errors from the reaction-network text format.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NetworkError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("network has no reactions")]
    EmptyNetwork,
    #[error("duplicate reaction `{0}` (same reactant and product)")]
    DuplicateReaction(String),
    #[error("duplicate rate symbol `{0}`")]
    DuplicateRateSymbol(String),
    #[error("duplicate species `{0}`")]
    DuplicateSpecies(String),
    #[error("reaction `{0}` has identical reactant and product")]
    SelfLoop(String),
    #[error("invalid stoichiometric coefficient in `{0}` (must be a positive integer)")]
    BadStoichiometry(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("species `{one}` and `{two}` collide as concentration variable `{var}`")]
    VariableCollision { one: String, two: String, var: String },
}

/// Errors from intermediate validation and the reduction pipeline.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("species `{0}` is not itself a complex of the network")]
    NotAComplex(String),
    #[error("species `{0}` occurs in a complex other than itself")]
    NonzeroCoefficientElsewhere(String),
    #[error("species `{0}` is not the product of any reaction")]
    NoInflow(String),
    #[error("species `{0}` is not the reactant of any reaction")]
    NoOutflow(String),
    #[error("the linear system of the intermediates is singular")]
    SingularIntermediateSystem,
    #[error("spanning-tree enumeration cap exceeded: {count} intermediates > cap {cap}")]
    TreeCapExceeded { count: usize, cap: usize },
    #[error("some phi value is identically zero; the core network does not extend to this network")]
    ZeroPhi(String),
}

/// Errors from monomial orders and the Groebner engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroebnerError {
    #[error("matrix does not define a monomial order: {0}")]
    InvalidOrderMatrix(String),
    #[error("order is not of elimination type for the requested variable split")]
    NotEliminationOrder,
    #[error("computation exceeded the deadline")]
    Timeout,
}

/// Errors from the lifting pipelines and the independence gate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("algebraic independence of the phi functions has not been verified; run the independence check or force with assume-independent")]
    IndependenceNotVerified,
    #[error("keep set contains the intermediate `{0}`")]
    KeepContainsIntermediate(String),
    #[error("unknown variable `{0}` in keep set")]
    UnknownVariable(String),
    #[error("elimination-ideal independence check cap exceeded: {count} functions > cap {cap}")]
    ElimCapExceeded { count: usize, cap: usize },
    #[error("a coefficient denominator vanished under phi; the phi values are algebraically dependent")]
    PhiIllDefined,
}

/// Top-level error, the union of the subsystem errors.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

use alloc::string::String;

/// Errors shared across the crate.
///
/// Axiom failures found by the checker are collected in a
/// [`Report`](crate::graph::Report) rather than returned through this type.
/// The `AxiomViolation` variant here is reserved for operations that assume
/// a valid graph and discover mid-flight that the assumption does not hold.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A ray was requested for the zero vector.
    #[error("zero vector does not span a ray")]
    ZeroRay,

    /// Mismatched vector, matrix, or graph dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    /// Quotient of a ray proportional to the modulus.
    #[error("ray is proportional to the quotient modulus")]
    DegenerateProjection,

    /// The operation needs an interior vertex.
    #[error("vertex {0} is not interior")]
    BoundaryVertex(u32),

    /// A walk or search left the materialized window.
    #[error("computation left the materialized window")]
    OutOfWindow,

    /// The graph violates a realization axiom.
    #[error("axiom violation: {0}")]
    AxiomViolation(String),

    /// A braid move does not cut out a polygon half at its position.
    #[error("invalid braid move: {0}")]
    InvalidMove(String),

    /// Certificate inputs are not a pair of shortest paths with common ends.
    #[error("paths are not a shortest pair with common endpoints")]
    NotShortestPair,

    /// An enumeration exceeded its configured cap.
    #[error("exploration cap exceeded")]
    CapExceeded,

    /// Holonomy was requested for a walk that is not closed.
    #[error("walk is not closed")]
    NotClosed,

    /// A chamber fan failed structural validation.
    #[error("bad fan: {0}")]
    BadFan(String),

    /// Structurally invalid input data.
    #[error("parse: {0}")]
    Parse(String),

    /// A matrix violating the Coxeter constraints.
    #[error("bad Coxeter matrix: {0}")]
    BadCoxeterMatrix(String),

    /// A matrix violating the Cartan constraints.
    #[error("bad Cartan matrix: {0}")]
    BadCartanMatrix(String),

    /// Two distinct elements collapsed onto one canonical key.
    /// Only reachable with the float backend.
    #[error("key collision: {0}")]
    KeyCollision(String),

    /// A polygon with an odd number of edges was requested.
    #[error("a polygon realization needs an even number of edges")]
    OddPolygon,
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants fall into three groups: malformed input (dimension or shape
/// mismatches, invalid groups and homomorphisms), mathematically unsupported
/// input (degenerate or nonorientable pairs, boundary coincidences), and
/// identity failures, which indicate a bug and are never expected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("elements belong to different groups: {0}")]
    MismatchedGroups(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("not a homomorphism: {0}")]
    InvalidHom(String),

    #[error("sublattice is not invariant: {0}")]
    NotInvariant(String),

    #[error("containment failure: {0}")]
    Containment(String),

    #[error("degenerate pair: holonomy sector {sector} has det = 0")]
    Degenerate { sector: usize },

    #[error("nonorientable manifold rejected: {0}")]
    Nonorientable(String),

    #[error("coincidence point {0} lies on the region boundary; perturb the region")]
    Boundary(String),

    #[error("not a coincidence point: {0}")]
    NotCoincidence(String),

    #[error("Reidemeister set is infinite: {0}")]
    Infinite(String),

    #[error("exact division by {divisor} left a remainder in coefficient of {class}")]
    DivisionRemainder { divisor: u64, class: String },

    #[error("identity failure: {0}")]
    IdentityFailure(String),

    #[error("index table mismatch: {0}")]
    IndexTable(String),

    #[error("unknown catalog entry '{0}'")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

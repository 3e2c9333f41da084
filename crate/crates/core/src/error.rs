use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Input or configuration rejected.
    Validation,
    /// A numerical procedure failed (budget, conditioning, ambiguity).
    Numeric,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate arc: {0}")]
    DegenerateArc(String),
    #[error("point outside the extension domain of piece {0}")]
    OutsidePieceDomain(usize),
    #[error("break-point set is not forward invariant: f({0}) = {1}")]
    NotInvariant(f64, f64),
    #[error("map is not injective on arc {0}")]
    NotInjectiveOnPiece(usize),
    #[error("point {0} is not periodic")]
    NotPeriodic(f64),
    #[error("fixed-point classification unstable: {0}")]
    ClassificationUnstable(String),
    #[error("incompatible Markov partitions: {0}")]
    IncompatiblePartitions(String),
    #[error("refinement budget of {0} levels exceeded")]
    RefinementBudgetExceeded(usize),
    #[error("angle {0} is not a break point")]
    NotBreakPoint(f64),
    #[error("normalisation impossible: {0}")]
    NormalizationImpossible(String),
    #[error("inversion centre hit")]
    PoleAtCenter,
    #[error("circles {0} and {1} have overlapping interiors")]
    OverlappingInteriors(String, String),
    #[error("circles {0} and {1} intersect transversally")]
    TransversalIntersection(String, String),
    #[error("ill-conditioned root problem: residual {0:e}")]
    IllConditioned(f64),
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("map is not univalent on the stated side: {0}")]
    NotUnivalent(String),
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("two preimages on the domain side (boundary double point)")]
    AmbiguousRoot,
    #[error("domains {0} and {1} overlap")]
    OverlappingDomains(usize, usize),
    #[error("finite-difference stencil leaves the disk")]
    StencilOutOfDomain,
    #[error("critical point {0} is off the unit circle (|z| = {1})")]
    CriticalPointsOffCircle(usize, f64),
    #[error("not a Suffridge map: expected {expected} double points, found {found}")]
    NotSuffridge { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotPeriodic(_)
            | Error::ClassificationUnstable(_)
            | Error::RefinementBudgetExceeded(_)
            | Error::PoleAtCenter
            | Error::IllConditioned(_)
            | Error::AmbiguousRoot
            | Error::StencilOutOfDomain => ErrorKind::Numeric,
            _ => ErrorKind::Validation,
        }
    }
}

//! Exact symbolic computation in square-root Chekhov-Fock algebras.
//!
//! The crate models ideal triangulations of marked surfaces, the quantum
//! torus algebra attached to the exchange matrix of a triangulation, and
//! quantized trace-of-monodromy elements for simple loops. On top of that
//! it provides verifiers for Teschner recursion relations, algebraic strong
//! commutativity, and flip naturality under quantum coordinate changes.
//!
//! All arithmetic is exact: coefficients live in `Z[omega^{+-1}]` with
//! big-integer coefficients, and the linear algebra used for span
//! containment runs over exact rationals.

pub mod catalog;
pub mod lattice;
pub mod loops;
pub mod mutation;
pub mod omega;
pub(crate) mod par;
pub mod surface;
pub mod teschner;
pub mod torus;
pub mod trace;

pub use lattice::{LatticeVec, SkewLattice};
pub use loops::{Classification, LoopPosition, Turn};
pub use omega::OmegaPoly;
pub use surface::Triangulation;
pub use torus::QTorusElement;

use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit-code contract:
/// invalid input vs. documented refusals of unsupported cases.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown arc `{0}` in this lattice")]
    UnknownArc(String),
    #[error("elements live on different lattices")]
    LatticeMismatch,
    #[error("invalid triangulation: {}", format_diagnostics(.0))]
    InvalidSurface(Vec<surface::Diagnostic>),
    #[error("invalid loop position: {0}")]
    InvalidLoop(String),
    #[error("segment {segment} lies in a self-folded triangle; unsupported")]
    SelfFoldedSegment { segment: usize },
    #[error("flip at `{arc}` unsupported: {reason}")]
    UnsupportedFlip { arc: String, reason: String },
    #[error("state-sum refused: {pairs} admissible state pairs share an exponent vector (e.g. {example})")]
    RedundantStates { pairs: usize, example: String },
    #[error("too many junctures for exhaustive enumeration: {0} > 24")]
    TooManyJunctures(usize),
    #[error("closed form only covers peripheral and almost-peripheral loops")]
    UnsupportedClosedForm,
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("denominator degree {got} too small, need at least {need}")]
    DenominatorTooSmall { need: u32, got: u32 },
    #[error("omega exponent overflow")]
    ExponentOverflow,
}

fn format_diagnostics(ds: &[surface::Diagnostic]) -> String {
    ds.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for the documented refusals (CLI exit code 3), false for
    /// malformed input (exit code 2).
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            Error::SelfFoldedSegment { .. }
                | Error::RedundantStates { .. }
                | Error::TooManyJunctures(_)
                | Error::UnsupportedClosedForm
                | Error::UnsupportedFlip { .. }
        )
    }
}

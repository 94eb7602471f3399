//! Presentations of the fundamental group of a compact Riemann surface given
//! as a branched cover of the sphere by its monodromy.
//!
//! The pipeline runs: validate the branch tuple ([`monodromy`]), pick coset
//! representatives and Reidemeister–Schreier generators ([`schreier`]), add
//! one relator per ramification point and eliminate generators
//! ([`presentation`]), then collect the surviving relator into a product of
//! commutators ([`canonicalize`]). [`verify`] checks every stage
//! independently.

pub mod canonicalize;
pub mod monodromy;
pub mod permutations;
pub mod pipeline;
pub mod presentation;
pub mod schreier;
pub mod verify;
pub mod words;

pub use canonicalize::{CanonicalError, CanonicalSurfaceForm, CommutatorPair};
pub use monodromy::{MonodromyData, MonodromyError, TrivialBranches};
pub use permutations::{Cycle, Permutation, PermutationError};
pub use pipeline::{run, PipelineOptions, PipelineOutput};
pub use presentation::{Presentation, PresentationError, Relator, TietzeMove};
pub use schreier::{RsBasis, RsGenerator, SchreierError, SchreierTable, Strategy};
pub use verify::{smith_normal_form, verify_all, IntegerMatrix, SmithForm, VerificationReport};
pub use words::{commutator, Letter, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Permutation(#[from] PermutationError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error(transparent)]
    Schreier(#[from] SchreierError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
}

impl Error {
    /// Whether the error describes bad input rather than an internal inconsistency.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Permutation(_) | Error::Monodromy(_))
    }
}

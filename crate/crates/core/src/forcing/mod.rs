//! Forcing properties over finite posets of conditions: forcing and weak
//! forcing, generic ideals, generic models and semantic forcing.

mod congruence;
mod forces;
mod generic;
mod property;
mod random;
mod semantic;
mod universe;
mod validate;

pub use congruence::CongruenceClosure;
pub use forces::{forces, weakly_forces, Forced, Forcer, SearchBounds};
pub use generic::{
    atomic_pool, decision_closure, extend_to_generic, generic_model, ideal_forces, ideal_top, validate_generic, Decision,
    GenericIdeal, TermQuotientModel,
};
pub use property::{Condition, ForcingError, ForcingProperty};
pub use random::{random_forcing_property, ForcingGenConfig};
pub use semantic::{build_semantic_forcing, compare_sfp, ModelClass, SemanticConfig, SemanticForcing, SfpCause, SfpMismatch, SfpReport};
pub use universe::{ground_terms, Universe};
pub use validate::{atomic_consequences, atoms_over, is_forcing_atom, validate_forcing_property};

#[cfg(test)]
mod tests;

//! Reachable, constructor-based and finite-sort model classes, bounded
//! semantic consequence, and the (CB)/(FN) rule checkers.

mod derivation;
mod entails;
mod gamma;
mod reach;

pub use derivation::{check_derivation, Derivation, Rule, Step};
pub use entails::{
    cb_premise, check_cb_instance, check_fn_instance, ctor_terms, find_class_model, prefix_size, semantic_entails,
    EntailConfig, InstanceReport, PremiseRow, Verdict,
};
pub use gamma::gamma_sentence;
pub use reach::{is_constructor_based, is_reachable, loose_variable, ClassError, Generation};

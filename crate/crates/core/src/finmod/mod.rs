//! Finite transition algebras, the satisfaction relation and bounded model
//! enumeration.

mod enumerate;
mod eval;
mod model;
mod relation;

pub use enumerate::{
    collect_models, element_name, enumerate_models, find_model, EnumError, EnumOptions, EnumStats, SizeBounds,
};
pub use eval::{
    eval_action, eval_ground, eval_term_in, satisfies, satisfies_all, try_satisfies, try_satisfies_with, ActionTable,
    Compiled, EvalError, Interp, Truth,
};
pub use model::{validate_model, FiniteModel, ModelError, Valuation};
pub use relation::Relation;

#[cfg(test)]
mod tests;

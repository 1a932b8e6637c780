//! Signature morphisms, sentence translation, model reducts and
//! substitutions.

mod morphism;
mod substitution;

pub use morphism::{check_morphism, reduct_model, restrict, translate_sentence, Flavor, SignatureMorphism};
pub use substitution::{apply_substitution, check_substitution, reduct_along_substitution, Substitution};

#[cfg(test)]
mod tests;

//! The `.ta` text format: lexer, parser with name resolution, and a printer
//! whose output parses back to the same declarations.

mod check;
mod error;
mod lexer;
mod parse;
mod print;
mod spec;

pub use check::check_spec;
pub use error::{SourceSpan, SurfaceError};
pub use lexer::is_plain_ident;
pub use parse::{parse_sentence, parse_sentence_in, parse_spec, parse_spec_named, parse_term};
pub use print::{print_action, print_model, print_sentence, print_sentence_in, print_signature, print_spec, print_term};
pub use spec::{
    ForcingDecl, GoalDecl, ModelDecl, MorphismDecl, ProofDecl, SpecFile, SubstDecl, TheoryDecl, TypeDecl,
};

#[cfg(test)]
mod tests;

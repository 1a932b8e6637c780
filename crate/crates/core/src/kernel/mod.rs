//! Signatures, terms, actions and sentences, with well-formedness checks.

mod check;
mod names;
mod report;
mod signature;
mod syntax;

pub use check::{check_action, check_sentence, check_sentence_in, sort_of_term, KernelError};
pub use names::{Label, Op, OpDecl, Sort};
pub use report::{ValidationReport, Violation};
pub use signature::{check_signature, Signature};
pub use syntax::{fresh_name, Action, Sentence, Term, Variable};

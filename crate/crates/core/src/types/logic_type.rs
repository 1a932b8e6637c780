use crate::kernel::{check_sentence_in, Sentence, Signature, ValidationReport, Variable};

/// A type: sentences over `Σ[X]` for a finite variable block `X`. The
/// variables of `X` occur free in the sentences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicType {
    pub sig: Signature,
    pub block: Vec<Variable>,
    pub sentences: Vec<Sentence>,
}

impl LogicType {
    pub fn new(sig: Signature, block: Vec<Variable>, sentences: Vec<Sentence>) -> Self {
        let sentences = sentences.into_iter().map(|s| s.normalize()).collect();
        LogicType { sig, block, sentences }
    }

    pub fn check(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (i, v) in self.block.iter().enumerate() {
            if !self.sig.has_sort(&v.sort) {
                report.push("type block", format!("variable {} has undeclared sort {}", v.name, v.sort));
            }
            if self.block[..i].iter().any(|w| w.name == v.name) {
                report.push("type block", format!("variable name {} declared twice", v.name));
            }
        }
        for (i, s) in self.sentences.iter().enumerate() {
            report.absorb(&format!("sentence {}", i + 1), check_sentence_in(&self.sig, &self.block, s));
        }
        report
    }
}

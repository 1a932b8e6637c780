use crate::classes::check_derivation;
use crate::finmod::validate_model;
use crate::forcing::{validate_forcing_property, SearchBounds};
use crate::institution::{check_morphism, check_substitution, Flavor};
use crate::kernel::{check_sentence, check_signature, ValidationReport};

use super::SpecFile;

/// Well-formedness of every declaration in a file. Morphisms are checked
/// in the plain flavor, forcing properties with the given search bounds.
pub fn check_spec(spec: &SpecFile, forcing: &SearchBounds) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (name, sig) in &spec.signatures {
        report.absorb(&format!("sig {name}"), check_signature(sig));
    }
    for (name, d) in &spec.models {
        report.absorb(&format!("model {name}"), validate_model(&d.model));
    }
    for (name, t) in &spec.theories {
        let sig = &spec.signatures[&t.sig];
        for (n, s) in &t.sentences {
            report.absorb(&format!("theory {name}.{n}"), check_sentence(sig, s));
        }
    }
    for (name, g) in &spec.goals {
        report.absorb(&format!("goal {name}"), check_sentence(&spec.signatures[&g.sig], &g.sentence));
    }
    for (name, m) in &spec.morphisms {
        report.absorb(&format!("morphism {name}"), check_morphism(&m.morphism, Flavor::Plain));
    }
    for (name, s) in &spec.substs {
        report.absorb(&format!("subst {name}"), check_substitution(&s.subst));
    }
    for (name, t) in &spec.types {
        report.absorb(&format!("type {name}"), t.ty.check());
    }
    for (name, f) in &spec.forcings {
        report.absorb(&format!("forcing {name}"), validate_forcing_property(&f.property, forcing));
    }
    for (name, p) in &spec.proofs {
        report.absorb(&format!("proof {name}"), check_derivation(&p.derivation));
    }
    report
}

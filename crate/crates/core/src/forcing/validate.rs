use std::collections::BTreeSet;

use super::congruence::CongruenceClosure;
use super::forces::SearchBounds;
use super::property::{ForcingError, ForcingProperty};
use super::universe::{ground_terms, Universe};
use crate::surface::print_sentence;
use crate::kernel::{check_sentence, check_signature, Action, Sentence, Signature, ValidationReport};

/// Whether `φ` is an atomic sentence in the forcing sense: a ground equation
/// or a ground transition along a single label.
pub fn is_forcing_atom(phi: &Sentence) -> bool {
    match phi {
        Sentence::Eq(..) => phi.is_closed(),
        Sentence::Trans(Action::Label(_), ..) => phi.is_closed(),
        _ => false,
    }
}

/// Every atom over `sig` whose terms come from `universe`, equations first.
pub fn atoms_over(sig: &Signature, universe: &Universe) -> Vec<Sentence> {
    let mut out = Vec::new();
    for terms in universe.terms.values() {
        for a in terms {
            for b in terms {
                out.push(Sentence::eq(a.clone(), b.clone()));
            }
        }
    }
    for l in sig.labels() {
        for terms in universe.terms.values() {
            for a in terms {
                for b in terms {
                    out.push(Sentence::trans(Action::Label(l.clone()), a.clone(), b.clone()));
                }
            }
        }
    }
    out
}

/// The atoms over `sig` (terms up to `depth`, plus those of `atoms`) that
/// follow from the ground atoms `atoms`. For ground atoms, semantic
/// consequence is decided by congruence closure: an equation follows iff its
/// sides are congruent, a transition iff a given transition of the same
/// label has congruent endpoints.
pub fn atomic_consequences(
    sig: &Signature,
    atoms: &BTreeSet<Sentence>,
    depth: usize,
    max_terms: usize,
) -> Result<BTreeSet<Sentence>, ForcingError> {
    let mut universe = ground_terms(sig, depth, max_terms);
    universe.insert_atoms(atoms);
    let mut cc = CongruenceClosure::from_equations(
        atoms.iter().filter_map(|a| match a {
            Sentence::Eq(x, y) => Some((x, y)),
            _ => None,
        }),
        universe.all(),
        max_terms.saturating_mul(4),
    )?;
    let given: Vec<(&Action, usize, usize)> = atoms
        .iter()
        .filter_map(|a| match a {
            Sentence::Trans(l, x, y) => Some((l, x, y)),
            _ => None,
        })
        .map(|(l, x, y)| Ok((l, cc.add(x)?, cc.add(y)?)))
        .collect::<Result<_, ForcingError>>()?;
    let mut out = BTreeSet::new();
    for phi in atoms_over(sig, &universe) {
        let entailed = match &phi {
            Sentence::Eq(a, b) => cc.equivalent(a, b)?,
            Sentence::Trans(l, a, b) => {
                let (ra, rb) = (cc.class_of(a).expect("in universe"), cc.class_of(b).expect("in universe"));
                given
                    .iter()
                    .any(|(m, x, y)| *m == l && cc.find(*x) == ra && cc.find(*y) == rb)
            }
            _ => false,
        };
        if entailed {
            out.insert(phi);
        }
    }
    Ok(out)
}

/// Checks the forcing-property axioms. Axiom 4 is checked for the atoms over
/// ground terms up to `bounds.term_depth` (plus the terms of each `f(p)`).
pub fn validate_forcing_property(prop: &ForcingProperty, bounds: &SearchBounds) -> ValidationReport {
    let mut report = ValidationReport::new();
    let n = prop.len();
    if n == 0 {
        report.push("order", "a forcing property needs at least one condition");
        return report;
    }
    let name = |p: usize| prop.condition(p).name.clone();
    for p in 0..n {
        for q in p + 1..n {
            if prop.leq(p, q) && prop.leq(q, p) {
                report.push("order", format!("{} and {} are below each other", name(p), name(q)));
            }
        }
        if prop.conditions()[..p].iter().any(|c| c.name == name(p)) {
            report.push(format!("condition {}", name(p)), "duplicate condition name");
        }
    }
    if prop.bottom().is_none() {
        report.push("order", "there is no least condition");
    }
    for (p, c) in prop.conditions().iter().enumerate() {
        let at = format!("condition {}", c.name);
        report.absorb(&at, check_signature(&c.sig));
        if !prop.base.is_included_in(&c.sig) {
            report.push(&at, "signature does not include the base signature");
        }
        for a in &c.atoms {
            if !is_forcing_atom(a) {
                report.push(&at, format!("{} is not a ground atomic sentence", print_sentence(&c.sig, a)));
            } else if !check_sentence(&c.sig, a).is_empty() {
                report.push(&at, format!("atom {} is not over the condition's signature", print_sentence(&c.sig, a)));
            }
        }
        for g in &c.gamma {
            if !check_sentence(&c.sig, g).is_empty() {
                report.push(&at, format!("sentence {} is not over the condition's signature", print_sentence(&c.sig, g)));
            }
        }
        for q in prop.above(p) {
            let d = prop.condition(q);
            if !c.sig.is_included_in(&d.sig) {
                report.push(&at, format!("signature is not included in that of {}", d.name));
            }
            if !c.atoms.is_subset(&d.atoms) {
                report.push(&at, format!("atoms are not included in those of {}", d.name));
            }
            if !c.gamma.is_subset(&d.gamma) {
                report.push(&at, format!("sentences are not included in those of {}", d.name));
            }
        }
    }
    if !report.is_empty() {
        return report;
    }
    for (p, c) in prop.conditions().iter().enumerate() {
        let at = format!("condition {}", c.name);
        let entailed = match atomic_consequences(&c.sig, &c.atoms, bounds.term_depth, bounds.max_terms) {
            Ok(e) => e,
            Err(e) => {
                report.push(&at, format!("atomic universe not checked: {e}"));
                continue;
            }
        };
        for phi in entailed.difference(&c.atoms) {
            if !prop.above(p).any(|q| prop.condition(q).atoms.contains(phi)) {
                report.push(&at, format!("entails {} but no condition above contains it", print_sentence(&c.sig, phi)));
            }
        }
    }
    report
}

use std::collections::BTreeMap;

use super::morphism::restrict;
use crate::finmod::{eval_ground, EvalError, FiniteModel};
use crate::kernel::{sort_of_term, Op, Sentence, Signature, Term, ValidationReport};

/// A substitution `θ : C1 → T_Σ(C2)` between two sets of constants fresh
/// for the base signature `Σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    base: Signature,
    source: Vec<Op>,
    target: Vec<Op>,
    map: BTreeMap<Op, Term>,
}

impl Substitution {
    pub fn new(base: Signature, source: Vec<Op>, target: Vec<Op>, map: BTreeMap<Op, Term>) -> Self {
        Substitution {
            base,
            source,
            target,
            map,
        }
    }

    /// `c ↦ c` on a set of constants.
    pub fn identity(base: Signature, constants: Vec<Op>) -> Self {
        let map = constants.iter().map(|c| (c.clone(), Term::constant(c.clone()))).collect();
        Substitution::new(base, constants.clone(), constants, map)
    }

    pub fn base(&self) -> &Signature {
        &self.base
    }

    pub fn source(&self) -> &[Op] {
        &self.source
    }

    pub fn target(&self) -> &[Op] {
        &self.target
    }

    pub fn map(&self) -> &BTreeMap<Op, Term> {
        &self.map
    }

    /// `Σ[C1]`.
    pub fn source_signature(&self) -> Signature {
        self.base.with_constants(&self.source)
    }

    /// `Σ[C2]`.
    pub fn target_signature(&self) -> Signature {
        self.base.with_constants(&self.target)
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::App(op, args) if args.is_empty() => self.map.get(op).cloned().unwrap_or_else(|| t.clone()),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| self.apply_term(a)).collect()),
            Term::Var(_) => t.clone(),
        }
    }
}

pub fn check_substitution(theta: &Substitution) -> ValidationReport {
    let mut report = ValidationReport::new();
    for c in theta.source.iter().chain(&theta.target) {
        if !c.is_constant() {
            report.push(format!("{c}"), "substitution constants must be constants");
        }
        if theta.base.has_op(c) {
            report.push(format!("{c}"), "constant is not fresh for the base signature");
        }
    }
    let tsig = theta.target_signature();
    for c in &theta.source {
        match theta.map.get(c) {
            None => report.push(format!("{c}"), "no image"),
            Some(t) => {
                if !t.is_ground() {
                    report.push(format!("{c}"), "image is not ground");
                }
                match sort_of_term(&tsig, &[], t) {
                    Ok(s) if &s != c.result() => {
                        report.push(format!("{c}"), format!("image has sort {s}, expected {}", c.result()))
                    }
                    Ok(_) => {}
                    Err(e) => report.push(format!("{c}"), e.to_string()),
                }
            }
        }
    }
    for k in theta.map.keys() {
        if !theta.source.contains(k) {
            report.push(format!("{k}"), "mapped constant is not in the source set");
        }
    }
    report
}

/// `Sen(θ)(phi)`: every constant of `C1` is replaced by its image.
pub fn apply_substitution(theta: &Substitution, phi: &Sentence) -> Sentence {
    phi.map_terms(&mut |t| theta.apply_term(t))
}

/// `m|θ`: the `Σ` part of `m`, with each `c ∈ C1` interpreted as `θ(c)`.
pub fn reduct_along_substitution(theta: &Substitution, m: &FiniteModel) -> Result<FiniteModel, EvalError> {
    let base = restrict(m, &theta.base);
    let mut assignments = Vec::with_capacity(theta.source.len());
    for c in &theta.source {
        let t = theta.map.get(c).expect("total substitution");
        assignments.push((c.clone(), eval_ground(m, t)?));
    }
    Ok(base.expand_constants(&assignments))
}

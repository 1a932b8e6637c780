use std::collections::{BTreeMap, BTreeSet};

use super::entails::{check_cb_instance, check_fn_instance, semantic_entails, EntailConfig};
use crate::finmod::SizeBounds;
use crate::institution::{check_morphism, translate_sentence, Flavor, SignatureMorphism};
use crate::kernel::{check_sentence, Sentence, Signature, Sort, ValidationReport, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// `Φ2 ⊢ Φ1` when `Φ1 ⊆ Φ2`.
    Monotonicity,
    /// From `Φ1 ⊢ Φ2` and `Φ2 ⊢ Φ3`.
    Transitivity(String, String),
    /// From `Φ1 ⊢ φ` for each `φ` of the conclusion.
    Union(Vec<String>),
    /// From `Φ1 ⊢ Φ2` over the source, conclude `χ(Φ1) ⊢ χ(Φ2)`.
    Translation { morphism: SignatureMorphism, premise: String },
    /// Bounded (CB) over the named variable of the conclusion's outer
    /// universal block.
    Cb { var: String, depth: usize, bounds: SizeBounds },
    /// Bounded (FN) with per-sort caps.
    Fn { caps: BTreeMap<Sort, usize>, bounds: SizeBounds },
    /// A leaf checked by bounded semantic consequence.
    Semantic { bounds: SizeBounds },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Monotonicity => "mono",
            Rule::Transitivity(..) => "trans",
            Rule::Union(_) => "union",
            Rule::Translation { .. } => "translate",
            Rule::Cb { .. } => "cb",
            Rule::Fn { .. } => "fn",
            Rule::Semantic { .. } => "sem",
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Rule::Cb { .. } | Rule::Fn { .. } | Rule::Semantic { .. })
    }
}

/// One proof step concluding `lhs ⊢ rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub name: String,
    pub rule: Rule,
    pub lhs: Vec<Sentence>,
    pub rhs: Vec<Sentence>,
}

/// A derivation: steps in dependency order over a base signature; a
/// translation step's conclusion lives over the morphism's target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub sig: Signature,
    pub flavor: Flavor,
    pub steps: Vec<Step>,
}

fn set(xs: &[Sentence]) -> BTreeSet<Sentence> {
    xs.iter().map(Sentence::normalize).collect()
}

/// Checks each step against its rule schema. Steps using (CB), (FN) or the
/// bounded semantic leaf are re-run and noted as bounded.
pub fn check_derivation(d: &Derivation) -> ValidationReport {
    let mut report = ValidationReport::new();
    let mut sigs: BTreeMap<&str, Signature> = BTreeMap::new();
    let mut done: BTreeMap<&str, &Step> = BTreeMap::new();
    for step in &d.steps {
        let loc = format!("step {}", step.name);
        if done.contains_key(step.name.as_str()) {
            report.push(&loc, "duplicate step name");
            continue;
        }
        let premise = |name: &str, report: &mut ValidationReport| -> Option<&Step> {
            let p = done.get(name).copied();
            if p.is_none() {
                report.push(&loc, format!("premise {name} is not an earlier step"));
            }
            p
        };
        let mut sig = d.sig.clone();
        match &step.rule {
            Rule::Monotonicity => {
                if !set(&step.rhs).is_subset(&set(&step.lhs)) {
                    report.push(&loc, "monotonicity needs the conclusion to be a subset of the hypotheses");
                }
            }
            Rule::Transitivity(a, b) => {
                if let (Some(pa), Some(pb)) = (premise(a, &mut report), premise(b, &mut report)) {
                    if set(&pa.lhs) != set(&step.lhs) {
                        report.push(&loc, format!("hypotheses differ from those of {a}"));
                    }
                    if set(&pa.rhs) != set(&pb.lhs) {
                        report.push(&loc, format!("conclusion of {a} is not the hypotheses of {b}"));
                    }
                    if set(&pb.rhs) != set(&step.rhs) {
                        report.push(&loc, format!("conclusion differs from that of {b}"));
                    }
                }
            }
            Rule::Union(names) => {
                let mut covered = BTreeSet::new();
                for n in names {
                    if let Some(p) = premise(n, &mut report) {
                        if set(&p.lhs) != set(&step.lhs) {
                            report.push(&loc, format!("hypotheses differ from those of {n}"));
                        }
                        if p.rhs.len() != 1 {
                            report.push(&loc, format!("premise {n} must conclude a single sentence"));
                        }
                        covered.extend(set(&p.rhs));
                    }
                }
                if covered != set(&step.rhs) {
                    report.push(&loc, "premises do not conclude exactly the sentences of the conclusion");
                }
            }
            Rule::Translation { morphism, premise: p } => {
                let mr = check_morphism(morphism, d.flavor);
                if !mr.is_empty() {
                    report.absorb(&format!("{loc}: morphism"), mr);
                }
                sig = morphism.target().clone();
                if let Some(pstep) = premise(p, &mut report) {
                    if sigs.get(p.as_str()) != Some(morphism.source()) {
                        report.push(&loc, format!("premise {p} is not over the morphism's source"));
                    }
                    let tl: Vec<Sentence> = pstep.lhs.iter().map(|s| translate_sentence(morphism, s)).collect();
                    let tr: Vec<Sentence> = pstep.rhs.iter().map(|s| translate_sentence(morphism, s)).collect();
                    if set(&tl) != set(&step.lhs) || set(&tr) != set(&step.rhs) {
                        report.push(&loc, "conclusion is not the translation of the premise");
                    }
                }
            }
            Rule::Cb { var, depth, bounds } => {
                report.note(format!("{loc}: (CB) checked up to constructor depth {depth} within bounds {bounds}"));
                check_cb_step(d, step, var, *depth, bounds, &loc, &mut report);
            }
            Rule::Fn { caps, bounds } => {
                report.note(format!("{loc}: (FN) checked for caps {caps:?} within bounds {bounds}"));
                if step.rhs.len() != 1 {
                    report.push(&loc, "(FN) concludes a single sentence");
                } else {
                    match check_fn_instance(&d.sig, &step.lhs, &step.rhs[0], caps, d.flavor, &EntailConfig::new(bounds.clone())) {
                        Ok(r) if r.all_hold => {}
                        Ok(r) => {
                            for p in r.premises.iter().filter(|p| !p.verdict.holds()) {
                                report.push(&loc, format!("premise {} has a counterexample", p.label));
                            }
                        }
                        Err(e) => report.push(&loc, e.to_string()),
                    }
                }
            }
            Rule::Semantic { bounds } => {
                report.note(format!("{loc}: semantic consequence checked within bounds {bounds}"));
                for phi in &step.rhs {
                    match semantic_entails(&d.sig, &step.lhs, phi, d.flavor, &EntailConfig::new(bounds.clone())) {
                        Ok(v) if v.holds() => {}
                        Ok(_) => report.push(&loc, "bounded search found a counterexample"),
                        Err(e) => report.push(&loc, e.to_string()),
                    }
                }
            }
        }
        for phi in step.lhs.iter().chain(&step.rhs) {
            let r = check_sentence(&sig, phi);
            if !r.is_empty() {
                report.absorb(&loc, r);
            }
        }
        sigs.insert(&step.name, sig);
        done.insert(&step.name, step);
    }
    report
}

fn check_cb_step(
    d: &Derivation,
    step: &Step,
    var: &str,
    depth: usize,
    bounds: &SizeBounds,
    loc: &str,
    report: &mut ValidationReport,
) {
    let [goal] = step.rhs.as_slice() else {
        report.push(loc, "(CB) concludes a single universally quantified sentence");
        return;
    };
    let Some((block, body)) = goal.as_forall() else {
        report.push(loc, "(CB) conclusion is not universally quantified");
        return;
    };
    let Some(x) = block.iter().find(|v| v.name.as_ref() == var) else {
        report.push(loc, format!("{var} is not bound by the conclusion's outer block"));
        return;
    };
    let rest: Vec<Variable> = block.iter().filter(|v| *v != x).cloned().collect();
    let psi = if rest.is_empty() {
        body.clone()
    } else {
        Sentence::forall(rest, body.clone())
    };
    match check_cb_instance(&d.sig, &step.lhs, x, &psi, depth, d.flavor, &EntailConfig::new(bounds.clone())) {
        Ok(r) => {
            report.note(format!("{loc}: (CB) used a loose-variable prefix of size {}", r.prefix_size));
            for p in r.premises.iter().filter(|p| !p.verdict.holds()) {
                report.push(loc, format!("premise {} has a counterexample", p.label));
            }
        }
        Err(e) => report.push(loc, e.to_string()),
    }
}

use std::collections::{BTreeMap, HashMap};

use super::gamma::gamma_sentence;
use super::reach::ClassError;
use crate::finmod::{find_model, EnumOptions, FiniteModel, SizeBounds};
use crate::institution::Flavor;
use crate::kernel::{check_sentence, Signature, Sentence, Sort, Term, Variable};

/// Result of a bounded consequence check. There is no "valid" verdict:
/// exhaustion of the bounded search is all that can be reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Counterexample(FiniteModel),
    HoldsUpToBound(SizeBounds),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsUpToBound(_))
    }

    pub fn counterexample(&self) -> Option<&FiniteModel> {
        match self {
            Verdict::Counterexample(m) => Some(m),
            Verdict::HoldsUpToBound(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntailConfig {
    pub bounds: SizeBounds,
    pub node_budget: Option<u64>,
    pub iso_pruning: bool,
}

impl EntailConfig {
    pub fn new(bounds: SizeBounds) -> Self {
        EntailConfig {
            bounds,
            node_budget: EnumOptions::default().node_budget,
            iso_pruning: false,
        }
    }
}

fn check_inputs(sig: &Signature, sentences: &[&Sentence], flavor: Flavor) -> Result<(), ClassError> {
    if flavor == Flavor::FiniteSorts && sig.finite_sorts().is_empty() {
        return Err(ClassError::MissingFiniteSorts);
    }
    for s in sentences {
        let r = check_sentence(sig, s);
        if !r.is_empty() {
            return Err(ClassError::IllFormed(r.to_string().trim_end().to_string()));
        }
    }
    Ok(())
}

/// First model (in canonical order) of the flavor's class within the bounds
/// that satisfies `sentences`.
pub fn find_class_model(
    sig: &Signature,
    sentences: &[Sentence],
    flavor: Flavor,
    cfg: &EntailConfig,
) -> Result<Option<FiniteModel>, ClassError> {
    check_inputs(sig, &sentences.iter().collect::<Vec<_>>(), flavor)?;
    let opts = EnumOptions {
        iso_pruning: cfg.iso_pruning,
        node_budget: cfg.node_budget,
        ctor_based: flavor != Flavor::Plain,
    };
    Ok(find_model(sig, &cfg.bounds, sentences, &opts)?)
}

/// `Φ ⊨ φ` in the flavor's model class, checked over all models within the
/// bounds. Every finite model has finite carriers, so the finite-sort flavor
/// searches the same class as the constructor-based one.
pub fn semantic_entails(
    sig: &Signature,
    phis: &[Sentence],
    phi: &Sentence,
    flavor: Flavor,
    cfg: &EntailConfig,
) -> Result<Verdict, ClassError> {
    let mut constraints = phis.to_vec();
    constraints.push(Sentence::not(phi.clone()));
    Ok(match find_class_model(sig, &constraints, flavor, cfg)? {
        Some(m) => Verdict::Counterexample(m),
        None => Verdict::HoldsUpToBound(cfg.bounds.clone()),
    })
}

/// Constructor terms of `sort` up to `depth` (leaves have depth 0), with a
/// fresh loose variable at every loose position.
pub fn ctor_terms(sig: &Signature, sort: &Sort, depth: usize) -> Vec<Term> {
    shapes(sig, sort, depth).into_iter().map(linearize).collect()
}

const HOLE: &str = "_";

fn shapes(sig: &Signature, sort: &Sort, depth: usize) -> Vec<Term> {
    if !sig.is_constrained(sort) {
        return vec![Term::var(Variable::new(HOLE, sort.clone()))];
    }
    let mut out = Vec::new();
    for c in sig.ctors().iter().filter(|c| c.result() == sort) {
        if c.is_constant() {
            out.push(Term::constant(c.clone()));
            continue;
        }
        if depth == 0 {
            continue;
        }
        let mut partial: Vec<Vec<Term>> = vec![Vec::new()];
        for a in c.arity() {
            let options = shapes(sig, a, depth - 1);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    options.iter().map(move |o| {
                        let mut q = p.clone();
                        q.push(o.clone());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(|args| Term::app(c.clone(), args)));
    }
    out
}

fn linearize(t: Term) -> Term {
    let mut k = 0;
    t.map_vars(&mut |v| {
        k += 1;
        Variable::new(format!("y{k}"), v.sort.clone())
    })
}

/// Largest number of loose variables of one sort used by any of `terms`.
pub fn prefix_size(terms: &[Term]) -> usize {
    terms
        .iter()
        .map(|t| {
            let mut vs = Default::default();
            t.vars(&mut vs);
            let mut per: BTreeMap<Sort, usize> = BTreeMap::new();
            for v in vs {
                *per.entry(v.sort).or_default() += 1;
            }
            per.into_values().max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PremiseRow {
    pub label: String,
    pub sentence: Sentence,
    /// Extra hypotheses of this premise (the `Γ` of an (FN) instance).
    pub hypotheses: Vec<Sentence>,
    pub verdict: Verdict,
}

/// The premise table of a bounded (CB) or (FN) instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceReport {
    pub premises: Vec<PremiseRow>,
    /// Number of loose variables per sort the (CB) terms draw on.
    pub prefix_size: usize,
    pub all_hold: bool,
}

/// `∀var(t) . ψ(t)`.
pub fn cb_premise(x: &Variable, psi: &Sentence, t: &Term) -> Sentence {
    let body = psi.substitute(&HashMap::from([(x.clone(), t.clone())]));
    let mut vs = Default::default();
    t.vars(&mut vs);
    let vars: Vec<Variable> = vs.into_iter().collect();
    if vars.is_empty() {
        body
    } else {
        Sentence::forall(vars, body)
    }
}

/// Bounded (CB): checks `Φ ⊨ ∀var(t) . ψ(t)` for every constructor term `t`
/// of `x`'s sort up to `depth`.
pub fn check_cb_instance(
    sig: &Signature,
    phis: &[Sentence],
    x: &Variable,
    psi: &Sentence,
    depth: usize,
    flavor: Flavor,
    cfg: &EntailConfig,
) -> Result<InstanceReport, ClassError> {
    if !sig.has_ctors() {
        return Err(ClassError::MissingCtors);
    }
    if !sig.is_constrained(&x.sort) {
        return Err(ClassError::IllFormed(format!("{} is not of a constrained sort", x.name)));
    }
    let terms = ctor_terms(sig, &x.sort, depth);
    let mut premises = Vec::with_capacity(terms.len());
    for t in &terms {
        let sentence = cb_premise(x, psi, t);
        let verdict = semantic_entails(sig, phis, &sentence, flavor, cfg)?;
        premises.push(PremiseRow {
            label: format!("t = {}", crate::surface::print_term(sig, t)),
            sentence,
            hypotheses: Vec::new(),
            verdict,
        });
    }
    let all_hold = premises.iter().all(|p| p.verdict.holds());
    Ok(InstanceReport {
        premises,
        prefix_size: prefix_size(&terms),
        all_hold,
    })
}

/// Bounded (FN): checks `Φ ∪ Γ_n ⊨ ψ` for every tuple `n` within `caps`.
pub fn check_fn_instance(
    sig: &Signature,
    phis: &[Sentence],
    psi: &Sentence,
    caps: &BTreeMap<Sort, usize>,
    flavor: Flavor,
    cfg: &EntailConfig,
) -> Result<InstanceReport, ClassError> {
    if sig.finite_sorts().is_empty() {
        return Err(ClassError::MissingFiniteSorts);
    }
    for s in caps.keys() {
        if !sig.finite_sorts().contains(s) {
            return Err(ClassError::IllFormed(format!("{s} is not a finite sort")));
        }
    }
    let sorts: Vec<&Sort> = caps.keys().collect();
    let mut tuple = vec![0usize; sorts.len()];
    let mut premises = Vec::new();
    loop {
        let gammas: Vec<Sentence> = sorts.iter().zip(&tuple).map(|(s, n)| gamma_sentence(s, *n)).collect();
        let mut hyps = phis.to_vec();
        hyps.extend(gammas.iter().cloned());
        let verdict = semantic_entails(sig, &hyps, psi, flavor, cfg)?;
        let label = sorts
            .iter()
            .zip(&tuple)
            .map(|(s, n)| format!("{s}<={n}"))
            .collect::<Vec<_>>()
            .join(",");
        premises.push(PremiseRow {
            label,
            sentence: psi.clone(),
            hypotheses: gammas,
            verdict,
        });
        let mut k = sorts.len();
        loop {
            if k == 0 {
                let all_hold = premises.iter().all(|p| p.verdict.holds());
                return Ok(InstanceReport {
                    premises,
                    prefix_size: 0,
                    all_hold,
                });
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] <= caps[sorts[k]] {
                break;
            }
            tuple[k] = 0;
        }
    }
}

use std::collections::BTreeSet;

use super::logic_type::LogicType;
use super::TypeError;
use crate::classes::{ctor_terms, prefix_size};
use crate::fixtures::{inf_phi, inf_signature, inf_type_sentences, inf_type_variable};
use crate::kernel::{Sentence, Signature, Sort, Term, Variable};

/// The constructor type of one constrained sort, truncated at a term depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtorType {
    pub sort: Sort,
    pub ty: LogicType,
    /// Constructor terms deeper than this are left out.
    pub depth: usize,
    /// Loose variables per sort the terms draw on.
    pub prefix: usize,
}

/// `{ forall var(t) . x != t }` for every constructor term `t` of each
/// constrained sort, up to `depth`, one type per constrained sort.
pub fn build_tc(sig: &Signature, depth: usize) -> Result<Vec<CtorType>, TypeError> {
    if !sig.has_ctors() {
        return Err(TypeError::MissingCtors);
    }
    Ok(sig
        .constrained_sorts()
        .into_iter()
        .map(|sort| {
            let x = Variable::new("x", sort.clone());
            let mut terms = ctor_terms(sig, &sort, depth);
            terms.sort_by_key(Term::depth);
            let sentences = terms
                .iter()
                .map(|t| {
                    let mut vars = BTreeSet::new();
                    t.vars(&mut vars);
                    let neq = Sentence::neq(Term::var(x.clone()), t.clone());
                    if vars.is_empty() {
                        neq
                    } else {
                        Sentence::forall(vars.into_iter().collect(), neq)
                    }
                })
                .collect();
            CtorType {
                prefix: prefix_size(&terms),
                ty: LogicType::new(sig.clone(), vec![x], sentences),
                sort,
                depth,
            }
        })
        .collect())
}

/// `{ exists x1..xn:s . and_{i != j} xi != xj | 0 < n <= max }`, a closed
/// type saying `s` has more than any finite number of elements.
pub fn build_tf(sig: &Signature, sort: &Sort, max: usize) -> LogicType {
    let sentences = (1..=max)
        .map(|n| {
            let xs: Vec<Variable> = (1..=n).map(|i| Variable::new(format!("x{i}"), sort.clone())).collect();
            let mut body = Vec::new();
            for (i, a) in xs.iter().enumerate() {
                for (j, b) in xs.iter().enumerate() {
                    if i != j {
                        body.push(Sentence::neq(Term::var(a.clone()), Term::var(b.clone())));
                    }
                }
            }
            Sentence::exists(xs, Sentence::and(body))
        })
        .collect();
    LogicType::new(sig.clone(), Vec::new(), sentences)
}

/// The infinity presentation over sorts `s1 .. sk`: `Φ = { phi_n }` and the
/// type `T = { more_n }` over the block `{ y : s1 }`, both for `0 < n <= k`.
pub fn build_inf_type(k: usize) -> (Signature, Vec<Sentence>, LogicType) {
    let sig = inf_signature(k);
    let phi = inf_phi(k).into_iter().map(|(_, s)| s.normalize()).collect();
    let t = inf_type_sentences(k).into_iter().map(|(_, s)| s).collect();
    let ty = LogicType::new(sig.clone(), vec![inf_type_variable()], t);
    (sig, phi, ty)
}

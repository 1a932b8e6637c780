use std::collections::BTreeMap;

use thiserror::Error;

use crate::finmod::FiniteModel;
use crate::kernel::{Op, Sort, Term, Variable};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("the signature declares no constructors")]
    MissingCtors,
    #[error("the signature declares no finite sorts")]
    MissingFiniteSorts,
    #[error("node budget of {0} exhausted")]
    ResourceLimit(u64),
    #[error("{0}")]
    Eval(#[from] crate::finmod::EvalError),
    #[error("ill-formed input: {0}")]
    IllFormed(String),
}

impl From<crate::finmod::EnumError> for ClassError {
    fn from(e: crate::finmod::EnumError) -> Self {
        match e {
            crate::finmod::EnumError::ResourceLimit(n) => ClassError::ResourceLimit(n),
            crate::finmod::EnumError::Eval(e) => ClassError::Eval(e),
            crate::finmod::EnumError::BadBound(b) => ClassError::IllFormed(b),
        }
    }
}

/// Outcome of a generation check: either every element has a witness term,
/// or some element is not generated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generation {
    /// One witness term per element, by sort and element index.
    Generated(BTreeMap<Sort, Vec<Term>>),
    Missing { sort: Sort, element: String },
}

impl Generation {
    pub fn holds(&self) -> bool {
        matches!(self, Generation::Generated(_))
    }
}

/// Least fixpoint from `seeds` under the tables of `ops`, recording for each
/// reached element the first term found for it.
fn close(m: &FiniteModel, ops: &[&Op], mut found: Vec<Vec<Option<Term>>>) -> Vec<Vec<Option<Term>>> {
    let sig = m.signature();
    loop {
        let mut changed = false;
        for op in ops {
            let r = sig.sort_index(op.result()).expect("declared");
            for row in 0..m.rows(op) {
                let args = m.args_of_row(op, row);
                let mut terms = Vec::with_capacity(args.len());
                for (a, s) in args.iter().zip(op.arity()) {
                    match &found[sig.sort_index(s).expect("declared")][*a] {
                        Some(t) => terms.push(t.clone()),
                        None => break,
                    }
                }
                if terms.len() != args.len() {
                    continue;
                }
                let Some(v) = m.table(op)[row] else { continue };
                if found[r][v].is_none() {
                    found[r][v] = Some(Term::app((*op).clone(), terms));
                    changed = true;
                }
            }
        }
        if !changed {
            return found;
        }
    }
}

fn certificate(m: &FiniteModel, found: Vec<Vec<Option<Term>>>) -> Generation {
    let sig = m.signature();
    let mut out = BTreeMap::new();
    for (i, sort) in sig.sorts().iter().enumerate() {
        let mut terms = Vec::new();
        for (e, t) in found[i].iter().enumerate() {
            match t {
                Some(t) => terms.push(t.clone()),
                None => {
                    return Generation::Missing {
                        sort: sort.clone(),
                        element: m.carriers()[i][e].clone(),
                    }
                }
            }
        }
        out.insert(sort.clone(), terms);
    }
    Generation::Generated(out)
}

/// Whether every element is the value of a ground term.
pub fn is_reachable(m: &FiniteModel) -> Generation {
    let found = m.carriers().iter().map(|c| vec![None; c.len()]).collect();
    let ops: Vec<&Op> = m.signature().ops().iter().collect();
    certificate(m, close(m, &ops, found))
}

/// The loose-sort variable naming element `i` of a loose sort in
/// constructor certificates.
pub fn loose_variable(sort: &Sort, i: usize) -> Variable {
    Variable::new(format!("y{i}"), sort.clone())
}

/// Whether the constructors generate every element of the constrained sorts
/// from the elements of the loose sorts.
pub fn is_constructor_based(m: &FiniteModel) -> Result<Generation, ClassError> {
    let sig = m.signature();
    if !sig.has_ctors() {
        return Err(ClassError::MissingCtors);
    }
    let found = sig
        .sorts()
        .iter()
        .zip(m.carriers())
        .map(|(s, c)| {
            if sig.is_constrained(s) {
                vec![None; c.len()]
            } else {
                (0..c.len()).map(|i| Some(Term::var(loose_variable(s, i)))).collect()
            }
        })
        .collect();
    let ops: Vec<&Op> = sig.ctors().iter().collect();
    Ok(certificate(m, close(m, &ops, found)))
}

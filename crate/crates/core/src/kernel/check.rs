use thiserror::Error;

use super::names::{Op, Sort};
use super::report::ValidationReport;
use super::signature::Signature;
use super::syntax::{Action, Sentence, Term, Variable};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("sort error in {op}: argument {position} has sort {found}, expected {expected}")]
    SortError {
        op: String,
        position: usize,
        expected: Sort,
        found: Sort,
    },
    #[error("{op} expects {expected} arguments, got {found}")]
    ArityError { op: String, expected: usize, found: usize },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("unknown function symbol {0}")]
    UnknownSymbol(String),
}

/// The sort of `t` under the variable block `ctx`.
pub fn sort_of_term(sig: &Signature, ctx: &[Variable], t: &Term) -> Result<Sort, KernelError> {
    match t {
        Term::Var(v) => {
            if ctx.contains(v) {
                Ok(v.sort.clone())
            } else {
                Err(KernelError::UnboundVariable(format!("{}:{}", v.name, v.sort)))
            }
        }
        Term::App(op, args) => {
            if !sig.has_op(op) {
                return Err(KernelError::UnknownSymbol(op.to_string()));
            }
            check_args(sig, ctx, op, args)?;
            Ok(op.result().clone())
        }
    }
}

fn check_args(sig: &Signature, ctx: &[Variable], op: &Op, args: &[Term]) -> Result<(), KernelError> {
    if args.len() != op.arity().len() {
        return Err(KernelError::ArityError {
            op: op.name().to_string(),
            expected: op.arity().len(),
            found: args.len(),
        });
    }
    for (i, (arg, expected)) in args.iter().zip(op.arity()).enumerate() {
        let found = sort_of_term(sig, ctx, arg)?;
        if &found != expected {
            return Err(KernelError::SortError {
                op: op.name().to_string(),
                position: i + 1,
                expected: expected.clone(),
                found,
            });
        }
    }
    Ok(())
}

pub fn check_action(sig: &Signature, a: &Action, report: &mut ValidationReport, location: &str) {
    let mut labels = Default::default();
    a.labels(&mut labels);
    for l in labels {
        if !sig.has_label(&l) {
            report.push(location, format!("undeclared label {l}"));
        }
    }
}

/// Well-formedness of a closed sentence.
pub fn check_sentence(sig: &Signature, phi: &Sentence) -> ValidationReport {
    check_sentence_in(sig, &[], phi)
}

/// Well-formedness of `phi` with the variables of `ctx` in scope.
pub fn check_sentence_in(sig: &Signature, ctx: &[Variable], phi: &Sentence) -> ValidationReport {
    let mut report = ValidationReport::new();
    let mut scope = ctx.to_vec();
    walk(sig, &mut scope, phi, &mut report);
    report
}

fn walk(sig: &Signature, scope: &mut Vec<Variable>, phi: &Sentence, report: &mut ValidationReport) {
    let pair = |a: &Term, b: &Term, what: &str, report: &mut ValidationReport| {
        let sa = sort_of_term(sig, scope, a);
        let sb = sort_of_term(sig, scope, b);
        match (sa, sb) {
            (Ok(x), Ok(y)) if x != y => {
                report.push(what, format!("operands have different sorts {x} and {y}"));
            }
            (Ok(_), Ok(_)) => {}
            (Err(e), _) | (_, Err(e)) => report.push(what, e.to_string()),
        }
    };
    match phi {
        Sentence::Eq(a, b) => pair(a, b, "equation", report),
        Sentence::Trans(act, a, b) => {
            check_action(sig, act, report, "transition");
            pair(a, b, "transition", report);
        }
        Sentence::Not(s) => walk(sig, scope, s, report),
        Sentence::Or(items) => items.iter().for_each(|s| walk(sig, scope, s, report)),
        Sentence::Exists(block, body) => {
            for (i, v) in block.iter().enumerate() {
                if !sig.has_sort(&v.sort) {
                    report.push("quantifier block", format!("variable {} has undeclared sort {}", v.name, v.sort));
                }
                if block[..i].iter().any(|w| w.name == v.name && w.sort != v.sort) {
                    report.push(
                        "quantifier block",
                        format!("variable name {} used with two sorts in one block", v.name),
                    );
                }
            }
            let n = scope.len();
            scope.extend(block.iter().cloned());
            walk(sig, scope, body, report);
            scope.truncate(n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list() -> (Signature, Op, Op, Op) {
        let elt = Sort::new("Elt");
        let lst = Sort::new("List");
        let empty = Op::constant("empty", lst.clone());
        let cons = Op::new("cons", vec![lst.clone(), elt.clone()], lst.clone());
        let add = Op::new("add", vec![lst.clone(), lst.clone()], lst.clone());
        let sig = Signature::new()
            .with_sort(elt)
            .with_sort(lst)
            .with_ctor(empty.clone())
            .with_ctor(cons.clone())
            .with_op(add.clone());
        (sig, empty, cons, add)
    }

    #[test]
    fn sorts_of_list_terms() {
        let (sig, empty, cons, add) = list();
        let e = Term::constant(empty);
        let t = Term::app(add, vec![e.clone(), e.clone()]);
        assert_eq!(sort_of_term(&sig, &[], &t).unwrap(), Sort::new("List"));
        let x = Variable::new("x", Sort::new("Elt"));
        assert_eq!(
            sort_of_term(&sig, std::slice::from_ref(&x), &Term::var(x.clone())).unwrap(),
            Sort::new("Elt")
        );
        let bad = Term::app(cons, vec![e.clone(), e]);
        assert!(matches!(sort_of_term(&sig, &[], &bad), Err(KernelError::SortError { .. })));
        assert!(matches!(
            sort_of_term(&sig, &[], &Term::var(x)),
            Err(KernelError::UnboundVariable(_))
        ));
    }

    #[test]
    fn sentence_checks() {
        let (sig, empty, _, add) = list();
        let x = Variable::new("x", Sort::new("List"));
        let phi = Sentence::forall(
            vec![x.clone()],
            Sentence::eq(
                Term::app(add, vec![Term::var(x.clone()), Term::constant(empty.clone())]),
                Term::var(x),
            ),
        );
        assert!(check_sentence(&sig, &phi).is_empty());

        let e = Variable::new("e", Sort::new("Elt"));
        let mismatch = Sentence::exists(
            vec![e.clone()],
            Sentence::eq(Term::constant(empty), Term::var(e)),
        );
        assert_eq!(check_sentence(&sig, &mismatch).len(), 1);

        let dup = Sentence::exists(
            vec![Variable::new("x", Sort::new("Elt")), Variable::new("x", Sort::new("List"))],
            Sentence::verum(),
        );
        assert_eq!(check_sentence(&sig, &dup).len(), 1);
    }

    #[test]
    fn undeclared_label_is_reported() {
        let (sig, empty, _, _) = list();
        let e = Term::constant(empty);
        let phi = Sentence::trans(Action::label("go"), e.clone(), e);
        assert_eq!(check_sentence(&sig, &phi).len(), 1);
    }
}

use std::collections::BTreeSet;

use super::names::{Label, Op, Sort};
use super::report::ValidationReport;

/// A transition-algebra signature: sorts, ranked function symbols and
/// transition labels, optionally refined by a set of constructors and a set
/// of finite sorts.
///
/// Declaration order is kept; it fixes the canonical order used by the
/// enumerators and the printer. The constructor and finite-sort subsets are
/// kept as sorted sets.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Signature {
    sorts: Vec<Sort>,
    ops: Vec<Op>,
    labels: Vec<Label>,
    ctors: BTreeSet<Op>,
    finite_sorts: BTreeSet<Sort>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_sort(mut self, sort: impl Into<Sort>) -> Self {
        self.add_sort(sort.into());
        self
    }

    pub fn with_op(mut self, op: Op) -> Self {
        self.add_op(op);
        self
    }

    pub fn with_ctor(mut self, op: Op) -> Self {
        self.add_op(op.clone());
        self.ctors.insert(op);
        self
    }

    pub fn with_label(mut self, label: impl Into<Label>) -> Self {
        self.add_label(label.into());
        self
    }

    pub fn with_finite_sort(mut self, sort: impl Into<Sort>) -> Self {
        self.finite_sorts.insert(sort.into());
        self
    }

    /// Appends a sort. Duplicates are kept so that [`check_signature`] can
    /// report them.
    pub fn add_sort(&mut self, sort: Sort) {
        self.sorts.push(sort);
    }

    pub fn add_op(&mut self, op: Op) {
        self.ops.push(op);
    }

    pub fn add_label(&mut self, label: Label) {
        self.labels.push(label);
    }

    pub fn mark_ctor(&mut self, op: Op) {
        self.ctors.insert(op);
    }

    pub fn mark_finite(&mut self, sort: Sort) {
        self.finite_sorts.insert(sort);
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn ctors(&self) -> &BTreeSet<Op> {
        &self.ctors
    }

    pub fn finite_sorts(&self) -> &BTreeSet<Sort> {
        &self.finite_sorts
    }

    pub fn has_ctors(&self) -> bool {
        !self.ctors.is_empty()
    }

    pub fn sort_index(&self, sort: &Sort) -> Option<usize> {
        self.sorts.iter().position(|s| s == sort)
    }

    pub fn op_index(&self, op: &Op) -> Option<usize> {
        self.ops.iter().position(|o| o == op)
    }

    pub fn label_index(&self, label: &Label) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn has_sort(&self, sort: &Sort) -> bool {
        self.sort_index(sort).is_some()
    }

    pub fn has_op(&self, op: &Op) -> bool {
        self.op_index(op).is_some()
    }

    pub fn has_label(&self, label: &Label) -> bool {
        self.label_index(label).is_some()
    }

    pub fn is_ctor(&self, op: &Op) -> bool {
        self.ctors.contains(op)
    }

    pub fn ops_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Op> + 'a {
        self.ops.iter().filter(move |o| o.name() == name)
    }

    pub fn constants(&self) -> impl Iterator<Item = &Op> + '_ {
        self.ops.iter().filter(|o| o.is_constant())
    }

    /// Sorts that are the result sort of some constructor.
    pub fn constrained_sorts(&self) -> Vec<Sort> {
        self.sorts
            .iter()
            .filter(|s| self.ctors.iter().any(|c| c.result() == *s))
            .cloned()
            .collect()
    }

    /// Sorts with no constructor.
    pub fn loose_sorts(&self) -> Vec<Sort> {
        self.sorts
            .iter()
            .filter(|s| !self.ctors.iter().any(|c| c.result() == *s))
            .cloned()
            .collect()
    }

    pub fn is_constrained(&self, sort: &Sort) -> bool {
        self.ctors.iter().any(|c| c.result() == sort)
    }

    /// `self[C]`: the extension by new constants. Constants already present
    /// are not duplicated.
    pub fn with_constants<'a>(&self, constants: impl IntoIterator<Item = &'a Op>) -> Signature {
        let mut out = self.clone();
        for c in constants {
            debug_assert!(c.is_constant());
            if !out.has_op(c) {
                out.ops.push(c.clone());
            }
        }
        out
    }

    /// True when every sort, symbol and label of `self` occurs in `other`.
    /// Constructor and finite-sort markings are not compared.
    pub fn is_included_in(&self, other: &Signature) -> bool {
        self.sorts.iter().all(|s| other.has_sort(s))
            && self.ops.iter().all(|o| other.has_op(o))
            && self.labels.iter().all(|l| other.has_label(l))
    }

    /// The smallest signature including both, with `self`'s order first.
    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        for s in &other.sorts {
            if !out.has_sort(s) {
                out.sorts.push(s.clone());
            }
        }
        for o in &other.ops {
            if !out.has_op(o) {
                out.ops.push(o.clone());
            }
        }
        for l in &other.labels {
            if !out.has_label(l) {
                out.labels.push(l.clone());
            }
        }
        out.ctors.extend(other.ctors.iter().cloned());
        out.finite_sorts.extend(other.finite_sorts.iter().cloned());
        out
    }

    /// Number of sorts, symbols and labels of `self` missing from `smaller`.
    pub fn symbols_not_in(&self, smaller: &Signature) -> usize {
        self.sorts.iter().filter(|s| !smaller.has_sort(s)).count()
            + self.ops.iter().filter(|o| !smaller.has_op(o)).count()
            + self.labels.iter().filter(|l| !smaller.has_label(l)).count()
    }
}

/// Checks the signature invariants. Violations are reported, never raised.
pub fn check_signature(sig: &Signature) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (i, s) in sig.sorts.iter().enumerate() {
        if sig.sorts[..i].contains(s) {
            report.push(format!("sort {s}"), "duplicate sort declaration");
        }
    }
    for (i, l) in sig.labels.iter().enumerate() {
        if sig.labels[..i].contains(l) {
            report.push(format!("label {l}"), "duplicate label declaration");
        }
    }
    for (i, op) in sig.ops.iter().enumerate() {
        if sig.ops[..i].contains(op) {
            report.push(format!("op {op}"), "duplicate rank for function symbol");
        }
        for s in op.arity().iter().chain(std::iter::once(op.result())) {
            if !sig.has_sort(s) {
                report.push(format!("op {op}"), format!("undeclared sort {s}"));
            }
        }
    }
    for c in &sig.ctors {
        if !sig.has_op(c) {
            report.push(format!("ctor {c}"), "constructor is not a declared function symbol");
        }
    }
    for s in &sig.finite_sorts {
        if !sig.has_sort(s) {
            report.push(format!("finite {s}"), "finite sort is not a declared sort");
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list_sig() -> Signature {
        let list = Sort::new("List");
        let elt = Sort::new("Elt");
        Signature::new()
            .with_sort(elt.clone())
            .with_sort(list.clone())
            .with_ctor(Op::constant("empty", list.clone()))
            .with_ctor(Op::new("cons", vec![list.clone(), elt], list.clone()))
            .with_op(Op::new("add", vec![list.clone(), list.clone()], list))
    }

    #[test]
    fn list_signature_is_well_formed() {
        assert!(check_signature(&list_sig()).is_empty());
    }

    #[test]
    fn undeclared_result_sort() {
        let sig = Signature::new()
            .with_sort("s")
            .with_op(Op::constant("c", Sort::new("t")));
        assert_eq!(check_signature(&sig).len(), 1);
    }

    #[test]
    fn ctor_outside_funcs() {
        let mut sig = Signature::new().with_sort("s");
        sig.mark_ctor(Op::constant("c", Sort::new("s")));
        assert_eq!(check_signature(&sig).len(), 1);
    }

    #[test]
    fn overloading_by_rank_is_fine_but_duplicate_rank_is_not() {
        let s = Sort::new("s");
        let t = Sort::new("t");
        let sig = Signature::new()
            .with_sort(s.clone())
            .with_sort(t.clone())
            .with_op(Op::constant("c", s.clone()))
            .with_op(Op::constant("c", t));
        assert!(check_signature(&sig).is_empty());
        let dup = sig.with_op(Op::constant("c", s));
        assert_eq!(check_signature(&dup).len(), 1);
    }

    #[test]
    fn loose_and_constrained() {
        let sig = list_sig();
        assert_eq!(sig.constrained_sorts(), vec![Sort::new("List")]);
        assert_eq!(sig.loose_sorts(), vec![Sort::new("Elt")]);
    }
}

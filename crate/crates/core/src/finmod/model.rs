use std::collections::BTreeMap;

use thiserror::Error;

use super::relation::Relation;
use crate::kernel::{check_signature, Label, Op, Signature, Sort, ValidationReport, Variable};

/// An assignment of carrier elements (by index) to variables.
pub type Valuation = BTreeMap<Variable, usize>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("sort {0} is not declared")]
    UnknownSort(String),
    #[error("function symbol {0} is not declared")]
    UnknownOp(String),
    #[error("label {0} is not declared")]
    UnknownLabel(String),
    #[error("no element {element} in carrier of {sort}")]
    UnknownElement { sort: String, element: String },
    #[error("{op} expects {expected} arguments, got {found}")]
    Arity { op: String, expected: usize, found: usize },
}

/// A finite transition algebra: one (possibly empty) carrier per sort, one
/// table per function symbol and one relation per label and sort.
///
/// Elements are addressed by their index in the carrier of their sort. Tables
/// are stored row-major over the argument carriers with the last argument
/// varying fastest; a `None` cell is a missing row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    sig: Signature,
    carriers: Vec<Vec<String>>,
    tables: Vec<Vec<Option<usize>>>,
    relations: Vec<Vec<Relation>>,
}

impl FiniteModel {
    /// A model with the given carriers (in the signature's sort order),
    /// empty tables and empty relations.
    pub fn new(sig: Signature, carriers: Vec<Vec<String>>) -> Self {
        assert_eq!(carriers.len(), sig.sorts().len(), "one carrier per sort");
        let tables = sig
            .ops()
            .iter()
            .map(|op| vec![None; row_count(&sig, &carriers, op)])
            .collect();
        let relations = sig
            .labels()
            .iter()
            .map(|_| carriers.iter().map(|c| Relation::empty(c.len())).collect())
            .collect();
        FiniteModel {
            sig,
            carriers,
            tables,
            relations,
        }
    }

    /// Carriers given by name; sorts not listed are empty.
    pub fn with_carriers(sig: Signature, carriers: &[(&str, &[&str])]) -> Self {
        let mut cs = vec![Vec::new(); sig.sorts().len()];
        for (sort, elems) in carriers {
            let i = sig.sort_index(&Sort::new(sort)).expect("declared sort");
            cs[i] = elems.iter().map(|e| e.to_string()).collect();
        }
        FiniteModel::new(sig, cs)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn carriers(&self) -> &[Vec<String>] {
        &self.carriers
    }

    pub fn carrier(&self, sort: &Sort) -> &[String] {
        match self.sig.sort_index(sort) {
            Some(i) => &self.carriers[i],
            None => &[],
        }
    }

    pub fn carrier_len(&self, sort: &Sort) -> usize {
        self.carrier(sort).len()
    }

    pub fn element(&self, sort: &Sort, name: &str) -> Option<usize> {
        self.carrier(sort).iter().position(|e| e == name)
    }

    pub(crate) fn sort_len(&self, sort_index: usize) -> usize {
        self.carriers[sort_index].len()
    }

    /// Number of rows of `op`'s table.
    pub fn rows(&self, op: &Op) -> usize {
        row_count(&self.sig, &self.carriers, op)
    }

    /// Row index of an argument tuple.
    pub fn row_of(&self, op: &Op, args: &[usize]) -> usize {
        row_index(&self.sig, &self.carriers, op, args)
    }

    /// Argument tuple of a row index.
    pub fn args_of_row(&self, op: &Op, mut row: usize) -> Vec<usize> {
        let lens: Vec<usize> = op.arity().iter().map(|s| self.carrier_len(s)).collect();
        let mut out = vec![0; lens.len()];
        for (k, len) in lens.iter().enumerate().rev() {
            out[k] = row % len;
            row /= len;
        }
        out
    }

    pub fn table(&self, op: &Op) -> &[Option<usize>] {
        let i = self.sig.op_index(op).expect("declared op");
        &self.tables[i]
    }

    pub(crate) fn table_at(&self, op_index: usize) -> &[Option<usize>] {
        &self.tables[op_index]
    }

    pub(crate) fn table_at_mut(&mut self, op_index: usize) -> &mut Vec<Option<usize>> {
        &mut self.tables[op_index]
    }

    pub fn value(&self, op: &Op, args: &[usize]) -> Option<usize> {
        let row = self.row_of(op, args);
        self.table(op).get(row).copied().flatten()
    }

    pub fn set(&mut self, op: &Op, args: &[usize], value: usize) {
        let i = self.sig.op_index(op).expect("declared op");
        assert!(value < self.carrier_len(op.result()), "value outside carrier");
        let row = self.row_of(op, args);
        self.tables[i][row] = Some(value);
    }

    pub fn set_named(&mut self, op: &Op, args: &[&str], value: &str) -> Result<(), ModelError> {
        if !self.sig.has_op(op) {
            return Err(ModelError::UnknownOp(op.to_string()));
        }
        if args.len() != op.arity().len() {
            return Err(ModelError::Arity {
                op: op.name().to_string(),
                expected: op.arity().len(),
                found: args.len(),
            });
        }
        let mut idx = Vec::with_capacity(args.len());
        for (a, s) in args.iter().zip(op.arity()) {
            idx.push(self.lookup(s, a)?);
        }
        let v = self.lookup(op.result(), value)?;
        self.set(op, &idx, v);
        Ok(())
    }

    fn lookup(&self, sort: &Sort, name: &str) -> Result<usize, ModelError> {
        self.element(sort, name).ok_or_else(|| ModelError::UnknownElement {
            sort: sort.to_string(),
            element: name.to_string(),
        })
    }

    pub fn relation(&self, label: &Label, sort: &Sort) -> &Relation {
        let l = self.sig.label_index(label).expect("declared label");
        let s = self.sig.sort_index(sort).expect("declared sort");
        &self.relations[l][s]
    }

    pub(crate) fn relation_at(&self, label_index: usize, sort_index: usize) -> &Relation {
        &self.relations[label_index][sort_index]
    }

    pub fn set_relation(&mut self, label: &Label, sort: &Sort, rel: Relation) {
        let l = self.sig.label_index(label).expect("declared label");
        let s = self.sig.sort_index(sort).expect("declared sort");
        assert_eq!(rel.size(), self.carriers[s].len());
        self.relations[l][s] = rel;
    }

    pub fn add_transition(&mut self, label: &Label, sort: &Sort, from: usize, to: usize) {
        let l = self.sig.label_index(label).expect("declared label");
        let s = self.sig.sort_index(sort).expect("declared sort");
        self.relations[l][s].insert(from, to);
    }

    pub fn add_transition_named(&mut self, label: &Label, sort: &Sort, from: &str, to: &str) -> Result<(), ModelError> {
        if !self.sig.has_label(label) {
            return Err(ModelError::UnknownLabel(label.to_string()));
        }
        if !self.sig.has_sort(sort) {
            return Err(ModelError::UnknownSort(sort.to_string()));
        }
        let a = self.lookup(sort, from)?;
        let b = self.lookup(sort, to)?;
        self.add_transition(label, sort, a, b);
        Ok(())
    }

    /// The expansion interpreting each new constant as the given element.
    /// Constants already in the signature are reinterpreted.
    pub fn expand_constants(&self, assignments: &[(Op, usize)]) -> FiniteModel {
        let sig = self.sig.with_constants(assignments.iter().map(|(c, _)| c));
        let mut out = FiniteModel::new(sig, self.carriers.clone());
        for (i, op) in self.sig.ops().iter().enumerate() {
            let j = out.sig.op_index(op).expect("kept op");
            out.tables[j] = self.tables[i].clone();
        }
        for (l, label) in self.sig.labels().iter().enumerate() {
            let j = out.sig.label_index(label).expect("kept label");
            out.relations[j] = self.relations[l].clone();
        }
        for (c, v) in assignments {
            out.set(c, &[], *v);
        }
        out
    }

    /// Expansion along a valuation: every variable becomes a constant of
    /// the same name and sort.
    pub fn expand_valuation(&self, v: &Valuation) -> FiniteModel {
        let assignments: Vec<(Op, usize)> = v
            .iter()
            .map(|(x, e)| (Op::constant(x.name.as_ref(), x.sort.clone()), *e))
            .collect();
        self.expand_constants(&assignments)
    }

    /// Total number of elements over all sorts.
    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(Vec::len).sum()
    }
}

fn row_count(sig: &Signature, carriers: &[Vec<String>], op: &Op) -> usize {
    op.arity()
        .iter()
        .map(|s| sig.sort_index(s).map(|i| carriers[i].len()).unwrap_or(0))
        .product()
}

fn row_index(sig: &Signature, carriers: &[Vec<String>], op: &Op, args: &[usize]) -> usize {
    assert_eq!(args.len(), op.arity().len());
    let mut row = 0;
    for (a, s) in args.iter().zip(op.arity()) {
        let len = carriers[sig.sort_index(s).expect("declared sort")].len();
        assert!(*a < len, "argument outside carrier");
        row = row * len + a;
    }
    row
}

/// Totality and closure of tables and relations.
pub fn validate_model(m: &FiniteModel) -> ValidationReport {
    let mut report = ValidationReport::new();
    report.absorb("signature", check_signature(&m.sig));
    for (i, sort) in m.sig.sorts().iter().enumerate() {
        let c = &m.carriers[i];
        for (k, e) in c.iter().enumerate() {
            if c[..k].contains(e) {
                report.push(format!("carrier {sort}"), format!("duplicate element {e}"));
            }
        }
    }
    for (i, op) in m.sig.ops().iter().enumerate() {
        let expected = row_count(&m.sig, &m.carriers, op);
        let table = &m.tables[i];
        let result_len = m.carrier_len(op.result());
        if op.is_constant() && result_len == 0 {
            report.push(
                format!("op {op}"),
                format!("constant of sort {} needs a nonempty carrier", op.result()),
            );
            continue;
        }
        if table.len() != expected {
            report.push(format!("op {op}"), format!("table has {} rows, expected {expected}", table.len()));
            continue;
        }
        for (row, cell) in table.iter().enumerate() {
            match cell {
                None => report.push(
                    format!("op {op}"),
                    format!("missing row {}", describe_row(m, op, row)),
                ),
                Some(v) if *v >= result_len => report.push(
                    format!("op {op}"),
                    format!("row {} maps outside the carrier of {}", describe_row(m, op, row), op.result()),
                ),
                Some(_) => {}
            }
        }
    }
    for (l, label) in m.sig.labels().iter().enumerate() {
        for (s, sort) in m.sig.sorts().iter().enumerate() {
            if m.relations[l][s].size() != m.carriers[s].len() {
                report.push(
                    format!("label {label} on {sort}"),
                    "relation does not match the carrier".to_string(),
                );
            }
        }
    }
    report
}

fn describe_row(m: &FiniteModel, op: &Op, row: usize) -> String {
    let args = m.args_of_row(op, row);
    let names: Vec<&str> = args
        .iter()
        .zip(op.arity())
        .map(|(a, s)| m.carrier(s)[*a].as_str())
        .collect();
    format!("{}({})", op.name(), names.join(","))
}

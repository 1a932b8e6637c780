use std::collections::HashMap;

use thiserror::Error;

use super::model::{FiniteModel, Valuation};
use super::relation::Relation;
use crate::kernel::{Action, Sentence, Signature, Sort, Term, Variable};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("function symbol {0} is not in the model's signature")]
    UnknownSymbol(String),
    #[error("label {0} is not in the model's signature")]
    UnknownLabel(String),
    #[error("sort {0} is not in the model's signature")]
    UnknownSort(String),
    #[error("the model leaves a needed table row undefined")]
    Undefined,
}

/// Kleene truth values, used to evaluate over partially built models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn negate(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }
}

/// What the evaluator needs from a (possibly partial) model.
pub trait Interp {
    fn carrier_size(&self, sort: usize) -> usize;
    /// `None` when the table cell is not decided yet.
    fn apply(&self, op: usize, args: &[usize]) -> Option<usize>;
    /// Pairs known to be in the relation, and pairs possibly in it.
    fn relation_bounds(&self, label: usize, sort: usize) -> (&Relation, &Relation);
}

impl Interp for FiniteModel {
    fn carrier_size(&self, sort: usize) -> usize {
        self.sort_len(sort)
    }

    fn apply(&self, op: usize, args: &[usize]) -> Option<usize> {
        let decl = &self.signature().ops()[op];
        let mut row = 0;
        for (a, s) in args.iter().zip(decl.arity()) {
            let len = self.sort_len(self.signature().sort_index(s)?);
            row = row * len + a;
        }
        self.table_at(op).get(row).copied().flatten()
    }

    fn relation_bounds(&self, label: usize, sort: usize) -> (&Relation, &Relation) {
        let r = self.relation_at(label, sort);
        (r, r)
    }
}

#[derive(Clone, Debug)]
pub(crate) enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum CAction {
    Label(usize),
    Seq(Box<CAction>, Box<CAction>),
    Union(Box<CAction>, Box<CAction>),
    Star(Box<CAction>),
}

#[derive(Clone, Debug)]
enum CSent {
    Eq(CTerm, CTerm),
    Trans(usize, CTerm, CTerm),
    Not(Box<CSent>),
    Or(Vec<CSent>),
    Exists(Vec<(usize, usize)>, Box<CSent>),
}

/// A sentence resolved against a signature: symbols, labels and sorts are
/// replaced by indices and variables by environment slots.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: CSent,
    actions: Vec<(CAction, usize)>,
    slots: Vec<usize>,
}

/// Relations of every action of a compiled sentence, for one model.
pub struct ActionTable {
    lower: Vec<Relation>,
    upper: Vec<Relation>,
}

struct Compiler<'a> {
    sig: &'a Signature,
    scope: Vec<(Variable, usize)>,
    slots: Vec<usize>,
    actions: Vec<(CAction, usize)>,
    action_ids: HashMap<(CAction, usize), usize>,
}

impl Compiler<'_> {
    fn sort(&self, s: &Sort) -> Result<usize, EvalError> {
        self.sig.sort_index(s).ok_or_else(|| EvalError::UnknownSort(s.to_string()))
    }

    fn slot(&mut self, v: &Variable) -> Result<usize, EvalError> {
        let sort = self.sort(&v.sort)?;
        let slot = self.slots.len();
        self.slots.push(sort);
        self.scope.push((v.clone(), slot));
        Ok(slot)
    }

    fn term(&self, t: &Term) -> Result<(CTerm, usize), EvalError> {
        match t {
            Term::Var(v) => {
                let slot = self
                    .scope
                    .iter()
                    .rev()
                    .find(|(w, _)| w == v)
                    .map(|(_, s)| *s)
                    .ok_or_else(|| EvalError::UnboundVariable(format!("{}:{}", v.name, v.sort)))?;
                Ok((CTerm::Var(slot), self.slots[slot]))
            }
            Term::App(op, args) => {
                let i = self
                    .sig
                    .op_index(op)
                    .ok_or_else(|| EvalError::UnknownSymbol(op.to_string()))?;
                let args = args.iter().map(|a| self.term(a).map(|x| x.0)).collect::<Result<_, _>>()?;
                Ok((CTerm::App(i, args), self.sort(op.result())?))
            }
        }
    }

    fn action(&self, a: &Action) -> Result<CAction, EvalError> {
        Ok(match a {
            Action::Label(l) => CAction::Label(
                self.sig
                    .label_index(l)
                    .ok_or_else(|| EvalError::UnknownLabel(l.to_string()))?,
            ),
            Action::Seq(x, y) => CAction::Seq(Box::new(self.action(x)?), Box::new(self.action(y)?)),
            Action::Union(x, y) => CAction::Union(Box::new(self.action(x)?), Box::new(self.action(y)?)),
            Action::Star(x) => CAction::Star(Box::new(self.action(x)?)),
        })
    }

    fn sentence(&mut self, phi: &Sentence) -> Result<CSent, EvalError> {
        Ok(match phi {
            Sentence::Eq(a, b) => CSent::Eq(self.term(a)?.0, self.term(b)?.0),
            Sentence::Trans(act, a, b) => {
                let (ca, sort) = self.term(a)?;
                let (cb, _) = self.term(b)?;
                let key = (self.action(act)?, sort);
                let next = self.actions.len();
                let id = *self.action_ids.entry(key.clone()).or_insert(next);
                if id == next {
                    self.actions.push(key);
                }
                CSent::Trans(id, ca, cb)
            }
            Sentence::Not(s) => CSent::Not(Box::new(self.sentence(s)?)),
            Sentence::Or(items) => CSent::Or(items.iter().map(|s| self.sentence(s)).collect::<Result<_, _>>()?),
            Sentence::Exists(block, body) => {
                let n = self.scope.len();
                let mut bound = Vec::with_capacity(block.len());
                for v in block {
                    if self.scope[n..].iter().any(|(w, _)| w == v) {
                        continue;
                    }
                    let slot = self.slot(v)?;
                    bound.push((slot, self.slots[slot]));
                }
                let body = self.sentence(body)?;
                self.scope.truncate(n);
                CSent::Exists(bound, Box::new(body))
            }
        })
    }
}

impl Compiled {
    /// Compiles `phi` with `free` occupying slots `0..free.len()`.
    pub fn new(sig: &Signature, free: &[Variable], phi: &Sentence) -> Result<Compiled, EvalError> {
        let mut c = Compiler {
            sig,
            scope: Vec::new(),
            slots: Vec::new(),
            actions: Vec::new(),
            action_ids: HashMap::new(),
        };
        for v in free {
            c.slot(v)?;
        }
        let root = c.sentence(phi)?;
        Ok(Compiled {
            root,
            actions: c.actions,
            slots: c.slots,
        })
    }

    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn actions<I: Interp>(&self, m: &I) -> ActionTable {
        let mut lower = Vec::with_capacity(self.actions.len());
        let mut upper = Vec::with_capacity(self.actions.len());
        for (a, sort) in &self.actions {
            lower.push(action_relation(m, a, *sort, false));
            upper.push(action_relation(m, a, *sort, true));
        }
        ActionTable { lower, upper }
    }

    /// Three-valued truth under `env`; the first `free.len()` slots must be set.
    pub fn eval<I: Interp>(&self, m: &I, table: &ActionTable, env: &mut [usize]) -> Truth {
        eval_sent(&self.root, m, table, env)
    }

    /// Truth in a model given values for the free slots.
    pub fn truth<I: Interp>(&self, m: &I, free_values: &[usize]) -> Truth {
        let table = self.actions(m);
        let mut env = vec![0; self.slots.len()];
        env[..free_values.len()].copy_from_slice(free_values);
        self.eval(m, &table, &mut env)
    }
}

pub(crate) fn action_relation<I: Interp>(m: &I, a: &CAction, sort: usize, upper: bool) -> Relation {
    match a {
        CAction::Label(l) => {
            let (lo, hi) = m.relation_bounds(*l, sort);
            if upper {
                hi.clone()
            } else {
                lo.clone()
            }
        }
        CAction::Seq(x, y) => action_relation(m, x, sort, upper).compose(&action_relation(m, y, sort, upper)),
        CAction::Union(x, y) => action_relation(m, x, sort, upper).union(&action_relation(m, y, sort, upper)),
        CAction::Star(x) => action_relation(m, x, sort, upper).star(),
    }
}

fn eval_term<I: Interp>(t: &CTerm, m: &I, env: &[usize]) -> Option<usize> {
    match t {
        CTerm::Var(s) => Some(env[*s]),
        CTerm::App(op, args) => {
            let mut vals = [0usize; 8];
            if args.len() <= vals.len() {
                for (k, a) in args.iter().enumerate() {
                    vals[k] = eval_term(a, m, env)?;
                }
                m.apply(*op, &vals[..args.len()])
            } else {
                let vals: Option<Vec<usize>> = args.iter().map(|a| eval_term(a, m, env)).collect();
                m.apply(*op, &vals?)
            }
        }
    }
}

fn eval_sent<I: Interp>(s: &CSent, m: &I, table: &ActionTable, env: &mut [usize]) -> Truth {
    match s {
        CSent::Eq(a, b) => match (eval_term(a, m, env), eval_term(b, m, env)) {
            (Some(x), Some(y)) => Truth::from_bool(x == y),
            _ => Truth::Unknown,
        },
        CSent::Trans(id, a, b) => match (eval_term(a, m, env), eval_term(b, m, env)) {
            (Some(x), Some(y)) => {
                if table.lower[*id].contains(x, y) {
                    Truth::True
                } else if !table.upper[*id].contains(x, y) {
                    Truth::False
                } else {
                    Truth::Unknown
                }
            }
            _ => Truth::Unknown,
        },
        CSent::Not(inner) => eval_sent(inner, m, table, env).negate(),
        CSent::Or(items) => {
            let mut acc = Truth::False;
            for item in items {
                match eval_sent(item, m, table, env) {
                    Truth::True => return Truth::True,
                    Truth::Unknown => acc = Truth::Unknown,
                    Truth::False => {}
                }
            }
            acc
        }
        CSent::Exists(block, body) => {
            if block.iter().any(|(_, sort)| m.carrier_size(*sort) == 0) {
                return Truth::False;
            }
            for (slot, _) in block {
                env[*slot] = 0;
            }
            let mut acc = Truth::False;
            loop {
                match eval_sent(body, m, table, env) {
                    Truth::True => return Truth::True,
                    Truth::Unknown => acc = Truth::Unknown,
                    Truth::False => {}
                }
                // Advance the valuation, last variable fastest.
                let mut k = block.len();
                loop {
                    if k == 0 {
                        return acc;
                    }
                    k -= 1;
                    let (slot, sort) = block[k];
                    env[slot] += 1;
                    if env[slot] < m.carrier_size(sort) {
                        break;
                    }
                    env[slot] = 0;
                }
            }
        }
    }
}

/// Value of `t` under `v`.
pub fn eval_term_in(m: &FiniteModel, v: &Valuation, t: &Term) -> Result<usize, EvalError> {
    match t {
        Term::Var(x) => v
            .get(x)
            .copied()
            .ok_or_else(|| EvalError::UnboundVariable(format!("{}:{}", x.name, x.sort))),
        Term::App(op, args) => {
            let i = m
                .signature()
                .op_index(op)
                .ok_or_else(|| EvalError::UnknownSymbol(op.to_string()))?;
            let vals = args.iter().map(|a| eval_term_in(m, v, a)).collect::<Result<Vec<_>, _>>()?;
            m.apply(i, &vals).ok_or(EvalError::Undefined)
        }
    }
}

/// Value of a ground term.
pub fn eval_ground(m: &FiniteModel, t: &Term) -> Result<usize, EvalError> {
    eval_term_in(m, &Valuation::new(), t)
}

/// The relation denoted by `a` on the carrier of `sort`.
pub fn eval_action(m: &FiniteModel, a: &Action, sort: &Sort) -> Result<Relation, EvalError> {
    let s = m
        .signature()
        .sort_index(sort)
        .ok_or_else(|| EvalError::UnknownSort(sort.to_string()))?;
    let c = Compiler {
        sig: m.signature(),
        scope: Vec::new(),
        slots: Vec::new(),
        actions: Vec::new(),
        action_ids: HashMap::new(),
    };
    Ok(action_relation(m, &c.action(a)?, s, false))
}

/// `m ⊨ phi` for a sentence whose free variables are given by `v`.
pub fn try_satisfies_with(m: &FiniteModel, v: &Valuation, phi: &Sentence) -> Result<bool, EvalError> {
    let free: Vec<Variable> = v.keys().cloned().collect();
    let compiled = Compiled::new(m.signature(), &free, phi)?;
    let values: Vec<usize> = v.values().copied().collect();
    match compiled.truth(m, &values) {
        Truth::True => Ok(true),
        Truth::False => Ok(false),
        Truth::Unknown => Err(EvalError::Undefined),
    }
}

pub fn try_satisfies(m: &FiniteModel, phi: &Sentence) -> Result<bool, EvalError> {
    try_satisfies_with(m, &Valuation::new(), phi)
}

/// `m ⊨ phi`. Panics when `phi` does not fit the model's signature or the
/// model has undefined table rows that the evaluation needs.
pub fn satisfies(m: &FiniteModel, phi: &Sentence) -> bool {
    try_satisfies(m, phi).unwrap_or_else(|e| panic!("cannot evaluate sentence: {e}"))
}

pub fn satisfies_all(m: &FiniteModel, phis: &[Sentence]) -> bool {
    phis.iter().all(|p| satisfies(m, p))
}

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::names::{Label, Op, Sort};

/// A variable `⟨name, sort, qualifier⟩`.
///
/// The qualifier is an opaque scope tag. Variables bound by a quantifier
/// block at nesting depth `d` carry qualifier `offset + d` after
/// [`Sentence::normalize`], which keeps them apart from free variables and
/// from variables of enclosing blocks that share name and sort.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Variable {
    pub name: Arc<str>,
    pub sort: Sort,
    pub qualifier: u32,
}

impl Variable {
    pub fn new(name: impl AsRef<str>, sort: Sort) -> Self {
        Variable {
            name: Arc::from(name.as_ref()),
            sort,
            qualifier: 0,
        }
    }

    pub fn with_qualifier(mut self, qualifier: u32) -> Self {
        self.qualifier = qualifier;
        self
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Variable),
    App(Op, Vec<Term>),
}

impl Term {
    pub fn var(v: Variable) -> Term {
        Term::Var(v)
    }

    pub fn app(op: Op, args: Vec<Term>) -> Term {
        Term::App(op, args)
    }

    pub fn constant(op: Op) -> Term {
        Term::App(op, Vec::new())
    }

    /// The sort read off the head symbol or variable. Whether the term is
    /// actually sort-correct is checked by [`super::sort_of_term`].
    pub fn sort(&self) -> &Sort {
        match self {
            Term::Var(v) => &v.sort,
            Term::App(op, _) => op.result(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }

    pub fn ops(&self, out: &mut BTreeSet<Op>) {
        if let Term::App(op, args) = self {
            out.insert(op.clone());
            args.iter().for_each(|a| a.ops(out));
        }
    }

    /// Every subterm, outermost first.
    pub fn subterms(&self, out: &mut Vec<Term>) {
        out.push(self.clone());
        if let Term::App(_, args) = self {
            args.iter().for_each(|a| a.subterms(out));
        }
    }

    /// Bottom-up rewrite: `f` sees each node after its arguments were
    /// rewritten and may replace it.
    pub fn rewrite(&self, f: &mut impl FnMut(&Term) -> Option<Term>) -> Term {
        let rebuilt = match self {
            Term::Var(_) => self.clone(),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.rewrite(f)).collect()),
        };
        f(&rebuilt).unwrap_or(rebuilt)
    }

    pub fn substitute(&self, map: &HashMap<Variable, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.substitute(map)).collect()),
        }
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&Variable) -> Variable) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Action {
    Label(Label),
    Seq(Box<Action>, Box<Action>),
    Union(Box<Action>, Box<Action>),
    Star(Box<Action>),
}

impl Action {
    pub fn label(l: impl Into<Label>) -> Action {
        Action::Label(l.into())
    }

    pub fn seq(a: Action, b: Action) -> Action {
        Action::Seq(Box::new(a), Box::new(b))
    }

    pub fn union(a: Action, b: Action) -> Action {
        Action::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: Action) -> Action {
        Action::Star(Box::new(a))
    }

    /// `a^n` for `n >= 1`, as a right-nested composition `a ; (a ; ...)`.
    pub fn power(&self, n: usize) -> Action {
        assert!(n >= 1, "a^0 is not an action; use an equation");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = Action::seq(self.clone(), acc);
        }
        acc
    }

    pub fn labels(&self, out: &mut BTreeSet<Label>) {
        match self {
            Action::Label(l) => {
                out.insert(l.clone());
            }
            Action::Seq(a, b) | Action::Union(a, b) => {
                a.labels(out);
                b.labels(out);
            }
            Action::Star(a) => a.labels(out),
        }
    }

    pub fn map_labels(&self, f: &mut impl FnMut(&Label) -> Label) -> Action {
        match self {
            Action::Label(l) => Action::Label(f(l)),
            Action::Seq(a, b) => Action::seq(a.map_labels(f), b.map_labels(f)),
            Action::Union(a, b) => Action::union(a.map_labels(f), b.map_labels(f)),
            Action::Star(a) => Action::star(a.map_labels(f)),
        }
    }
}

/// Sentences in the core grammar. `And`, `Implies`, `Forall`, `True` and
/// `False` are only constructors producing core nodes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sentence {
    Eq(Term, Term),
    Trans(Action, Term, Term),
    Not(Box<Sentence>),
    Or(Vec<Sentence>),
    Exists(Vec<Variable>, Box<Sentence>),
}

impl Sentence {
    pub fn eq(a: Term, b: Term) -> Sentence {
        Sentence::Eq(a, b)
    }

    pub fn neq(a: Term, b: Term) -> Sentence {
        Sentence::not(Sentence::Eq(a, b))
    }

    pub fn trans(a: Action, t1: Term, t2: Term) -> Sentence {
        Sentence::Trans(a, t1, t2)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(s: Sentence) -> Sentence {
        Sentence::Not(Box::new(s))
    }

    pub fn or(items: Vec<Sentence>) -> Sentence {
        Sentence::Or(items)
    }

    /// `∧Φ := ¬∨{¬φ | φ ∈ Φ}`.
    pub fn and(items: Vec<Sentence>) -> Sentence {
        Sentence::not(Sentence::Or(items.into_iter().map(Sentence::not).collect()))
    }

    pub fn implies(a: Sentence, b: Sentence) -> Sentence {
        Sentence::Or(vec![Sentence::not(a), b])
    }

    pub fn exists(block: Vec<Variable>, body: Sentence) -> Sentence {
        Sentence::Exists(block, Box::new(body))
    }

    /// `∀X.φ := ¬∃X.¬φ`.
    pub fn forall(block: Vec<Variable>, body: Sentence) -> Sentence {
        Sentence::not(Sentence::exists(block, Sentence::not(body)))
    }

    pub fn falsum() -> Sentence {
        Sentence::Or(Vec::new())
    }

    pub fn verum() -> Sentence {
        Sentence::not(Sentence::falsum())
    }

    /// `a^n(t1, t2)`, with `a^0(t1, t2)` read as the equation `t1 = t2`.
    pub fn power_trans(a: &Action, n: usize, t1: Term, t2: Term) -> Sentence {
        if n == 0 {
            Sentence::Eq(t1, t2)
        } else {
            Sentence::Trans(a.power(n), t1, t2)
        }
    }

    pub fn as_forall(&self) -> Option<(&[Variable], &Sentence)> {
        match self {
            Sentence::Not(inner) => match inner.as_ref() {
                Sentence::Exists(block, body) => match body.as_ref() {
                    Sentence::Not(b) => Some((block, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_and(&self) -> Option<Vec<&Sentence>> {
        match self {
            Sentence::Not(inner) => match inner.as_ref() {
                Sentence::Or(items) => items
                    .iter()
                    .map(|i| match i {
                        Sentence::Not(x) => Some(x.as_ref()),
                        _ => None,
                    })
                    .collect(),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn as_implies(&self) -> Option<(&Sentence, &Sentence)> {
        match self {
            Sentence::Or(items) if items.len() == 2 => match &items[0] {
                Sentence::Not(a) => Some((a, &items[1])),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn is_verum(&self) -> bool {
        matches!(self, Sentence::Not(inner) if matches!(inner.as_ref(), Sentence::Or(v) if v.is_empty()))
    }

    pub fn is_falsum(&self) -> bool {
        matches!(self, Sentence::Or(v) if v.is_empty())
    }

    /// Ground equation or ground single-label transition.
    pub fn is_atomic(&self) -> bool {
        match self {
            Sentence::Eq(a, b) => a.is_ground() && b.is_ground(),
            Sentence::Trans(Action::Label(_), a, b) => a.is_ground() && b.is_ground(),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Variable>, out: &mut BTreeSet<Variable>) {
        let term = |t: &Term, out: &mut BTreeSet<Variable>| {
            let mut vs = BTreeSet::new();
            t.vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Sentence::Eq(a, b) | Sentence::Trans(_, a, b) => {
                term(a, out);
                term(b, out);
            }
            Sentence::Not(s) => s.collect_free(bound, out),
            Sentence::Or(items) => items.iter().for_each(|s| s.collect_free(bound, out)),
            Sentence::Exists(block, body) => {
                let n = bound.len();
                bound.extend(block.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Function symbols occurring anywhere in the sentence.
    pub fn ops(&self) -> BTreeSet<Op> {
        let mut out = BTreeSet::new();
        self.for_each_term(&mut |t| t.ops(&mut out));
        out
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        self.for_each_action(&mut |a| a.labels(&mut out));
        out
    }

    pub fn for_each_term(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Sentence::Eq(a, b) | Sentence::Trans(_, a, b) => {
                f(a);
                f(b);
            }
            Sentence::Not(s) | Sentence::Exists(_, s) => s.for_each_term(f),
            Sentence::Or(items) => items.iter().for_each(|s| s.for_each_term(f)),
        }
    }

    pub fn for_each_action(&self, f: &mut impl FnMut(&Action)) {
        match self {
            Sentence::Eq(..) => {}
            Sentence::Trans(a, _, _) => f(a),
            Sentence::Not(s) | Sentence::Exists(_, s) => s.for_each_action(f),
            Sentence::Or(items) => items.iter().for_each(|s| s.for_each_action(f)),
        }
    }

    /// Applies `f` to every maximal term occurrence; binders are untouched.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Sentence {
        match self {
            Sentence::Eq(a, b) => Sentence::Eq(f(a), f(b)),
            Sentence::Trans(act, a, b) => Sentence::Trans(act.clone(), f(a), f(b)),
            Sentence::Not(s) => Sentence::not(s.map_terms(f)),
            Sentence::Or(items) => Sentence::Or(items.iter().map(|s| s.map_terms(f)).collect()),
            Sentence::Exists(block, body) => Sentence::exists(block.clone(), body.map_terms(f)),
        }
    }

    /// Number of constructor nodes; used to bound random generation and
    /// to order pools.
    pub fn size(&self) -> usize {
        match self {
            Sentence::Eq(..) | Sentence::Trans(..) => 1,
            Sentence::Not(s) | Sentence::Exists(_, s) => 1 + s.size(),
            Sentence::Or(items) => 1 + items.iter().map(Sentence::size).sum::<usize>(),
        }
    }

    /// Nesting depth of sentence constructors (atoms have depth 0).
    pub fn depth(&self) -> usize {
        match self {
            Sentence::Eq(..) | Sentence::Trans(..) => 0,
            Sentence::Not(s) | Sentence::Exists(_, s) => 1 + s.depth(),
            Sentence::Or(items) => 1 + items.iter().map(Sentence::depth).max().unwrap_or(0),
        }
    }

    /// Canonical form: every quantifier block at nesting depth `d` gets
    /// qualifier `offset + d`, where `offset` is the largest qualifier of a
    /// free variable. Bound references are renamed along with their binder;
    /// identical variables inside one block are merged. Idempotent.
    pub fn normalize(&self) -> Sentence {
        let offset = self.free_vars().iter().map(|v| v.qualifier).max().unwrap_or(0);
        self.requalify(offset, 0, &mut Vec::new())
    }

    /// As [`Sentence::normalize`] but with binder qualifiers starting above
    /// `floor`, so that terms with qualifiers up to `floor` can be
    /// substituted in without capture.
    pub fn requalified_above(&self, floor: u32) -> Sentence {
        let offset = self
            .free_vars()
            .iter()
            .map(|v| v.qualifier)
            .max()
            .unwrap_or(0)
            .max(floor);
        self.requalify(offset, 0, &mut Vec::new())
    }

    fn requalify(&self, offset: u32, depth: u32, scope: &mut Vec<(Variable, Variable)>) -> Sentence {
        match self {
            Sentence::Exists(block, body) => {
                let q = offset + depth + 1;
                let n = scope.len();
                let mut new_block: Vec<Variable> = Vec::with_capacity(block.len());
                for v in block {
                    let nv = v.clone().with_qualifier(q);
                    scope.push((v.clone(), nv.clone()));
                    if !new_block.contains(&nv) {
                        new_block.push(nv);
                    }
                }
                let body = body.requalify(offset, depth + 1, scope);
                scope.truncate(n);
                Sentence::exists(new_block, body)
            }
            Sentence::Not(s) => Sentence::not(s.requalify(offset, depth, scope)),
            Sentence::Or(items) => Sentence::Or(items.iter().map(|s| s.requalify(offset, depth, scope)).collect()),
            _ => self.map_terms(&mut |t| {
                t.map_vars(&mut |v| {
                    scope
                        .iter()
                        .rev()
                        .find(|(old, _)| old == v)
                        .map(|(_, new)| new.clone())
                        .unwrap_or_else(|| v.clone())
                })
            }),
        }
    }

    /// Capture-avoiding substitution of free variables.
    pub fn substitute(&self, map: &HashMap<Variable, Term>) -> Sentence {
        if map.is_empty() {
            return self.clone();
        }
        let mut floor = 0;
        for t in map.values() {
            let mut vs = BTreeSet::new();
            t.vars(&mut vs);
            floor = floor.max(vs.iter().map(|v| v.qualifier).max().unwrap_or(0));
        }
        let floor = floor.max(map.keys().map(|v| v.qualifier).max().unwrap_or(0));
        self.requalified_above(floor).substitute_free(map, &mut Vec::new())
    }

    fn substitute_free(&self, map: &HashMap<Variable, Term>, bound: &mut Vec<Variable>) -> Sentence {
        match self {
            Sentence::Exists(block, body) => {
                let n = bound.len();
                bound.extend(block.iter().cloned());
                let body = body.substitute_free(map, bound);
                bound.truncate(n);
                Sentence::exists(block.clone(), body)
            }
            Sentence::Not(s) => Sentence::not(s.substitute_free(map, bound)),
            Sentence::Or(items) => Sentence::Or(items.iter().map(|s| s.substitute_free(map, bound)).collect()),
            _ => {
                let live: HashMap<Variable, Term> = map
                    .iter()
                    .filter(|(k, _)| !bound.contains(k))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                self.map_terms(&mut |t| t.substitute(&live))
            }
        }
    }

    /// Direct subsentences.
    pub fn children(&self) -> Vec<&Sentence> {
        match self {
            Sentence::Eq(..) | Sentence::Trans(..) => Vec::new(),
            Sentence::Not(s) | Sentence::Exists(_, s) => vec![s.as_ref()],
            Sentence::Or(items) => items.iter().collect(),
        }
    }
}

/// A name not in `taken`, built from `base` by appending digits.
pub fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> Sort {
        Sort::new("s")
    }

    #[test]
    fn sugar_builds_core_nodes() {
        assert_eq!(Sentence::verum(), Sentence::not(Sentence::Or(vec![])));
        let x = Variable::new("x", s());
        let body = Sentence::eq(Term::var(x.clone()), Term::var(x.clone()));
        let fa = Sentence::forall(vec![x.clone()], body.clone());
        let (block, inner) = fa.as_forall().unwrap();
        assert_eq!(block, &[x]);
        assert_eq!(inner, &body);
    }

    #[test]
    fn power_nests_to_the_right() {
        let a = Action::label("a");
        assert_eq!(a.power(1), a);
        assert_eq!(a.power(3), Action::seq(a.clone(), Action::seq(a.clone(), a.clone())));
    }

    #[test]
    fn normalize_renumbers_by_depth() {
        let x7 = Variable::new("x", s()).with_qualifier(7);
        let x9 = Variable::new("x", s()).with_qualifier(9);
        let inner = Sentence::exists(
            vec![x9.clone()],
            Sentence::eq(Term::var(x7.clone()), Term::var(x9.clone())),
        );
        let phi = Sentence::exists(vec![x7], inner);
        let n = phi.normalize();
        let x1 = Variable::new("x", s()).with_qualifier(1);
        let x2 = Variable::new("x", s()).with_qualifier(2);
        let expected = Sentence::exists(
            vec![x1.clone()],
            Sentence::exists(vec![x2.clone()], Sentence::eq(Term::var(x1), Term::var(x2))),
        );
        assert_eq!(n, expected);
        assert_eq!(n.normalize(), n);
    }

    #[test]
    fn substitution_does_not_capture() {
        let y = Variable::new("y", s());
        let x_free = Variable::new("x", s());
        // exists x@0 . x = y, substitute y := x (free x@0)
        let phi = Sentence::exists(
            vec![x_free.clone()],
            Sentence::eq(Term::var(x_free.clone()), Term::var(y.clone())),
        );
        let map = HashMap::from([(y, Term::var(x_free.clone()))]);
        let out = phi.substitute(&map);
        match out {
            Sentence::Exists(block, body) => {
                assert_ne!(block[0], x_free);
                assert_eq!(*body, Sentence::eq(Term::var(block[0].clone()), Term::var(x_free)));
            }
            _ => panic!(),
        }
    }
}

//! Generators for the named example theories and models.
//!
//! Every generator that truncates an infinite family takes the truncation
//! parameter explicitly.

use crate::classes::{Derivation, Rule, Step};
use crate::finmod::{FiniteModel, SizeBounds};
use crate::forcing::{Condition, ForcingProperty};
use crate::institution::{Flavor, SignatureMorphism, Substitution};
use crate::kernel::{Action, Label, Op, Sentence, Signature, Sort, Term, Variable};
use crate::surface::SpecFile;

pub fn elt() -> Sort {
    Sort::new("Elt")
}

pub fn list() -> Sort {
    Sort::new("List")
}

pub fn empty_op() -> Op {
    Op::constant("empty", list())
}

pub fn cons_op() -> Op {
    Op::new("cons", vec![list(), elt()], list())
}

pub fn add_op() -> Op {
    Op::new("add", vec![list(), list()], list())
}

/// Lists over `Elt` with constructors `empty` and `cons` and a defined
/// concatenation `add`.
pub fn list_signature() -> Signature {
    Signature::new()
        .with_sort(elt())
        .with_sort(list())
        .with_ctor(empty_op())
        .with_ctor(cons_op())
        .with_op(add_op())
}

fn v(name: &str, sort: Sort) -> Variable {
    Variable::new(name, sort)
}

fn var(x: &Variable) -> Term {
    Term::var(x.clone())
}

fn add(a: Term, b: Term) -> Term {
    Term::app(add_op(), vec![a, b])
}

fn cons(a: Term, b: Term) -> Term {
    Term::app(cons_op(), vec![a, b])
}

/// `add(x, empty) = x` and `add(x, cons(y, e)) = cons(add(x, y), e)`.
pub fn list_axioms() -> Vec<(String, Sentence)> {
    let x = v("x", list());
    let y = v("y", list());
    let e = v("e", elt());
    let empty = Term::constant(empty_op());
    vec![
        (
            "add_empty".to_string(),
            Sentence::forall(vec![x.clone()], Sentence::eq(add(var(&x), empty), var(&x))),
        ),
        (
            "add_cons".to_string(),
            Sentence::forall(
                vec![x.clone(), y.clone(), e.clone()],
                Sentence::eq(
                    add(var(&x), cons(var(&y), var(&e))),
                    cons(add(var(&x), var(&y)), var(&e)),
                ),
            ),
        ),
    ]
}

pub fn list_assoc() -> Sentence {
    let x = v("x", list());
    let y = v("y", list());
    let z = v("z", list());
    Sentence::forall(
        vec![x.clone(), y.clone(), z.clone()],
        Sentence::eq(
            add(add(var(&x), var(&y)), var(&z)),
            add(var(&x), add(var(&y), var(&z))),
        ),
    )
}

/// Lists over a one-element `Elt` truncated at length 2: `E0 = empty`,
/// `E1 = cons(E0, e)`, `E2 = cons(E1, e) = cons(E2, e)`, and `add` defined
/// by the two axioms.
pub fn list_ctor_model() -> FiniteModel {
    let mut m = FiniteModel::with_carriers(list_signature(), &[("Elt", &["e"]), ("List", &["E0", "E1", "E2"])]);
    m.set(&empty_op(), &[], 0);
    for i in 0..3 {
        m.set(&cons_op(), &[i, 0], (i + 1).min(2));
    }
    for x in 0..3 {
        for y in 0..3 {
            m.set(&add_op(), &[x, y], (x + y).min(2));
        }
    }
    m
}

/// A finite quotient of the non-constructor-based list model: the term
/// lists rooted at `empty` and at an extra list `nil`, over a one-element
/// `Elt`, with lists of length 2 or more identified (`E2`, `N2`).
///
/// `add` follows the two axioms, plus `add(empty, nil) = cons(empty, e)` and
/// `add(cons(l, e), nil) = cons(l, e)`. The value `add(nil, nil)` is not
/// determined by those rules; it is chosen to be `nil`.
pub fn list_saturated_model() -> FiniteModel {
    let names = ["E0", "E1", "E2", "N0", "N1", "N2"];
    let mut m = FiniteModel::with_carriers(list_signature(), &[("Elt", &["e"]), ("List", &names)]);
    let (e0, e1, e2, n0, n1, n2) = (0, 1, 2, 3, 4, 5);
    let succ = |l: usize| match l {
        0 => e1,
        1 | 2 => e2,
        3 => n1,
        _ => n2,
    };
    m.set(&empty_op(), &[], e0);
    for l in 0..6 {
        m.set(&cons_op(), &[l, 0], succ(l));
    }
    let add_nil = |x: usize| match x {
        0 => e1,
        3 => n0,
        other => other,
    };
    for x in 0..6 {
        let along = |base: usize, steps: usize| (0..steps).fold(base, |acc, _| succ(acc));
        m.set(&add_op(), &[x, e0], x);
        m.set(&add_op(), &[x, e1], along(x, 1));
        m.set(&add_op(), &[x, e2], along(x, 2));
        m.set(&add_op(), &[x, n0], add_nil(x));
        m.set(&add_op(), &[x, n1], along(add_nil(x), 1));
        m.set(&add_op(), &[x, n2], along(add_nil(x), 2));
    }
    m
}

pub fn indexed_sort(n: usize) -> Sort {
    Sort::new(format!("s{n}"))
}

/// Sorts `s0 .. s{k-1}`, each with one constant `c{n}`.
pub fn uls_signature(k: usize) -> Signature {
    (0..k).fold(Signature::new(), |sig, n| {
        sig.with_sort(indexed_sort(n))
            .with_op(Op::constant(format!("c{n}"), indexed_sort(n)))
    })
}

/// `forall x{n}:s{n} . x{n} = c{n}` for `n < k`.
pub fn uls_gamma(k: usize) -> Vec<(String, Sentence)> {
    (0..k)
        .map(|n| {
            let x = v(&format!("x{n}"), indexed_sort(n));
            let c = Term::constant(Op::constant(format!("c{n}"), indexed_sort(n)));
            (format!("one{n}"), Sentence::forall(vec![x.clone()], Sentence::eq(var(&x), c)))
        })
        .collect()
}

/// Each carrier is the singleton `{c{n}}`.
pub fn uls_model(k: usize) -> FiniteModel {
    let names: Vec<String> = (0..k).map(|n| format!("c{n}")).collect();
    let sig = uls_signature(k);
    let carriers = names.iter().map(|n| vec![n.clone()]).collect();
    let mut m = FiniteModel::new(sig, carriers);
    for n in 0..k {
        m.set(&Op::constant(format!("c{n}"), indexed_sort(n)), &[], 0);
    }
    m
}

pub fn lambda() -> Label {
    Label::new("lambda")
}

/// Sorts `s0 .. s{k-1}`, constants `c, d : s0` and one label `lambda`.
pub fn example28_signature(k: usize) -> Signature {
    let sig = (0..k).fold(Signature::new(), |sig, n| sig.with_sort(indexed_sort(n)));
    sig.with_op(Op::constant("c", indexed_sort(0)))
        .with_op(Op::constant("d", indexed_sort(0)))
        .with_label(lambda())
}

/// `lambda*(c, d)` and `(exists x{n}:s{n} . true) => not lambda^n(c, d)` for
/// `n < k`, with `lambda^0(c, d)` read as `c = d`.
pub fn example28_phi(k: usize) -> Vec<(String, Sentence)> {
    let c = Term::constant(Op::constant("c", indexed_sort(0)));
    let d = Term::constant(Op::constant("d", indexed_sort(0)));
    let l = Action::Label(lambda());
    let mut out = vec![(
        "reach".to_string(),
        Sentence::trans(Action::star(l.clone()), c.clone(), d.clone()),
    )];
    for n in 0..k {
        let x = v(&format!("x{n}"), indexed_sort(n));
        out.push((
            format!("gap{n}"),
            Sentence::implies(
                Sentence::exists(vec![x], Sentence::verum()),
                Sentence::not(Sentence::power_trans(&l, n, c.clone(), d.clone())),
            ),
        ));
    }
    out
}

/// `exists x{n}:s{n} . true` for every `n < k`.
pub fn inhabited(k: usize) -> Vec<(String, Sentence)> {
    (0..k)
        .map(|n| {
            let x = v(&format!("x{n}"), indexed_sort(n));
            (format!("inhabited{n}"), Sentence::exists(vec![x], Sentence::verum()))
        })
        .collect()
}

/// Sorts `s1 .. sk`, no symbols.
pub fn inf_signature(k: usize) -> Signature {
    (1..=k).fold(Signature::new(), |sig, n| sig.with_sort(indexed_sort(n)))
}

fn distinct(xs: &[Variable]) -> Vec<Sentence> {
    let mut out = Vec::new();
    for (i, a) in xs.iter().enumerate() {
        for (j, b) in xs.iter().enumerate() {
            if i != j {
                out.push(Sentence::neq(var(a), var(b)));
            }
        }
    }
    out
}

fn block(n: usize) -> Vec<Variable> {
    (1..=n).map(|i| v(&format!("x{i}"), indexed_sort(1))).collect()
}

/// `phi_n := (exists z{n}:s{n} . true) => exists x1..xn:s1 . and_{i != j} xi != xj`
/// for `0 < n <= k`.
pub fn inf_phi(k: usize) -> Vec<(String, Sentence)> {
    (1..=k)
        .map(|n| {
            let z = v(&format!("z{n}"), indexed_sort(n));
            let xs = block(n);
            (
                format!("phi{n}"),
                Sentence::implies(
                    Sentence::exists(vec![z], Sentence::verum()),
                    Sentence::exists(xs.clone(), Sentence::and(distinct(&xs))),
                ),
            )
        })
        .collect()
}

/// The free variable `y : s1` of the infinity type.
pub fn inf_type_variable() -> Variable {
    v("y", indexed_sort(1))
}

/// `exists x1..xn:s1 . and_{i != j} xi != xj and and_i y != xi` for
/// `0 < n <= k`, over the free variable `y : s1`.
pub fn inf_type_sentences(k: usize) -> Vec<(String, Sentence)> {
    let y = inf_type_variable();
    (1..=k)
        .map(|n| {
            let xs = block(n);
            let mut body = distinct(&xs);
            body.extend(xs.iter().map(|x| Sentence::neq(var(&y), var(x))));
            (format!("more{n}"), Sentence::exists(xs, Sentence::and(body)))
        })
        .collect()
}

/// The named fixtures, with the truncation parameter each one takes.
pub const FIXTURES: &[(&str, Option<usize>, &str)] = &[
    ("list", Some(3), "lists with PHI, assoc, both list models and T^c at depth k"),
    ("list-saturated", None, "the 7-element quotient list model"),
    ("uls", Some(4), "sorts s0..s{k-1}, each with exactly one element"),
    ("example28", Some(3), "no lambda-path from c to d of length < k"),
    ("inf", Some(3), "phi_1..phi_k with the infinity type and an isolation pool"),
    ("tf", Some(3), "one unary function and the type of k distinct elements"),
    ("forcing", None, "a four-condition diamond of transition facts"),
];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("fixture `{0}` takes no parameter")]
    NoParameter(String),
}

/// The fixture `name` as a spec file; `k` overrides the default truncation.
pub fn spec(name: &str, k: Option<usize>) -> Result<SpecFile, FixtureError> {
    let &(_, default, _) = FIXTURES
        .iter()
        .find(|(n, ..)| *n == name)
        .ok_or_else(|| FixtureError::UnknownFixture(name.to_string()))?;
    if default.is_none() && k.is_some() {
        return Err(FixtureError::NoParameter(name.to_string()));
    }
    let k = k.or(default).unwrap_or(0);
    let mut spec = SpecFile::new();
    match name {
        "list" => {
            let sig = list_signature();
            spec.add_signature("LIST", sig.clone())
                .add_theory("PHI", "LIST", list_axioms())
                .add_goal("assoc", "LIST", list_assoc())
                .add_model("C", "LIST", list_ctor_model())
                .add_model("B", "LIST", list_saturated_model());
            let tc = crate::types::build_tc(&sig, k).expect("lists have constructors");
            for t in tc {
                let names: Vec<String> = (0..t.ty.sentences.len()).map(|i| format!("t{i}")).collect();
                spec.add_type("TC", "LIST", names, t.ty);
            }
            let a = Op::constant("a", list());
            let two = Term::app(add_op(), vec![Term::constant(empty_op()), Term::constant(empty_op())]);
            let theta = Substitution::new(sig.clone(), vec![a.clone()], vec![], [(a, two)].into());
            spec.add_subst("theta", "LIST", theta)
                .add_morphism("id", "LIST", "LIST", SignatureMorphism::identity(&sig));
            let phi: Vec<Sentence> = list_axioms().into_iter().map(|(_, s)| s.normalize()).collect();
            let derivation = Derivation {
                sig,
                flavor: Flavor::CtorBased,
                steps: vec![
                    Step {
                        name: "first".into(),
                        rule: Rule::Monotonicity,
                        lhs: phi.clone(),
                        rhs: vec![phi[0].clone()],
                    },
                    Step {
                        name: "induction".into(),
                        rule: Rule::Cb {
                            var: "z".into(),
                            depth: 2,
                            bounds: SizeBounds::uniform(0).with("List", 3).with("Elt", 1),
                        },
                        lhs: phi,
                        rhs: vec![list_assoc().normalize()],
                    },
                ],
            };
            spec.add_proof("P", "LIST", derivation);
        }
        "list-saturated" => {
            spec.add_signature("LIST", list_signature()).add_model("B", "LIST", list_saturated_model());
        }
        "uls" => {
            spec.add_signature("ULS", uls_signature(k))
                .add_model("M", "ULS", uls_model(k))
                .add_theory("GAMMA", "ULS", uls_gamma(k));
        }
        "example28" => {
            spec.add_signature("E28", example28_signature(k))
                .add_theory("PHI", "E28", example28_phi(k))
                .add_theory("INHABITED", "E28", inhabited(k));
        }
        "inf" => {
            let (sig, _, ty) = crate::types::build_inf_type(k);
            let y = inf_type_variable();
            let mut pool: Vec<Sentence> = (2..=k)
                .map(|n| Sentence::exists(vec![v("z", indexed_sort(n))], Sentence::verum()))
                .collect();
            let w = v("w", indexed_sort(1));
            pool.push(Sentence::eq(var(&y), var(&y)));
            pool.push(Sentence::exists(vec![w.clone()], Sentence::neq(var(&w), var(&y))));
            let pool = crate::types::LogicType::new(sig.clone(), vec![y], pool.iter().map(Sentence::normalize).collect());
            let type_names: Vec<String> = inf_type_sentences(k).into_iter().map(|(n, _)| n).collect();
            let pool_names: Vec<String> = (0..pool.sentences.len()).map(|i| format!("g{i}")).collect();
            spec.add_signature("INF", sig)
                .add_theory("PHI", "INF", inf_phi(k))
                .add_type("T", "INF", type_names, ty)
                .add_type("POOL", "INF", pool_names, pool);
        }
        "tf" => {
            let s = Sort::new("s");
            let sig = Signature::new().with_sort(s.clone()).with_op(Op::new("f", vec![s.clone()], s.clone()));
            let ty = crate::types::build_tf(&sig, &s, k);
            let names: Vec<String> = (0..ty.sentences.len()).map(|i| format!("t{i}")).collect();
            spec.add_signature("S", sig).add_type("TF", "S", names, ty);
        }
        "forcing" => {
            let sig = forcing_signature();
            let prop = forcing_diamond(&sig);
            spec.add_signature("F", sig).add_forcing("D", "F", prop);
        }
        _ => unreachable!("listed in FIXTURES"),
    }
    Ok(spec)
}

fn forcing_signature() -> Signature {
    let s = Sort::new("s");
    ["c", "d", "e"]
        .iter()
        .fold(Signature::new().with_sort(s.clone()).with_label(lambda()), |sig, c| {
            sig.with_op(Op::constant(*c, s.clone()))
        })
}

/// `z` below `a` (adds `lambda(c, d)`) and `b` (adds a fresh `k` with
/// `lambda(d, k)`), both below `t`.
fn forcing_diamond(sig: &Signature) -> ForcingProperty {
    let s = Sort::new("s");
    let k = Op::constant("k", s.clone());
    let wide = sig.with_constants(std::slice::from_ref(&k));
    let t = |n: &str| Term::constant(Op::constant(n, s.clone()));
    let step = |a: Term, b: Term| Sentence::trans(Action::Label(lambda()), a, b);
    let closed = |sig: &Signature, atoms: Vec<Sentence>| {
        crate::forcing::atomic_consequences(sig, &atoms.into_iter().collect(), 0, 100).expect("small universe")
    };
    let ab = step(t("c"), t("d"));
    let bk = step(t("d"), Term::constant(k));
    ForcingProperty::new(
        sig.clone(),
        vec![
            Condition::new("z", sig.clone(), closed(sig, vec![])),
            Condition::new("a", sig.clone(), closed(sig, vec![ab.clone()])),
            Condition::new("b", wide.clone(), closed(&wide, vec![bk.clone()])),
            Condition::new("t", wide.clone(), closed(&wide, vec![ab, bk])),
        ],
        &[(0, 1), (0, 2), (1, 3), (2, 3)],
    )
}

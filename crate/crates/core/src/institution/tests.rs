use std::collections::BTreeMap;

use super::*;
use crate::finmod::{eval_ground, satisfies, validate_model, FiniteModel};
use crate::fixtures::*;
use crate::kernel::{Action, Label, Op, Sentence, Signature, Sort, Term, Variable};

#[test]
fn identity_is_a_ctor_morphism() {
    let sig = list_signature();
    let id = SignatureMorphism::identity(&sig);
    assert!(check_morphism(&id, Flavor::CtorBased).is_empty());
    let phi = list_assoc();
    assert_eq!(translate_sentence(&id, &phi), phi);
    let m = list_saturated_model();
    assert_eq!(reduct_model(&id, &m), m);
}

#[test]
fn new_target_constructor_is_not_reflected() {
    let sig = list_signature();
    let nil = Op::constant("nil", list());
    let target = list_signature().with_ctor(nil);
    let chi = SignatureMorphism::inclusion(&sig, &target);
    assert!(check_morphism(&chi, Flavor::Plain).is_empty());
    let r = check_morphism(&chi, Flavor::CtorBased);
    assert_eq!(r.len(), 1);
    assert!(r.violations()[0].message.contains("not reflected"));
}

#[test]
fn dropping_a_finite_sort_is_reported() {
    let sig = list_signature().with_finite_sort(elt());
    let target = list_signature();
    let chi = SignatureMorphism::inclusion(&sig, &target);
    assert!(check_morphism(&chi, Flavor::CtorBased).is_empty());
    assert_eq!(check_morphism(&chi, Flavor::FiniteSorts).len(), 1);
}

#[test]
fn quantifier_blocks_follow_the_sort_map() {
    let s = Sort::new("s");
    let u = Sort::new("u");
    let src = Signature::new().with_sort(s.clone());
    let tgt = Signature::new().with_sort(u.clone());
    let chi = SignatureMorphism::new(src, tgt, BTreeMap::from([(s.clone(), u.clone())]), BTreeMap::new(), BTreeMap::new());
    let phi = Sentence::exists(vec![Variable::new("x", s).with_qualifier(1)], Sentence::verum());
    let expected = Sentence::exists(vec![Variable::new("x", u).with_qualifier(1)], Sentence::verum());
    assert_eq!(translate_sentence(&chi, &phi), expected);
}

#[test]
fn labels_translate_homomorphically() {
    let s = Sort::new("s");
    let c = Op::constant("c", s.clone());
    let d = Op::constant("d", s.clone());
    let src = Signature::new().with_sort(s.clone()).with_op(c.clone()).with_op(d.clone()).with_label("lam");
    let tgt = Signature::new().with_sort(s).with_op(c.clone()).with_op(d.clone()).with_label("mu");
    let chi = SignatureMorphism::new(
        src,
        tgt,
        BTreeMap::new(),
        BTreeMap::new(),
        BTreeMap::from([(Label::new("lam"), Label::new("mu"))]),
    );
    let phi = Sentence::trans(Action::star(Action::label("lam")), Term::constant(c.clone()), Term::constant(d.clone()));
    let expected = Sentence::trans(Action::star(Action::label("mu")), Term::constant(c), Term::constant(d));
    assert_eq!(translate_sentence(&chi, &phi), expected);
}

#[test]
fn inclusion_reduct_forgets_new_constants() {
    let m = list_ctor_model();
    let c = Op::constant("c", list());
    let expanded = m.expand_constants(&[(c, 2)]);
    assert_eq!(restrict(&expanded, &list_signature()), m);
}

#[test]
fn collapsing_sorts_share_the_carrier() {
    let a = Sort::new("a");
    let b = Sort::new("b");
    let u = Sort::new("u");
    let src = Signature::new().with_sort(a.clone()).with_sort(b.clone());
    let tgt = Signature::new().with_sort(u.clone());
    let chi = SignatureMorphism::new(
        src,
        tgt.clone(),
        BTreeMap::from([(a.clone(), u.clone()), (b.clone(), u)]),
        BTreeMap::new(),
        BTreeMap::new(),
    );
    assert!(check_morphism(&chi, Flavor::Plain).is_empty());
    let m = FiniteModel::with_carriers(tgt, &[("u", &["p", "q"])]);
    let r = reduct_model(&chi, &m);
    assert!(validate_model(&r).is_empty());
    assert_eq!(r.carrier(&a), r.carrier(&b));
    assert_eq!(r.carrier(&a).len(), 2);
}

#[test]
fn nested_blocks_over_collapsed_sorts_stay_apart() {
    // exists x:a . exists x:b . ... refers to both x's; after a,b -> u they
    // must remain distinct variables.
    let a = Sort::new("a");
    let b = Sort::new("b");
    let u = Sort::new("u");
    let ca = Op::constant("ca", a.clone());
    let src = Signature::new().with_sort(a.clone()).with_sort(b.clone()).with_op(ca.clone());
    let tgt = Signature::new().with_sort(u.clone()).with_op(Op::constant("ca", u.clone()));
    let chi = SignatureMorphism::new(
        src,
        tgt.clone(),
        BTreeMap::from([(a.clone(), u.clone()), (b.clone(), u)]),
        BTreeMap::new(),
        BTreeMap::new(),
    );
    let xa = Variable::new("x", a);
    let xb = Variable::new("x", b);
    let phi = Sentence::exists(
        vec![xa.clone()],
        Sentence::forall(vec![xb], Sentence::eq(Term::var(xa), Term::constant(ca))),
    );
    let mut m = FiniteModel::with_carriers(tgt, &[("u", &["p", "q"])]);
    m.set(&Op::constant("ca", Sort::new("u")), &[], 0);
    let translated = translate_sentence(&chi, &phi);
    assert_eq!(satisfies(&reduct_model(&chi, &m), &phi), satisfies(&m, &translated));
    assert!(satisfies(&m, &translated));
}

#[test]
fn substitution_examples() {
    let base = list_signature();
    let x = Op::constant("x", list());
    let empty = Term::constant(empty_op());
    let phi = Sentence::eq(Term::app(add_op(), vec![Term::constant(x.clone()), empty.clone()]), Term::constant(x.clone()));
    let id = Substitution::identity(base.clone(), vec![x.clone()]);
    assert!(check_substitution(&id).is_empty());
    assert_eq!(apply_substitution(&id, &phi), phi);

    let theta = Substitution::new(base.clone(), vec![x.clone()], vec![], BTreeMap::from([(x.clone(), empty.clone())]));
    assert!(check_substitution(&theta).is_empty());
    let expected = Sentence::eq(Term::app(add_op(), vec![empty.clone(), empty.clone()]), empty.clone());
    assert_eq!(apply_substitution(&theta, &phi), expected);

    let c = Op::constant("c", list());
    let theta = Substitution::new(
        base,
        vec![c.clone()],
        vec![],
        BTreeMap::from([(c.clone(), Term::app(add_op(), vec![empty.clone(), empty]))]),
    );
    let m = list_saturated_model();
    let r = reduct_along_substitution(&theta, &m).unwrap();
    assert_eq!(eval_ground(&r, &Term::constant(c)).unwrap(), m.element(&list(), "E0").unwrap());
}

#[test]
fn substitution_constants_must_be_fresh() {
    let base = list_signature();
    let theta = Substitution::identity(base, vec![empty_op()]);
    assert!(!check_substitution(&theta).is_empty());
}

#[test]
fn composition_is_flat() {
    let s = Sort::new("s");
    let t = Sort::new("t");
    let u = Sort::new("u");
    let s1 = Signature::new().with_sort(s.clone());
    let s2 = Signature::new().with_sort(t.clone());
    let s3 = Signature::new().with_sort(u.clone());
    let c1 = SignatureMorphism::new(s1, s2.clone(), BTreeMap::from([(s.clone(), t.clone())]), BTreeMap::new(), BTreeMap::new());
    let c2 = SignatureMorphism::new(s2, s3, BTreeMap::from([(t, u.clone())]), BTreeMap::new(), BTreeMap::new());
    let c = c1.then(&c2);
    assert_eq!(c.map_sort(&s), u);
}

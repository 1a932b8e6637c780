use std::ops::ControlFlow;

use super::*;
use crate::fixtures::*;
use crate::kernel::{Action, Label, Op, Sentence, Signature, Sort, Term, Variable};

fn one_sort_with_label() -> Signature {
    Signature::new().with_sort("s").with_label("l")
}

#[test]
fn uls_model_is_valid_and_satisfies_gamma() {
    let m = uls_model(4);
    assert!(validate_model(&m).is_empty());
    for (_, g) in uls_gamma(4) {
        assert!(satisfies(&m, &g));
    }
    let c3 = Term::constant(Op::constant("c3", indexed_sort(3)));
    assert_eq!(eval_ground(&m, &c3).unwrap(), 0);
}

#[test]
fn missing_row_is_a_totality_violation() {
    let mut m = list_ctor_model();
    *m.table_at_mut(2) = vec![None; 9];
    m.set(&add_op(), &[0, 0], 0);
    let r = validate_model(&m);
    assert_eq!(r.len(), 8);
    assert!(r.violations()[0].message.contains("missing row"));
}

#[test]
fn constant_needs_inhabited_carrier() {
    let sig = Signature::new().with_sort("s").with_op(Op::constant("c", Sort::new("s")));
    let m = FiniteModel::with_carriers(sig, &[]);
    assert_eq!(validate_model(&m).len(), 1);
}

#[test]
fn list_terms_evaluate() {
    let m = list_ctor_model();
    let e = Term::constant(empty_op());
    let t = Term::app(add_op(), vec![e.clone(), e]);
    assert_eq!(eval_ground(&m, &t).unwrap(), 0);
    let x = Variable::new("x", list());
    let v = Valuation::from([(x.clone(), 1)]);
    assert_eq!(eval_term_in(&m, &v, &Term::var(x)).unwrap(), 1);
}

#[test]
fn action_semantics() {
    let sig = one_sort_with_label();
    let s = Sort::new("s");
    let l = Label::new("l");
    let m = FiniteModel::with_carriers(sig.clone(), &[("s", &["a", "b"])]);
    assert_eq!(
        eval_action(&m, &Action::star(Action::Label(l.clone())), &s).unwrap(),
        Relation::identity(2)
    );
    let mut m = FiniteModel::with_carriers(sig, &[("s", &["c", "x", "d"])]);
    m.add_transition(&l, &s, 0, 1);
    m.add_transition(&l, &s, 1, 2);
    let two = eval_action(&m, &Action::Label(l.clone()).power(2), &s).unwrap();
    assert_eq!(two, Relation::from_pairs(3, [(0, 2)]));
    let star = eval_action(&m, &Action::star(Action::Label(l)), &s).unwrap();
    assert_eq!(star.len(), 6);
}

#[test]
fn empty_carrier_quantifiers() {
    let sig = Signature::new().with_sort("s");
    let m = FiniteModel::with_carriers(sig, &[]);
    let x = Variable::new("x", Sort::new("s"));
    assert!(!satisfies(&m, &Sentence::exists(vec![x.clone()], Sentence::verum())));
    assert!(satisfies(&m, &Sentence::forall(vec![x], Sentence::falsum())));
    assert!(!satisfies(&m, &Sentence::falsum()));
}

#[test]
fn quantifier_duality_is_definitional() {
    let m = list_saturated_model();
    let body = list_assoc();
    let (block, inner) = body.as_forall().unwrap();
    let dual = Sentence::not(Sentence::exists(block.to_vec(), Sentence::not(inner.clone())));
    assert_eq!(satisfies(&m, &body), satisfies(&m, &dual));
}

#[test]
fn saturated_list_model_breaks_associativity() {
    let m = list_saturated_model();
    assert!(validate_model(&m).is_empty());
    assert_eq!(m.total_size(), 7);
    for (_, ax) in list_axioms() {
        assert!(satisfies(&m, &ax));
    }
    assert!(!satisfies(&m, &list_assoc()));
    // add(add(E1, E0), N0) = E1 but add(E1, add(E0, N0)) = E2.
    let add = |a: usize, b: usize| m.value(&add_op(), &[a, b]).unwrap();
    assert_eq!(add(add(1, 0), 3), 1);
    assert_eq!(add(1, add(0, 3)), 2);
}

#[test]
fn ctor_list_model_is_a_model_of_the_axioms() {
    let m = list_ctor_model();
    assert!(validate_model(&m).is_empty());
    for (_, ax) in list_axioms() {
        assert!(satisfies(&m, &ax));
    }
    assert!(satisfies(&m, &list_assoc()));
}

#[test]
fn list_enumeration_with_one_list_element() {
    let sig = list_signature();
    let axioms: Vec<Sentence> = list_axioms().into_iter().map(|(_, s)| s).collect();
    let bounds = SizeBounds::uniform(0).with("List", 1);
    let models = collect_models(&sig, &bounds, &axioms, &EnumOptions::default()).unwrap();
    assert_eq!(models.len(), 1);
    assert_eq!(models[0].carrier_len(&list()), 1);
    assert_eq!(models[0].carrier_len(&elt()), 0);
}

#[test]
fn all_bounds_zero_gives_the_empty_model() {
    let sig = Signature::new().with_sort("a").with_sort("b").with_label("l");
    let models = collect_models(&sig, &SizeBounds::uniform(0), &[], &EnumOptions::default()).unwrap();
    assert_eq!(models.len(), 1);
    assert_eq!(models[0].total_size(), 0);
}

#[test]
fn enumeration_counts_match_brute_force() {
    // One sort, one unary op, one label: n^n tables times 2^(n*n) relations.
    let s = Sort::new("s");
    let sig = Signature::new()
        .with_sort(s.clone())
        .with_op(Op::new("f", vec![s.clone()], s))
        .with_label("l");
    let models = collect_models(&sig, &SizeBounds::uniform(2), &[], &EnumOptions::default()).unwrap();
    assert_eq!(models.len(), 1 + 2 + 4 * 16);
    let iso = EnumOptions {
        iso_pruning: true,
        ..EnumOptions::default()
    };
    let classes = collect_models(&sig, &SizeBounds::uniform(2), &[], &iso).unwrap();
    // Size-2 models up to swapping the two elements.
    let fixed = models
        .iter()
        .filter(|m| m.carrier_len(&Sort::new("s")) == 2)
        .filter(|m| {
            let f = m.table(&m.signature().ops()[0]);
            let swapped: Vec<Option<usize>> = vec![f[1].map(|v| 1 - v), f[0].map(|v| 1 - v)];
            let r = m.relation(&Label::new("l"), &Sort::new("s"));
            let rs = Relation::from_pairs(2, r.pairs().map(|(i, j)| (1 - i, 1 - j)));
            swapped == f && &rs == r
        })
        .count();
    assert_eq!(classes.len(), 1 + 2 + (64 + fixed) / 2);
}

#[test]
fn example28_needs_more_than_k_elements() {
    let k = 3;
    let sig = example28_signature(k);
    let mut cs: Vec<Sentence> = example28_phi(k).into_iter().map(|(_, s)| s).collect();
    cs.extend(inhabited(k).into_iter().map(|(_, s)| s));
    let small = SizeBounds::uniform(1).with("s0", k);
    assert!(find_model(&sig, &small, &cs, &EnumOptions::default()).unwrap().is_none());
    let big = SizeBounds::uniform(1).with("s0", k + 1);
    let m = find_model(&sig, &big, &cs, &EnumOptions::default()).unwrap().unwrap();
    assert_eq!(m.carrier_len(&indexed_sort(0)), k + 1);
}

#[test]
fn visitor_can_stop_early() {
    let sig = Signature::new().with_sort("s");
    let mut seen = 0;
    let stats = enumerate_models(&sig, &SizeBounds::uniform(5), &[], &EnumOptions::default(), |_| {
        seen += 1;
        if seen == 2 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })
    .unwrap();
    assert!(stats.stopped);
    assert_eq!(seen, 2);
}

#[test]
fn node_budget_is_enforced() {
    let s = Sort::new("s");
    let sig = Signature::new().with_sort(s.clone()).with_op(Op::new("f", vec![s.clone(), s.clone()], s));
    let opts = EnumOptions {
        node_budget: Some(100),
        ..EnumOptions::default()
    };
    let r = collect_models(&sig, &SizeBounds::uniform(3), &[], &opts);
    assert_eq!(r.unwrap_err(), EnumError::ResourceLimit(100));
}

#[test]
fn ctor_based_filter() {
    let sig = list_signature();
    let opts = EnumOptions {
        ctor_based: true,
        ..EnumOptions::default()
    };
    let bounds = SizeBounds::uniform(0).with("List", 2);
    let models = collect_models(&sig, &bounds, &[], &opts).unwrap();
    // With no elements, only `empty` is generated, so List must be a singleton.
    assert!(models.iter().all(|m| m.carrier_len(&list()) == 1));
    assert_eq!(models.len(), 1);
}

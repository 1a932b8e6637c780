use proptest::prelude::*;
use rand::RngExt;

use super::*;
use crate::finmod::SizeBounds;
use crate::fixtures::*;
use crate::forcing::{Condition, ForcingProperty};
use crate::institution::{Flavor, SignatureMorphism};
use crate::kernel::{Action, Label, Op, Sentence, Signature, Sort, Term, Variable};
use crate::testgen::{random_model, random_signature, rng, GenConfig, SentenceGen};

fn round_trip(spec: &SpecFile) {
    let text = print_spec(spec);
    let back = parse_spec(&text).unwrap_or_else(|e| panic!("{e}\n--- printed ---\n{text}"));
    assert_eq!(&back, spec, "--- printed ---\n{text}");
    assert_eq!(print_spec(&back), text);
}

const LIST_TEXT: &str = "
-- lists over elements
sig LIST {
  sorts Elt List
  ops
    empty : -> List [ctor]
    cons : List Elt -> List [ctor]
    add : List List -> List
}
theory PHI over LIST {
  add_empty : forall x:List . add(x, empty) = x
  add_cons : forall x:List, y:List, e:Elt . add(x, cons(y, e)) = cons(add(x, y), e)
}
goal assoc over LIST : forall x:List, y:List, z:List . add(add(x, y), z) = add(x, add(y, z))
";

#[test]
fn empty_file() {
    assert!(parse_spec("").unwrap().is_empty());
    assert!(parse_spec("  -- nothing here\n").unwrap().is_empty());
    assert_eq!(print_spec(&SpecFile::new()), "");
}

#[test]
fn list_text_matches_fixtures() {
    let spec = parse_spec(LIST_TEXT).unwrap();
    let sig = &spec.signatures["LIST"];
    assert_eq!(sig, &list_signature());
    assert!(sig.is_ctor(&empty_op()) && sig.is_ctor(&cons_op()) && !sig.is_ctor(&add_op()));
    let phi = &spec.theories["PHI"].sentences;
    let expected: Vec<(String, Sentence)> = list_axioms().into_iter().map(|(n, s)| (n, s.normalize())).collect();
    assert_eq!(phi.iter().map(|(n, s)| (n.clone(), s.clone())).collect::<Vec<_>>(), expected);
    assert_eq!(spec.goals["assoc"].sentence, list_assoc().normalize());
    round_trip(&spec);
}

#[test]
fn forall_is_sugar() {
    let s = parse_sentence(&list_signature(), "forall x:List . add(x, empty) = x").unwrap();
    let x = Variable::new("x", list()).with_qualifier(1);
    let body = Sentence::Eq(
        Term::app(add_op(), vec![Term::var(x.clone()), Term::constant(empty_op())]),
        Term::var(x.clone()),
    );
    let expected = Sentence::Not(Box::new(Sentence::Exists(vec![x], Box::new(Sentence::Not(Box::new(body))))));
    assert_eq!(s, expected);
}

fn labelled() -> Signature {
    Signature::new()
        .with_sort("s")
        .with_op(Op::constant("c", Sort::new("s")))
        .with_op(Op::constant("d", Sort::new("s")))
        .with_label("a")
        .with_label("b")
        .with_label("lambda")
}

#[test]
fn action_precedence() {
    let sig = labelled();
    let s = parse_sentence(&sig, "(a ; b | lambda)*(c, d)").unwrap();
    let (a, b, l) = (Action::label("a"), Action::label("b"), Action::label("lambda"));
    let c = Term::constant(Op::constant("c", Sort::new("s")));
    let d = Term::constant(Op::constant("d", Sort::new("s")));
    let act = Action::star(Action::union(Action::seq(a.clone(), b.clone()), l.clone()));
    assert_eq!(s, Sentence::trans(act.clone(), c.clone(), d.clone()));
    assert_eq!(print_sentence(&sig, &s), "(a ; b | lambda)*(c, d)");

    for text in ["a ; (b ; a)(c, d)", "(a ; b) ; a(c, d)", "a | b | a*(c, d)", "((a | b) ; lambda**)(c, d)", "a**(c, c)"] {
        let s = parse_sentence(&sig, text).unwrap();
        assert_eq!(parse_sentence(&sig, &print_sentence(&sig, &s)).unwrap(), s, "{text}");
    }

    assert_eq!(parse_sentence(&sig, "lambda^0(c, d)").unwrap(), Sentence::eq(c.clone(), d.clone()));
    assert_eq!(
        parse_sentence(&sig, "lambda^3(c, d)").unwrap(),
        Sentence::trans(Action::seq(l.clone(), Action::seq(l.clone(), l)), c, d)
    );
    assert!(parse_sentence(&sig, "(a^0 ; b)(c, d)").is_err());
}

#[test]
fn connectives_round_trip() {
    let sig = labelled();
    for text in [
        "true",
        "false",
        "not c = d",
        "not (c = d => d = c)",
        "(not c = d) => a(c, d)",
        "(forall x:s . x = c) => c = d",
        "c = d => d = c => c = c",
        "(c = d => d = c) => c = c",
        "or{c = d, and{a(c, d), not b(d, c)}, exists x:s, y:s . x = y}",
        "and{}",
        "or{c = d}",
        "forall x:s . exists y:s . and{a(x, y), forall x:s . x = y}",
        "not not c = d",
        "not exists x:s . x = c",
    ] {
        let s = parse_sentence(&sig, text).unwrap_or_else(|e| panic!("{text}: {e}"));
        let printed = print_sentence(&sig, &s);
        assert_eq!(parse_sentence(&sig, &printed).unwrap(), s, "{text} printed as {printed}");
    }
}

#[test]
fn overloading_and_shadowing() {
    let (s0, s1) = (Sort::new("s0"), Sort::new("s1"));
    let sig = Signature::new()
        .with_sort(s0.clone())
        .with_sort(s1.clone())
        .with_op(Op::constant("c", s0.clone()))
        .with_op(Op::constant("c", s1.clone()))
        .with_op(Op::new("f", vec![s0.clone()], s0.clone()))
        .with_op(Op::new("f", vec![s1.clone()], s1.clone()));

    let err = parse_sentence(&sig, "c = c").unwrap_err();
    assert!(err.to_string().contains("ambiguous"), "{err}");
    let s = parse_sentence(&sig, "c:s0() = f(c:s0())").unwrap();
    let c0 = Term::constant(Op::constant("c", s0.clone()));
    assert_eq!(s, Sentence::eq(c0.clone(), Term::app(Op::new("f", vec![s0.clone()], s0.clone()), vec![c0])));
    assert_eq!(print_sentence(&sig, &s), "c:s0() = f:s0(c:s0())");

    // the expected sort disambiguates the argument
    let x = parse_sentence(&sig, "forall x:s1 . f(x) = c").unwrap();
    assert_eq!(parse_sentence(&sig, &print_sentence(&sig, &x)).unwrap(), x);

    // a variable named like a constant hides it; `c()` still names the constant
    let shadow = parse_sentence(&sig, "forall c:s0 . c = c:s0()").unwrap();
    let (block, body) = shadow.as_forall().unwrap();
    let Sentence::Eq(Term::Var(v), Term::App(op, _)) = body else { panic!("{body:?}") };
    assert_eq!(v, &block[0]);
    assert!(op.is_constant());
    assert_eq!(parse_sentence(&sig, &print_sentence(&sig, &shadow)).unwrap(), shadow);

    // inner binder of another sort hides the outer one by bare name
    let nested = parse_sentence(&sig, "forall x:s0 . exists x:s1 . f(x:s0) = x:s0").unwrap();
    assert_eq!(parse_sentence(&sig, &print_sentence(&sig, &nested)).unwrap(), nested);
}

#[test]
fn diagnostics_carry_positions() {
    let text = "sig S {\n  sorts s\n}\ngoal g over S : forall x:t . x = x\n";
    let err = parse_spec_named(text, "bad.ta").unwrap_err();
    assert_eq!(err.to_string(), "bad.ta:4:26: unknown sort `t`");

    let err = parse_spec("sig S { sorts s }\nmodel M over T { }").unwrap_err();
    assert_eq!(err.to_string(), "<input>:2:14: unknown signature `T`");

    let err = parse_spec("sig S { sorts s ops c : -> s }\ngoal g over S : c = e").unwrap_err();
    assert_eq!(err.to_string(), "<input>:2:21: unknown symbol `e`");

    let err = parse_spec("sig S { sorts s }\nsig S { sorts s }").unwrap_err();
    assert!(matches!(err, SurfaceError::Resolve { .. }));

    let err = parse_spec("sig S { sorts s ops f : t -> s }").unwrap_err();
    assert!(matches!(err, SurfaceError::Invalid { .. }), "{err}");
    assert!(err.to_string().starts_with("<input>:1:1: signature S is ill-formed"), "{err}");

    let err = parse_spec("sig S { sorts s } goal g over S : not").unwrap_err();
    assert!(err.to_string().contains("end of input"), "{err}");

    let err = parse_spec("sig S { sorts s } $").unwrap_err();
    assert_eq!(err.to_string(), "<input>:1:19: unexpected character '$'");
}

#[test]
fn models_round_trip() {
    let mut spec = SpecFile::new();
    spec.add_signature("LIST", list_signature())
        .add_model("Ctor", "LIST", list_ctor_model())
        .add_model("B", "LIST", list_saturated_model())
        .add_signature("ULS", uls_signature(3))
        .add_model("M", "ULS", uls_model(3));
    round_trip(&spec);

    // the same element name in two carriers forces `on`
    let sig = Signature::new().with_sort("p").with_sort("q").with_label("l");
    let mut m = crate::finmod::FiniteModel::with_carriers(sig.clone(), &[("p", &["a", "b"]), ("q", &["a", "b"])]);
    m.add_transition_named(&Label::new("l"), &Sort::new("q"), "a", "b").unwrap();
    let mut spec = SpecFile::new();
    spec.add_signature("PQ", sig).add_model("M", "PQ", m);
    assert!(print_spec(&spec).contains("label l on q : (a, b)"));
    round_trip(&spec);
}

#[test]
fn model_rows_are_checked() {
    let base = "sig S { sorts s ops c : -> s f : s -> s labels l }\n";
    let err = parse_spec(&format!("{base}model M over S {{ carrier s {{ a }} op f(b) = a }}")).unwrap_err();
    assert!(err.to_string().contains("unknown element `b`"), "{err}");
    let err = parse_spec(&format!("{base}model M over S {{ carrier s {{ a }} op c = a op c = a }}")).unwrap_err();
    assert!(err.to_string().contains("given twice"), "{err}");
    let err = parse_spec(&format!("{base}model M over S {{ carrier s {{ a a }} }}")).unwrap_err();
    assert!(err.to_string().contains("listed twice"), "{err}");
    // partial tables parse; totality is a model check, not a parse error
    let spec = parse_spec(&format!("{base}model M over S {{ carrier s {{ a b }} op c = a label l : (a, b) (b, b) }}")).unwrap();
    assert_eq!(crate::finmod::validate_model(&spec.models["M"].model).len(), 2);
}

fn three_conditions() -> ForcingProperty {
    let sig = example28_signature(1);
    let c = Term::constant(Op::constant("c", indexed_sort(0)));
    let d = Term::constant(Op::constant("d", indexed_sort(0)));
    let e_op = Op::constant("e", indexed_sort(0));
    let e = Term::constant(e_op.clone());
    let wider = sig.with_constants([&e_op]);
    let l = Action::Label(lambda());
    ForcingProperty::new(
        sig.clone(),
        vec![
            Condition::new("p0", sig.clone(), []),
            Condition::new("p1", wider.clone(), [Sentence::trans(l.clone(), c.clone(), e.clone())]),
            Condition::new(
                "p2",
                wider,
                [Sentence::trans(l.clone(), c.clone(), e.clone()), Sentence::trans(l, e.clone(), d.clone()), Sentence::eq(e.clone(), e)],
            )
            .with_gamma([Sentence::not(Sentence::eq(c, d))]),
        ],
        &[(0, 1), (1, 2)],
    )
}

#[test]
fn forcing_round_trip() {
    let mut spec = SpecFile::new();
    spec.add_signature("E", example28_signature(1))
        .add_forcing("F", "E", three_conditions());
    round_trip(&spec);
    let printed = print_spec(&spec);
    assert!(printed.contains("order p0 <= p1, p1 <= p2"), "{printed}");

    let text = "sig E { sorts s0 ops c : -> s0 d : -> s0 labels lambda }
forcing F over E {
  condition p0 { sig E; atoms { } }
  condition p1 { sig E + { ops e : -> s0 }; atoms { lambda(c, e) } }
  order p0 <= p1
}";
    let spec = parse_spec(text).unwrap();
    let p = &spec.forcings["F"].property;
    assert!(p.leq(0, 1) && !p.leq(1, 0));
    assert_eq!(p.condition(1).sig.ops().len(), 3);
    round_trip(&spec);
}

#[test]
fn morphisms_substitutions_types_proofs_round_trip() {
    let target = Signature::new()
        .with_sort("E")
        .with_sort("L")
        .with_ctor(Op::constant("nil", Sort::new("L")))
        .with_ctor(Op::new("push", vec![Sort::new("L"), Sort::new("E")], Sort::new("L")))
        .with_op(Op::new("cat", vec![Sort::new("L"), Sort::new("L")], Sort::new("L")))
        .with_op(Op::new("cat", vec![Sort::new("E"), Sort::new("E")], Sort::new("E")));
    let text = format!(
        "{}
sig L2 {{
  sorts E L
  ops
    nil : -> L [ctor]
    push : L E -> L [ctor]
    cat : L L -> L
    cat : E E -> E
}}
morphism h : LIST -> L2 {{
  sort Elt -> E
  sort List -> L
  op empty -> nil
  op cons -> push
  op add -> cat
}}
subst th over LIST : {{a : List, b : Elt}} -> {{k : Elt}} {{
  a -> cons(empty, k)
  b -> k
}}
type T over LIST [x:List] {{
  not_empty : x != empty
}}
proof D over LIST flavor ctor {{
  step m = mono : {{add_empty, add_cons}} |- {{PHI.add_empty}}
  step t = translate[h](m) : {{forall x:L . cat(x, nil) = x, forall x:L, y:L, e:E . cat(x, push(y, e)) = push(cat(x, y), e)}} |- {{forall x:L . cat:L(x, nil) = x}}
  step s = sem within {{List=2, Elt=1, *=0}} : {{add_empty}} |- {{add(empty, empty) = empty}}
  step c = cb[x, 2] within {{List=2}} : {{}} |- {{forall x:List . x = x}}
}}
",
        LIST_TEXT
    )
    .replace("x != empty", "not x = empty");
    let spec = parse_spec(&text).unwrap_or_else(|e| panic!("{e}"));
    assert_eq!(spec.signatures["L2"], target);
    let h = &spec.morphisms["h"].morphism;
    assert_eq!(h.map_op(&add_op()), Op::new("cat", vec![Sort::new("L"), Sort::new("L")], Sort::new("L")));
    let d = &spec.proofs["D"].derivation;
    assert_eq!(d.flavor, Flavor::CtorBased);
    assert_eq!(d.steps.len(), 4);
    assert_eq!(d.steps[0].rhs, vec![list_axioms()[0].1.normalize()]);
    assert_eq!(
        crate::classes::check_derivation(d).violations(),
        &[],
        "{}",
        crate::classes::check_derivation(d)
    );
    assert_eq!(spec.types["T"].ty.block, vec![Variable::new("x", list())]);
    round_trip(&spec);

    let _ = SignatureMorphism::identity(&target);
    let _ = SizeBounds::uniform(0);
}

#[test]
fn named_sentences_must_resolve() {
    let text = format!("{LIST_TEXT}\nproof D over LIST {{ step m = mono : {{nope}} |- {{}} }}");
    let err = parse_spec(&text).unwrap_err();
    assert!(err.to_string().contains("no sentence named `nope`"), "{err}");
}

fn random_spec(seed: u64) -> SpecFile {
    let mut r = rng(seed);
    let cfg = GenConfig::default();
    let sig = random_signature(&mut r, &cfg);
    let mut spec = SpecFile::new();
    spec.add_signature("S", sig.clone());
    spec.add_model("M", "S", random_model(&mut r, &sig, &cfg));
    let mut g = SentenceGen::new(&sig, &cfg);
    let n = r.random_range(0..4);
    let sentences: Vec<(String, Sentence)> = (0..n).map(|i| (format!("a{i}"), g.sentence(&mut r))).collect();
    spec.add_theory("T", "S", sentences);
    spec
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_specs_round_trip(seed in any::<u64>()) {
        let spec = random_spec(seed);
        let text = print_spec(&spec);
        let back = parse_spec(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn parser_is_total_on_mutated_text(seed in any::<u64>(), cut in 0usize..2000, junk in "[ -~\n]{0,8}") {
        let text = print_spec(&random_spec(seed));
        let cut = text.char_indices().map(|(i, _)| i).nth(cut % text.len().max(1)).unwrap_or(0);
        let mutated = format!("{}{}{}", &text[..cut], junk, &text[cut..]);
        let _ = parse_spec(&mutated);
        let _ = parse_spec(&text[..cut]);
    }
}

#[test]
fn fixtures_check_and_round_trip() {
    use crate::forcing::SearchBounds;
    for &(name, default, _) in FIXTURES {
        let spec = crate::fixtures::spec(name, None).unwrap();
        let report = check_spec(&spec, &SearchBounds::default());
        assert!(report.is_empty(), "{name}: {report}");
        round_trip(&spec);
        if let Some(k) = default {
            round_trip(&crate::fixtures::spec(name, Some(k + 1)).unwrap());
        }
    }
    let uls = crate::fixtures::spec("uls", None).unwrap();
    assert_eq!((uls.signatures.len(), uls.models.len(), uls.theories["GAMMA"].sentences.len()), (1, 1, 4));
    assert_eq!(crate::fixtures::spec("list-saturated", None).unwrap().models["B"].model.total_size(), 7);
    assert_eq!(
        crate::fixtures::spec("nope", None),
        Err(crate::fixtures::FixtureError::UnknownFixture("nope".into()))
    );
}

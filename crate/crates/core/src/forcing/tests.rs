use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::finmod::FiniteModel;
use crate::kernel::{Action, Label, Op, Sentence, Signature, Sort, Term};
use crate::testgen::{rng, GenConfig, SentenceGen};

fn s() -> Sort {
    Sort::new("s")
}

fn k(name: &str) -> Term {
    Term::constant(Op::constant(name, s()))
}

fn f_op() -> Op {
    Op::new("f", vec![s()], s())
}

fn f(t: Term) -> Term {
    Term::app(f_op(), vec![t])
}

fn lam() -> Action {
    Action::label("lambda")
}

fn sig_with(constants: &[&str]) -> Signature {
    let base = Signature::new().with_sort(s()).with_label("lambda");
    constants
        .iter()
        .fold(base, |acc, c| acc.with_op(Op::constant(*c, s())))
}

fn eq(a: &str, b: &str) -> Sentence {
    Sentence::eq(k(a), k(b))
}

fn step(a: &str, b: &str) -> Sentence {
    Sentence::trans(lam(), k(a), k(b))
}

fn bounds() -> SearchBounds {
    SearchBounds {
        term_depth: 1,
        ..SearchBounds::default()
    }
}

/// Least congruence on a subterm-closed universe by naive saturation.
fn naive_congruence(universe: &[Term], equations: &[(Term, Term)]) -> Vec<Vec<bool>> {
    let n = universe.len();
    let pos = |t: &Term| universe.iter().position(|u| u == t).unwrap();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in equations {
        r[pos(a)][pos(b)] = true;
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                let mut add = r[j][i] || (0..n).any(|m| r[i][m] && r[m][j]);
                if let (Term::App(g, xs), Term::App(h, ys)) = (&universe[i], &universe[j]) {
                    add |= g == h && xs.iter().zip(ys).all(|(x, y)| r[pos(x)][pos(y)]);
                }
                if add && !r[i][j] {
                    r[i][j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

#[test]
fn congruence_examples() {
    let sig = sig_with(&["a", "b", "c"]).with_op(f_op());
    let u = ground_terms(&sig, 2, 100);
    assert_eq!(u.len(), 3 + 3 + 3);
    assert!(u.truncated.contains(&s()));

    let cc = CongruenceClosure::from_equations([], u.all(), 1000).unwrap();
    assert_eq!(cc.classes().len(), 9);

    let (a, b) = (k("a"), k("b"));
    let mut cc = CongruenceClosure::from_equations([(&a, &b)], u.all(), 1000).unwrap();
    assert!(cc.equivalent(&f(a.clone()), &f(b.clone())).unwrap());
    assert!(cc.equivalent(&f(f(a.clone())), &f(f(b.clone()))).unwrap());
    assert!(!cc.equivalent(&a, &k("c")).unwrap());
    // outside the initial universe
    assert!(cc.equivalent(&f(f(f(a.clone()))), &f(f(f(b.clone())))).unwrap());

    let fa = f(a.clone());
    let mut cc = CongruenceClosure::from_equations([(&fa, &a)], u.all(), 1000).unwrap();
    assert!(cc.equivalent(&a, &f(f(a.clone()))).unwrap());
    assert!(cc.equivalent(&f(f(f(f(a.clone())))), &a).unwrap());
    assert!(!cc.equivalent(&a, &b).unwrap());

    // {f(c) = d, c = e} identifies f(e) with d
    let (c, d, e) = (k("c"), k("d"), k("e"));
    let fc = f(c.clone());
    let mut cc = CongruenceClosure::from_equations([(&fc, &d), (&c, &e)], [], 1000).unwrap();
    assert!(cc.equivalent(&f(e.clone()), &d).unwrap());
    assert!(!cc.equivalent(&f(d), &e).unwrap());

    assert_eq!(
        CongruenceClosure::from_equations([], u.all(), 4).unwrap_err(),
        ForcingError::ResourceLimit(4)
    );
}

proptest! {
    #[test]
    fn congruence_matches_saturation(eqs in prop::collection::vec((0usize..15, 0usize..15), 0..5)) {
        let g = Op::new("g", vec![s(), s()], s());
        let sig = sig_with(&["a", "b", "c"]).with_op(f_op()).with_op(g);
        let universe: Vec<Term> = ground_terms(&sig, 1, 100).all().cloned().collect();
        prop_assert_eq!(universe.len(), 15);
        let equations: Vec<(Term, Term)> = eqs.iter().map(|&(i, j)| (universe[i].clone(), universe[j].clone())).collect();
        let oracle = naive_congruence(&universe, &equations);
        let mut cc = CongruenceClosure::from_equations(equations.iter().map(|(a, b)| (a, b)), &universe, 1000).unwrap();
        for i in 0..universe.len() {
            for j in 0..universe.len() {
                prop_assert_eq!(cc.equivalent(&universe[i], &universe[j]).unwrap(), oracle[i][j]);
            }
        }
    }
}

#[test]
fn validation_examples() {
    let sig = sig_with(&["c", "d", "e"]);
    let single = ForcingProperty::new(sig.clone(), vec![Condition::new("p0", sig.clone(), closed(&sig, &[]))], &[]);
    assert!(validate_forcing_property(&single, &bounds()).is_empty());
    // reflexive equations count as consequences
    let bare = ForcingProperty::new(sig.clone(), vec![Condition::new("p0", sig.clone(), [])], &[]);
    assert!(validate_forcing_property(&bare, &bounds()).to_string().contains("entails c = c"));

    let shrinking = ForcingProperty::new(
        sig.clone(),
        vec![Condition::new("p0", sig.clone(), [step("c", "d")]), Condition::new("p1", sig.clone(), [])],
        &[(0, 1)],
    );
    let r = validate_forcing_property(&shrinking, &bounds());
    assert_eq!(r.len(), 1, "{r}");
    assert!(r.to_string().contains("atoms are not included in those of p1"), "{r}");

    // f(p) = {c = d, d = e} entails c = e, which no condition contains
    let closed_except = |extra: &[Sentence]| {
        let mut atoms: BTreeSet<Sentence> = atomic_consequences(&sig, &[eq("c", "d"), eq("d", "e")].into(), 0, 100)
            .unwrap()
            .into_iter()
            .filter(|a| a != &eq("c", "e"))
            .collect();
        atoms.extend(extra.iter().cloned());
        atoms
    };
    let unhoused = ForcingProperty::new(sig.clone(), vec![Condition::new("p0", sig.clone(), closed_except(&[]))], &[]);
    let r = validate_forcing_property(&unhoused, &bounds());
    assert_eq!(r.len(), 1, "{r}");
    assert!(r.to_string().contains("entails c = e"), "{r}");

    // housed in a condition above
    let housed = ForcingProperty::new(
        sig.clone(),
        vec![
            Condition::new("p0", sig.clone(), closed_except(&[])),
            Condition::new("p1", sig.clone(), closed_except(&[eq("c", "e")])),
        ],
        &[(0, 1)],
    );
    assert!(validate_forcing_property(&housed, &bounds()).is_empty());

    let cyclic = ForcingProperty::new(
        sig.clone(),
        vec![Condition::new("p0", sig.clone(), []), Condition::new("p1", sig.clone(), [])],
        &[(0, 1), (1, 0)],
    );
    assert!(validate_forcing_property(&cyclic, &bounds()).to_string().contains("below each other"));

    let no_bottom = ForcingProperty::new(
        sig.clone(),
        vec![Condition::new("p0", sig.clone(), []), Condition::new("p1", sig.clone(), [])],
        &[],
    );
    assert!(validate_forcing_property(&no_bottom, &bounds()).to_string().contains("no least condition"));

    let complex = ForcingProperty::new(
        sig.clone(),
        vec![Condition::new("p0", sig.clone(), [Sentence::trans(Action::star(lam()), k("c"), k("c"))])],
        &[],
    );
    assert!(validate_forcing_property(&complex, &bounds()).to_string().contains("not a ground atomic sentence"));
}

/// Atoms closed under consequence over `sig`.
fn closed(sig: &Signature, atoms: &[Sentence]) -> BTreeSet<Sentence> {
    atomic_consequences(sig, &atoms.iter().cloned().collect(), 0, 100).unwrap()
}

#[test]
fn forcing_examples() {
    let sig = sig_with(&["c", "d", "e"]);
    let atoms = closed(&sig, &[step("c", "e"), step("e", "d")]);
    let prop = ForcingProperty::new(sig.clone(), vec![Condition::new("p0", sig.clone(), atoms)], &[]);
    assert!(validate_forcing_property(&prop, &bounds()).is_empty());
    let star = Sentence::trans(Action::star(lam()), k("c"), k("d"));
    let got = forces(&prop, 0, &star, &bounds()).unwrap();
    assert_eq!(got, Forced { holds: true, truncated: false });
    assert!(forces(&prop, 0, &step("c", "e"), &bounds()).unwrap().holds);
    assert!(!forces(&prop, 0, &step("c", "d"), &bounds()).unwrap().holds);
    // λ^0 is the equation
    assert!(forces(&prop, 0, &Sentence::trans(Action::star(lam()), k("c"), k("c")), &bounds()).unwrap().holds);
    assert!(!forces(&prop, 0, &Sentence::trans(Action::star(lam()), k("d"), k("c")), &bounds()).unwrap().holds);
    // a star cap of 1 cannot reach d
    let capped = SearchBounds {
        star_cap: 1,
        ..bounds()
    };
    assert_eq!(forces(&prop, 0, &star, &capped).unwrap(), Forced { holds: false, truncated: true });

    let two = ForcingProperty::new(
        sig.clone(),
        vec![
            Condition::new("p0", sig.clone(), closed(&sig, &[])),
            Condition::new("q", sig.clone(), closed(&sig, &[step("c", "d")])),
        ],
        &[(0, 1)],
    );
    assert!(validate_forcing_property(&two, &bounds()).is_empty());
    assert!(!forces(&two, 0, &Sentence::not(step("c", "d")), &bounds()).unwrap().holds);
    assert!(!forces(&two, 0, &step("c", "d"), &bounds()).unwrap().holds);
    assert!(forces(&two, 1, &step("c", "d"), &bounds()).unwrap().holds);
    assert!(forces(&two, 0, &Sentence::not(step("d", "c")), &bounds()).unwrap().holds);
    let exists = Sentence::exists(
        vec![crate::kernel::Variable::new("x", s())],
        Sentence::trans(lam(), Term::var(crate::kernel::Variable::new("x", s())), k("d")),
    );
    assert!(!forces(&two, 0, &exists, &bounds()).unwrap().holds);
    assert!(forces(&two, 1, &exists, &bounds()).unwrap().holds);

    assert!(matches!(
        forces(&two, 0, &Sentence::eq(k("c"), k("zz")), &bounds()),
        Err(ForcingError::Invalid(_))
    ));
}

#[test]
fn distances() {
    let base = sig_with(&["c"]);
    let wider = base.with_constants([&Op::constant("d", s())]);
    let widest = wider.with_constants([&Op::constant("e", s())]);
    let phi = eq("c", "c");
    let psi = step("c", "c");
    let prop = ForcingProperty::new(
        base.clone(),
        vec![
            Condition::new("p", base.clone(), []),
            Condition::new("q", wider.clone(), []).with_gamma([phi.clone()]),
            Condition::new("r", widest.clone(), []).with_gamma([phi.clone(), psi]),
            Condition::new("x", base.clone(), []),
        ],
        &[(0, 1), (1, 2), (0, 3)],
    );
    assert_eq!(prop.distance(0, 0).unwrap(), 0);
    assert_eq!(prop.distance(0, 1).unwrap(), 2);
    assert_eq!(prop.distance(1, 2).unwrap(), 2);
    assert_eq!(prop.distance(0, 2).unwrap(), prop.distance(0, 1).unwrap() + prop.distance(1, 2).unwrap());
    assert_eq!(prop.distance(1, 3), Err(ForcingError::NotComparable("q".into(), "x".into())));
}

/// 0 below a and b, both below t.
fn diamond(with_top: bool) -> ForcingProperty {
    let sig = sig_with(&["c", "d"]);
    let mid_a = closed(&sig, &[step("c", "d")]);
    let mid_b = closed(&sig, &[step("d", "c")]);
    let mut conditions = vec![
        Condition::new("z", sig.clone(), closed(&sig, &[])),
        Condition::new("a", sig.clone(), mid_a.clone()),
        Condition::new("b", sig.clone(), mid_b.clone()),
    ];
    let mut pairs = vec![(0, 1), (0, 2)];
    if with_top {
        let all: Vec<Sentence> = mid_a.union(&mid_b).cloned().collect();
        conditions.push(Condition::new("t", sig.clone(), closed(&sig, &all)));
        pairs.extend([(1, 3), (2, 3)]);
    }
    ForcingProperty::new(sig, conditions, &pairs)
}

#[test]
fn weak_forcing() {
    let prop = diamond(true);
    assert!(validate_forcing_property(&prop, &bounds()).is_empty());
    let forcer = Forcer::new(&prop, bounds());
    let phi = step("c", "d");
    // forced only in a and t, reachable from everywhere
    assert!(!forcer.forces(0, &phi).holds);
    assert!(!forcer.forces(2, &phi).holds);
    assert!(forcer.weakly_forces(0, &phi).holds);
    assert!(forcer.weakly_forces(2, &phi).holds);
    assert!(forcer.forces(0, &Sentence::not(Sentence::not(phi.clone()))).holds);
    let never = step("c", "c");
    assert!(!forcer.weakly_forces(0, &never).holds);
    assert!(forcer.weakly_forces(1, &phi).holds);

    // without the top, b has no extension forcing λ(c, d)
    let open = diamond(false);
    let forcer = Forcer::new(&open, bounds());
    assert!(!forcer.weakly_forces(0, &phi).holds);
    assert!(forcer.weakly_forces(1, &phi).holds);
}

#[test]
fn generic_extension_examples() {
    let sig = sig_with(&["c", "d"]);
    let one = ForcingProperty::new(sig.clone(), vec![Condition::new("p0", sig.clone(), closed(&sig, &[eq("c", "d")]))], &[]);
    let forcer = Forcer::new(&one, bounds());
    let pool = vec![eq("c", "d"), step("c", "d"), Sentence::or(vec![step("c", "c"), eq("d", "c")])];
    let g = extend_to_generic(&forcer, 0, &pool).unwrap();
    assert_eq!(g.members, vec![0]);
    assert_eq!(g.decisions.iter().map(|d| d.positive).collect::<Vec<_>>(), vec![true, false, true]);
    assert!(g.decisions.iter().all(|d| d.condition == 0));

    // a chain adding one transition per step
    let atoms = [step("c", "d"), step("d", "c"), step("d", "d")];
    let mut conditions = vec![Condition::new("p0", sig.clone(), closed(&sig, &[]))];
    for i in 1..=3 {
        conditions.push(Condition::new(format!("p{i}"), sig.clone(), closed(&sig, &atoms[..i])));
    }
    let chain = ForcingProperty::new(sig.clone(), conditions, &[(0, 1), (1, 2), (2, 3)]);
    assert!(validate_forcing_property(&chain, &bounds()).is_empty());
    let forcer = Forcer::new(&chain, bounds());
    let g = extend_to_generic(&forcer, 0, &atoms).unwrap();
    assert_eq!(g.members, vec![0, 1, 2, 3]);
    assert_eq!(g.chain, vec![0, 1, 2, 3]);
    assert!(g.decisions.iter().all(|d| d.positive));
    assert_eq!(g.decisions.iter().map(|d| d.condition).collect::<Vec<_>>(), vec![1, 2, 3]);

    // least distance wins over least index
    let far = sig.with_constants([&Op::constant("e", s())]);
    let spread = ForcingProperty::new(
        sig.clone(),
        vec![
            Condition::new("p0", sig.clone(), closed(&sig, &[])),
            Condition::new("far", far.clone(), closed(&far, &[step("c", "d")])),
            Condition::new("near", sig.clone(), closed(&sig, &[step("c", "d")])),
        ],
        &[(0, 1), (0, 2)],
    );
    let forcer = Forcer::new(&spread, bounds());
    assert_eq!(extend_to_generic(&forcer, 0, &[step("c", "d")]).unwrap().top(), 2);

    // the two middle conditions of a diamond without top
    let open = diamond(false);
    let forcer = Forcer::new(&open, bounds());
    let pool = vec![Sentence::or(vec![step("c", "d"), step("d", "c")])];
    let g = extend_to_generic(&forcer, 0, &pool).unwrap();
    assert_eq!(g.members, vec![0, 1]);
    assert_eq!(
        validate_generic(&forcer, &[0, 1, 2], &pool),
        Err(ForcingError::DirectednessFailure("a".into(), "b".into()))
    );
    assert!(matches!(validate_generic(&forcer, &[1], &pool), Err(ForcingError::Invalid(_))));
    assert!(matches!(validate_generic(&forcer, &[0], &pool), Err(ForcingError::Invalid(_))));
}

#[test]
fn generic_model_examples() {
    let sig = sig_with(&["c", "d"]);
    let prop = ForcingProperty::new(sig.clone(), vec![Condition::new("p0", sig.clone(), closed(&sig, &[eq("c", "d")]))], &[]);
    let forcer = Forcer::new(&prop, bounds());
    let g = extend_to_generic(&forcer, 0, &atomic_pool(&forcer)).unwrap();
    let mut m = generic_model(&forcer, &g).unwrap();
    assert_eq!(m.elements()[&s()], vec![vec![k("c"), k("d")]]);
    assert!(m.satisfies(&eq("c", "d")).unwrap());

    // {f(c) = d, c = e}
    let fsig = sig_with(&["c", "d", "e"]).with_op(f_op());
    let atoms = [Sentence::eq(f(k("c")), k("d")), eq("c", "e")];
    let prop = ForcingProperty::new(fsig.clone(), vec![Condition::new("p0", fsig.clone(), atoms)], &[]);
    let forcer = Forcer::new(&prop, SearchBounds { term_depth: 0, ..bounds() });
    let g = GenericIdeal {
        members: vec![0],
        chain: vec![0],
        decisions: vec![],
        out_of_signature: vec![],
        truncated: false,
    };
    let mut m = generic_model(&forcer, &g).unwrap();
    assert!(m.satisfies(&Sentence::eq(f(k("e")), k("d"))).unwrap());
    assert!(!m.satisfies(&Sentence::eq(f(k("d")), k("d"))).unwrap());
    assert_eq!(m.congruence_violation(), None);

    let atoms = closed(&sig_with(&["c", "d", "e"]), &[step("c", "d"), step("d", "e")]);
    let lsig = sig_with(&["c", "d", "e"]);
    let prop = ForcingProperty::new(lsig.clone(), vec![Condition::new("p0", lsig, atoms)], &[]);
    let forcer = Forcer::new(&prop, bounds());
    let g = extend_to_generic(&forcer, 0, &atomic_pool(&forcer)).unwrap();
    let mut m = generic_model(&forcer, &g).unwrap();
    assert!(m.satisfies(&Sentence::trans(Action::star(lam()), k("c"), k("e"))).unwrap());
    assert!(!m.satisfies(&Sentence::trans(Action::star(lam()), k("e"), k("c"))).unwrap());
    assert!(m.satisfies(&Sentence::trans(Action::seq(lam(), lam()), k("c"), k("e"))).unwrap());
}

fn pool_for(prop: &ForcingProperty, seed: u64, n: usize) -> Vec<Sentence> {
    let sig = prop.conditions().iter().fold(prop.base.clone(), |a, c| a.union(&c.sig));
    let cfg = GenConfig {
        sentence_depth: 3,
        term_depth: 0,
        ..GenConfig::default()
    };
    let mut g = SentenceGen::new(&sig, &cfg);
    let mut r = rng(seed);
    (0..n).map(|_| g.sentence(&mut r)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_properties_are_valid(seed in any::<u64>()) {
        let prop = random_forcing_property(&mut rng(seed), &ForcingGenConfig::default());
        prop_assert!(prop.len() <= 6);
        let r = validate_forcing_property(&prop, &SearchBounds { term_depth: 0, ..bounds() });
        prop_assert!(r.is_empty(), "{}", r);
        let forcer = Forcer::new(&prop, bounds());
        prop_assert!(atomic_pool(&forcer).len() <= 12);
    }

    #[test]
    fn forcing_laws(seed in any::<u64>()) {
        let prop = random_forcing_property(&mut rng(seed), &ForcingGenConfig::default());
        let forcer = Forcer::new(&prop, bounds());
        let mut pool = atomic_pool(&forcer);
        pool.extend(pool_for(&prop, seed ^ 1, 12));
        for p in 0..prop.len() {
            for phi in pool.iter().filter(|phi| forcer.fits(p, phi)) {
                let yes = forcer.forces(p, phi).holds;
                let not = Sentence::not(phi.clone());
                let notnot = Sentence::not(not.clone());
                prop_assert!(!(yes && forcer.forces(p, &not).holds));
                if yes {
                    prop_assert!(prop.above(p).all(|q| forcer.forces(q, phi).holds));
                    prop_assert!(forcer.forces(p, &notnot).holds);
                    prop_assert!(forcer.weakly_forces(p, phi).holds);
                }
                let dense = prop.above(p).all(|q| prop.above(q).any(|r| forcer.forces(r, phi).holds));
                prop_assert_eq!(forcer.forces(p, &notnot).holds, dense);
                prop_assert_eq!(forcer.weakly_forces(p, phi).holds, dense);
            }
        }
        prop_assert!(!forcer.exhausted());
    }

    #[test]
    fn generic_models_are_adequate(seed in any::<u64>()) {
        let prop = random_forcing_property(&mut rng(seed), &ForcingGenConfig::default());
        let forcer = Forcer::new(&prop, bounds());
        let sig = prop.conditions().iter().fold(prop.base.clone(), |a, c| a.union(&c.sig));
        let universe = ground_terms(&sig, 0, 64);
        let mut pool = atomic_pool(&forcer);
        pool.extend(pool_for(&prop, seed ^ 2, 8));
        let pool = decision_closure(&pool, &universe);
        let bottom = prop.bottom().unwrap();
        let g = extend_to_generic(&forcer, bottom, &pool).unwrap();
        let mut m = generic_model(&forcer, &g).unwrap();
        prop_assert_eq!(m.congruence_violation(), None);
        for d in &g.decisions {
            let forced = ideal_forces(&forcer, &g.members, &d.sentence);
            prop_assert_eq!(forced, d.positive);
            prop_assert_eq!(m.satisfies(&d.sentence).unwrap(), forced, "{:?}", d.sentence);
        }
    }
}

fn two_element_model(sig: &Signature) -> FiniteModel {
    let mut m = FiniteModel::with_carriers(sig.clone(), &[("s", &["a0", "a1"])]);
    m.set(&Op::constant("c", s()), &[], 0);
    m.add_transition(&Label::new("lambda"), &s(), 0, 1);
    m
}

#[test]
fn semantic_forcing_dls() {
    let sig = sig_with(&["c"]);
    let m = two_element_model(&sig);
    let d = Op::constant("d", s());
    let pool = vec![step("c", "c"), Sentence::not(step("c", "c"))];
    let cfg = SemanticConfig::new(vec![d.clone()], pool);
    let sf = build_semantic_forcing(&sig, &ModelClass::Dls(m), &cfg).unwrap();
    let prop = &sf.property;
    // index (∅, A) with Γ ∈ {∅, {¬λ(c,c)}}; two indices (d ↦ a0 / a1) with the same Γ options
    assert_eq!(prop.len(), 2 + 2 * 2);
    assert!(validate_forcing_property(prop, &SearchBounds { term_depth: 0, ..bounds() }).is_empty());
    assert_eq!(prop.bottom(), Some(0));
    let d_at = |v: usize| {
        (0..prop.len())
            .find(|&p| sf.gamma[p].is_empty() && sf.constants[p].len() == 1 && sf.models[p][0].value(&d, &[]) == Some(v))
            .unwrap()
    };
    let (p_a0, p_a1) = (d_at(0), d_at(1));
    assert!(!prop.leq(p_a0, p_a1) && !prop.leq(p_a1, p_a0));
    assert!(prop.condition(p_a0).atoms.contains(&Sentence::eq(Term::constant(d.clone()), k("c"))));
    assert!(prop.condition(p_a1).atoms.contains(&Sentence::trans(lam(), k("c"), Term::constant(d.clone()))));
    assert_eq!(prop.distance(0, p_a1).unwrap(), 1);
}

#[test]
fn semantic_forcing_ott() {
    let sig = sig_with(&["c", "e"]);
    let phi = Sentence::or(vec![eq("c", "e"), step("c", "e")]);
    let class: Vec<FiniteModel> = crate::finmod::collect_models(
        &sig,
        &crate::finmod::SizeBounds::uniform(2),
        std::slice::from_ref(&phi),
        &crate::finmod::EnumOptions::default(),
    )
    .unwrap();
    assert!(!class.is_empty());
    // p ∧ ¬p never has a model, so no condition assumes both
    let pool = vec![eq("c", "e"), Sentence::not(eq("c", "e"))];
    let cfg = SemanticConfig::new(vec![], pool.clone());
    let sf = build_semantic_forcing(&sig, &ModelClass::Ott(class.clone()), &cfg).unwrap();
    assert_eq!(sf.property.len(), 3);
    assert!(sf.gamma.iter().all(|g| g.len() <= 1));
    // f(0): atoms true in every model of the class, i.e. the atomic consequences
    let f0 = &sf.property.condition(0).atoms;
    let expected: BTreeSet<Sentence> = atoms_over(&sig, &ground_terms(&sig, 0, 10))
        .into_iter()
        .filter(|a| class.iter().all(|m| crate::finmod::satisfies(m, a)))
        .collect();
    assert_eq!(f0, &expected);
    assert!(f0.contains(&eq("c", "c")) && !f0.contains(&eq("c", "e")));
}

#[test]
fn semantic_forcing_theorem_at_small_scale() {
    let sig = sig_with(&["c"]);
    let m = two_element_model(&sig);
    let d = Op::constant("d", s());
    let x = crate::kernel::Variable::new("x", s());
    let base_pool = vec![
        step("c", "c"),
        Sentence::exists(vec![x.clone()], Sentence::trans(lam(), k("c"), Term::var(x.clone()))),
        Sentence::exists(vec![x.clone()], Sentence::neq(Term::var(x.clone()), k("c"))),
        Sentence::trans(Action::star(lam()), k("c"), k("c")),
    ];
    let mut pool = base_pool.clone();
    pool.extend(base_pool.iter().map(|p| Sentence::not(p.clone())));
    let mut cfg = SemanticConfig::new(vec![d], pool.clone());
    cfg.max_gamma = 2;
    let sf = build_semantic_forcing(&sig, &ModelClass::Dls(m), &cfg).unwrap();
    let report = compare_sfp(&sf, &pool, &bounds());
    assert!(report.checked > 0);
    let unexplained: Vec<_> = report.unexplained().collect();
    assert!(unexplained.is_empty(), "{unexplained:?}");
    assert!(report.agreements > 0);
}

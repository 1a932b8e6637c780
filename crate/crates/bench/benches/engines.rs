use std::hint::black_box;
use std::ops::ControlFlow;

use criterion::{criterion_group, criterion_main, Criterion};
use ta_core::classes::{semantic_entails, EntailConfig};
use ta_core::finmod::{enumerate_models, satisfies, Compiled, EnumOptions, SizeBounds};
use ta_core::fixtures::*;
use ta_core::forcing::{
    atomic_pool, extend_to_generic, generic_model, random_forcing_property, CongruenceClosure, Forcer,
    ForcingGenConfig, SearchBounds,
};
use ta_core::institution::Flavor;
use ta_core::surface::{parse_spec, print_spec};
use ta_core::testgen::{random_relation, rng};
use ta_core::types::{build_tc, Realizer};
use ta_core::{Op, Sort, Term};

fn satisfaction(c: &mut Criterion) {
    let m = list_saturated_model();
    let assoc = list_assoc();
    c.bench_function("satisfies/assoc on the 7-element list model", |b| {
        b.iter(|| satisfies(black_box(&m), black_box(&assoc)))
    });
    let phi = Compiled::new(m.signature(), &[], &assoc).unwrap();
    c.bench_function("satisfies/compiled assoc", |b| b.iter(|| phi.truth(black_box(&m), &[])));

    let mut r = rng(1);
    let rel = random_relation(&mut r, 64, 0.05);
    c.bench_function("relation/star on 64 elements", |b| b.iter(|| black_box(&rel).star()));
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumeration");
    g.sample_size(10);
    let phi: Vec<_> = list_axioms().into_iter().map(|(_, s)| s).collect();
    let cfg = EntailConfig::new(SizeBounds::uniform(0).with("List", 4).with("Elt", 1));
    g.bench_function("ctor entailment of assoc, List<=4", |b| {
        b.iter(|| semantic_entails(&list_signature(), &phi, &list_assoc(), Flavor::CtorBased, &cfg).unwrap())
    });
    let tc = build_tc(&list_signature(), 3).unwrap();
    let realizer = Realizer::new(&tc[0].ty).unwrap();
    let bounds = SizeBounds::uniform(0).with("List", 2).with("Elt", 1);
    g.bench_function("T^c over LIST models, List<=2", |b| {
        b.iter(|| {
            let mut omitted = 0u64;
            enumerate_models(&list_signature(), &bounds, &[], &EnumOptions::default(), |m| {
                omitted += realizer.realizes(m).is_none() as u64;
                ControlFlow::Continue(())
            })
            .unwrap();
            omitted
        })
    });
    g.finish();
}

fn congruence(c: &mut Criterion) {
    let s = Sort::new("s");
    let f = Op::new("f", vec![s.clone()], s.clone());
    let a = Term::constant(Op::constant("a", s.clone()));
    let mut chain = vec![a.clone()];
    for _ in 0..200 {
        let last = chain.last().unwrap().clone();
        chain.push(Term::app(f.clone(), vec![last]));
    }
    // f^200(a) = a and f^3(a) = a collapse the chain to one class
    let eqs = [(&chain[200], &a), (&chain[3], &a)];
    c.bench_function("congruence/chain of 200 applications", |b| {
        b.iter(|| CongruenceClosure::from_equations(eqs, &chain, 10_000).unwrap().classes().len())
    });
}

fn forcing(c: &mut Criterion) {
    let props: Vec<_> = (0..20).map(|seed| random_forcing_property(&mut rng(seed), &ForcingGenConfig::default())).collect();
    let bounds = SearchBounds {
        term_depth: 0,
        ..SearchBounds::default()
    };
    c.bench_function("forcing/generic models of 20 random properties", |b| {
        b.iter(|| {
            for prop in &props {
                let forcer = Forcer::new(prop, bounds.clone());
                let pool = atomic_pool(&forcer);
                let g = extend_to_generic(&forcer, prop.bottom().unwrap(), &pool).unwrap();
                black_box(generic_model(&forcer, &g).unwrap());
            }
        })
    });
}

fn surface(c: &mut Criterion) {
    let text = print_spec(&spec("list", Some(4)).unwrap());
    c.bench_function("surface/parse the list fixture", |b| b.iter(|| parse_spec(black_box(&text)).unwrap()));
}

criterion_group!(benches, satisfaction, enumeration, congruence, forcing, surface);
criterion_main!(benches);

use std::collections::BTreeSet;

use rand::{Rng, RngExt};

use super::forces::SearchBounds;
use super::property::{Condition, ForcingProperty};
use super::universe::ground_terms;
use super::validate::{atomic_consequences, atoms_over, validate_forcing_property};
use crate::kernel::{Label, Op, Sentence, Signature, Sort};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingGenConfig {
    pub max_conditions: usize,
    /// Largest number of atoms over the union of the condition signatures.
    pub max_atoms: usize,
    /// Attempts at thinning `f` while keeping every axiom.
    pub thinning: usize,
}

impl Default for ForcingGenConfig {
    fn default() -> Self {
        ForcingGenConfig {
            max_conditions: 6,
            max_atoms: 12,
            thinning: 4,
        }
    }
}

/// A random valid forcing property over one sort and constants only.
///
/// Conditions are added one at a time above one or two earlier conditions,
/// inheriting their signatures (plus, sometimes, a fresh constant) and atoms
/// (plus a few random ones), with `f` closed under atomic consequence. Some
/// consequences are then removed from lower conditions when a condition
/// above still holds them, so axiom 4 is exercised beyond `q = p`.
pub fn random_forcing_property<R: Rng + ?Sized>(rng: &mut R, cfg: &ForcingGenConfig) -> ForcingProperty {
    let s = Sort::new("s");
    let bounds = SearchBounds {
        term_depth: 0,
        ..SearchBounds::default()
    };
    // n constants and an optional label give n^2 equations and n^2 transitions
    let (total, label) = loop {
        let n = rng.random_range(1..=3usize);
        let l = rng.random_bool(0.6);
        let atoms = n * n * if l { 2 } else { 1 };
        if atoms <= cfg.max_atoms {
            break (n, l);
        }
    };
    let in_base = rng.random_range(1..=total);
    let constants: Vec<Op> = (0..total)
        .map(|i| {
            let name = if i < in_base { format!("c{i}") } else { format!("d{}", i - in_base) };
            Op::constant(name, s.clone())
        })
        .collect();
    let mut base = Signature::new().with_sort(s.clone());
    if label {
        base = base.with_label(Label::new("l"));
    }
    let base = base.with_constants(&constants[..in_base]);

    let random_atoms = |rng: &mut R, sig: &Signature, k: usize| -> Vec<Sentence> {
        let pool = atoms_over(sig, &ground_terms(sig, 0, 64));
        (0..k).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect()
    };
    let close = |sig: &Signature, atoms: BTreeSet<Sentence>| -> BTreeSet<Sentence> {
        atomic_consequences(sig, &atoms, 0, 64).expect("tiny universe")
    };

    let n = rng.random_range(1..=cfg.max_conditions);
    let mut conditions: Vec<Condition> = Vec::with_capacity(n);
    let mut pairs = Vec::new();
    let k = rng.random_range(0..=2);
    let first = random_atoms(rng, &base, k).into_iter().collect();
    conditions.push(Condition::new("p0", base.clone(), close(&base, first)));
    for i in 1..n {
        let mut parents = vec![rng.random_range(0..i)];
        if i > 1 && rng.random_bool(0.3) {
            let other = rng.random_range(0..i);
            if !parents.contains(&other) {
                parents.push(other);
            }
        }
        let mut sig = parents
            .iter()
            .fold(base.clone(), |acc, &p| acc.union(&conditions[p].sig));
        if in_base < total && rng.random_bool(0.5) {
            let c = &constants[rng.random_range(in_base..total)];
            sig = sig.with_constants([c]);
        }
        let mut atoms: BTreeSet<Sentence> = parents.iter().flat_map(|&p| conditions[p].atoms.iter().cloned()).collect();
        let k = rng.random_range(0..=2);
        atoms.extend(random_atoms(rng, &sig, k));
        let atoms = close(&sig, atoms);
        conditions.push(Condition::new(format!("p{i}"), sig, atoms));
        pairs.extend(parents.into_iter().map(|p| (p, i)));
    }

    let mut prop = ForcingProperty::new(base.clone(), conditions.clone(), &pairs);
    for _ in 0..cfg.thinning {
        let p = rng.random_range(0..n);
        let atoms: Vec<&Sentence> = conditions[p].atoms.iter().collect();
        if atoms.is_empty() {
            continue;
        }
        let phi = atoms[rng.random_range(0..atoms.len())].clone();
        let mut thinned = conditions.clone();
        for (r, c) in thinned.iter_mut().enumerate() {
            if prop.leq(r, p) {
                c.atoms.remove(&phi);
            }
        }
        let candidate = ForcingProperty::new(base.clone(), thinned.clone(), &pairs);
        if validate_forcing_property(&candidate, &bounds).is_empty() {
            conditions = thinned;
            prop = candidate;
        }
    }
    prop
}

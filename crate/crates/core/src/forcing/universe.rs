use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::kernel::{Sentence, Signature, Sort, Term};

/// Ground terms of a signature up to a depth, by sort, in order of depth
/// and then generation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Universe {
    pub terms: BTreeMap<Sort, Vec<Term>>,
    /// Sorts with ground terms beyond the depth (or beyond the size cap).
    pub truncated: BTreeSet<Sort>,
}

impl Universe {
    pub fn of(&self, sort: &Sort) -> &[Term] {
        self.terms.get(sort).map_or(&[], |v| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.terms.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn all(&self) -> impl Iterator<Item = &Term> {
        self.terms.values().flatten()
    }

    /// Adds a term and its subterms, keeping existing order.
    pub fn insert(&mut self, t: &Term) {
        let mut subs = Vec::new();
        t.subterms(&mut subs);
        for s in subs {
            let bucket = self.terms.entry(s.sort().clone()).or_default();
            if !bucket.contains(&s) {
                bucket.push(s);
            }
        }
    }

    pub fn insert_atoms<'a>(&mut self, atoms: impl IntoIterator<Item = &'a Sentence>) {
        for a in atoms {
            a.for_each_term(&mut |t| {
                if t.is_ground() {
                    self.insert(t)
                }
            });
        }
    }
}

/// Ground terms of `sig` of depth at most `depth` (constants have depth 0),
/// capped at `max_terms` terms in total.
pub fn ground_terms(sig: &Signature, depth: usize, max_terms: usize) -> Universe {
    let mut u = Universe::default();
    for s in sig.sorts() {
        u.terms.insert(s.clone(), Vec::new());
    }
    let mut seen: HashSet<Term> = HashSet::new();
    let mut total = 0;
    let mut capped = false;
    let mut frontier: BTreeSet<Sort> = BTreeSet::new();
    for c in sig.constants() {
        let t = Term::constant(c.clone());
        if seen.insert(t.clone()) {
            frontier.insert(c.result().clone());
            u.terms.entry(c.result().clone()).or_default().push(t);
            total += 1;
        }
    }
    for _ in 0..depth {
        if capped || frontier.is_empty() {
            break;
        }
        let snapshot = u.terms.clone();
        let mut next_frontier = BTreeSet::new();
        for op in sig.ops().iter().filter(|o| !o.is_constant()) {
            if !op.arity().iter().any(|a| frontier.contains(a)) {
                continue;
            }
            let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
            for a in op.arity() {
                let options = snapshot.get(a).map_or(&[][..], |v| v.as_slice());
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        options.iter().map(move |o| {
                            let mut c = c.clone();
                            c.push(o.clone());
                            c
                        })
                    })
                    .collect();
            }
            for args in combos {
                let t = Term::app(op.clone(), args);
                if seen.contains(&t) {
                    continue;
                }
                if total >= max_terms {
                    capped = true;
                    break;
                }
                seen.insert(t.clone());
                next_frontier.insert(op.result().clone());
                u.terms.entry(op.result().clone()).or_default().push(t);
                total += 1;
            }
            if capped {
                break;
            }
        }
        frontier = next_frontier;
    }
    if capped {
        u.truncated = sig.sorts().iter().cloned().collect();
        return u;
    }
    // a further round would add terms exactly when some operation has every
    // argument sort inhabited and an argument sort that grew in the last round
    for op in sig.ops().iter().filter(|o| !o.is_constant()) {
        let inhabited = op.arity().iter().all(|a| !u.of(a).is_empty());
        if inhabited && op.arity().iter().any(|a| frontier.contains(a)) {
            u.truncated.insert(op.result().clone());
        }
    }
    u
}

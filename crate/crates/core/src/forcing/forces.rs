use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use super::property::{ForcingError, ForcingProperty};
use super::universe::{ground_terms, Universe};
use crate::kernel::{check_sentence, Action, Sentence, Term, Variable};

/// Finite stand-ins for the unbounded searches in the forcing clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Deepest ground term used as a composition or existential witness.
    pub term_depth: usize,
    /// Largest `n` tried for `a^n` when unfolding `a*`.
    pub star_cap: usize,
    /// Total evaluation steps allowed for one forcing evaluator.
    pub node_budget: u64,
    /// Cap on the number of ground terms per condition.
    pub max_terms: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            term_depth: 1,
            star_cap: 8,
            node_budget: 5_000_000,
            max_terms: 2_000,
        }
    }
}

/// A forcing verdict. `truncated` is set when a search that came back empty
/// ran into a bound, so a larger bound might have found a witness.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Forced {
    pub holds: bool,
    pub truncated: bool,
}

impl Forced {
    fn exact(holds: bool) -> Self {
        Forced { holds, truncated: false }
    }
}

/// Memoizing evaluator of `p ⊩ φ` for one forcing property. Safe to share
/// between threads; the memo only ever caches final verdicts, so results do
/// not depend on evaluation order.
pub struct Forcer<'a> {
    prop: &'a ForcingProperty,
    bounds: SearchBounds,
    universes: Vec<Universe>,
    cache: RwLock<HashMap<(usize, Sentence), Forced>>,
    steps: AtomicU64,
}

impl<'a> Forcer<'a> {
    pub fn new(prop: &'a ForcingProperty, bounds: SearchBounds) -> Self {
        let universes = prop
            .conditions()
            .iter()
            .map(|c| {
                let mut u = ground_terms(&c.sig, bounds.term_depth, bounds.max_terms);
                u.insert_atoms(&c.atoms);
                u
            })
            .collect();
        Forcer {
            prop,
            bounds,
            universes,
            cache: RwLock::new(HashMap::new()),
            steps: AtomicU64::new(0),
        }
    }

    pub fn property(&self) -> &'a ForcingProperty {
        self.prop
    }

    pub fn bounds(&self) -> &SearchBounds {
        &self.bounds
    }

    /// Witness terms of condition `p`: ground terms up to the depth plus the
    /// subterms of `f(p)`.
    pub fn universe(&self, p: usize) -> &Universe {
        &self.universes[p]
    }

    /// True once the step budget ran out; later verdicts are unreliable.
    pub fn exhausted(&self) -> bool {
        self.steps.load(Ordering::Relaxed) > self.bounds.node_budget
    }

    /// Whether `φ` is a closed sentence over `Δ(p)`.
    pub fn fits(&self, p: usize, phi: &Sentence) -> bool {
        phi.is_closed() && check_sentence(&self.prop.condition(p).sig, phi).is_empty()
    }

    /// `p ⊩ φ`, for a closed `φ` over `Δ(p)`.
    pub fn forces(&self, p: usize, phi: &Sentence) -> Forced {
        self.eval(p, &phi.normalize())
    }

    /// `p ⊩^w φ`: every `q ≥ p` has some `r ≥ q` forcing `φ`. Distances in
    /// a finite property are always finite.
    pub fn weakly_forces(&self, p: usize, phi: &Sentence) -> Forced {
        let phi = phi.normalize();
        let mut truncated = false;
        for q in self.prop.above(p) {
            let mut found = false;
            for r in self.prop.above(q) {
                let f = self.eval(r, &phi);
                if f.holds {
                    found = true;
                    break;
                }
                truncated |= f.truncated;
            }
            if !found {
                return Forced { holds: false, truncated };
            }
        }
        Forced { holds: true, truncated: false }
    }

    fn eval(&self, p: usize, phi: &Sentence) -> Forced {
        let key = (p, phi.clone());
        if let Some(f) = self.cache.read().expect("forcing cache").get(&key) {
            return *f;
        }
        if self.steps.fetch_add(1, Ordering::Relaxed) >= self.bounds.node_budget {
            return Forced { holds: false, truncated: true };
        }
        let result = self.compute(p, phi);
        self.cache.write().expect("forcing cache").insert(key, result);
        result
    }

    fn compute(&self, p: usize, phi: &Sentence) -> Forced {
        let cond = self.prop.condition(p);
        match phi {
            Sentence::Eq(..) => Forced::exact(cond.atoms.contains(phi)),
            Sentence::Trans(a, t1, t2) => self.trans(p, a, t1, t2),
            Sentence::Not(inner) => {
                let mut truncated = false;
                for q in self.prop.above(p) {
                    let f = self.eval(q, inner);
                    truncated |= f.truncated;
                    if f.holds {
                        return Forced::exact(false);
                    }
                }
                Forced { holds: true, truncated }
            }
            Sentence::Or(items) => {
                let mut truncated = false;
                for s in items {
                    let f = self.eval(p, s);
                    if f.holds {
                        return Forced::exact(true);
                    }
                    truncated |= f.truncated;
                }
                Forced { holds: false, truncated }
            }
            Sentence::Exists(block, body) => self.exists(p, block, body),
        }
    }

    fn trans(&self, p: usize, a: &Action, t1: &Term, t2: &Term) -> Forced {
        let u = &self.universes[p];
        match a {
            Action::Label(_) => Forced::exact(
                self.prop
                    .condition(p)
                    .atoms
                    .contains(&Sentence::trans(a.clone(), t1.clone(), t2.clone())),
            ),
            Action::Union(a1, a2) => {
                let f1 = self.eval(p, &Sentence::trans((**a1).clone(), t1.clone(), t2.clone()));
                if f1.holds {
                    return f1;
                }
                let f2 = self.eval(p, &Sentence::trans((**a2).clone(), t1.clone(), t2.clone()));
                Forced {
                    holds: f2.holds,
                    truncated: !f2.holds && (f1.truncated || f2.truncated),
                }
            }
            Action::Seq(a1, a2) => {
                let sort = t1.sort();
                let mut truncated = u.truncated.contains(sort);
                for t in u.of(sort) {
                    let f1 = self.eval(p, &Sentence::trans((**a1).clone(), t1.clone(), t.clone()));
                    truncated |= f1.truncated;
                    if !f1.holds {
                        continue;
                    }
                    let f2 = self.eval(p, &Sentence::trans((**a2).clone(), t.clone(), t2.clone()));
                    truncated |= f2.truncated;
                    if f2.holds {
                        return Forced::exact(true);
                    }
                }
                Forced { holds: false, truncated }
            }
            Action::Star(b) => {
                let mut truncated = false;
                for n in 0..=self.bounds.star_cap {
                    let f = self.eval(p, &Sentence::power_trans(b, n, t1.clone(), t2.clone()));
                    if f.holds {
                        return Forced::exact(true);
                    }
                    truncated |= f.truncated;
                }
                // walks longer than the number of candidate terms add nothing
                let sort = t1.sort();
                truncated |= self.bounds.star_cap < u.of(sort).len() || u.truncated.contains(sort);
                Forced { holds: false, truncated }
            }
        }
    }

    fn exists(&self, p: usize, block: &[Variable], body: &Sentence) -> Forced {
        let u = &self.universes[p];
        let options: Vec<&[Term]> = block.iter().map(|v| u.of(&v.sort)).collect();
        let mut truncated = block.iter().any(|v| u.truncated.contains(&v.sort));
        if options.iter().any(|o| o.is_empty()) {
            return Forced { holds: false, truncated };
        }
        let mut idx = vec![0usize; block.len()];
        loop {
            let map: HashMap<Variable, Term> = block
                .iter()
                .zip(&idx)
                .zip(&options)
                .map(|((v, &i), o)| (v.clone(), o[i].clone()))
                .collect();
            let f = self.eval(p, &body.substitute(&map).normalize());
            if f.holds {
                return Forced::exact(true);
            }
            truncated |= f.truncated;
            let mut k = idx.len();
            loop {
                if k == 0 {
                    return Forced { holds: false, truncated };
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < options[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

fn checked(prop: &ForcingProperty, p: usize, phi: &Sentence) -> Result<(), ForcingError> {
    if p >= prop.len() {
        return Err(ForcingError::UnknownCondition(p.to_string()));
    }
    let sig = &prop.condition(p).sig;
    let report = check_sentence(sig, phi);
    if !report.is_empty() || !phi.is_closed() {
        return Err(ForcingError::Invalid(format!(
            "sentence is not a closed sentence over the signature of {}",
            prop.condition(p).name
        )));
    }
    Ok(())
}

/// `p ⊩ φ` with fresh memo.
pub fn forces(prop: &ForcingProperty, p: usize, phi: &Sentence, bounds: &SearchBounds) -> Result<Forced, ForcingError> {
    checked(prop, p, phi)?;
    let forcer = Forcer::new(prop, bounds.clone());
    let f = forcer.forces(p, phi);
    if forcer.exhausted() {
        return Err(ForcingError::ResourceLimit(bounds.node_budget));
    }
    Ok(f)
}

/// `p ⊩^w φ` with fresh memo.
pub fn weakly_forces(
    prop: &ForcingProperty,
    p: usize,
    phi: &Sentence,
    bounds: &SearchBounds,
) -> Result<Forced, ForcingError> {
    checked(prop, p, phi)?;
    let forcer = Forcer::new(prop, bounds.clone());
    let f = forcer.weakly_forces(p, phi);
    if forcer.exhausted() {
        return Err(ForcingError::ResourceLimit(bounds.node_budget));
    }
    Ok(f)
}

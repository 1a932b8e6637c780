use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::congruence::CongruenceClosure;
use super::forces::Forcer;
use super::property::{ForcingError, ForcingProperty};
use super::universe::{ground_terms, Universe};
use super::validate::atoms_over;
use crate::kernel::{Action, Label, Sentence, Signature, Sort, Term, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub sentence: Sentence,
    /// The chain condition at which the sentence was decided.
    pub condition: usize,
    /// `true` when the condition forces the sentence, `false` when it
    /// forces its negation.
    pub positive: bool,
}

/// A generic ideal built along a chain of conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericIdeal {
    /// Members, in index order.
    pub members: Vec<usize>,
    /// The chain the construction moved along, from the start condition.
    pub chain: Vec<usize>,
    pub decisions: Vec<Decision>,
    /// Pool sentences over no member's signature.
    pub out_of_signature: Vec<Sentence>,
    /// Some verdict along the way hit a search bound.
    pub truncated: bool,
}

impl GenericIdeal {
    pub fn top(&self) -> usize {
        *self.chain.last().expect("chain starts at a condition")
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.binary_search(&p).is_ok()
    }
}

/// Every atom over the union of the condition signatures, for terms up to
/// the forcing depth.
pub fn atomic_pool(forcer: &Forcer) -> Vec<Sentence> {
    let prop = forcer.property();
    let sig = prop
        .conditions()
        .iter()
        .fold(prop.base.clone(), |acc, c| acc.union(&c.sig));
    let b = forcer.bounds();
    let mut u = ground_terms(&sig, b.term_depth, b.max_terms);
    for c in prop.conditions() {
        u.insert_atoms(&c.atoms);
    }
    atoms_over(&sig, &u)
}

/// `pool` closed under subsentences, with each existential also contributing
/// its instances by ground terms of `universe`. Normalized, first occurrence
/// kept.
pub fn decision_closure(pool: &[Sentence], universe: &Universe) -> Vec<Sentence> {
    fn go(s: &Sentence, universe: &Universe, seen: &mut BTreeSet<Sentence>, out: &mut Vec<Sentence>) {
        let s = s.normalize();
        if !seen.insert(s.clone()) {
            return;
        }
        out.push(s.clone());
        match &s {
            Sentence::Not(inner) => go(inner, universe, seen, out),
            Sentence::Or(items) => items.iter().for_each(|i| go(i, universe, seen, out)),
            Sentence::Exists(block, body) => {
                for map in instances(block, universe) {
                    go(&body.substitute(&map), universe, seen, out);
                }
            }
            Sentence::Eq(..) | Sentence::Trans(..) => {}
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in pool {
        go(s, universe, &mut seen, &mut out);
    }
    out
}

fn instances(block: &[Variable], universe: &Universe) -> Vec<HashMap<Variable, Term>> {
    let mut out = vec![HashMap::new()];
    for v in block {
        out = out
            .into_iter()
            .flat_map(|m| {
                universe.of(&v.sort).iter().map(move |t| {
                    let mut m = m.clone();
                    m.insert(v.clone(), t.clone());
                    m
                })
            })
            .collect();
    }
    out
}

fn pick_extension(forcer: &Forcer, current: usize, phi: &Sentence, truncated: &mut bool) -> Option<usize> {
    let prop = forcer.property();
    let mut best: Option<(usize, usize)> = None;
    for q in prop.above(current) {
        let f = forcer.forces(q, phi);
        *truncated |= f.truncated;
        if f.holds {
            let d = prop.distance(current, q).expect("q is above");
            if best.is_none_or(|(bd, bq)| (d, q) < (bd, bq)) {
                best = Some((d, q));
            }
        }
    }
    best.map(|(_, q)| q)
}

/// Builds a chain from `p` deciding every pool sentence: a sentence forced
/// by some extension of the current condition moves the chain to the
/// closest such extension (least distance, then least index); otherwise the
/// current condition forces its negation. Pool sentences outside the current
/// signature are revisited whenever the chain grows. The result is the
/// downward closure of the chain's last condition.
pub fn extend_to_generic(forcer: &Forcer, p: usize, pool: &[Sentence]) -> Result<GenericIdeal, ForcingError> {
    let prop = forcer.property();
    if p >= prop.len() {
        return Err(ForcingError::UnknownCondition(p.to_string()));
    }
    let mut current = p;
    let mut chain = vec![p];
    let mut decided: Vec<Option<Decision>> = vec![None; pool.len()];
    let mut truncated = false;
    loop {
        let before = decided.iter().filter(|d| d.is_some()).count();
        for (i, phi) in pool.iter().enumerate() {
            if decided[i].is_some() || !forcer.fits(current, phi) {
                continue;
            }
            let here = forcer.forces(current, phi);
            truncated |= here.truncated;
            let (condition, positive) = if here.holds {
                (current, true)
            } else if let Some(q) = pick_extension(forcer, current, phi, &mut truncated) {
                current = q;
                chain.push(q);
                (q, true)
            } else {
                (current, false)
            };
            decided[i] = Some(Decision {
                sentence: phi.clone(),
                condition,
                positive,
            });
        }
        if forcer.exhausted() {
            return Err(ForcingError::ResourceLimit(forcer.bounds().node_budget));
        }
        if decided.iter().filter(|d| d.is_some()).count() == before {
            break;
        }
    }
    let members: Vec<usize> = (0..prop.len()).filter(|&q| prop.leq(q, current)).collect();
    let mut out_of_signature = Vec::new();
    let mut decisions = Vec::new();
    for (phi, d) in pool.iter().zip(decided) {
        match d {
            Some(d) => decisions.push(d),
            None => out_of_signature.push(phi.clone()),
        }
    }
    let ideal = GenericIdeal {
        members,
        chain,
        decisions,
        out_of_signature,
        truncated,
    };
    validate_generic(forcer, &ideal.members, pool)?;
    Ok(ideal)
}

/// Checks that `members` is a nonempty, downward closed, directed set of
/// conditions deciding every pool sentence over a member's signature.
pub fn validate_generic(forcer: &Forcer, members: &[usize], pool: &[Sentence]) -> Result<(), ForcingError> {
    let prop = forcer.property();
    if members.is_empty() {
        return Err(ForcingError::Invalid("the ideal is empty".into()));
    }
    let set: BTreeSet<usize> = members.iter().copied().collect();
    let name = |p: usize| prop.condition(p).name.clone();
    if let Some(&bad) = set.iter().find(|&&p| p >= prop.len()) {
        return Err(ForcingError::UnknownCondition(bad.to_string()));
    }
    for &p in &set {
        if let Some(q) = (0..prop.len()).find(|&q| prop.leq(q, p) && !set.contains(&q)) {
            return Err(ForcingError::Invalid(format!(
                "the ideal is not downward closed: {} is below {} but missing",
                name(q),
                name(p)
            )));
        }
    }
    for &p in &set {
        for &q in &set {
            if q > p && !set.iter().any(|&r| prop.leq(p, r) && prop.leq(q, r)) {
                return Err(ForcingError::DirectednessFailure(name(p), name(q)));
            }
        }
    }
    for &p in &set {
        for phi in pool {
            if !forcer.fits(p, phi) {
                continue;
            }
            let neg = Sentence::not(phi.clone());
            let decided = set
                .iter()
                .any(|&q| prop.leq(p, q) && (forcer.forces(q, phi).holds || forcer.forces(q, &neg).holds));
            if !decided {
                return Err(ForcingError::Invalid(format!(
                    "no member above {} decides {}",
                    name(p),
                    crate::surface::print_sentence(&prop.condition(p).sig, phi)
                )));
            }
        }
    }
    Ok(())
}

/// `G ⊩ φ`: some member over whose signature `φ` lies forces it.
pub fn ideal_forces(forcer: &Forcer, members: &[usize], phi: &Sentence) -> bool {
    members
        .iter()
        .any(|&p| forcer.fits(p, phi) && forcer.forces(p, phi).holds)
}

/// The reachable model of a generic ideal: ground terms of the colimit
/// signature modulo the congruence generated by the forced equations, with
/// the forced transitions.
#[derive(Clone, Debug)]
pub struct TermQuotientModel {
    sig: Signature,
    cc: CongruenceClosure,
    universe: Universe,
    transitions: BTreeMap<Label, Vec<(Term, Term)>>,
}

/// Builds the generic model of `ideal` over the union of its members'
/// signatures. Quantifiers range over the classes of ground terms up to the
/// forcing depth.
pub fn generic_model(forcer: &Forcer, ideal: &GenericIdeal) -> Result<TermQuotientModel, ForcingError> {
    let prop = forcer.property();
    let members = &ideal.members;
    let sig = members
        .iter()
        .fold(prop.base.clone(), |acc, &p| acc.union(&prop.condition(p).sig));
    let atoms: BTreeSet<&Sentence> = members.iter().flat_map(|&p| prop.condition(p).atoms.iter()).collect();
    let b = forcer.bounds();
    let mut universe = ground_terms(&sig, b.term_depth, b.max_terms);
    universe.insert_atoms(atoms.iter().copied());
    let cc = CongruenceClosure::from_equations(
        atoms.iter().filter_map(|a| match a {
            Sentence::Eq(x, y) => Some((x, y)),
            _ => None,
        }),
        universe.all(),
        b.max_terms.saturating_mul(4),
    )?;
    let mut transitions: BTreeMap<Label, Vec<(Term, Term)>> = sig.labels().iter().map(|l| (l.clone(), Vec::new())).collect();
    for a in &atoms {
        if let Sentence::Trans(Action::Label(l), x, y) = a {
            transitions.entry(l.clone()).or_default().push((x.clone(), y.clone()));
        }
    }
    Ok(TermQuotientModel {
        sig,
        cc,
        universe,
        transitions,
    })
}

impl TermQuotientModel {
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Classes of the term universe per sort, each listed by its terms.
    pub fn elements(&self) -> BTreeMap<Sort, Vec<Vec<Term>>> {
        let mut out: BTreeMap<Sort, Vec<Vec<Term>>> = self.sig.sorts().iter().map(|s| (s.clone(), Vec::new())).collect();
        for class in self.cc.classes() {
            let terms: Vec<Term> = class.iter().map(|&i| self.cc.term(i).clone()).collect();
            out.entry(terms[0].sort().clone()).or_default().push(terms);
        }
        out
    }

    /// Forced transitions per label, as pairs of terms.
    pub fn transitions(&self) -> &BTreeMap<Label, Vec<(Term, Term)>> {
        &self.transitions
    }

    pub fn congruent(&mut self, a: &Term, b: &Term) -> Result<bool, ForcingError> {
        self.cc.equivalent(a, b)
    }

    fn class(&mut self, t: &Term) -> Result<usize, ForcingError> {
        let id = self.cc.add(t)?;
        Ok(self.cc.find(id))
    }

    /// The pairs of classes related by `a`, plus whether the identity is
    /// included (kept symbolic since it ranges over every element).
    fn relation(&mut self, a: &Action) -> Result<(BTreeSet<(usize, usize)>, bool), ForcingError> {
        Ok(match a {
            Action::Label(l) => {
                let pairs = self.transitions.get(l).cloned().unwrap_or_default();
                let mut out = BTreeSet::new();
                for (x, y) in pairs {
                    out.insert((self.class(&x)?, self.class(&y)?));
                }
                (out, false)
            }
            Action::Union(a1, a2) => {
                let (mut r, id1) = self.relation(a1)?;
                let (r2, id2) = self.relation(a2)?;
                r.extend(r2);
                (r, id1 || id2)
            }
            Action::Seq(a1, a2) => {
                let (r1, id1) = self.relation(a1)?;
                let (r2, id2) = self.relation(a2)?;
                let mut out = compose(&r1, &r2);
                if id1 {
                    out.extend(r2.iter().copied());
                }
                if id2 {
                    out.extend(r1.iter().copied());
                }
                (out, id1 && id2)
            }
            Action::Star(b) => {
                let (mut r, _) = self.relation(b)?;
                loop {
                    let step: Vec<(usize, usize)> = compose(&r, &r).into_iter().filter(|p| !r.contains(p)).collect();
                    if step.is_empty() {
                        break (r, true);
                    }
                    r.extend(step);
                }
            }
        })
    }

    /// Satisfaction, with quantifiers instantiated by one term per class of
    /// the term universe. Terms outside the universe are added on demand.
    pub fn satisfies(&mut self, phi: &Sentence) -> Result<bool, ForcingError> {
        Ok(match phi {
            Sentence::Eq(a, b) => self.congruent(a, b)?,
            Sentence::Trans(a, t1, t2) => {
                let (c1, c2) = (self.class(t1)?, self.class(t2)?);
                let (r, identity) = self.relation(a)?;
                (identity && c1 == c2) || r.contains(&(c1, c2))
            }
            Sentence::Not(s) => !self.satisfies(s)?,
            Sentence::Or(items) => {
                for s in items {
                    if self.satisfies(s)? {
                        return Ok(true);
                    }
                }
                false
            }
            Sentence::Exists(block, body) => {
                let reps: Vec<Vec<Term>> = block.iter().map(|v| self.representatives(&v.sort)).collect();
                if reps.iter().any(Vec::is_empty) {
                    return Ok(false);
                }
                let mut idx = vec![0usize; block.len()];
                loop {
                    let map: HashMap<Variable, Term> = block
                        .iter()
                        .zip(&idx)
                        .zip(&reps)
                        .map(|((v, &i), r)| (v.clone(), r[i].clone()))
                        .collect();
                    if self.satisfies(&body.substitute(&map))? {
                        return Ok(true);
                    }
                    let mut k = idx.len();
                    loop {
                        if k == 0 {
                            return Ok(false);
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < reps[k].len() {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
            }
        })
    }

    /// One term per class among the universe terms of `sort`.
    fn representatives(&self, sort: &Sort) -> Vec<Term> {
        let mut seen = BTreeSet::new();
        self.universe
            .of(sort)
            .iter()
            .filter(|t| seen.insert(self.cc.class_of(t).expect("universe terms are added")))
            .cloned()
            .collect()
    }

    /// Checks the congruence invariant on the universe: congruent arguments
    /// give congruent applications. Returns the first offending pair.
    pub fn congruence_violation(&self) -> Option<(Term, Term)> {
        let terms: Vec<&Term> = self.universe.all().collect();
        for a in &terms {
            for b in &terms {
                if let (Term::App(f, xs), Term::App(g, ys)) = (a, b) {
                    let args_congruent = f == g
                        && xs.iter().zip(ys).all(|(x, y)| self.cc.class_of(x) == self.cc.class_of(y));
                    if args_congruent && self.cc.class_of(a) != self.cc.class_of(b) {
                        return Some(((*a).clone(), (*b).clone()));
                    }
                }
            }
        }
        None
    }
}

/// The members' order must have a top for `ideal_forces` to be decided by
/// one condition; this returns it.
pub fn ideal_top(prop: &ForcingProperty, members: &[usize]) -> Option<usize> {
    members
        .iter()
        .copied()
        .find(|&t| members.iter().all(|&p| prop.leq(p, t)))
}

fn compose(r1: &BTreeSet<(usize, usize)>, r2: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for &(x, m) in r1 {
        for &(_, y) in r2.range((m, 0)..=(m, usize::MAX)) {
            out.insert((x, y));
        }
    }
    out
}

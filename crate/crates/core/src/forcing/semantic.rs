use std::collections::BTreeSet;

use super::forces::{Forcer, SearchBounds};
use super::property::{Condition, ForcingError, ForcingProperty};
use super::universe::ground_terms;
use super::validate::atoms_over;
use crate::finmod::{satisfies, FiniteModel};
use crate::kernel::{check_sentence, Op, Sentence, Signature};

/// Where the models of a condition come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelClass {
    /// A fixed class of base models (typically the bounded models of a
    /// presentation); a constant set `C'` admits every expansion of every
    /// class member.
    Ott(Vec<FiniteModel>),
    /// A single base model; each expansion to `Σ[C']` is its own index, so
    /// conditions fix the values of their constants.
    Dls(FiniteModel),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticConfig {
    /// The constants conditions may add, in order.
    pub fresh: Vec<Op>,
    /// Sentences conditions may assume.
    pub pool: Vec<Sentence>,
    /// Largest number of pool sentences per condition.
    pub max_gamma: usize,
    /// Depth of the ground terms spanning the atoms of `f(p)`.
    pub term_depth: usize,
    /// Give up beyond this many conditions.
    pub max_conditions: usize,
}

impl SemanticConfig {
    pub fn new(fresh: Vec<Op>, pool: Vec<Sentence>) -> Self {
        SemanticConfig {
            fresh,
            pool,
            max_gamma: 2,
            term_depth: 0,
            max_conditions: 2_000,
        }
    }
}

/// A semantic forcing property together with each condition's model class
/// `Mod(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticForcing {
    pub property: ForcingProperty,
    pub models: Vec<Vec<FiniteModel>>,
    /// Constants and pool indices of each condition.
    pub constants: Vec<Vec<Op>>,
    pub gamma: Vec<Vec<usize>>,
    /// The normalized sentence pool and the construction limits.
    pub pool: Vec<Sentence>,
    pub fresh: Vec<Op>,
    pub max_gamma: usize,
}

impl SemanticForcing {
    /// `p ⊨ φ`: every model of the condition satisfies `φ`.
    pub fn models_satisfy(&self, p: usize, phi: &Sentence) -> bool {
        self.models[p].iter().all(|m| satisfies(m, phi))
    }
}

fn subsets<T: Clone>(items: &[T], max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max.min(items.len()) {
        let mut next = Vec::new();
        for s in &layer {
            for i in s.last().map_or(0, |&l| l + 1)..items.len() {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn expansions(m: &FiniteModel, constants: &[Op]) -> Vec<(Vec<usize>, FiniteModel)> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for c in constants {
        let n = m.carrier_len(c.result());
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..n).map(move |i| {
                    let mut v = v.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|values| {
            let assignment: Vec<(Op, usize)> = constants.iter().cloned().zip(values.iter().copied()).collect();
            let e = m.expand_constants(&assignment);
            (values, e)
        })
        .collect()
}

struct Index {
    constants: Vec<usize>,
    /// Values of the constants, for the single-model mode.
    values: Option<Vec<usize>>,
    models: Vec<FiniteModel>,
}

/// The semantic forcing property of a finite model class: conditions are
/// pairs of an index (a set of fresh constants, plus their values in the
/// single-model mode) and a set of pool sentences over it with at least one
/// model; the order is componentwise inclusion (agreeing values); `f(p)` is
/// the set of atoms over the condition's signature true in all its models.
pub fn build_semantic_forcing(base: &Signature, class: &ModelClass, cfg: &SemanticConfig) -> Result<SemanticForcing, ForcingError> {
    let base_models: Vec<&FiniteModel> = match class {
        ModelClass::Ott(ms) => ms.iter().collect(),
        ModelClass::Dls(m) => vec![m],
    };
    for m in &base_models {
        if m.signature() != base {
            return Err(ForcingError::Invalid("a class model is not over the base signature".into()));
        }
        let r = crate::finmod::validate_model(m);
        if !r.is_empty() {
            return Err(ForcingError::Invalid(format!("a class model is invalid: {}", r.to_string().trim_end())));
        }
    }
    for s in &cfg.pool {
        if !s.is_closed() {
            return Err(ForcingError::Invalid("pool sentences must be closed".into()));
        }
    }
    let pool: Vec<Sentence> = cfg.pool.iter().map(Sentence::normalize).collect();

    let mut indices: Vec<Index> = Vec::new();
    for chosen in subsets(&cfg.fresh, cfg.fresh.len()) {
        let consts: Vec<Op> = chosen.iter().map(|&i| cfg.fresh[i].clone()).collect();
        match class {
            ModelClass::Ott(_) => indices.push(Index {
                constants: chosen.clone(),
                values: None,
                models: base_models.iter().flat_map(|m| expansions(m, &consts)).map(|(_, e)| e).collect(),
            }),
            ModelClass::Dls(m) => {
                for (values, e) in expansions(m, &consts) {
                    indices.push(Index {
                        constants: chosen.clone(),
                        values: Some(values),
                        models: vec![e],
                    });
                }
            }
        }
    }

    let mut conditions = Vec::new();
    let mut models = Vec::new();
    let mut constants = Vec::new();
    let mut gammas = Vec::new();
    let mut keys: Vec<(usize, BTreeSet<usize>)> = Vec::new();
    for (k, idx) in indices.iter().enumerate() {
        let consts: Vec<Op> = idx.constants.iter().map(|&i| cfg.fresh[i].clone()).collect();
        let sig = base.with_constants(&consts);
        let fitting: Vec<usize> = (0..pool.len()).filter(|&i| check_sentence(&sig, &pool[i]).is_empty()).collect();
        let universe = ground_terms(&sig, cfg.term_depth, 4_096);
        let atoms = atoms_over(&sig, &universe);
        for chosen in subsets(&fitting, cfg.max_gamma) {
            let gamma: Vec<usize> = chosen.iter().map(|&i| fitting[i]).collect();
            let ms: Vec<FiniteModel> = idx
                .models
                .iter()
                .filter(|m| gamma.iter().all(|&g| satisfies(m, &pool[g])))
                .cloned()
                .collect();
            if ms.is_empty() {
                continue;
            }
            if conditions.len() >= cfg.max_conditions {
                return Err(ForcingError::ResourceLimit(cfg.max_conditions as u64));
            }
            let f: Vec<Sentence> = atoms.iter().filter(|a| ms.iter().all(|m| satisfies(m, a))).cloned().collect();
            let name = format!("p{}", conditions.len());
            conditions.push(Condition::new(name, sig.clone(), f).with_gamma(gamma.iter().map(|&g| pool[g].clone())));
            models.push(ms);
            constants.push(consts.clone());
            gammas.push(gamma.clone());
            keys.push((k, gamma.into_iter().collect()));
        }
    }

    let mut pairs = Vec::new();
    for (p, (kp, gp)) in keys.iter().enumerate() {
        for (q, (kq, gq)) in keys.iter().enumerate() {
            if p == q || !gp.is_subset(gq) {
                continue;
            }
            let (ip, iq) = (&indices[*kp], &indices[*kq]);
            if !ip.constants.iter().all(|c| iq.constants.contains(c)) {
                continue;
            }
            let agree = match (&ip.values, &iq.values) {
                (Some(vp), Some(vq)) => ip
                    .constants
                    .iter()
                    .zip(vp)
                    .all(|(c, v)| iq.constants.iter().position(|d| d == c).map(|j| vq[j]) == Some(*v)),
                _ => true,
            };
            if agree {
                pairs.push((p, q));
            }
        }
    }
    Ok(SemanticForcing {
        property: ForcingProperty::new(base.clone(), conditions, &pairs),
        models,
        constants,
        gamma: gammas,
        pool,
        fresh: cfg.fresh.clone(),
        max_gamma: cfg.max_gamma,
    })
}

/// Why a finite semantic forcing property may disagree with its models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SfpCause {
    /// A forcing search hit the term depth, star cap or step budget.
    SearchBound,
    /// The sentence needs witnesses and some extension has used every fresh
    /// constant.
    Constants,
    /// The sentence or its negation is not in the pool, or some extension
    /// has no room for more pool sentences.
    Pool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SfpMismatch {
    pub condition: usize,
    pub sentence: Sentence,
    pub satisfied: bool,
    pub weakly_forced: bool,
    pub causes: Vec<SfpCause>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SfpReport {
    pub checked: usize,
    pub agreements: usize,
    pub mismatches: Vec<SfpMismatch>,
}

impl SfpReport {
    /// Mismatches no bound accounts for.
    pub fn unexplained(&self) -> impl Iterator<Item = &SfpMismatch> {
        self.mismatches.iter().filter(|m| m.causes.is_empty())
    }
}

fn needs_witnesses(phi: &Sentence) -> bool {
    let mut found = matches!(phi, Sentence::Exists(..));
    phi.for_each_action(&mut |a| found |= matches!(a, crate::kernel::Action::Seq(..) | crate::kernel::Action::Star(_)));
    found || phi.children().into_iter().any(needs_witnesses)
}

/// Compares `p ⊨ φ` with `p ⊩^w φ` for every condition and every sentence
/// of `sentences` over its signature, naming the bounds that could explain
/// each disagreement.
pub fn compare_sfp(sf: &SemanticForcing, sentences: &[Sentence], bounds: &SearchBounds) -> SfpReport {
    let prop = &sf.property;
    let forcer = Forcer::new(prop, bounds.clone());
    let mut report = SfpReport::default();
    for p in 0..prop.len() {
        for phi in sentences {
            if !forcer.fits(p, phi) {
                continue;
            }
            report.checked += 1;
            let satisfied = sf.models_satisfy(p, phi);
            let w = forcer.weakly_forces(p, phi);
            if satisfied == w.holds {
                report.agreements += 1;
                continue;
            }
            let mut causes = Vec::new();
            if w.truncated || forcer.exhausted() {
                causes.push(SfpCause::SearchBound);
            }
            if needs_witnesses(phi) && prop.above(p).any(|q| sf.constants[q].len() == sf.fresh.len()) {
                causes.push(SfpCause::Constants);
            }
            let phi_n = phi.normalize();
            let neg = Sentence::not(phi.clone()).normalize();
            if !sf.pool.contains(&phi_n)
                || !sf.pool.contains(&neg)
                || prop.above(p).any(|q| sf.gamma[q].len() >= sf.max_gamma)
            {
                causes.push(SfpCause::Pool);
            }
            report.mismatches.push(SfpMismatch {
                condition: p,
                sentence: phi_n,
                satisfied,
                weakly_forced: w.holds,
                causes,
            });
        }
    }
    report
}

//! Seeded random generators for signatures, models, sentences, morphisms
//! and substitutions, used by the fuzz campaigns and property tests.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::finmod::{element_name, FiniteModel, Relation};
use crate::institution::{SignatureMorphism, Substitution};
use crate::kernel::{Action, Label, Op, Sentence, Signature, Sort, Term, Variable};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_sorts: usize,
    pub max_ops: usize,
    pub max_arity: usize,
    pub max_labels: usize,
    pub max_carrier: usize,
    pub allow_empty_carriers: bool,
    pub sentence_depth: usize,
    pub term_depth: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_sorts: 3,
            max_ops: 4,
            max_arity: 2,
            max_labels: 2,
            max_carrier: 3,
            allow_empty_carriers: true,
            sentence_depth: 4,
            term_depth: 2,
        }
    }
}

fn pick<'a, T, R: Rng + ?Sized>(rng: &mut R, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

pub fn random_signature<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Signature {
    let nsorts = rng.random_range(1..=cfg.max_sorts);
    let sorts: Vec<Sort> = (0..nsorts).map(|i| Sort::new(format!("s{i}"))).collect();
    let mut sig = Signature::new();
    for s in &sorts {
        sig.add_sort(s.clone());
    }
    let nops = rng.random_range(0..=cfg.max_ops);
    for i in 0..nops {
        let arity: Vec<Sort> = (0..rng.random_range(0..=cfg.max_arity))
            .map(|_| pick(rng, &sorts).clone())
            .collect();
        let op = Op::new(format!("f{i}"), arity, pick(rng, &sorts).clone());
        sig.add_op(op);
    }
    for i in 0..rng.random_range(0..=cfg.max_labels) {
        sig.add_label(Label::new(format!("l{i}")));
    }
    sig
}

/// Carrier sizes respecting totality: a symbol whose argument carriers are
/// all inhabited needs an inhabited result carrier.
fn carrier_sizes<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, cfg: &GenConfig) -> Vec<usize> {
    let lo = if cfg.allow_empty_carriers { 0 } else { 1 };
    let mut sizes: Vec<usize> = sig
        .sorts()
        .iter()
        .map(|_| rng.random_range(lo..=cfg.max_carrier.max(lo)))
        .collect();
    loop {
        let mut changed = false;
        for op in sig.ops() {
            let inhabited = op.arity().iter().all(|s| sizes[sig.sort_index(s).unwrap()] > 0);
            let r = sig.sort_index(op.result()).unwrap();
            if inhabited && sizes[r] == 0 {
                sizes[r] = 1;
                changed = true;
            }
        }
        if !changed {
            return sizes;
        }
    }
}

pub fn random_model<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, cfg: &GenConfig) -> FiniteModel {
    let sizes = carrier_sizes(rng, sig, cfg);
    let carriers = sig
        .sorts()
        .iter()
        .zip(&sizes)
        .map(|(s, n)| (0..*n).map(|i| element_name(s, i)).collect())
        .collect();
    let mut m = FiniteModel::new(sig.clone(), carriers);
    for (i, op) in sig.ops().iter().enumerate() {
        let n = sizes[sig.sort_index(op.result()).unwrap()];
        for cell in m.table_at_mut(i).iter_mut() {
            *cell = Some(rng.random_range(0..n));
        }
    }
    for l in sig.labels() {
        for (s, sort) in sig.sorts().iter().enumerate() {
            let density = rng.random_range(0.0..0.6);
            let r = random_relation(rng, sizes[s], density);
            m.set_relation(l, sort, r);
        }
    }
    m
}

pub fn random_relation<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Relation {
    let mut r = Relation::empty(n);
    for i in 0..n {
        for j in 0..n {
            if rng.random_bool(density) {
                r.insert(i, j);
            }
        }
    }
    r
}

pub fn random_action<R: Rng + ?Sized>(rng: &mut R, labels: &[Label], depth: usize) -> Action {
    if depth == 0 || rng.random_bool(0.4) {
        return Action::Label(pick(rng, labels).clone());
    }
    match rng.random_range(0..3) {
        0 => Action::seq(random_action(rng, labels, depth - 1), random_action(rng, labels, depth - 1)),
        1 => Action::union(random_action(rng, labels, depth - 1), random_action(rng, labels, depth - 1)),
        _ => Action::star(random_action(rng, labels, depth - 1)),
    }
}

/// Random sentence generator over a fixed signature.
pub struct SentenceGen<'a> {
    pub sig: &'a Signature,
    pub cfg: &'a GenConfig,
    scope: Vec<Variable>,
    fresh: usize,
}

impl<'a> SentenceGen<'a> {
    pub fn new(sig: &'a Signature, cfg: &'a GenConfig) -> Self {
        SentenceGen {
            sig,
            cfg,
            scope: Vec::new(),
            fresh: 0,
        }
    }

    /// Random closed sentence with constructor depth at most `cfg.sentence_depth`.
    pub fn sentence<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Sentence {
        self.scope.clear();
        let d = self.cfg.sentence_depth;
        self.gen(rng, d)
    }

    /// Random sentence whose free variables are drawn from `free`.
    pub fn open_sentence<R: Rng + ?Sized>(&mut self, rng: &mut R, free: &[Variable]) -> Sentence {
        self.scope = free.to_vec();
        let d = self.cfg.sentence_depth;
        let s = self.gen(rng, d);
        self.scope.clear();
        s
    }

    fn can_build(&self, sort: &Sort, depth: usize) -> bool {
        self.scope.iter().any(|v| &v.sort == sort)
            || self.sig.ops().iter().any(|o| {
                o.result() == sort && (o.is_constant() || (depth > 0 && o.arity().iter().all(|a| self.can_build(a, depth - 1))))
            })
    }

    pub fn term<R: Rng + ?Sized>(&mut self, rng: &mut R, sort: &Sort, depth: usize) -> Option<Term> {
        let vars: Vec<Variable> = self.scope.iter().filter(|v| &v.sort == sort).cloned().collect();
        let ops: Vec<Op> = self
            .sig
            .ops()
            .iter()
            .filter(|o| {
                o.result() == sort
                    && (o.is_constant() || (depth > 0 && o.arity().iter().all(|a| self.can_build(a, depth - 1))))
            })
            .cloned()
            .collect();
        if vars.is_empty() && ops.is_empty() {
            return None;
        }
        if !vars.is_empty() && (ops.is_empty() || rng.random_bool(0.5)) {
            return Some(Term::var(pick(rng, &vars).clone()));
        }
        let op = pick(rng, &ops).clone();
        let args = op
            .arity()
            .iter()
            .map(|a| self.term(rng, a, depth.saturating_sub(1)))
            .collect::<Option<Vec<_>>>()?;
        Some(Term::app(op, args))
    }

    fn atom<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Sentence {
        let sorts: Vec<Sort> = self
            .sig
            .sorts()
            .iter()
            .filter(|s| self.can_build(s, self.cfg.term_depth))
            .cloned()
            .collect();
        if sorts.is_empty() {
            return if rng.random_bool(0.5) { Sentence::verum() } else { Sentence::falsum() };
        }
        let sort = pick(rng, &sorts).clone();
        let d = self.cfg.term_depth;
        let a = self.term(rng, &sort, d).expect("buildable");
        let b = self.term(rng, &sort, d).expect("buildable");
        if !self.sig.labels().is_empty() && rng.random_bool(0.5) {
            Sentence::trans(random_action(rng, self.sig.labels(), 2), a, b)
        } else {
            Sentence::eq(a, b)
        }
    }

    fn gen<R: Rng + ?Sized>(&mut self, rng: &mut R, depth: usize) -> Sentence {
        if depth == 0 || rng.random_bool(0.25) {
            return self.atom(rng);
        }
        match rng.random_range(0..6) {
            0 | 1 => Sentence::not(self.gen(rng, depth - 1)),
            2 => {
                let n = rng.random_range(0..=2);
                Sentence::Or((0..n).map(|_| self.gen(rng, depth - 1)).collect())
            }
            3 => Sentence::and(vec![self.gen(rng, depth.saturating_sub(2)), self.gen(rng, depth.saturating_sub(2))]),
            _ => {
                let n = rng.random_range(1..=2);
                let mut block = Vec::new();
                for _ in 0..n {
                    let sort = pick(rng, self.sig.sorts()).clone();
                    self.fresh += 1;
                    block.push(Variable::new(format!("x{}", self.fresh), sort));
                }
                let mark = self.scope.len();
                self.scope.extend(block.iter().cloned());
                let body = self.gen(rng, depth - 1);
                self.scope.truncate(mark);
                if rng.random_bool(0.5) {
                    Sentence::exists(block, body)
                } else {
                    Sentence::forall(block, body)
                }
            }
        }
    }
}

/// A random morphism out of `source`. Sorts and labels may be identified,
/// symbols renamed, and the target may carry extra sorts, symbols and labels.
pub fn random_morphism<R: Rng + ?Sized>(rng: &mut R, source: &Signature) -> SignatureMorphism {
    let ntarget = rng.random_range(1..=source.sorts().len() + 1);
    let tsorts: Vec<Sort> = (0..ntarget).map(|i| Sort::new(format!("u{i}"))).collect();
    let mut sorts = BTreeMap::new();
    for (i, s) in source.sorts().iter().enumerate() {
        // Keep the map onto at least the first few target sorts.
        let image = if i < ntarget && rng.random_bool(0.6) {
            tsorts[i].clone()
        } else {
            pick(rng, &tsorts).clone()
        };
        sorts.insert(s.clone(), image);
    }
    let mut target = Signature::new();
    for s in &tsorts {
        target.add_sort(s.clone());
    }
    let mut ops = BTreeMap::new();
    for o in source.ops() {
        let name = if rng.random_bool(0.3) {
            format!("g{}", rng.random_range(0..3))
        } else {
            format!("h_{}", o.name())
        };
        let image = Op::new(name, o.arity().iter().map(|s| sorts[s].clone()).collect(), sorts[o.result()].clone());
        if !target.has_op(&image) {
            target.add_op(image.clone());
        }
        ops.insert(o.clone(), image);
    }
    if rng.random_bool(0.5) {
        let extra = Op::constant("extra", pick(rng, &tsorts).clone());
        if !target.has_op(&extra) {
            target.add_op(extra);
        }
    }
    let ntl = if source.labels().is_empty() { 0 } else { rng.random_range(1..=source.labels().len()) };
    let tlabels: Vec<Label> = (0..ntl).map(|i| Label::new(format!("m{i}"))).collect();
    for l in &tlabels {
        target.add_label(l.clone());
    }
    if rng.random_bool(0.3) {
        target.add_label(Label::new("m_extra"));
    }
    let labels = source
        .labels()
        .iter()
        .map(|l| (l.clone(), pick(rng, &tlabels).clone()))
        .collect();
    SignatureMorphism::new(source.clone(), target, sorts, ops, labels)
}

/// A random substitution `θ : C1 → T_Σ(C2)` over `base`, or `None` when no
/// sort of `base[C2]` has ground terms.
pub fn random_substitution<R: Rng + ?Sized>(rng: &mut R, base: &Signature, cfg: &GenConfig) -> Option<Substitution> {
    let mut target = Vec::new();
    for (i, s) in base.sorts().iter().enumerate() {
        if rng.random_bool(0.6) {
            target.push(Op::constant(format!("d{i}"), s.clone()));
        }
    }
    let tsig = base.with_constants(&target);
    let mut gen = SentenceGen::new(&tsig, cfg);
    let ground: Vec<Sort> = base
        .sorts()
        .iter()
        .filter(|s| gen.can_build(s, cfg.term_depth))
        .cloned()
        .collect();
    if ground.is_empty() {
        return None;
    }
    let n = rng.random_range(1..=3);
    let mut source = Vec::new();
    let mut map = BTreeMap::new();
    for i in 0..n {
        let sort = pick(rng, &ground).clone();
        let c = Op::constant(format!("k{i}"), sort.clone());
        let t = gen.term(rng, &sort, cfg.term_depth).expect("ground sort");
        map.insert(c.clone(), t);
        source.push(c);
    }
    Some(Substitution::new(base.clone(), source, target, map))
}

/// Names of all symbols, to keep generated constants fresh.
pub fn symbol_names(sig: &Signature) -> BTreeSet<String> {
    sig.ops().iter().map(|o| o.name().to_string()).collect()
}

/// Outcome of a satisfaction-condition fuzz campaign.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzOutcome {
    pub cases: usize,
    pub agreements: usize,
    /// Cases with at least one empty carrier in the model under test.
    pub empty_carrier_cases: usize,
    pub star_cases: usize,
    /// Descriptions of disagreeing cases.
    pub failures: Vec<String>,
}

impl FuzzOutcome {
    pub fn all_agree(&self) -> bool {
        self.failures.is_empty() && self.agreements == self.cases
    }
}

fn has_star(phi: &Sentence) -> bool {
    let mut found = false;
    phi.for_each_action(&mut |a| {
        fn walk(a: &Action) -> bool {
            match a {
                Action::Star(_) => true,
                Action::Label(_) => false,
                Action::Seq(x, y) | Action::Union(x, y) => walk(x) || walk(y),
            }
        }
        found |= walk(a);
    });
    found
}

/// Random (morphism, target model, source sentence) triples: the reduct
/// satisfies the sentence iff the model satisfies its translation.
pub fn fuzz_morphisms(seed: u64, cases: usize, cfg: &GenConfig) -> FuzzOutcome {
    use crate::finmod::satisfies;
    use crate::institution::{reduct_model, translate_sentence};
    let mut rng = rng(seed);
    let mut out = FuzzOutcome::default();
    while out.cases < cases {
        let source = random_signature(&mut rng, cfg);
        let chi = random_morphism(&mut rng, &source);
        let m = random_model(&mut rng, chi.target(), cfg);
        let phi = SentenceGen::new(&source, cfg).sentence(&mut rng);
        let reduct = reduct_model(&chi, &m);
        let lhs = satisfies(&reduct, &phi);
        let rhs = satisfies(&m, &translate_sentence(&chi, &phi));
        out.cases += 1;
        if m.carriers().iter().any(Vec::is_empty) {
            out.empty_carrier_cases += 1;
        }
        if has_star(&phi) {
            out.star_cases += 1;
        }
        if lhs == rhs {
            out.agreements += 1;
        } else {
            out.failures.push(format!("case {}: reduct {lhs}, translation {rhs}: {phi:?}", out.cases));
        }
    }
    out
}

/// Random (substitution, model, sentence) triples: the reduct along the
/// substitution satisfies the sentence iff the model satisfies its image.
pub fn fuzz_substitutions(seed: u64, cases: usize, cfg: &GenConfig) -> FuzzOutcome {
    use crate::finmod::satisfies;
    use crate::institution::{apply_substitution, reduct_along_substitution};
    let mut rng = rng(seed);
    let mut out = FuzzOutcome::default();
    while out.cases < cases {
        let base = random_signature(&mut rng, cfg);
        let Some(theta) = random_substitution(&mut rng, &base, cfg) else {
            continue;
        };
        let m = random_model(&mut rng, &theta.target_signature(), cfg);
        let ssig = theta.source_signature();
        let phi = SentenceGen::new(&ssig, cfg).sentence(&mut rng);
        let reduct = reduct_along_substitution(&theta, &m).expect("total model");
        let lhs = satisfies(&reduct, &phi);
        let rhs = satisfies(&m, &apply_substitution(&theta, &phi));
        out.cases += 1;
        if m.carriers().iter().any(Vec::is_empty) {
            out.empty_carrier_cases += 1;
        }
        if has_star(&phi) {
            out.star_cases += 1;
        }
        if lhs == rhs {
            out.agreements += 1;
        } else {
            out.failures.push(format!("case {}: reduct {lhs}, image {rhs}: {phi:?}", out.cases));
        }
    }
    out
}

use std::collections::BTreeMap;

use crate::finmod::FiniteModel;
use crate::kernel::{check_signature, Action, Label, Op, Sentence, Signature, Sort, Term, ValidationReport, Variable};

/// Which model class a morphism (or a consequence relation) is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// All transition algebras.
    Plain,
    /// Constructor-based transition algebras.
    CtorBased,
    /// Constructor-based algebras with finite carriers on the finite sorts.
    FiniteSorts,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Plain => "plain",
            Flavor::CtorBased => "ctor",
            Flavor::FiniteSorts => "fin",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        match s {
            "plain" => Some(Flavor::Plain),
            "ctor" => Some(Flavor::CtorBased),
            "fin" | "finite" => Some(Flavor::FiniteSorts),
            _ => None,
        }
    }
}

/// A signature morphism given by flat maps on sorts, symbols and labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureMorphism {
    source: Signature,
    target: Signature,
    sorts: BTreeMap<Sort, Sort>,
    ops: BTreeMap<Op, Op>,
    labels: BTreeMap<Label, Label>,
}

impl SignatureMorphism {
    /// Completes partial maps: unmapped sorts and labels go to themselves, an
    /// unmapped symbol goes to the symbol of the same name at the translated
    /// rank.
    pub fn new(
        source: Signature,
        target: Signature,
        sorts: BTreeMap<Sort, Sort>,
        ops: BTreeMap<Op, Op>,
        labels: BTreeMap<Label, Label>,
    ) -> Self {
        let mut full_sorts = BTreeMap::new();
        for s in source.sorts() {
            full_sorts.insert(s.clone(), sorts.get(s).cloned().unwrap_or_else(|| s.clone()));
        }
        let mut full_ops = BTreeMap::new();
        for o in source.ops() {
            let image = ops.get(o).cloned().unwrap_or_else(|| {
                o.map_sorts(|s| full_sorts.get(s).cloned().unwrap_or_else(|| s.clone()))
            });
            full_ops.insert(o.clone(), image);
        }
        let mut full_labels = BTreeMap::new();
        for l in source.labels() {
            full_labels.insert(l.clone(), labels.get(l).cloned().unwrap_or_else(|| l.clone()));
        }
        SignatureMorphism {
            source,
            target,
            sorts: full_sorts,
            ops: full_ops,
            labels: full_labels,
        }
    }

    pub fn identity(sig: &Signature) -> Self {
        Self::inclusion(sig, sig)
    }

    pub fn inclusion(source: &Signature, target: &Signature) -> Self {
        Self::new(
            source.clone(),
            target.clone(),
            BTreeMap::new(),
            BTreeMap::new(),
            BTreeMap::new(),
        )
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn sort_map(&self) -> &BTreeMap<Sort, Sort> {
        &self.sorts
    }

    pub fn op_map(&self) -> &BTreeMap<Op, Op> {
        &self.ops
    }

    pub fn label_map(&self) -> &BTreeMap<Label, Label> {
        &self.labels
    }

    pub fn map_sort(&self, s: &Sort) -> Sort {
        self.sorts.get(s).cloned().unwrap_or_else(|| s.clone())
    }

    pub fn map_op(&self, o: &Op) -> Op {
        self.ops
            .get(o)
            .cloned()
            .unwrap_or_else(|| o.map_sorts(|s| self.map_sort(s)))
    }

    pub fn map_label(&self, l: &Label) -> Label {
        self.labels.get(l).cloned().unwrap_or_else(|| l.clone())
    }

    pub fn is_sort_injective(&self) -> bool {
        let mut images: Vec<&Sort> = self.sorts.values().collect();
        images.sort();
        images.windows(2).all(|w| w[0] != w[1])
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SignatureMorphism) -> SignatureMorphism {
        SignatureMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            sorts: self.sorts.iter().map(|(k, v)| (k.clone(), other.map_sort(v))).collect(),
            ops: self.ops.iter().map(|(k, v)| (k.clone(), other.map_op(v))).collect(),
            labels: self.labels.iter().map(|(k, v)| (k.clone(), other.map_label(v))).collect(),
        }
    }

    pub fn translate_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(self.translate_var(v)),
            Term::App(op, args) => Term::App(self.map_op(op), args.iter().map(|a| self.translate_term(a)).collect()),
        }
    }

    fn translate_var(&self, v: &Variable) -> Variable {
        Variable {
            name: v.name.clone(),
            sort: self.map_sort(&v.sort),
            qualifier: v.qualifier,
        }
    }

    pub fn translate_action(&self, a: &Action) -> Action {
        a.map_labels(&mut |l| self.map_label(l))
    }
}

/// Checks that `chi` is a morphism of the requested flavor.
pub fn check_morphism(chi: &SignatureMorphism, flavor: Flavor) -> ValidationReport {
    let mut report = ValidationReport::new();
    report.absorb("source", check_signature(&chi.source));
    report.absorb("target", check_signature(&chi.target));
    for s in chi.source.sorts() {
        let image = chi.map_sort(s);
        if !chi.target.has_sort(&image) {
            report.push(format!("sort {s}"), format!("image {image} is not a target sort"));
        }
    }
    for o in chi.source.ops() {
        let image = chi.map_op(o);
        let expected = o.map_sorts(|s| chi.map_sort(s));
        if image.arity() != expected.arity() || image.result() != expected.result() {
            report.push(format!("op {o}"), format!("image {image} does not have rank {expected}"));
        } else if !chi.target.has_op(&image) {
            report.push(format!("op {o}"), format!("image {image} is not a target symbol"));
        }
    }
    for l in chi.source.labels() {
        let image = chi.map_label(l);
        if !chi.target.has_label(&image) {
            report.push(format!("label {l}"), format!("image {image} is not a target label"));
        }
    }
    if matches!(flavor, Flavor::CtorBased | Flavor::FiniteSorts) {
        for c in chi.source.ctors() {
            let image = chi.map_op(c);
            if !chi.target.is_ctor(&image) {
                report.push(format!("op {c}"), format!("constructor not preserved: {image} is not a constructor"));
            }
        }
        for s in chi.source.sorts() {
            let image = chi.map_sort(s);
            for tc in chi.target.ctors().iter().filter(|c| c.result() == &image) {
                let reflected = chi
                    .source
                    .ctors()
                    .iter()
                    .any(|c| c.result() == s && &chi.map_op(c) == tc);
                if !reflected {
                    report.push(
                        format!("op {tc}"),
                        format!("constructor not reflected: no constructor of sort {s} maps to it"),
                    );
                }
            }
        }
    }
    if flavor == Flavor::FiniteSorts {
        for s in chi.source.finite_sorts() {
            let image = chi.map_sort(s);
            if !chi.target.finite_sorts().contains(&image) {
                report.push(format!("sort {s}"), format!("finite sort not preserved: {image} is not finite"));
            }
        }
    }
    report
}

/// `chi(phi)`: homomorphic on terms and actions; a quantifier block `X`
/// becomes `X' = { <v, chi(s)> }` with qualifiers kept. When `chi`
/// identifies sorts, the sentence is normalized first so that variables of
/// nested blocks cannot be merged by the translation.
pub fn translate_sentence(chi: &SignatureMorphism, phi: &Sentence) -> Sentence {
    if chi.is_sort_injective() {
        translate_raw(chi, phi)
    } else {
        translate_raw(chi, &phi.normalize())
    }
}

fn translate_raw(chi: &SignatureMorphism, phi: &Sentence) -> Sentence {
    match phi {
        Sentence::Eq(a, b) => Sentence::Eq(chi.translate_term(a), chi.translate_term(b)),
        Sentence::Trans(act, a, b) => {
            Sentence::Trans(chi.translate_action(act), chi.translate_term(a), chi.translate_term(b))
        }
        Sentence::Not(s) => Sentence::not(translate_raw(chi, s)),
        Sentence::Or(items) => Sentence::Or(items.iter().map(|s| translate_raw(chi, s)).collect()),
        Sentence::Exists(block, body) => {
            Sentence::exists(block.iter().map(|v| chi.translate_var(v)).collect(), translate_raw(chi, body))
        }
    }
}

/// The reduct of a target model along `chi`.
pub fn reduct_model(chi: &SignatureMorphism, m: &FiniteModel) -> FiniteModel {
    let src = chi.source();
    let carriers = src
        .sorts()
        .iter()
        .map(|s| m.carrier(&chi.map_sort(s)).to_vec())
        .collect();
    let mut out = FiniteModel::new(src.clone(), carriers);
    for (i, op) in src.ops().iter().enumerate() {
        *out.table_at_mut(i) = m.table(&chi.map_op(op)).to_vec();
    }
    for l in src.labels() {
        for s in src.sorts() {
            out.set_relation(l, s, m.relation(&chi.map_label(l), &chi.map_sort(s)).clone());
        }
    }
    out
}

/// The reduct along the inclusion of a subsignature.
pub fn restrict(m: &FiniteModel, sub: &Signature) -> FiniteModel {
    reduct_model(&SignatureMorphism::inclusion(sub, m.signature()), m)
}

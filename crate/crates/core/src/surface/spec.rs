use indexmap::IndexMap;

use crate::classes::Derivation;
use crate::finmod::FiniteModel;
use crate::forcing::ForcingProperty;
use crate::institution::{SignatureMorphism, Substitution};
use crate::kernel::{Sentence, Signature};
use crate::types::LogicType;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelDecl {
    pub sig: String,
    pub model: FiniteModel,
}

/// A named presentation: sentences keyed by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryDecl {
    pub sig: String,
    pub sentences: IndexMap<String, Sentence>,
}

/// A single sentence to be checked or entailed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalDecl {
    pub sig: String,
    pub sentence: Sentence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDecl {
    pub source: String,
    pub target: String,
    pub morphism: SignatureMorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstDecl {
    pub sig: String,
    pub subst: Substitution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecl {
    pub sig: String,
    /// One name per sentence of the type.
    pub names: Vec<String>,
    pub ty: LogicType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingDecl {
    pub sig: String,
    pub property: ForcingProperty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofDecl {
    pub sig: String,
    pub derivation: Derivation,
}

/// The contents of a `.ta` file. Names are unique per category; every
/// declaration refers to a signature declared in the same file.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SpecFile {
    pub signatures: IndexMap<String, Signature>,
    pub models: IndexMap<String, ModelDecl>,
    pub theories: IndexMap<String, TheoryDecl>,
    pub goals: IndexMap<String, GoalDecl>,
    pub morphisms: IndexMap<String, MorphismDecl>,
    pub substs: IndexMap<String, SubstDecl>,
    pub types: IndexMap<String, TypeDecl>,
    pub forcings: IndexMap<String, ForcingDecl>,
    pub proofs: IndexMap<String, ProofDecl>,
}

impl SpecFile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.signatures.is_empty()
            && self.models.is_empty()
            && self.theories.is_empty()
            && self.goals.is_empty()
            && self.morphisms.is_empty()
            && self.substs.is_empty()
            && self.types.is_empty()
            && self.forcings.is_empty()
            && self.proofs.is_empty()
    }

    pub fn add_signature(&mut self, name: &str, sig: Signature) -> &mut Self {
        self.signatures.insert(name.to_string(), sig);
        self
    }

    pub fn add_model(&mut self, name: &str, sig: &str, model: FiniteModel) -> &mut Self {
        self.models.insert(name.to_string(), ModelDecl { sig: sig.to_string(), model });
        self
    }

    pub fn add_theory<I, S>(&mut self, name: &str, sig: &str, sentences: I) -> &mut Self
    where
        I: IntoIterator<Item = (S, Sentence)>,
        S: Into<String>,
    {
        let sentences = sentences.into_iter().map(|(n, s)| (n.into(), s.normalize())).collect();
        self.theories.insert(name.to_string(), TheoryDecl { sig: sig.to_string(), sentences });
        self
    }

    pub fn add_goal(&mut self, name: &str, sig: &str, sentence: Sentence) -> &mut Self {
        self.goals.insert(
            name.to_string(),
            GoalDecl {
                sig: sig.to_string(),
                sentence: sentence.normalize(),
            },
        );
        self
    }

    pub fn add_morphism(&mut self, name: &str, source: &str, target: &str, morphism: SignatureMorphism) -> &mut Self {
        self.morphisms.insert(
            name.to_string(),
            MorphismDecl {
                source: source.to_string(),
                target: target.to_string(),
                morphism,
            },
        );
        self
    }

    pub fn add_subst(&mut self, name: &str, sig: &str, subst: Substitution) -> &mut Self {
        self.substs.insert(name.to_string(), SubstDecl { sig: sig.to_string(), subst });
        self
    }

    pub fn add_type<S: Into<String>>(&mut self, name: &str, sig: &str, names: impl IntoIterator<Item = S>, ty: LogicType) -> &mut Self {
        let names = names.into_iter().map(Into::into).collect();
        self.types.insert(name.to_string(), TypeDecl { sig: sig.to_string(), names, ty });
        self
    }

    pub fn add_forcing(&mut self, name: &str, sig: &str, property: ForcingProperty) -> &mut Self {
        self.forcings.insert(name.to_string(), ForcingDecl { sig: sig.to_string(), property });
        self
    }

    pub fn add_proof(&mut self, name: &str, sig: &str, derivation: Derivation) -> &mut Self {
        self.proofs.insert(name.to_string(), ProofDecl { sig: sig.to_string(), derivation });
        self
    }

    /// Sentences of a theory, or of the goal with that name.
    pub fn sentences(&self, name: &str) -> Option<(&str, Vec<(String, Sentence)>)> {
        if let Some(t) = self.theories.get(name) {
            return Some((&t.sig, t.sentences.iter().map(|(n, s)| (n.clone(), s.clone())).collect()));
        }
        self.goals.get(name).map(|g| (g.sig.as_str(), vec![(name.to_string(), g.sentence.clone())]))
    }

    /// A theory entry `T.n`, a goal, or a theory entry found by its bare name.
    pub fn sentence(&self, name: &str) -> Option<(&str, Sentence)> {
        if let Some((t, n)) = name.split_once('.') {
            let th = self.theories.get(t)?;
            return th.sentences.get(n).map(|s| (th.sig.as_str(), s.clone()));
        }
        if let Some(g) = self.goals.get(name) {
            return Some((&g.sig, g.sentence.clone()));
        }
        self.theories
            .values()
            .find_map(|th| th.sentences.get(name).map(|s| (th.sig.as_str(), s.clone())))
    }
}

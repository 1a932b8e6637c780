use std::collections::BTreeSet;

use thiserror::Error;

use crate::kernel::{Sentence, Signature};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ForcingError {
    #[error("conditions {0} and {1} are not comparable")]
    NotComparable(String, String),
    #[error("unknown condition {0}")]
    UnknownCondition(String),
    #[error("node budget of {0} exhausted")]
    ResourceLimit(u64),
    #[error("directedness fails: {0} and {1} have no common upper bound in the set")]
    DirectednessFailure(String, String),
    #[error("{0}")]
    Invalid(String),
}

/// A condition: its signature `Δ(p)`, its atomic sentences `f(p)` and, for
/// semantic conditions, the sentences `Γ(p)` it was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub name: String,
    pub sig: Signature,
    pub atoms: BTreeSet<Sentence>,
    pub gamma: BTreeSet<Sentence>,
}

impl Condition {
    pub fn new(name: impl Into<String>, sig: Signature, atoms: impl IntoIterator<Item = Sentence>) -> Self {
        Condition {
            name: name.into(),
            sig,
            atoms: atoms.into_iter().map(|a| a.normalize()).collect(),
            gamma: BTreeSet::new(),
        }
    }

    pub fn with_gamma(mut self, gamma: impl IntoIterator<Item = Sentence>) -> Self {
        self.gamma = gamma.into_iter().map(|a| a.normalize()).collect();
        self
    }
}

/// A finite forcing property `(P, ≤, Δ, f)`. The order is stored as its
/// reflexive-transitive closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcingProperty {
    pub base: Signature,
    conditions: Vec<Condition>,
    leq: Vec<Vec<bool>>,
}

impl ForcingProperty {
    /// `pairs` are generating pairs `p ≤ q` by index.
    pub fn new(base: Signature, conditions: Vec<Condition>, pairs: &[(usize, usize)]) -> Self {
        let n = conditions.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(p, q) in pairs {
            leq[p][q] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        ForcingProperty {
            base,
            conditions,
            leq,
        }
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn condition(&self, p: usize) -> &Condition {
        &self.conditions[p]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.conditions.iter().position(|c| c.name == name)
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.leq[p][q]
    }

    /// Conditions `q ≥ p`, in index order.
    pub fn above(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&q| self.leq[p][q])
    }

    /// The least condition, if the order has one.
    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&p| (0..self.len()).all(|q| self.leq[p][q]))
    }

    /// Cover pairs of the order (the Hasse diagram), by index.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for p in 0..n {
            for q in 0..n {
                if p != q && self.leq[p][q] && !self.leq[q][p] {
                    let between = (0..n).any(|r| r != p && r != q && self.leq[p][r] && self.leq[r][q] && !self.leq[r][p] && !self.leq[q][r]);
                    if !between {
                        out.push((p, q));
                    }
                }
            }
        }
        out
    }

    /// Non-reflexive pairs of the order that are needed to regenerate it,
    /// including pairs inside cycles (which make the relation non-antisymmetric).
    pub fn generating_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = self.covers();
        let n = self.len();
        for p in 0..n {
            for q in 0..n {
                if p != q && self.leq[p][q] && self.leq[q][p] {
                    out.push((p, q));
                }
            }
        }
        out.sort();
        out
    }

    /// `d(p, q) = |Δ(q) \ Δ(p)| + |Γ(q) \ Γ(p)|` for `p ≤ q`.
    pub fn distance(&self, p: usize, q: usize) -> Result<usize, ForcingError> {
        if !self.leq(p, q) {
            return Err(ForcingError::NotComparable(
                self.conditions[p].name.clone(),
                self.conditions[q].name.clone(),
            ));
        }
        let cp = &self.conditions[p];
        let cq = &self.conditions[q];
        Ok(cq.sig.symbols_not_in(&cp.sig) + cq.gamma.difference(&cp.gamma).count())
    }
}

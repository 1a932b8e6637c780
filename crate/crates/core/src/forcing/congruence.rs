use std::collections::HashMap;

use super::property::ForcingError;
use crate::kernel::{Op, Term};

#[derive(Clone, Debug)]
struct Node {
    op: Op,
    args: Vec<usize>,
}

/// Incremental congruence closure over hash-consed ground terms.
///
/// Terms join the universe when added or queried; every addition is closed
/// under the equations merged so far, so queries outside the initial universe
/// are answered exactly.
#[derive(Clone, Debug)]
pub struct CongruenceClosure {
    nodes: Vec<Node>,
    terms: Vec<Term>,
    ids: HashMap<(Op, Vec<usize>), usize>,
    parent: Vec<usize>,
    size: Vec<usize>,
    uses: Vec<Vec<usize>>,
    signatures: HashMap<(Op, Vec<usize>), usize>,
    pending: Vec<(usize, usize)>,
    max_nodes: usize,
}

impl Default for CongruenceClosure {
    fn default() -> Self {
        CongruenceClosure::new(usize::MAX)
    }
}

impl CongruenceClosure {
    pub fn new(max_nodes: usize) -> Self {
        CongruenceClosure {
            nodes: Vec::new(),
            terms: Vec::new(),
            ids: HashMap::new(),
            parent: Vec::new(),
            size: Vec::new(),
            uses: Vec::new(),
            signatures: HashMap::new(),
            pending: Vec::new(),
            max_nodes,
        }
    }

    /// The closure of `equations` over `universe` (and the terms of the
    /// equations).
    pub fn from_equations<'a>(
        equations: impl IntoIterator<Item = (&'a Term, &'a Term)>,
        universe: impl IntoIterator<Item = &'a Term>,
        max_nodes: usize,
    ) -> Result<Self, ForcingError> {
        let mut cc = CongruenceClosure::new(max_nodes);
        for t in universe {
            cc.add(t)?;
        }
        for (a, b) in equations {
            cc.merge(a, b)?;
        }
        Ok(cc)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn term(&self, id: usize) -> &Term {
        &self.terms[id]
    }

    pub fn find(&self, mut id: usize) -> usize {
        while self.parent[id] != id {
            id = self.parent[id];
        }
        id
    }

    fn signature(&self, id: usize) -> (Op, Vec<usize>) {
        let n = &self.nodes[id];
        (n.op.clone(), n.args.iter().map(|&a| self.find(a)).collect())
    }

    /// Adds a ground term and its subterms; returns its node.
    pub fn add(&mut self, t: &Term) -> Result<usize, ForcingError> {
        let Term::App(op, args) = t else {
            return Err(ForcingError::Invalid(format!("term {t:?} is not ground")));
        };
        let mut ids = Vec::with_capacity(args.len());
        for a in args {
            ids.push(self.add(a)?);
        }
        let key = (op.clone(), ids);
        if let Some(&id) = self.ids.get(&key) {
            return Ok(id);
        }
        if self.nodes.len() >= self.max_nodes {
            return Err(ForcingError::ResourceLimit(self.max_nodes as u64));
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            op: op.clone(),
            args: key.1.clone(),
        });
        self.terms.push(t.clone());
        self.ids.insert(key, id);
        self.parent.push(id);
        self.size.push(1);
        self.uses.push(Vec::new());
        for &a in &self.nodes[id].args.clone() {
            let r = self.find(a);
            self.uses[r].push(id);
        }
        let sig = self.signature(id);
        match self.signatures.get(&sig) {
            Some(&other) => {
                self.pending.push((id, other));
                self.propagate();
            }
            None => {
                self.signatures.insert(sig, id);
            }
        }
        Ok(id)
    }

    pub fn merge(&mut self, a: &Term, b: &Term) -> Result<(), ForcingError> {
        let (a, b) = (self.add(a)?, self.add(b)?);
        self.pending.push((a, b));
        self.propagate();
        Ok(())
    }

    fn propagate(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let (mut ra, mut rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            if self.size[ra] > self.size[rb] {
                std::mem::swap(&mut ra, &mut rb);
            }
            self.parent[ra] = rb;
            self.size[rb] += self.size[ra];
            let moved = std::mem::take(&mut self.uses[ra]);
            for &u in &moved {
                let sig = self.signature(u);
                match self.signatures.get(&sig) {
                    Some(&v) if self.find(v) != self.find(u) => self.pending.push((u, v)),
                    Some(_) => {}
                    None => {
                        self.signatures.insert(sig, u);
                    }
                }
            }
            self.uses[rb].extend(moved);
        }
    }

    /// Whether `a` and `b` are congruent, adding them to the universe first.
    pub fn equivalent(&mut self, a: &Term, b: &Term) -> Result<bool, ForcingError> {
        let (a, b) = (self.add(a)?, self.add(b)?);
        Ok(self.find(a) == self.find(b))
    }

    /// The representative node of a term already in the universe.
    pub fn class_of(&self, t: &Term) -> Option<usize> {
        self.node_of(t).map(|id| self.find(id))
    }

    fn node_of(&self, t: &Term) -> Option<usize> {
        let Term::App(op, args) = t else { return None };
        let ids = args.iter().map(|a| self.node_of(a)).collect::<Option<Vec<_>>>()?;
        self.ids.get(&(op.clone(), ids)).copied()
    }

    /// The partition of the universe, each class listed by node order, the
    /// classes ordered by their first node.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for id in 0..self.nodes.len() {
            let r = self.find(id);
            let k = *index.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[k].push(id);
        }
        out
    }
}

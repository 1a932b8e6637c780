use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::logic_type::LogicType;
use super::TypeError;
use crate::finmod::{find_model, EnumOptions, FiniteModel, SizeBounds};
use crate::kernel::{check_sentence, check_sentence_in, fresh_name, Op, Sentence, Signature, Term, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationBounds {
    /// Largest number of new constants `D`.
    pub max_constants: usize,
    /// Largest number of pool sentences in `Γ`.
    pub max_gamma: usize,
    /// Candidate `Γ` sentences, over the type's signature extended by its
    /// block; they reach `Σ[D]` through `θ` like the type does.
    pub pool: Vec<Sentence>,
    pub models: SizeBounds,
    pub node_budget: Option<u64>,
}

impl IsolationBounds {
    pub fn new(pool: Vec<Sentence>, models: SizeBounds) -> Self {
        IsolationBounds {
            max_constants: usize::MAX,
            max_gamma: 2,
            pool,
            models,
            node_budget: EnumOptions::default().node_budget,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationWitness {
    pub constants: Vec<Op>,
    /// `θ(Γ)`, over `Σ[D]`.
    pub gamma: Vec<Sentence>,
    /// Indices of the chosen pool sentences.
    pub gamma_pool: Vec<usize>,
    pub theta: BTreeMap<Variable, Op>,
    pub extended: Signature,
    /// A model of `θ(T) ∪ θ(Γ)` within the bounds.
    pub model: FiniteModel,
    /// Candidates examined before this one was accepted.
    pub candidates: u64,
}

/// Outcome of an exhausted search: no candidate isolated the type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolationSearch {
    pub witness: Option<IsolationWitness>,
    pub candidates: u64,
    /// Candidates whose `θ(T) ∪ θ(Γ)` had no model within the bounds.
    pub unsatisfiable: u64,
}

/// Sort-respecting set partitions of the block, as block-to-part maps, with
/// at most `max` parts. Parts are numbered in order of first occurrence.
fn partitions(block: &[Variable], max: usize) -> Vec<Vec<usize>> {
    fn go(block: &[Variable], max: usize, cur: &mut Vec<usize>, parts: usize, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == block.len() {
            out.push(cur.clone());
            return;
        }
        for p in 0..parts {
            let rep = cur.iter().position(|&q| q == p).expect("part has a member");
            if block[rep].sort == block[i].sort {
                cur.push(p);
                go(block, max, cur, parts, out);
                cur.pop();
            }
        }
        if parts < max {
            cur.push(parts);
            go(block, max, cur, parts + 1, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(block, max, &mut Vec::new(), 0, &mut out);
    out
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max.min(n) {
        let mut next = Vec::new();
        for s in &layer {
            let start = s.last().map_or(0, |&l| l + 1);
            for i in start..n {
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

/// Bounded search for `D`, `Γ` and `θ : X → D` with `θ(T) ∪ θ(Γ)` satisfiable
/// over `Σ[D]` and `Φ ∪ θ(Γ) ⊨ θ(T)`, both within the model bounds.
///
/// `θ` ranges over the surjections from the block onto `D` (one per
/// sort-respecting partition of the block); unused constants in `D` could
/// only matter through `Γ`, whose pool is written over the block. A found
/// witness is a genuine isolation certificate at the bounded scale; an empty
/// result only says no candidate worked within the bounds.
pub fn search_isolation(phi: &[Sentence], ty: &LogicType, bounds: &IsolationBounds) -> Result<IsolationSearch, TypeError> {
    let report = ty.check();
    if !report.is_empty() {
        return Err(TypeError::IllFormed(report.to_string().trim_end().to_string()));
    }
    for s in phi {
        let r = check_sentence(&ty.sig, s);
        if !r.is_empty() {
            return Err(TypeError::IllFormed(r.to_string().trim_end().to_string()));
        }
    }
    for s in &bounds.pool {
        let r = check_sentence_in(&ty.sig, &ty.block, s);
        if !r.is_empty() {
            return Err(TypeError::IllFormed(r.to_string().trim_end().to_string()));
        }
    }
    let phi: Vec<Sentence> = phi.iter().map(Sentence::normalize).collect();
    let pool: Vec<Sentence> = bounds.pool.iter().map(Sentence::normalize).collect();
    let opts = EnumOptions {
        iso_pruning: false,
        node_budget: bounds.node_budget,
        ctor_based: false,
    };
    let mut taken: BTreeSet<String> = ty.sig.ops().iter().map(|o| o.name().to_string()).collect();
    taken.extend(ty.block.iter().map(|v| v.name.to_string()));

    let mut candidates = 0u64;
    let mut unsatisfiable = 0u64;
    for parts in partitions(&ty.block, bounds.max_constants) {
        let nparts = parts.iter().max().map_or(0, |m| m + 1);
        let mut names = taken.clone();
        let constants: Vec<Op> = (0..nparts)
            .map(|p| {
                let rep = parts.iter().position(|&q| q == p).expect("part has a member");
                let name = fresh_name("d", &names);
                names.insert(name.clone());
                Op::constant(name, ty.block[rep].sort.clone())
            })
            .collect();
        let extended = ty.sig.with_constants(&constants);
        let map: HashMap<Variable, Term> = ty
            .block
            .iter()
            .zip(&parts)
            .map(|(v, &p)| (v.clone(), Term::constant(constants[p].clone())))
            .collect();
        let theta_t: Vec<Sentence> = ty.sentences.iter().map(|s| s.substitute(&map)).collect();
        let theta_pool: Vec<Sentence> = pool.iter().map(|s| s.substitute(&map)).collect();
        let negated_t = Sentence::not(Sentence::and(theta_t.clone()));

        for chosen in subsets(pool.len(), bounds.max_gamma) {
            candidates += 1;
            let gamma: Vec<Sentence> = chosen.iter().map(|&i| theta_pool[i].clone()).collect();
            let mut sat = theta_t.clone();
            sat.extend(gamma.iter().cloned());
            let Some(model) = find_model(&extended, &bounds.models, &sat, &opts).map_err(TypeError::from)? else {
                unsatisfiable += 1;
                continue;
            };
            let mut against = phi.clone();
            against.extend(gamma.iter().cloned());
            against.push(negated_t.clone());
            if find_model(&extended, &bounds.models, &against, &opts)
                .map_err(TypeError::from)?
                .is_none()
            {
                let theta = ty
                    .block
                    .iter()
                    .zip(&parts)
                    .map(|(v, &p)| (v.clone(), constants[p].clone()))
                    .collect();
                return Ok(IsolationSearch {
                    witness: Some(IsolationWitness {
                        constants,
                        gamma,
                        gamma_pool: chosen,
                        theta,
                        extended,
                        model,
                        candidates,
                    }),
                    candidates,
                    unsatisfiable,
                });
            }
        }
    }
    Ok(IsolationSearch {
        witness: None,
        candidates,
        unsatisfiable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_respect_sorts() {
        let s = crate::kernel::Sort::new("s");
        let t = crate::kernel::Sort::new("t");
        let block = vec![Variable::new("a", s.clone()), Variable::new("b", s.clone()), Variable::new("c", t)];
        // {a,b} can merge, c cannot join them
        assert_eq!(partitions(&block, 3), vec![vec![0, 0, 1], vec![0, 1, 2]]);
        assert_eq!(partitions(&block, 2), vec![vec![0, 0, 1]]);
        assert_eq!(subsets(3, 2).len(), 1 + 3 + 3);
    }
}

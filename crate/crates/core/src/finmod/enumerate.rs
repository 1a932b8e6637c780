use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use thiserror::Error;

use super::eval::{ActionTable, Compiled, EvalError, Interp, Truth};
use super::model::FiniteModel;
use super::relation::Relation;
use crate::kernel::{Op, Signature, Sort};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("node budget of {0} exhausted")]
    ResourceLimit(u64),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("malformed size bound: {0}")]
    BadBound(String),
}

/// Per-sort maximum carrier sizes; unlisted sorts use the default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeBounds {
    per_sort: BTreeMap<Sort, usize>,
    default: usize,
}

impl SizeBounds {
    pub fn uniform(n: usize) -> Self {
        SizeBounds {
            per_sort: BTreeMap::new(),
            default: n,
        }
    }

    pub fn with(mut self, sort: impl Into<Sort>, n: usize) -> Self {
        self.per_sort.insert(sort.into(), n);
        self
    }

    pub fn get(&self, sort: &Sort) -> usize {
        self.per_sort.get(sort).copied().unwrap_or(self.default)
    }

    pub fn default_bound(&self) -> usize {
        self.default
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Sort, &usize)> {
        self.per_sort.iter()
    }

    /// Parses `S=k,T=m` on top of a default.
    pub fn parse(text: &str, default: usize) -> Result<Self, EnumError> {
        let mut b = SizeBounds::uniform(default);
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (s, n) = part
                .split_once('=')
                .ok_or_else(|| EnumError::BadBound(part.to_string()))?;
            let n: usize = n.trim().parse().map_err(|_| EnumError::BadBound(part.to_string()))?;
            b = b.with(s.trim(), n);
        }
        Ok(b)
    }
}

impl fmt::Display for SizeBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.per_sort.iter().map(|(s, n)| format!("{s}={n}")).collect();
        write!(f, "{}", parts.join(","))?;
        if !parts.is_empty() {
            write!(f, ",")?;
        }
        write!(f, "*={}", self.default)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Yield only the lexicographically least relabeling of each model.
    pub iso_pruning: bool,
    pub node_budget: Option<u64>,
    /// Restrict to constructor-based models.
    pub ctor_based: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            iso_pruning: false,
            node_budget: Some(50_000_000),
            ctor_based: false,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    pub nodes: u64,
    pub models: u64,
    /// True when the visitor stopped the enumeration early.
    pub stopped: bool,
}

/// Canonical element name: sort name, underscore, index.
pub fn element_name(sort: &Sort, i: usize) -> String {
    format!("{sort}_{i}")
}

#[derive(Clone, Copy, Debug)]
enum Cell {
    Table { op: usize, row: usize, domain: usize },
    Rel { label: usize, sort: usize, from: usize, to: usize },
}

struct Partial {
    sizes: Vec<usize>,
    arities: Vec<Vec<usize>>,
    results: Vec<usize>,
    tables: Vec<Vec<Option<usize>>>,
    lower: Vec<Vec<Relation>>,
    upper: Vec<Vec<Relation>>,
}

impl Interp for Partial {
    fn carrier_size(&self, sort: usize) -> usize {
        self.sizes[sort]
    }

    fn apply(&self, op: usize, args: &[usize]) -> Option<usize> {
        let mut row = 0;
        for (a, s) in args.iter().zip(&self.arities[op]) {
            row = row * self.sizes[*s] + a;
        }
        self.tables[op][row]
    }

    fn relation_bounds(&self, label: usize, sort: usize) -> (&Relation, &Relation) {
        (&self.lower[label][sort], &self.upper[label][sort])
    }
}

/// Least set of elements containing every element of a loose sort and the
/// constructor constants, closed under constructor tables. `None` when some
/// needed table cell is undecided.
pub(crate) fn ctor_generated(
    sizes: &[usize],
    arities: &[Vec<usize>],
    results: &[usize],
    ctor_ops: &[usize],
    constrained: &[bool],
    apply: impl Fn(usize, &[usize]) -> Option<usize>,
) -> Option<Vec<Vec<bool>>> {
    let mut reached: Vec<Vec<bool>> = sizes
        .iter()
        .enumerate()
        .map(|(s, n)| vec![!constrained[s]; *n])
        .collect();
    loop {
        let mut changed = false;
        for &op in ctor_ops {
            let ar = &arities[op];
            let mut args = vec![0usize; ar.len()];
            if ar.iter().any(|s| sizes[*s] == 0) {
                continue;
            }
            'rows: loop {
                if ar.iter().zip(&args).all(|(s, a)| reached[*s][*a]) {
                    let v = apply(op, &args)?;
                    if !reached[results[op]][v] {
                        reached[results[op]][v] = true;
                        changed = true;
                    }
                }
                let mut k = ar.len();
                loop {
                    if k == 0 {
                        break 'rows;
                    }
                    k -= 1;
                    args[k] += 1;
                    if args[k] < sizes[ar[k]] {
                        break;
                    }
                    args[k] = 0;
                }
            }
        }
        if !changed {
            return Some(reached);
        }
    }
}

struct Search<'a, F> {
    sig: &'a Signature,
    constraints: Vec<Compiled>,
    cells: Vec<Cell>,
    ctor_cells: usize,
    ctor_ops: Vec<usize>,
    constrained: Vec<bool>,
    opts: &'a EnumOptions,
    stats: EnumStats,
    visit: F,
    partial: Partial,
    tables: Vec<ActionTable>,
}

/// Visits every model of `sig` within `bounds` satisfying `constraints`, in
/// canonical order: size combinations as an odometer over the sorts (last
/// sort fastest), then table cells (constructor constants, other
/// constants, constructor tables, other tables; rows in row-major order;
/// values ascending), then relation cells (absent before present).
pub fn enumerate_models<F>(
    sig: &Signature,
    bounds: &SizeBounds,
    constraints: &[crate::kernel::Sentence],
    opts: &EnumOptions,
    visit: F,
) -> Result<EnumStats, EnumError>
where
    F: FnMut(&FiniteModel) -> ControlFlow<()>,
{
    let compiled = constraints
        .iter()
        .map(|c| Compiled::new(sig, &[], c))
        .collect::<Result<Vec<_>, _>>()?;
    let nsorts = sig.sorts().len();
    let maxes: Vec<usize> = sig.sorts().iter().map(|s| bounds.get(s)).collect();
    let arities: Vec<Vec<usize>> = sig
        .ops()
        .iter()
        .map(|o| o.arity().iter().map(|s| sig.sort_index(s).expect("declared")).collect())
        .collect();
    let results: Vec<usize> = sig
        .ops()
        .iter()
        .map(|o| sig.sort_index(o.result()).expect("declared"))
        .collect();
    let mut order: Vec<usize> = (0..sig.ops().len()).collect();
    order.sort_by_key(|&i| {
        let op: &Op = &sig.ops()[i];
        (!op.is_constant(), !sig.is_ctor(op), i)
    });
    let ctor_ops: Vec<usize> = (0..sig.ops().len()).filter(|&i| sig.is_ctor(&sig.ops()[i])).collect();
    let constrained: Vec<bool> = sig.sorts().iter().map(|s| sig.is_constrained(s)).collect();

    let mut search = Search {
        sig,
        constraints: compiled,
        cells: Vec::new(),
        ctor_cells: 0,
        ctor_ops,
        constrained,
        opts,
        stats: EnumStats::default(),
        visit,
        partial: Partial {
            sizes: vec![0; nsorts],
            arities,
            results,
            tables: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
        },
        tables: Vec::new(),
    };

    let mut sizes = vec![0usize; nsorts];
    loop {
        if search.run_size(&sizes, &order)?.is_break() {
            search.stats.stopped = true;
            return Ok(search.stats);
        }
        let mut k = nsorts;
        loop {
            if k == 0 {
                return Ok(search.stats);
            }
            k -= 1;
            sizes[k] += 1;
            if sizes[k] <= maxes[k] {
                break;
            }
            sizes[k] = 0;
        }
    }
}

/// All models, collected.
pub fn collect_models(
    sig: &Signature,
    bounds: &SizeBounds,
    constraints: &[crate::kernel::Sentence],
    opts: &EnumOptions,
) -> Result<Vec<FiniteModel>, EnumError> {
    let mut out = Vec::new();
    enumerate_models(sig, bounds, constraints, opts, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// The first model in canonical order, if any.
pub fn find_model(
    sig: &Signature,
    bounds: &SizeBounds,
    constraints: &[crate::kernel::Sentence],
    opts: &EnumOptions,
) -> Result<Option<FiniteModel>, EnumError> {
    let mut found = None;
    enumerate_models(sig, bounds, constraints, opts, |m| {
        found = Some(m.clone());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

impl<F> Search<'_, F>
where
    F: FnMut(&FiniteModel) -> ControlFlow<()>,
{
    fn run_size(&mut self, sizes: &[usize], order: &[usize]) -> Result<ControlFlow<()>, EnumError> {
        let sig = self.sig;
        self.partial.sizes = sizes.to_vec();
        self.partial.tables = sig
            .ops()
            .iter()
            .enumerate()
            .map(|(i, _)| vec![None; self.partial.arities[i].iter().map(|s| sizes[*s]).product()])
            .collect();
        self.partial.lower = sig
            .labels()
            .iter()
            .map(|_| sizes.iter().map(|n| Relation::empty(*n)).collect())
            .collect();
        self.partial.upper = sig
            .labels()
            .iter()
            .map(|_| sizes.iter().map(|n| Relation::full(*n)).collect())
            .collect();
        self.cells.clear();
        self.ctor_cells = 0;
        for &op in order {
            let domain = sizes[self.partial.results[op]];
            let rows = self.partial.tables[op].len();
            if rows > 0 && domain == 0 {
                return Ok(ControlFlow::Continue(()));
            }
            for row in 0..rows {
                self.cells.push(Cell::Table { op, row, domain });
            }
            if sig.is_ctor(&sig.ops()[op]) {
                self.ctor_cells = self.cells.len();
            }
        }
        for label in 0..sig.labels().len() {
            for (sort, n) in sizes.iter().enumerate() {
                for from in 0..*n {
                    for to in 0..*n {
                        self.cells.push(Cell::Rel { label, sort, from, to });
                    }
                }
            }
        }
        self.tables = self.constraints.iter().map(|c| c.actions(&self.partial)).collect();
        let pending: Vec<usize> = (0..self.constraints.len()).collect();
        let mut env = vec![0usize; self.constraints.iter().map(Compiled::slot_count).max().unwrap_or(0)];
        self.descend(0, &pending, &mut env)
    }

    fn descend(&mut self, depth: usize, pending: &[usize], env: &mut [usize]) -> Result<ControlFlow<()>, EnumError> {
        self.stats.nodes += 1;
        if let Some(budget) = self.opts.node_budget {
            if self.stats.nodes > budget {
                return Err(EnumError::ResourceLimit(budget));
            }
        }
        let mut still = Vec::with_capacity(pending.len());
        for &c in pending {
            match self.constraints[c].eval(&self.partial, &self.tables[c], env) {
                Truth::False => return Ok(ControlFlow::Continue(())),
                Truth::Unknown => still.push(c),
                Truth::True => {}
            }
        }
        if self.opts.ctor_based && depth == self.ctor_cells && !self.is_ctor_based() {
            return Ok(ControlFlow::Continue(()));
        }
        if depth == self.cells.len() {
            debug_assert!(still.is_empty(), "complete models decide every constraint");
            return Ok(self.emit());
        }
        match self.cells[depth] {
            Cell::Table { op, row, domain } => {
                for v in 0..domain {
                    self.partial.tables[op][row] = Some(v);
                    let flow = self.descend(depth + 1, &still, env)?;
                    if flow.is_break() {
                        self.partial.tables[op][row] = None;
                        return Ok(flow);
                    }
                }
                self.partial.tables[op][row] = None;
            }
            Cell::Rel { label, sort, from, to } => {
                self.partial.upper[label][sort].remove(from, to);
                self.refresh_actions(&still);
                let flow = self.descend(depth + 1, &still, env)?;
                self.partial.upper[label][sort].insert(from, to);
                if flow.is_break() {
                    return Ok(flow);
                }
                self.partial.lower[label][sort].insert(from, to);
                self.refresh_actions(&still);
                let flow = self.descend(depth + 1, &still, env)?;
                self.partial.lower[label][sort].remove(from, to);
                self.refresh_actions(&still);
                if flow.is_break() {
                    return Ok(flow);
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }

    fn refresh_actions(&mut self, which: &[usize]) {
        for &c in which {
            self.tables[c] = self.constraints[c].actions(&self.partial);
        }
    }

    fn is_ctor_based(&self) -> bool {
        let p = &self.partial;
        match ctor_generated(&p.sizes, &p.arities, &p.results, &self.ctor_ops, &self.constrained, |op, args| {
            p.apply(op, args)
        }) {
            Some(reached) => reached.iter().all(|r| r.iter().all(|b| *b)),
            None => false,
        }
    }

    fn emit(&mut self) -> ControlFlow<()> {
        if self.opts.iso_pruning && !self.is_canonical() {
            return ControlFlow::Continue(());
        }
        self.stats.models += 1;
        let m = self.materialize();
        (self.visit)(&m)
    }

    fn materialize(&self) -> FiniteModel {
        let sig = self.sig;
        let carriers = sig
            .sorts()
            .iter()
            .zip(&self.partial.sizes)
            .map(|(s, n)| (0..*n).map(|i| element_name(s, i)).collect())
            .collect();
        let mut m = FiniteModel::new(sig.clone(), carriers);
        for (i, t) in self.partial.tables.iter().enumerate() {
            *m.table_at_mut(i) = t.clone();
        }
        for (l, label) in sig.labels().iter().enumerate() {
            for (s, sort) in sig.sorts().iter().enumerate() {
                m.set_relation(label, sort, self.partial.lower[l][s].clone());
            }
        }
        m
    }

    fn encode(&self, perms: &[Vec<usize>]) -> Vec<usize> {
        let p = &self.partial;
        let mut out = Vec::new();
        for (op, table) in p.tables.iter().enumerate() {
            let ar = &p.arities[op];
            let mut permuted = vec![0usize; table.len()];
            for (row, cell) in table.iter().enumerate() {
                let mut rest = row;
                let mut args = vec![0usize; ar.len()];
                for k in (0..ar.len()).rev() {
                    args[k] = rest % p.sizes[ar[k]];
                    rest /= p.sizes[ar[k]];
                }
                let mut new_row = 0;
                for (k, a) in args.iter().enumerate() {
                    new_row = new_row * p.sizes[ar[k]] + perms[ar[k]][*a];
                }
                permuted[new_row] = perms[p.results[op]][cell.expect("complete")];
            }
            out.extend(permuted);
        }
        for rels in &p.lower {
            for (s, r) in rels.iter().enumerate() {
                let n = p.sizes[s];
                let mut bits = vec![0usize; n * n];
                for (i, j) in r.pairs() {
                    bits[perms[s][i] * n + perms[s][j]] = 1;
                }
                out.extend(bits);
            }
        }
        out
    }

    fn is_canonical(&self) -> bool {
        let sizes = &self.partial.sizes;
        let identity: Vec<Vec<usize>> = sizes.iter().map(|n| (0..*n).collect()).collect();
        let me = self.encode(&identity);
        let mut perms = identity.clone();
        loop {
            if self.encode(&perms) < me {
                return false;
            }
            // Next permutation tuple, last sort fastest.
            let mut k = perms.len();
            loop {
                if k == 0 {
                    return true;
                }
                k -= 1;
                if next_permutation(&mut perms[k]) {
                    break;
                }
                perms[k] = identity[k].clone();
            }
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

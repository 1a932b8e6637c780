use std::fmt::Write;

use super::spec::SpecFile;
use crate::classes::{Derivation, Rule};
use crate::finmod::{FiniteModel, SizeBounds};
use crate::forcing::ForcingProperty;
use crate::institution::{SignatureMorphism, Substitution};
use crate::kernel::{Action, Sentence, Signature, Term, Variable};

/// A term for display; variables are printed by name.
pub fn print_term(sig: &Signature, t: &Term) -> String {
    Printer::display(sig).term(t)
}

pub fn print_action(a: &Action) -> String {
    action(a, 0)
}

/// A sentence in the concrete syntax; parses back to the same normalized
/// sentence.
pub fn print_sentence(sig: &Signature, s: &Sentence) -> String {
    Printer::new(sig, &[]).sentence(s)
}

/// As [`print_sentence`] with the given free variables in scope.
pub fn print_sentence_in(sig: &Signature, free: &[Variable], s: &Sentence) -> String {
    Printer::new(sig, free).sentence(s)
}

struct Printer<'a> {
    sig: &'a Signature,
    scope: Vec<Variable>,
    bare_vars: bool,
}

#[derive(PartialEq)]
enum Kind {
    Closed,
    Prefix,
    Implies,
}

fn kind(s: &Sentence) -> Kind {
    match s {
        Sentence::Eq(..) | Sentence::Trans(..) => Kind::Closed,
        Sentence::Exists(..) => Kind::Prefix,
        Sentence::Or(_) if s.as_implies().is_some() => Kind::Implies,
        Sentence::Or(_) => Kind::Closed,
        Sentence::Not(_) if s.is_verum() || s.as_forall().is_none() && s.as_and().is_some() => Kind::Closed,
        Sentence::Not(_) => Kind::Prefix,
    }
}

fn action(a: &Action, prec: u8) -> String {
    let (s, own) = match a {
        Action::Label(l) => (l.to_string(), 3),
        Action::Union(x, y) => (format!("{} | {}", action(x, 1), action(y, 0)), 0),
        Action::Seq(x, y) => (format!("{} ; {}", action(x, 2), action(y, 1)), 1),
        Action::Star(x) => (format!("{}*", action(x, 2)), 3),
    };
    if own < prec {
        format!("({s})")
    } else {
        s
    }
}

impl<'a> Printer<'a> {
    fn new(sig: &'a Signature, free: &[Variable]) -> Self {
        Printer {
            sig,
            scope: free.to_vec(),
            bare_vars: false,
        }
    }

    fn display(sig: &'a Signature) -> Self {
        Printer {
            sig,
            scope: Vec::new(),
            bare_vars: true,
        }
    }

    fn var(&self, v: &Variable) -> String {
        if self.bare_vars {
            return v.name.to_string();
        }
        let by_name = self.scope.iter().rev().find(|w| w.name == v.name);
        if by_name == Some(v) {
            v.name.to_string()
        } else {
            format!("{}:{}", v.name, v.sort)
        }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => self.var(v),
            Term::App(op, args) => {
                let overloaded = self.sig.ops_named(op.name()).filter(|o| o.arity().len() == args.len()).count() > 1;
                let shadowed = !self.bare_vars && self.scope.iter().any(|v| &*v.name == op.name());
                let mut s = op.name().to_string();
                if overloaded {
                    write!(s, ":{}", op.result()).unwrap();
                }
                if !args.is_empty() || overloaded || shadowed {
                    let parts: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                    write!(s, "({})", parts.join(", ")).unwrap();
                }
                s
            }
        }
    }

    fn block(&self, block: &[Variable]) -> String {
        let parts: Vec<String> = block.iter().map(|v| format!("{}:{}", v.name, v.sort)).collect();
        parts.join(", ")
    }

    fn quantified(&mut self, q: &str, block: &[Variable], body: &Sentence) -> String {
        let head = format!("{q} {} . ", self.block(block));
        let n = self.scope.len();
        self.scope.extend(block.iter().cloned());
        let body = self.sentence(body);
        self.scope.truncate(n);
        head + &body
    }

    fn list(&mut self, items: &[&Sentence]) -> String {
        let parts: Vec<String> = items.iter().map(|s| self.sentence(s)).collect();
        parts.join(", ")
    }

    fn sentence(&mut self, s: &Sentence) -> String {
        match s {
            Sentence::Eq(a, b) => format!("{} = {}", self.term(a), self.term(b)),
            Sentence::Trans(act, a, b) => format!("{}({}, {})", action(act, 2), self.term(a), self.term(b)),
            Sentence::Exists(block, body) => self.quantified("exists", block, body),
            Sentence::Or(items) => {
                if let Some((a, b)) = s.as_implies() {
                    let lhs = self.sentence(a);
                    let lhs = if kind(a) == Kind::Closed { lhs } else { format!("({lhs})") };
                    format!("{lhs} => {}", self.sentence(b))
                } else if items.is_empty() {
                    "false".to_string()
                } else {
                    let refs: Vec<&Sentence> = items.iter().collect();
                    format!("or{{{}}}", self.list(&refs))
                }
            }
            Sentence::Not(inner) => {
                if s.is_verum() {
                    "true".to_string()
                } else if let Some((block, body)) = s.as_forall() {
                    self.quantified("forall", block, body)
                } else if let Some(items) = s.as_and() {
                    format!("and{{{}}}", self.list(&items))
                } else {
                    let body = self.sentence(inner);
                    if kind(inner) == Kind::Implies {
                        format!("not ({body})")
                    } else {
                        format!("not {body}")
                    }
                }
            }
        }
    }
}

fn print_sig_body(out: &mut String, sig: &Signature, indent: &str) {
    if !sig.sorts().is_empty() {
        let names: Vec<&str> = sig.sorts().iter().map(|s| s.as_str()).collect();
        writeln!(out, "{indent}sorts {}", names.join(" ")).unwrap();
    }
    if !sig.ops().is_empty() {
        writeln!(out, "{indent}ops").unwrap();
        for op in sig.ops() {
            let arity: Vec<&str> = op.arity().iter().map(|s| s.as_str()).collect();
            let mut line = format!("{indent}  {} :", op.name());
            for a in &arity {
                write!(line, " {a}").unwrap();
            }
            write!(line, " -> {}", op.result()).unwrap();
            if sig.is_ctor(op) {
                line.push_str(" [ctor]");
            }
            writeln!(out, "{line}").unwrap();
        }
    }
    if !sig.labels().is_empty() {
        let names: Vec<&str> = sig.labels().iter().map(|s| s.as_str()).collect();
        writeln!(out, "{indent}labels {}", names.join(" ")).unwrap();
    }
    if !sig.finite_sorts().is_empty() {
        let names: Vec<&str> = sig.finite_sorts().iter().map(|s| s.as_str()).collect();
        writeln!(out, "{indent}finite {}", names.join(" ")).unwrap();
    }
}

pub fn print_signature(name: &str, sig: &Signature) -> String {
    let mut out = format!("sig {name} {{\n");
    print_sig_body(&mut out, sig, "  ");
    out.push_str("}\n");
    out
}

pub fn print_model(name: &str, sig_name: &str, m: &FiniteModel) -> String {
    let sig = m.signature();
    let mut out = format!("model {name} over {sig_name} {{\n");
    for (sort, carrier) in sig.sorts().iter().zip(m.carriers()) {
        writeln!(out, "  carrier {sort} {{ {} }}", carrier.join(" ")).unwrap();
    }
    for op in sig.ops() {
        let overloaded = sig.ops_named(op.name()).filter(|o| o.arity().len() == op.arity().len()).count() > 1;
        let head = if overloaded {
            format!("{}:{}", op.name(), op.result())
        } else {
            op.name().to_string()
        };
        for (row, cell) in m.table(op).iter().enumerate() {
            let Some(v) = cell else { continue };
            let args = m.args_of_row(op, row);
            let names: Vec<&str> = args
                .iter()
                .zip(op.arity())
                .map(|(&a, s)| m.carrier(s)[a].as_str())
                .collect();
            let value = &m.carrier(op.result())[*v];
            if names.is_empty() {
                writeln!(out, "  op {head} = {value}").unwrap();
            } else {
                writeln!(out, "  op {head}({}) = {value}", names.join(", ")).unwrap();
            }
        }
    }
    for label in sig.labels() {
        for sort in sig.sorts() {
            let rel = m.relation(label, sort);
            if rel.is_empty() {
                continue;
            }
            let carrier = m.carrier(sort);
            let elsewhere = |e: &str| {
                sig.sorts()
                    .iter()
                    .filter(|s| *s != sort)
                    .filter(|s| m.element(s, e).is_some())
                    .collect::<Vec<_>>()
            };
            let mut ambiguous = false;
            let mut pairs = Vec::new();
            for (a, b) in rel.pairs() {
                let (x, y) = (&carrier[a], &carrier[b]);
                let ex = elsewhere(x);
                if ex.iter().any(|s| m.element(s, y).is_some()) {
                    ambiguous = true;
                }
                pairs.push(format!("({x}, {y})"));
            }
            let on = if ambiguous { format!(" on {sort}") } else { String::new() };
            writeln!(out, "  label {label}{on} : {}", pairs.join(" ")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn print_bounds(b: &SizeBounds) -> String {
    let mut parts: Vec<String> = b.entries().map(|(s, n)| format!("{s}={n}")).collect();
    parts.push(format!("*={}", b.default_bound()));
    format!("within {{{}}}", parts.join(", "))
}

fn print_morphism(name: &str, source: &str, target: &str, chi: &SignatureMorphism) -> String {
    let mut out = format!("morphism {name} : {source} -> {target} {{\n");
    for (s, t) in chi.sort_map() {
        if s != t {
            writeln!(out, "  sort {s} -> {t}").unwrap();
        }
    }
    for op in chi.source().ops() {
        let image = chi.map_op(op);
        if image.name() == op.name() {
            continue;
        }
        if chi.source().ops_named(op.name()).count() > 1 {
            let arity: Vec<&str> = op.arity().iter().map(|s| s.as_str()).collect();
            let mut rank = String::new();
            for a in &arity {
                write!(rank, " {a}").unwrap();
            }
            writeln!(out, "  op ({} :{rank} -> {}) -> {}", op.name(), op.result(), image.name()).unwrap();
        } else {
            writeln!(out, "  op {} -> {}", op.name(), image.name()).unwrap();
        }
    }
    for (l, m) in chi.label_map() {
        if l != m {
            writeln!(out, "  label {l} -> {m}").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn constant_block(ops: &[crate::kernel::Op]) -> String {
    let parts: Vec<String> = ops.iter().map(|o| format!("{} : {}", o.name(), o.result())).collect();
    format!("{{{}}}", parts.join(", "))
}

fn print_subst(name: &str, sig_name: &str, theta: &Substitution) -> String {
    let mut out = format!(
        "subst {name} over {sig_name} : {} -> {} {{\n",
        constant_block(theta.source()),
        constant_block(theta.target())
    );
    let tsig = theta.target_signature();
    for c in theta.source() {
        if let Some(t) = theta.map().get(c) {
            writeln!(out, "  {} -> {}", c.name(), Printer::new(&tsig, &[]).term(t)).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

fn print_forcing(name: &str, sig_name: &str, p: &ForcingProperty) -> String {
    let mut out = format!("forcing {name} over {sig_name} {{\n");
    for c in p.conditions() {
        writeln!(out, "  condition {} {{", c.name).unwrap();
        out.push_str("    sig {\n");
        print_sig_body(&mut out, &c.sig, "      ");
        out.push_str("    }\n");
        let atoms: Vec<String> = c.atoms.iter().map(|a| print_sentence(&c.sig, a)).collect();
        writeln!(out, "    atoms {{{}}}", atoms.join(", ")).unwrap();
        if !c.gamma.is_empty() {
            let gamma: Vec<String> = c.gamma.iter().map(|a| print_sentence(&c.sig, a)).collect();
            writeln!(out, "    gamma {{{}}}", gamma.join(", ")).unwrap();
        }
        out.push_str("  }\n");
    }
    let pairs: Vec<String> = p
        .generating_pairs()
        .into_iter()
        .map(|(a, b)| format!("{} <= {}", p.condition(a).name, p.condition(b).name))
        .collect();
    if !pairs.is_empty() {
        writeln!(out, "  order {}", pairs.join(", ")).unwrap();
    }
    out.push_str("}\n");
    out
}

fn print_proof(name: &str, sig_name: &str, d: &Derivation, spec: &SpecFile) -> String {
    let mut out = format!("proof {name} over {sig_name} flavor {} {{\n", d.flavor.name());
    for step in &d.steps {
        let mut sig = &d.sig;
        let rule = match &step.rule {
            Rule::Monotonicity => "mono".to_string(),
            Rule::Transitivity(a, b) => format!("trans({a}, {b})"),
            Rule::Union(names) => format!("union({})", names.join(", ")),
            Rule::Translation { morphism, premise } => {
                sig = morphism.target();
                let m = spec
                    .morphisms
                    .iter()
                    .find(|(_, decl)| decl.morphism == *morphism)
                    .map(|(n, _)| n.as_str())
                    .unwrap_or("?");
                format!("translate[{m}]({premise})")
            }
            Rule::Cb { var, depth, bounds } => format!("cb[{var}, {depth}] {}", print_bounds(bounds)),
            Rule::Fn { caps, bounds } => {
                let parts: Vec<String> = caps.iter().map(|(s, n)| format!("{s}={n}")).collect();
                format!("fn[{}] {}", parts.join(", "), print_bounds(bounds))
            }
            Rule::Semantic { bounds } => format!("sem {}", print_bounds(bounds)),
        };
        let lhs: Vec<String> = step.lhs.iter().map(|s| print_sentence(sig, s)).collect();
        let rhs: Vec<String> = step.rhs.iter().map(|s| print_sentence(sig, s)).collect();
        writeln!(
            out,
            "  step {} = {rule} : {{{}}} |- {{{}}}",
            step.name,
            lhs.join(", "),
            rhs.join(", ")
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// The whole file, declarations grouped by category in dependency order.
pub fn print_spec(spec: &SpecFile) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (name, sig) in &spec.signatures {
        parts.push(print_signature(name, sig));
    }
    for (name, d) in &spec.models {
        parts.push(print_model(name, &d.sig, &d.model));
    }
    for (name, d) in &spec.theories {
        let sig = &spec.signatures[&d.sig];
        let mut out = format!("theory {name} over {} {{\n", d.sig);
        for (n, s) in &d.sentences {
            writeln!(out, "  {n} : {}", print_sentence(sig, s)).unwrap();
        }
        out.push_str("}\n");
        parts.push(out);
    }
    for (name, d) in &spec.goals {
        let sig = &spec.signatures[&d.sig];
        parts.push(format!("goal {name} over {} : {}\n", d.sig, print_sentence(sig, &d.sentence)));
    }
    for (name, d) in &spec.morphisms {
        parts.push(print_morphism(name, &d.source, &d.target, &d.morphism));
    }
    for (name, d) in &spec.substs {
        parts.push(print_subst(name, &d.sig, &d.subst));
    }
    for (name, d) in &spec.types {
        let mut out = format!("type {name} over {} [{}] {{\n", d.sig, Printer::new(&d.ty.sig, &[]).block(&d.ty.block));
        for (n, s) in d.names.iter().zip(&d.ty.sentences) {
            writeln!(out, "  {n} : {}", print_sentence_in(&d.ty.sig, &d.ty.block, s)).unwrap();
        }
        out.push_str("}\n");
        parts.push(out);
    }
    for (name, d) in &spec.forcings {
        parts.push(print_forcing(name, &d.sig, &d.property));
    }
    for (name, d) in &spec.proofs {
        parts.push(print_proof(name, &d.sig, &d.derivation, spec));
    }
    parts.join("\n")
}

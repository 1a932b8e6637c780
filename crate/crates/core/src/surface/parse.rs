use std::collections::BTreeMap;
use std::sync::Arc;

use indexmap::IndexMap;

use super::error::{SourceSpan, SurfaceError};
use super::lexer::{is_keyword, lex, Tok, Token};
use super::spec::SpecFile;
use crate::classes::{Derivation, Rule, Step};
use crate::finmod::{FiniteModel, SizeBounds};
use crate::forcing::{Condition, ForcingProperty};
use crate::institution::{check_substitution, Flavor, SignatureMorphism, Substitution};
use crate::kernel::{
    check_sentence_in, check_signature, Action, Label, Op, Sentence, Signature, Sort, Term, ValidationReport, Variable,
};
use crate::types::LogicType;

/// Parses a `.ta` file. Diagnostics name the file as `<input>`.
pub fn parse_spec(text: &str) -> Result<SpecFile, SurfaceError> {
    parse_spec_named(text, "<input>")
}

pub fn parse_spec_named(text: &str, file: &str) -> Result<SpecFile, SurfaceError> {
    let mut p = Parser::new(text, file)?;
    p.file().map_err(PErr::into_error)?;
    Ok(p.spec)
}

/// Parses a closed sentence over `sig`.
pub fn parse_sentence(sig: &Signature, text: &str) -> Result<Sentence, SurfaceError> {
    parse_sentence_in(sig, &[], text)
}

/// Parses a sentence whose free variables are drawn from `free`.
pub fn parse_sentence_in(sig: &Signature, free: &[Variable], text: &str) -> Result<Sentence, SurfaceError> {
    let mut p = Parser::new(text, "<sentence>")?;
    let mut cx = Ctx::new(sig, free);
    let s = p.sentence(&mut cx).map_err(PErr::into_error)?;
    p.expect_eof().map_err(PErr::into_error)?;
    Ok(s.normalize())
}

/// Parses a ground term over `sig`.
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, SurfaceError> {
    let mut p = Parser::new(text, "<term>")?;
    let cx = Ctx::new(sig, &[]);
    let raw = p.raw_term().map_err(PErr::into_error)?;
    p.expect_eof().map_err(PErr::into_error)?;
    p.resolve_one(&cx, &raw, None).map_err(PErr::into_error)
}

/// Soft errors allow backtracking; the index orders them by how far the
/// parser got.
enum PErr {
    Soft(usize, SurfaceError),
    Hard(SurfaceError),
}

impl PErr {
    fn into_error(self) -> SurfaceError {
        match self {
            PErr::Soft(_, e) | PErr::Hard(e) => e,
        }
    }
}

type PResult<T> = Result<T, PErr>;

fn further(a: PErr, b: PErr) -> PErr {
    match (a, b) {
        (PErr::Hard(e), _) | (_, PErr::Hard(e)) => PErr::Hard(e),
        (PErr::Soft(i, e), PErr::Soft(j, f)) => {
            if j > i {
                PErr::Soft(j, f)
            } else {
                PErr::Soft(i, e)
            }
        }
    }
}

struct Ctx<'a> {
    sig: &'a Signature,
    scope: Vec<Variable>,
    depth: u32,
}

impl<'a> Ctx<'a> {
    fn new(sig: &'a Signature, free: &[Variable]) -> Self {
        Ctx {
            sig,
            scope: free.to_vec(),
            depth: 0,
        }
    }

    fn lookup(&self, name: &str, sort: Option<&str>) -> Option<&Variable> {
        self.scope
            .iter()
            .rev()
            .find(|v| &*v.name == name && sort.is_none_or(|s| v.sort.as_str() == s))
    }
}

#[derive(Clone, Debug)]
struct RawTerm {
    name: String,
    ann: Option<String>,
    args: Option<Vec<RawTerm>>,
    span: SourceSpan,
}

impl std::fmt::Display for RawTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name)?;
        if let Some(s) = &self.ann {
            write!(f, ":{s}")?;
        }
        if let Some(args) = &self.args {
            let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

enum RawAction {
    Label(String, SourceSpan),
    Seq(Box<RawAction>, Box<RawAction>),
    Union(Box<RawAction>, Box<RawAction>),
    Star(Box<RawAction>),
    Power(Box<RawAction>, u64, SourceSpan),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    spec: SpecFile,
}

const SIG_SECTIONS: [&str; 4] = ["sorts", "ops", "labels", "finite"];

impl Parser {
    fn new(text: &str, file: &str) -> Result<Self, SurfaceError> {
        let file: Arc<str> = Arc::from(file);
        Ok(Parser {
            toks: lex(text, &file)?,
            pos: 0,
            spec: SpecFile::new(),
        })
    }

    // ---- token helpers ----

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.toks[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) {
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn soft<T>(&self, expected: &str) -> PResult<T> {
        Err(PErr::Soft(
            self.pos,
            SurfaceError::Parse {
                span: self.span(),
                message: format!("expected {expected}, found {}", self.describe()),
            },
        ))
    }

    fn hard<T>(&self, span: &SourceSpan, message: impl Into<String>) -> PResult<T> {
        Err(PErr::Hard(SurfaceError::Resolve {
            span: span.clone(),
            message: message.into(),
        }))
    }

    fn invalid(&self, span: &SourceSpan, what: String, report: ValidationReport) -> PResult<()> {
        if report.is_empty() {
            Ok(())
        } else {
            Err(PErr::Hard(SurfaceError::Invalid {
                span: span.clone(),
                what,
                report,
            }))
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.soft(&format!("`{s}`"))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.is_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.soft(&format!("`{w}`"))
        }
    }

    fn expect_eof(&mut self) -> PResult<()> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            self.soft("end of input")
        }
    }

    /// An identifier that is not a reserved keyword.
    fn ident(&mut self) -> PResult<(String, SourceSpan)> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let out = (s.clone(), self.span());
                self.bump();
                Ok(out)
            }
            _ => self.soft("an identifier"),
        }
    }

    fn peek_ident(&self) -> Option<&str> {
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => Some(s),
            _ => None,
        }
    }

    fn num(&mut self) -> PResult<u64> {
        match *self.peek() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => self.soft("a number"),
        }
    }

    fn sort_name(&mut self, sig: &Signature) -> PResult<Sort> {
        let (s, sp) = self.ident()?;
        let sort = Sort::new(&s);
        if !sig.has_sort(&sort) {
            return self.hard(&sp, format!("unknown sort `{s}`"));
        }
        Ok(sort)
    }

    // ---- declarations ----

    fn file(&mut self) -> PResult<()> {
        loop {
            let kw = match self.peek() {
                Tok::Eof => return Ok(()),
                Tok::Ident(s) => s.clone(),
                _ => return self.soft("a declaration"),
            };
            match kw.as_str() {
                "sig" => self.decl_sig()?,
                "model" => self.decl_model()?,
                "theory" => self.decl_theory()?,
                "goal" => self.decl_goal()?,
                "morphism" => self.decl_morphism()?,
                "subst" => self.decl_subst()?,
                "type" => self.decl_type()?,
                "forcing" => self.decl_forcing()?,
                "proof" => self.decl_proof()?,
                _ => return self.soft("a declaration"),
            }
        }
    }

    fn decl_name(&mut self, taken: bool, category: &str, name: &str, span: &SourceSpan) -> PResult<()> {
        if taken {
            return self.hard(span, format!("duplicate {category} name `{name}`"));
        }
        Ok(())
    }

    fn sig_ref(&mut self) -> PResult<(String, Signature)> {
        let (name, sp) = self.ident()?;
        match self.spec.signatures.get(&name) {
            Some(s) => Ok((name, s.clone())),
            None => self.hard(&sp, format!("unknown signature `{name}`")),
        }
    }

    fn decl_sig(&mut self) -> PResult<()> {
        let start = self.span();
        self.bump();
        let (name, sp) = self.ident()?;
        self.decl_name(self.spec.signatures.contains_key(&name), "signature", &name, &sp)?;
        self.expect_sym("{")?;
        let sig = self.sig_body(Signature::new())?;
        self.expect_sym("}")?;
        self.invalid(&start, format!("signature {name}"), check_signature(&sig))?;
        self.spec.signatures.insert(name, sig);
        Ok(())
    }

    fn sig_body(&mut self, mut sig: Signature) -> PResult<Signature> {
        loop {
            if self.is_sym("}") {
                return Ok(sig);
            }
            if self.eat_word("sorts") {
                while let Some(s) = self.peek_ident() {
                    if SIG_SECTIONS.contains(&s) {
                        break;
                    }
                    sig.add_sort(Sort::new(s));
                    self.bump();
                }
            } else if self.eat_word("ops") {
                while self.peek_ident().is_some() && matches!(self.peek_at(1), Tok::Sym(":")) {
                    let (name, _) = self.ident()?;
                    self.expect_sym(":")?;
                    let mut arity = Vec::new();
                    while !self.is_sym("->") {
                        arity.push(Sort::new(self.ident()?.0));
                    }
                    self.expect_sym("->")?;
                    let result = Sort::new(self.ident()?.0);
                    let op = Op::new(&name, arity, result);
                    sig.add_op(op.clone());
                    if self.eat_sym("[") {
                        self.expect_word("ctor")?;
                        self.expect_sym("]")?;
                        sig.mark_ctor(op);
                    }
                }
            } else if self.eat_word("labels") {
                while let Some(s) = self.peek_ident() {
                    if SIG_SECTIONS.contains(&s) {
                        break;
                    }
                    sig.add_label(Label::new(s));
                    self.bump();
                }
            } else if self.eat_word("finite") {
                while let Some(s) = self.peek_ident() {
                    if SIG_SECTIONS.contains(&s) {
                        break;
                    }
                    sig.mark_finite(Sort::new(s));
                    self.bump();
                }
            } else {
                return self.soft("`sorts`, `ops`, `labels`, `finite` or `}`");
            }
        }
    }

    fn decl_model(&mut self) -> PResult<()> {
        self.bump();
        let (name, sp) = self.ident()?;
        self.decl_name(self.spec.models.contains_key(&name), "model", &name, &sp)?;
        self.expect_word("over")?;
        let (sig_name, sig) = self.sig_ref()?;
        self.expect_sym("{")?;

        let mut carriers: Vec<Option<Vec<String>>> = vec![None; sig.sorts().len()];
        type OpRow = (String, Option<String>, Vec<(String, SourceSpan)>, (String, SourceSpan), SourceSpan);
        let mut op_rows: Vec<OpRow> = Vec::new();
        let mut label_rows: Vec<(String, SourceSpan, Option<Sort>, Vec<(String, String, SourceSpan)>)> = Vec::new();
        while !self.eat_sym("}") {
            if self.eat_word("carrier") {
                let sp = self.span();
                let sort = self.sort_name(&sig)?;
                let i = sig.sort_index(&sort).expect("declared");
                if carriers[i].is_some() {
                    return self.hard(&sp, format!("carrier of `{sort}` given twice"));
                }
                self.expect_sym("{")?;
                let mut elems: Vec<String> = Vec::new();
                while !self.eat_sym("}") {
                    let (e, esp) = self.ident()?;
                    if elems.contains(&e) {
                        return self.hard(&esp, format!("element `{e}` listed twice"));
                    }
                    elems.push(e);
                }
                carriers[i] = Some(elems);
            } else if self.eat_word("op") {
                let sp = self.span();
                let (op, _) = self.ident()?;
                let ann = if self.eat_sym(":") { Some(self.ident()?.0) } else { None };
                let mut args = Vec::new();
                if self.eat_sym("(") && !self.eat_sym(")") {
                    loop {
                        args.push(self.ident()?);
                        if self.eat_sym(")") {
                            break;
                        }
                        self.expect_sym(",")?;
                    }
                }
                self.expect_sym("=")?;
                let value = self.ident()?;
                op_rows.push((op, ann, args, value, sp));
            } else if self.eat_word("label") {
                let (l, lsp) = self.ident()?;
                let on = if self.eat_word("on") { Some(self.sort_name(&sig)?) } else { None };
                self.expect_sym(":")?;
                let mut pairs = Vec::new();
                while self.is_sym("(") {
                    let psp = self.span();
                    self.bump();
                    let a = self.ident()?.0;
                    self.expect_sym(",")?;
                    let b = self.ident()?.0;
                    self.expect_sym(")")?;
                    pairs.push((a, b, psp));
                }
                label_rows.push((l, lsp, on, pairs));
            } else {
                return self.soft("`carrier`, `op`, `label` or `}`");
            }
        }

        let mut m = FiniteModel::new(sig.clone(), carriers.into_iter().map(Option::unwrap_or_default).collect());
        for (op_name, ann, args, (value, vsp), sp) in op_rows {
            let fits = |op: &Op| {
                op.arity().len() == args.len()
                    && ann.as_deref().is_none_or(|s| op.result().as_str() == s)
                    && args.iter().zip(op.arity()).all(|((a, _), s)| m.element(s, a).is_some())
                    && m.element(op.result(), &value).is_some()
            };
            let cands: Vec<Op> = sig.ops_named(&op_name).filter(|o| fits(o)).cloned().collect();
            let op = match cands.len() {
                1 => cands[0].clone(),
                0 => {
                    if sig.ops_named(&op_name).next().is_none() {
                        return self.hard(&sp, format!("unknown operation `{op_name}`"));
                    }
                    for (a, asp) in &args {
                        if !m.carriers().iter().any(|c| c.contains(a)) {
                            return self.hard(asp, format!("unknown element `{a}`"));
                        }
                    }
                    if !m.carriers().iter().any(|c| c.contains(&value)) {
                        return self.hard(&vsp, format!("unknown element `{value}`"));
                    }
                    return self.hard(&sp, format!("row does not fit any rank of `{op_name}`"));
                }
                _ => return self.hard(&sp, format!("row fits several ranks of `{op_name}`; annotate as `{op_name}:Sort`")),
            };
            let idx: Vec<usize> = args
                .iter()
                .zip(op.arity())
                .map(|((a, _), s)| m.element(s, a).expect("checked"))
                .collect();
            if m.value(&op, &idx).is_some() {
                return self.hard(&sp, format!("row of `{op_name}` given twice"));
            }
            let v = m.element(op.result(), &value).expect("checked");
            m.set(&op, &idx, v);
        }
        for (l, lsp, on, pairs) in label_rows {
            let label = Label::new(&l);
            if !sig.has_label(&label) {
                return self.hard(&lsp, format!("unknown label `{l}`"));
            }
            for (a, b, psp) in pairs {
                let sorts: Vec<&Sort> = match &on {
                    Some(s) => vec![s],
                    None => sig.sorts().iter().collect(),
                };
                let fit: Vec<&Sort> = sorts
                    .into_iter()
                    .filter(|s| m.element(s, &a).is_some() && m.element(s, &b).is_some())
                    .collect();
                match fit.len() {
                    1 => {
                        let s = fit[0].clone();
                        m.add_transition_named(&label, &s, &a, &b).expect("checked");
                    }
                    0 => return self.hard(&psp, format!("no sort has both `{a}` and `{b}`")),
                    _ => return self.hard(&psp, format!("pair ({a}, {b}) fits several sorts; add `on Sort`")),
                }
            }
        }
        self.spec.models.insert(
            name,
            super::spec::ModelDecl {
                sig: sig_name,
                model: m,
            },
        );
        Ok(())
    }

    fn decl_theory(&mut self) -> PResult<()> {
        self.bump();
        let (name, sp) = self.ident()?;
        self.decl_name(self.spec.theories.contains_key(&name), "theory", &name, &sp)?;
        self.expect_word("over")?;
        let (sig_name, sig) = self.sig_ref()?;
        self.expect_sym("{")?;
        let mut sentences = IndexMap::new();
        while !self.eat_sym("}") {
            let (n, nsp) = self.ident()?;
            if sentences.contains_key(&n) {
                return self.hard(&nsp, format!("duplicate sentence name `{n}`"));
            }
            self.expect_sym(":")?;
            let s = self.checked_sentence(&sig, &[], &nsp, &n)?;
            sentences.insert(n, s);
        }
        self.spec.theories.insert(
            name,
            super::spec::TheoryDecl {
                sig: sig_name,
                sentences,
            },
        );
        Ok(())
    }

    fn checked_sentence(&mut self, sig: &Signature, free: &[Variable], sp: &SourceSpan, what: &str) -> PResult<Sentence> {
        let mut cx = Ctx::new(sig, free);
        let s = self.sentence(&mut cx)?.normalize();
        self.invalid(sp, format!("sentence {what}"), check_sentence_in(sig, free, &s))?;
        Ok(s)
    }

    fn decl_goal(&mut self) -> PResult<()> {
        self.bump();
        let (name, sp) = self.ident()?;
        self.decl_name(self.spec.goals.contains_key(&name), "goal", &name, &sp)?;
        self.expect_word("over")?;
        let (sig_name, sig) = self.sig_ref()?;
        self.expect_sym(":")?;
        let sentence = self.checked_sentence(&sig, &[], &sp, &name)?;
        self.spec.goals.insert(name, super::spec::GoalDecl { sig: sig_name, sentence });
        Ok(())
    }

    fn decl_morphism(&mut self) -> PResult<()> {
        self.bump();
        let (name, sp) = self.ident()?;
        self.decl_name(self.spec.morphisms.contains_key(&name), "morphism", &name, &sp)?;
        self.expect_sym(":")?;
        let (src_name, src) = self.sig_ref()?;
        self.expect_sym("->")?;
        let (tgt_name, tgt) = self.sig_ref()?;
        self.expect_sym("{")?;
        let mut sorts = BTreeMap::new();
        let mut raw_ops: Vec<(Op, String, SourceSpan)> = Vec::new();
        let mut labels = BTreeMap::new();
        while !self.eat_sym("}") {
            if self.eat_word("sort") {
                let s = self.sort_name(&src)?;
                self.expect_sym("->")?;
                let t = self.sort_name(&tgt)?;
                sorts.insert(s, t);
            } else if self.eat_word("op") {
                let sp = self.span();
                let op = if self.eat_sym("(") {
                    let (n, _) = self.ident()?;
                    self.expect_sym(":")?;
                    let mut arity = Vec::new();
                    while !self.is_sym("->") {
                        arity.push(self.sort_name(&src)?);
                    }
                    self.expect_sym("->")?;
                    let result = self.sort_name(&src)?;
                    self.expect_sym(")")?;
                    let op = Op::new(&n, arity, result);
                    if !src.has_op(&op) {
                        return self.hard(&sp, format!("unknown operation `{n}` at that rank"));
                    }
                    op
                } else {
                    let (n, _) = self.ident()?;
                    let cands: Vec<&Op> = src.ops_named(&n).collect();
                    match cands.len() {
                        1 => cands[0].clone(),
                        0 => return self.hard(&sp, format!("unknown operation `{n}`")),
                        _ => return self.hard(&sp, format!("`{n}` is overloaded; write `op ({n} : ... -> ...)`")),
                    }
                };
                self.expect_sym("->")?;
                let (g, _) = self.ident()?;
                raw_ops.push((op, g, sp));
            } else if self.eat_word("label") {
                let (l, lsp) = self.ident()?;
                if !src.has_label(&Label::new(&l)) {
                    return self.hard(&lsp, format!("unknown label `{l}`"));
                }
                self.expect_sym("->")?;
                let (m, msp) = self.ident()?;
                if !tgt.has_label(&Label::new(&m)) {
                    return self.hard(&msp, format!("unknown label `{m}`"));
                }
                labels.insert(Label::new(&l), Label::new(&m));
            } else {
                return self.soft("`sort`, `op`, `label` or `}`");
            }
        }
        let map_sort = |s: &Sort| sorts.get(s).cloned().unwrap_or_else(|| s.clone());
        let mut ops = BTreeMap::new();
        for (op, g, sp) in raw_ops {
            let image = Op::new(&g, op.arity().iter().map(map_sort).collect(), map_sort(op.result()));
            if !tgt.has_op(&image) {
                return self.hard(&sp, format!("target has no operation `{g}` of the translated rank"));
            }
            ops.insert(op, image);
        }
        let morphism = SignatureMorphism::new(src, tgt, sorts, ops, labels);
        self.spec.morphisms.insert(
            name,
            super::spec::MorphismDecl {
                source: src_name,
                target: tgt_name,
                morphism,
            },
        );
        Ok(())
    }

    fn constant_block(&mut self, sig: &Signature) -> PResult<Vec<Op>> {
        self.expect_sym("{")?;
        let mut out = Vec::new();
        if !self.eat_sym("}") {
            loop {
                let (n, _) = self.ident()?;
                self.expect_sym(":")?;
                let s = self.sort_name(sig)?;
                out.push(Op::constant(&n, s));
                if self.eat_sym("}") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        Ok(out)
    }

    fn decl_subst(&mut self) -> PResult<()> {
        let start = self.span();
        self.bump();
        let (name, sp) = self.ident()?;
        self.decl_name(self.spec.substs.contains_key(&name), "substitution", &name, &sp)?;
        self.expect_word("over")?;
        let (sig_name, sig) = self.sig_ref()?;
        self.expect_sym(":")?;
        let source = self.constant_block(&sig)?;
        self.expect_sym("->")?;
        let target = self.constant_block(&sig)?;
        let tsig = sig.with_constants(&target);
        let cx = Ctx::new(&tsig, &[]);
        self.expect_sym("{")?;
        let mut map = BTreeMap::new();
        while !self.eat_sym("}") {
            let (c, csp) = self.ident()?;
            let cands: Vec<&Op> = source.iter().filter(|o| o.name() == c).collect();
            if cands.len() != 1 {
                return self.hard(&csp, format!("`{c}` is not a single source constant"));
            }
            let op = cands[0].clone();
            if map.contains_key(&op) {
                return self.hard(&csp, format!("`{c}` mapped twice"));
            }
            self.expect_sym("->")?;
            let raw = self.raw_term()?;
            let t = self.resolve_one(&cx, &raw, Some(op.result()))?;
            map.insert(op, t);
        }
        let subst = Substitution::new(sig, source, target, map);
        self.invalid(&start, format!("substitution {name}"), check_substitution(&subst))?;
        self.spec.substs.insert(name, super::spec::SubstDecl { sig: sig_name, subst });
        Ok(())
    }

    fn variable_block(&mut self, sig: &Signature, end: &str) -> PResult<Vec<Variable>> {
        let mut out: Vec<Variable> = Vec::new();
        if self.eat_sym(end) {
            return Ok(out);
        }
        loop {
            let (n, nsp) = self.ident()?;
            self.expect_sym(":")?;
            let s = self.sort_name(sig)?;
            if out.iter().any(|v| *v.name == *n) {
                return self.hard(&nsp, format!("variable `{n}` declared twice in one block"));
            }
            out.push(Variable::new(&n, s));
            if self.eat_sym(end) {
                return Ok(out);
            }
            self.expect_sym(",")?;
        }
    }

    fn decl_type(&mut self) -> PResult<()> {
        let start = self.span();
        self.bump();
        let (name, sp) = self.ident()?;
        self.decl_name(self.spec.types.contains_key(&name), "type", &name, &sp)?;
        self.expect_word("over")?;
        let (sig_name, sig) = self.sig_ref()?;
        self.expect_sym("[")?;
        let block = self.variable_block(&sig, "]")?;
        self.expect_sym("{")?;
        let mut names = Vec::new();
        let mut sentences = Vec::new();
        while !self.eat_sym("}") {
            let (n, nsp) = self.ident()?;
            if names.contains(&n) {
                return self.hard(&nsp, format!("duplicate sentence name `{n}`"));
            }
            self.expect_sym(":")?;
            sentences.push(self.checked_sentence(&sig, &block, &nsp, &n)?);
            names.push(n);
        }
        let ty = LogicType::new(sig, block, sentences);
        self.invalid(&start, format!("type {name}"), ty.check())?;
        self.spec.types.insert(
            name,
            super::spec::TypeDecl {
                sig: sig_name,
                names,
                ty,
            },
        );
        Ok(())
    }

    fn sentence_list(&mut self, sig: &Signature) -> PResult<Vec<Sentence>> {
        self.expect_sym("{")?;
        let mut out = Vec::new();
        if self.eat_sym("}") {
            return Ok(out);
        }
        loop {
            let sp = self.span();
            out.push(self.checked_sentence(sig, &[], &sp, "in list")?);
            if self.eat_sym("}") {
                return Ok(out);
            }
            self.expect_sym(",")?;
        }
    }

    fn decl_forcing(&mut self) -> PResult<()> {
        self.bump();
        let (name, sp) = self.ident()?;
        self.decl_name(self.spec.forcings.contains_key(&name), "forcing property", &name, &sp)?;
        self.expect_word("over")?;
        let (sig_name, base) = self.sig_ref()?;
        self.expect_sym("{")?;
        let mut conditions: Vec<Condition> = Vec::new();
        let mut raw_pairs: Vec<((String, SourceSpan), (String, SourceSpan))> = Vec::new();
        while !self.eat_sym("}") {
            if self.eat_word("condition") {
                let (cname, csp) = self.ident()?;
                if conditions.iter().any(|c| c.name == cname) {
                    return self.hard(&csp, format!("duplicate condition name `{cname}`"));
                }
                self.expect_sym("{")?;
                self.expect_word("sig")?;
                let sig_start = self.span();
                let sig = if self.is_sym("{") {
                    self.bump();
                    let s = self.sig_body(Signature::new())?;
                    self.expect_sym("}")?;
                    s
                } else {
                    let (_, s) = self.sig_ref()?;
                    if self.eat_sym("+") {
                        self.expect_sym("{")?;
                        let s = self.sig_body(s)?;
                        self.expect_sym("}")?;
                        s
                    } else {
                        s
                    }
                };
                self.invalid(&sig_start, format!("signature of condition {cname}"), check_signature(&sig))?;
                self.eat_sym(";");
                self.expect_word("atoms")?;
                let atoms = self.sentence_list(&sig)?;
                self.eat_sym(";");
                let gamma = if self.eat_word("gamma") {
                    let g = self.sentence_list(&sig)?;
                    self.eat_sym(";");
                    g
                } else {
                    Vec::new()
                };
                self.expect_sym("}")?;
                conditions.push(Condition::new(cname, sig, atoms).with_gamma(gamma));
            } else if self.eat_word("order") {
                loop {
                    let a = self.ident()?;
                    self.expect_sym("<=")?;
                    let b = self.ident()?;
                    raw_pairs.push((a, b));
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            } else {
                return self.soft("`condition`, `order` or `}`");
            }
        }
        let mut pairs = Vec::new();
        for ((a, asp), (b, bsp)) in raw_pairs {
            let find = |n: &str| conditions.iter().position(|c| c.name == n);
            let Some(i) = find(&a) else {
                return self.hard(&asp, format!("unknown condition `{a}`"));
            };
            let Some(j) = find(&b) else {
                return self.hard(&bsp, format!("unknown condition `{b}`"));
            };
            pairs.push((i, j));
        }
        let property = ForcingProperty::new(base, conditions, &pairs);
        self.spec.forcings.insert(
            name,
            super::spec::ForcingDecl {
                sig: sig_name,
                property,
            },
        );
        Ok(())
    }

    fn within(&mut self) -> PResult<SizeBounds> {
        self.expect_word("within")?;
        self.expect_sym("{")?;
        let mut per_sort = Vec::new();
        let mut default = 0;
        if !self.eat_sym("}") {
            loop {
                if self.eat_sym("*") {
                    self.expect_sym("=")?;
                    default = self.num()? as usize;
                } else {
                    let (s, _) = self.ident()?;
                    self.expect_sym("=")?;
                    per_sort.push((s, self.num()? as usize));
                }
                if self.eat_sym("}") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        let mut b = SizeBounds::uniform(default);
        for (s, n) in per_sort {
            b = b.with(s.as_str(), n);
        }
        Ok(b)
    }

    fn name_list(&mut self, close: &str) -> PResult<Vec<String>> {
        let mut out = Vec::new();
        loop {
            out.push(self.ident()?.0);
            if self.eat_sym(close) {
                return Ok(out);
            }
            self.expect_sym(",")?;
        }
    }

    fn decl_proof(&mut self) -> PResult<()> {
        self.bump();
        let (name, sp) = self.ident()?;
        self.decl_name(self.spec.proofs.contains_key(&name), "proof", &name, &sp)?;
        self.expect_word("over")?;
        let (sig_name, sig) = self.sig_ref()?;
        let flavor = if self.eat_word("flavor") {
            let (f, fsp) = self.ident()?;
            match Flavor::parse(&f) {
                Some(f) => f,
                None => return self.hard(&fsp, format!("unknown flavor `{f}`; use plain, ctor or fin")),
            }
        } else {
            Flavor::Plain
        };
        self.expect_sym("{")?;
        let mut steps = Vec::new();
        while !self.eat_sym("}") {
            self.expect_word("step")?;
            let (sname, _) = self.ident()?;
            self.expect_sym("=")?;
            let (rule_name, rsp) = self.ident()?;
            let mut step_sig = (sig_name.clone(), sig.clone());
            let rule = match rule_name.as_str() {
                "mono" => Rule::Monotonicity,
                "trans" => {
                    self.expect_sym("(")?;
                    let a = self.ident()?.0;
                    self.expect_sym(",")?;
                    let b = self.ident()?.0;
                    self.expect_sym(")")?;
                    Rule::Transitivity(a, b)
                }
                "union" => {
                    self.expect_sym("(")?;
                    Rule::Union(self.name_list(")")?)
                }
                "translate" => {
                    self.expect_sym("[")?;
                    let (m, msp) = self.ident()?;
                    self.expect_sym("]")?;
                    let Some(decl) = self.spec.morphisms.get(&m) else {
                        return self.hard(&msp, format!("unknown morphism `{m}`"));
                    };
                    let morphism = decl.morphism.clone();
                    step_sig = (decl.target.clone(), morphism.target().clone());
                    self.expect_sym("(")?;
                    let premise = self.ident()?.0;
                    self.expect_sym(")")?;
                    Rule::Translation { morphism, premise }
                }
                "cb" => {
                    self.expect_sym("[")?;
                    let var = self.ident()?.0;
                    self.expect_sym(",")?;
                    let depth = self.num()? as usize;
                    self.expect_sym("]")?;
                    let bounds = self.within()?;
                    Rule::Cb { var, depth, bounds }
                }
                "fn" => {
                    self.expect_sym("[")?;
                    let mut caps = BTreeMap::new();
                    if !self.eat_sym("]") {
                        loop {
                            let s = self.sort_name(&sig)?;
                            self.expect_sym("=")?;
                            caps.insert(s, self.num()? as usize);
                            if self.eat_sym("]") {
                                break;
                            }
                            self.expect_sym(",")?;
                        }
                    }
                    let bounds = self.within()?;
                    Rule::Fn { caps, bounds }
                }
                "sem" => Rule::Semantic { bounds: self.within()? },
                _ => return self.hard(&rsp, format!("unknown rule `{rule_name}`")),
            };
            self.expect_sym(":")?;
            let lhs = self.sentence_set(&step_sig.0, &step_sig.1)?;
            self.expect_sym("|-")?;
            let rhs = self.sentence_set(&step_sig.0, &step_sig.1)?;
            steps.push(Step {
                name: sname,
                rule,
                lhs,
                rhs,
            });
        }
        self.spec.proofs.insert(
            name,
            super::spec::ProofDecl {
                sig: sig_name,
                derivation: Derivation { sig, flavor, steps },
            },
        );
        Ok(())
    }

    /// `{ item, ... }` where an item is a named sentence (`n` or `T.n`) over
    /// the given signature, or an inline sentence.
    fn sentence_set(&mut self, sig_name: &str, sig: &Signature) -> PResult<Vec<Sentence>> {
        self.expect_sym("{")?;
        let mut out = Vec::new();
        if self.eat_sym("}") {
            return Ok(out);
        }
        loop {
            let ends = |t: &Tok| matches!(t, Tok::Sym(",") | Tok::Sym("}"));
            let named = self.peek_ident().is_some() && ends(self.peek_at(1));
            let qualified = self.peek_ident().is_some()
                && matches!(self.peek_at(1), Tok::Sym("."))
                && matches!(self.peek_at(2), Tok::Ident(_))
                && ends(self.peek_at(3));
            if named || qualified {
                let (n, nsp) = self.ident()?;
                let key = if qualified {
                    self.bump();
                    let (m, _) = self.ident()?;
                    format!("{n}.{m}")
                } else {
                    n
                };
                out.push(self.named_sentence(sig_name, &key, &nsp)?);
            } else {
                let sp = self.span();
                out.push(self.checked_sentence(sig, &[], &sp, "in set")?);
            }
            if self.eat_sym("}") {
                return Ok(out);
            }
            self.expect_sym(",")?;
        }
    }

    fn named_sentence(&self, sig_name: &str, key: &str, sp: &SourceSpan) -> PResult<Sentence> {
        let mut found: Vec<&Sentence> = Vec::new();
        if let Some((t, n)) = key.split_once('.') {
            if let Some(th) = self.spec.theories.get(t) {
                if th.sig == sig_name {
                    found.extend(th.sentences.get(n));
                }
            }
        } else {
            for th in self.spec.theories.values().filter(|t| t.sig == sig_name) {
                found.extend(th.sentences.get(key));
            }
            if let Some(g) = self.spec.goals.get(key) {
                if g.sig == sig_name {
                    found.push(&g.sentence);
                }
            }
        }
        found.sort();
        found.dedup();
        match found.len() {
            1 => Ok(found[0].clone()),
            0 => self.hard(sp, format!("no sentence named `{key}` over `{sig_name}`")),
            _ => self.hard(sp, format!("`{key}` names different sentences; qualify it as `Theory.{key}`")),
        }
    }

    // ---- sentences ----

    fn sentence(&mut self, cx: &mut Ctx) -> PResult<Sentence> {
        let lhs = self.unary(cx)?;
        if self.eat_sym("=>") {
            let rhs = self.sentence(cx)?;
            return Ok(Sentence::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self, cx: &mut Ctx) -> PResult<Sentence> {
        if self.eat_word("not") {
            return Ok(Sentence::not(self.unary(cx)?));
        }
        let universal = self.is_word("forall");
        if universal || self.is_word("exists") {
            self.bump();
            let block = self.variable_block(cx.sig, ".")?;
            cx.depth += 1;
            let block: Vec<Variable> = block.into_iter().map(|v| v.with_qualifier(cx.depth)).collect();
            let n = cx.scope.len();
            cx.scope.extend(block.iter().cloned());
            let body = self.sentence(cx);
            cx.scope.truncate(n);
            cx.depth -= 1;
            let body = body?;
            return Ok(if universal {
                Sentence::forall(block, body)
            } else {
                Sentence::exists(block, body)
            });
        }
        self.primary(cx)
    }

    fn primary(&mut self, cx: &mut Ctx) -> PResult<Sentence> {
        if self.eat_word("true") {
            return Ok(Sentence::verum());
        }
        if self.eat_word("false") {
            return Ok(Sentence::falsum());
        }
        let conj = self.is_word("and");
        if conj || self.is_word("or") {
            self.bump();
            self.expect_sym("{")?;
            let mut items = Vec::new();
            if !self.eat_sym("}") {
                loop {
                    items.push(self.sentence(cx)?);
                    if self.eat_sym("}") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
            return Ok(if conj { Sentence::and(items) } else { Sentence::or(items) });
        }
        if self.is_sym("(") {
            let save = self.pos;
            let first = (|| -> PResult<Sentence> {
                self.bump();
                let s = self.sentence(cx)?;
                self.expect_sym(")")?;
                Ok(s)
            })();
            let e1 = match first {
                Ok(s) => return Ok(s),
                Err(PErr::Hard(e)) => return Err(PErr::Hard(e)),
                Err(e) => e,
            };
            self.pos = save;
            return self.atom(cx).map_err(|e2| further(e1, e2));
        }
        self.atom(cx)
    }

    fn atom(&mut self, cx: &Ctx) -> PResult<Sentence> {
        let save = self.pos;
        let e1 = match self.raw_term() {
            Ok(lhs) => {
                if self.eat_sym("=") {
                    let rhs = self.raw_term()?;
                    return self.make_eq(cx, &lhs, &rhs);
                }
                match self.soft::<()>("`=`") {
                    Err(e) => e,
                    Ok(()) => unreachable!(),
                }
            }
            Err(PErr::Hard(e)) => return Err(PErr::Hard(e)),
            Err(e) => e,
        };
        self.pos = save;
        let act = match self.action() {
            Ok(a) => a,
            Err(e2) => return Err(further(e1, e2)),
        };
        let args = (|| -> PResult<(RawTerm, RawTerm)> {
            self.expect_sym("(")?;
            let t1 = self.raw_term()?;
            self.expect_sym(",")?;
            let t2 = self.raw_term()?;
            self.expect_sym(")")?;
            Ok((t1, t2))
        })();
        let (t1, t2) = args.map_err(|e2| further(e1, e2))?;
        self.make_trans(cx, act, &t1, &t2)
    }

    fn action(&mut self) -> PResult<RawAction> {
        let a = self.seq_action()?;
        if self.eat_sym("|") {
            let b = self.action()?;
            return Ok(RawAction::Union(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn seq_action(&mut self) -> PResult<RawAction> {
        let a = self.postfix_action()?;
        if self.eat_sym(";") {
            let b = self.seq_action()?;
            return Ok(RawAction::Seq(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn postfix_action(&mut self) -> PResult<RawAction> {
        let mut a = if self.eat_sym("(") {
            let a = self.action()?;
            self.expect_sym(")")?;
            a
        } else {
            let (l, sp) = self.ident()?;
            RawAction::Label(l, sp)
        };
        loop {
            if self.eat_sym("*") {
                a = RawAction::Star(Box::new(a));
            } else if self.is_sym("^") {
                let sp = self.span();
                self.bump();
                let n = self.num()?;
                a = RawAction::Power(Box::new(a), n, sp);
            } else {
                return Ok(a);
            }
        }
    }

    fn raw_term(&mut self) -> PResult<RawTerm> {
        let (name, span) = self.ident()?;
        let ann = if self.is_sym(":") && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            Some(self.ident()?.0)
        } else {
            None
        };
        let args = if self.eat_sym("(") {
            let mut args = Vec::new();
            if !self.eat_sym(")") {
                loop {
                    args.push(self.raw_term()?);
                    if self.eat_sym(")") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
            Some(args)
        } else {
            None
        };
        Ok(RawTerm {
            name,
            ann,
            args,
            span: span.to(&self.prev_span()),
        })
    }

    // ---- resolution ----

    fn resolve(&self, cx: &Ctx, t: &RawTerm, expected: Option<&Sort>) -> Vec<Term> {
        if t.args.is_none() {
            if let Some(v) = cx.lookup(&t.name, t.ann.as_deref()) {
                return if expected.is_none_or(|s| *s == v.sort) {
                    vec![Term::Var(v.clone())]
                } else {
                    Vec::new()
                };
            }
        }
        let args: &[RawTerm] = t.args.as_deref().unwrap_or(&[]);
        let mut out = Vec::new();
        for op in cx.sig.ops_named(&t.name) {
            if op.arity().len() != args.len()
                || t.ann.as_deref().is_some_and(|s| op.result().as_str() != s)
                || expected.is_some_and(|s| op.result() != s)
            {
                continue;
            }
            let mut combos: Vec<Vec<Term>> = vec![Vec::new()];
            for (a, s) in args.iter().zip(op.arity()) {
                let cs = self.resolve(cx, a, Some(s));
                let mut next = Vec::new();
                for c in &combos {
                    for x in &cs {
                        if next.len() < 4 {
                            let mut c = c.clone();
                            c.push(x.clone());
                            next.push(c);
                        }
                    }
                }
                combos = next;
            }
            out.extend(combos.into_iter().map(|c| Term::app(op.clone(), c)));
        }
        out
    }

    /// The first subterm whose head names nothing in scope.
    fn unknown_symbol<'t>(&self, cx: &Ctx, t: &'t RawTerm) -> Option<&'t RawTerm> {
        let known = (t.args.is_none() && cx.lookup(&t.name, None).is_some()) || cx.sig.ops_named(&t.name).next().is_some();
        if !known {
            return Some(t);
        }
        t.args.iter().flatten().find_map(|a| self.unknown_symbol(cx, a))
    }

    fn resolve_one(&self, cx: &Ctx, t: &RawTerm, expected: Option<&Sort>) -> PResult<Term> {
        let mut cs = self.resolve(cx, t, expected);
        match cs.len() {
            1 => Ok(cs.pop().expect("one")),
            0 => {
                if let Some(u) = self.unknown_symbol(cx, t) {
                    return self.hard(&u.span, format!("unknown symbol `{}`", u.name));
                }
                match expected {
                    Some(s) => self.hard(&t.span, format!("`{t}` has no reading of sort `{s}`")),
                    None => self.hard(&t.span, format!("`{t}` is ill-sorted")),
                }
            }
            _ => self.hard(&t.span, format!("`{t}` is ambiguous; annotate a symbol as `name:Sort`")),
        }
    }

    fn resolve_pair(&self, cx: &Ctx, l: &RawTerm, r: &RawTerm) -> PResult<(Term, Term)> {
        let ls = self.resolve(cx, l, None);
        let rs = self.resolve(cx, r, None);
        let mut pairs = Vec::new();
        for a in &ls {
            for b in &rs {
                if a.sort() == b.sort() {
                    pairs.push((a.clone(), b.clone()));
                }
            }
        }
        match pairs.len() {
            1 => Ok(pairs.pop().expect("one")),
            0 => {
                if ls.is_empty() {
                    self.resolve_one(cx, l, None)?;
                }
                if rs.is_empty() {
                    self.resolve_one(cx, r, None)?;
                }
                if ls.len() == 1 {
                    self.resolve_one(cx, r, Some(ls[0].sort()))?;
                }
                if rs.len() == 1 {
                    self.resolve_one(cx, l, Some(rs[0].sort()))?;
                }
                self.hard(&l.span.to(&r.span), format!("`{l}` and `{r}` have different sorts"))
            }
            _ => self.hard(
                &l.span.to(&r.span),
                format!("`{l}` and `{r}` are ambiguous; annotate a symbol as `name:Sort`"),
            ),
        }
    }

    fn make_eq(&self, cx: &Ctx, l: &RawTerm, r: &RawTerm) -> PResult<Sentence> {
        let (a, b) = self.resolve_pair(cx, l, r)?;
        Ok(Sentence::eq(a, b))
    }

    fn make_action(&self, cx: &Ctx, a: RawAction) -> PResult<Action> {
        Ok(match a {
            RawAction::Label(l, sp) => {
                let label = Label::new(&l);
                if !cx.sig.has_label(&label) {
                    return self.hard(&sp, format!("unknown label `{l}`"));
                }
                Action::Label(label)
            }
            RawAction::Seq(a, b) => Action::seq(self.make_action(cx, *a)?, self.make_action(cx, *b)?),
            RawAction::Union(a, b) => Action::union(self.make_action(cx, *a)?, self.make_action(cx, *b)?),
            RawAction::Star(a) => Action::star(self.make_action(cx, *a)?),
            RawAction::Power(a, n, sp) => {
                if n == 0 {
                    return self.hard(&sp, "`^0` is only allowed on a whole transition");
                }
                self.make_action(cx, *a)?.power(n as usize)
            }
        })
    }

    fn make_trans(&self, cx: &Ctx, a: RawAction, l: &RawTerm, r: &RawTerm) -> PResult<Sentence> {
        let (t1, t2) = self.resolve_pair(cx, l, r)?;
        if let RawAction::Power(inner, 0, _) = a {
            self.make_action(cx, *inner)?;
            return Ok(Sentence::eq(t1, t2));
        }
        Ok(Sentence::trans(self.make_action(cx, a)?, t1, t2))
    }
}

use ta_core::classes::{check_derivation, is_constructor_based, is_reachable, semantic_entails, EntailConfig, Generation, Verdict};
use ta_core::finmod::{try_satisfies, FiniteModel, SizeBounds};
use ta_core::fixtures::{self, FIXTURES};
use ta_core::forcing::{
    atomic_pool, extend_to_generic, generic_model, validate_generic, Forced, Forcer, ForcingError, ForcingProperty,
    GenericIdeal, SearchBounds,
};
use ta_core::institution::{apply_substitution, reduct_along_substitution, reduct_model, translate_sentence, Flavor};
use ta_core::surface::{check_spec, parse_sentence, parse_spec_named, print_model, print_sentence, print_spec, SpecFile};
use ta_core::testgen::{fuzz_morphisms, fuzz_substitutions, FuzzOutcome, GenConfig};
use ta_core::types::{realizes, search_isolation, IsolationBounds, TypeError};
use ta_core::{Sentence, Signature};

use crate::report::{Report, Status};
use crate::{BoundArgs, Cli, Command, ForceArgs, GenericArgs, SearchArgs};

/// A failure before a verdict: usage, input or resource errors.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type Res<T> = Result<T, Fail>;

pub(crate) fn dispatch(cli: &Cli) -> (Report, Option<String>, String) {
    let verb = verb_name(&cli.command);
    let mut report = Report::new(verb);
    let out = match &cli.command {
        Command::Check { file } => check(&mut report, file),
        Command::Sat { file, model, sentence } => sat(&mut report, file, model, sentence),
        Command::Reduct { file, morphism, model } => reduct(&mut report, file, morphism, model),
        Command::Translate {
            file,
            morphism,
            sentence,
            model,
        } => translate(&mut report, file, morphism, sentence, model.as_deref()),
        Command::Subst {
            file,
            subst,
            sentence,
            model,
        } => substitute(&mut report, file, subst, sentence, model.as_deref()),
        Command::Reachable { file, model } => generation(&mut report, file, model, false),
        Command::CtorBased { file, model } => generation(&mut report, file, model, true),
        Command::Entails {
            file,
            goal,
            theory,
            flavor,
            bounds,
        } => entails(&mut report, cli, file, goal, theory, flavor, bounds),
        Command::CheckProof { file, proof } => check_proof(&mut report, file, proof.as_deref()),
        Command::Realize { file, model, ty } => realize(&mut report, file, model, ty),
        Command::Isolate {
            file,
            ty,
            phi,
            pool,
            max_gamma,
            max_constants,
            bounds,
        } => isolate(&mut report, cli, file, ty, phi.as_deref(), pool.as_deref(), *max_gamma, *max_constants, bounds),
        Command::Force(args) => force(&mut report, cli, args, false),
        Command::Wforce(args) => force(&mut report, cli, args, true),
        Command::GenericExtend(args) => generic(&mut report, cli, args, false),
        Command::GenericModel(args) => generic(&mut report, cli, args, true),
        Command::Fixtures { name, k } => match name {
            Some(name) => {
                return match fixture_text(name, *k) {
                    Ok(text) => (report, Some(text), String::new()),
                    Err(Fail(msg)) => (Report::error(verb, &msg), None, format!("error: {msg}\n")),
                }
            }
            None => list_fixtures(&mut report),
        },
        Command::FuzzSatcond { cases, kind } => fuzz(&mut report, cli.seed, *cases, kind),
    };
    match out {
        Ok(()) => (report, None, String::new()),
        Err(Fail(msg)) => {
            let stderr = format!("{msg}\n");
            (Report::error(verb, msg), None, stderr)
        }
    }
}

fn verb_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Sat { .. } => "sat",
        Command::Reduct { .. } => "reduct",
        Command::Translate { .. } => "translate",
        Command::Subst { .. } => "subst",
        Command::Reachable { .. } => "reachable",
        Command::CtorBased { .. } => "ctor-based",
        Command::Entails { .. } => "entails",
        Command::CheckProof { .. } => "check-proof",
        Command::Realize { .. } => "realize",
        Command::Isolate { .. } => "isolate",
        Command::Force(_) => "force",
        Command::Wforce(_) => "wforce",
        Command::GenericExtend(_) => "generic-extend",
        Command::GenericModel(_) => "generic-model",
        Command::Fixtures { .. } => "fixtures",
        Command::FuzzSatcond { .. } => "fuzz-satcond",
    }
}

fn load(report: &mut Report, file: &str) -> Res<SpecFile> {
    let text = std::fs::read_to_string(file).map_err(|e| Fail(format!("{file}: {e}")))?;
    report.add("file", file);
    Ok(parse_spec_named(&text, file)?)
}

fn signature<'a>(spec: &'a SpecFile, name: &str) -> Res<&'a Signature> {
    spec.signatures.get(name).ok_or_else(|| Fail(format!("unknown signature `{name}`")))
}

fn model<'a>(spec: &'a SpecFile, name: &str) -> Res<(&'a str, &'a FiniteModel)> {
    let d = spec.models.get(name).ok_or_else(|| Fail(format!("unknown model `{name}`")))?;
    Ok((&d.sig, &d.model))
}

/// Resolves sentence arguments against `sig`: `all`, a theory, a goal, a
/// theory entry, or inline sentence text.
fn sentences(spec: &SpecFile, sig: &Signature, names: &[String]) -> Res<Vec<(String, Sentence)>> {
    let fits = |decl_sig: &str| spec.signatures.get(decl_sig).is_some_and(|s| s.is_included_in(sig));
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            for (t, th) in spec.theories.iter().filter(|(_, th)| fits(&th.sig)) {
                out.extend(th.sentences.iter().map(|(n, s)| (format!("{t}.{n}"), s.clone())));
            }
            for (g, goal) in spec.goals.iter().filter(|(_, g)| fits(&g.sig)) {
                out.push((g.clone(), goal.sentence.clone()));
            }
        } else if let Some(th) = spec.theories.get(name).filter(|th| fits(&th.sig)) {
            out.extend(th.sentences.iter().map(|(n, s)| (format!("{name}.{n}"), s.clone())));
        } else if let Some((decl, s)) = spec.sentence(name).filter(|(decl, _)| fits(decl)) {
            let _ = decl;
            out.push((name.clone(), s));
        } else {
            let s = parse_sentence(sig, name).map_err(|e| Fail(format!("`{name}` is no sentence over the signature: {e}")))?;
            out.push((name.clone(), s));
        }
    }
    Ok(out)
}

fn size_bounds(report: &mut Report, b: &BoundArgs) -> Res<SizeBounds> {
    let bounds = SizeBounds::parse(&b.bound, b.default_bound)?;
    report.add("bounds", &bounds);
    Ok(bounds)
}

fn check(report: &mut Report, file: &str) -> Res<()> {
    let spec = load(report, file)?;
    let r = check_spec(&spec, &SearchBounds::default());
    let count = spec.signatures.len()
        + spec.models.len()
        + spec.theories.len()
        + spec.goals.len()
        + spec.morphisms.len()
        + spec.substs.len()
        + spec.types.len()
        + spec.forcings.len()
        + spec.proofs.len();
    report.add("declarations", count);
    for v in r.violations() {
        report.add("violation", format!("{}: {}", v.location, v.message));
    }
    for n in r.notes() {
        report.add("note", n);
    }
    if r.is_empty() {
        report.verdict(Status::Holds, "valid");
    } else {
        report.verdict(Status::Fails, "invalid");
    }
    Ok(())
}

fn sat(report: &mut Report, file: &str, model_name: &str, names: &[String]) -> Res<()> {
    let spec = load(report, file)?;
    let (_, m) = model(&spec, model_name)?;
    report.add("model", model_name);
    let mut all = true;
    for (label, s) in sentences(&spec, m.signature(), names)? {
        let holds = try_satisfies(m, &s)?;
        all &= holds;
        report.add("sentence", format!("{label}: {holds}"));
    }
    if all {
        report.verdict(Status::Holds, "holds");
    } else {
        report.verdict(Status::Fails, "fails");
    }
    Ok(())
}

fn reduct(report: &mut Report, file: &str, morphism: &str, model_name: &str) -> Res<()> {
    let spec = load(report, file)?;
    let d = spec.morphisms.get(morphism).ok_or_else(|| Fail(format!("unknown morphism `{morphism}`")))?;
    let (_, m) = model(&spec, model_name)?;
    if m.signature() != d.morphism.target() {
        return Err(Fail(format!("model `{model_name}` is not over the target of `{morphism}`")));
    }
    let r = reduct_model(&d.morphism, m);
    report.add("reduct", print_model(&format!("{model_name}_reduct"), &d.source, &r));
    report.verdict(Status::Holds, "done");
    Ok(())
}

fn translate(report: &mut Report, file: &str, morphism: &str, names: &[String], model_name: Option<&str>) -> Res<()> {
    let spec = load(report, file)?;
    let d = spec.morphisms.get(morphism).ok_or_else(|| Fail(format!("unknown morphism `{morphism}`")))?;
    let chi = &d.morphism;
    let target_model = match model_name {
        Some(name) => {
            let (_, m) = model(&spec, name)?;
            if m.signature() != chi.target() {
                return Err(Fail(format!("model `{name}` is not over the target of `{morphism}`")));
            }
            Some((m, reduct_model(chi, m)))
        }
        None => None,
    };
    let mut agree = true;
    for (label, s) in sentences(&spec, chi.source(), names)? {
        let t = translate_sentence(chi, &s);
        report.add("translated", format!("{label}: {}", print_sentence(chi.target(), &t)));
        if let Some((m, r)) = &target_model {
            let (a, b) = (try_satisfies(r, &s)?, try_satisfies(m, &t)?);
            agree &= a == b;
            report.add("satisfaction", format!("{label}: reduct {a}, model {b}"));
        }
    }
    if agree {
        report.verdict(Status::Holds, "done");
    } else {
        report.verdict(Status::Fails, "satisfaction-condition-violated");
    }
    Ok(())
}

fn substitute(report: &mut Report, file: &str, name: &str, names: &[String], model_name: Option<&str>) -> Res<()> {
    let spec = load(report, file)?;
    let d = spec.substs.get(name).ok_or_else(|| Fail(format!("unknown substitution `{name}`")))?;
    let theta = &d.subst;
    let (source, target) = (theta.source_signature(), theta.target_signature());
    let target_model = match model_name {
        Some(m_name) => {
            let (_, m) = model(&spec, m_name)?;
            if m.signature() != &target {
                return Err(Fail(format!("model `{m_name}` is not over the target signature of `{name}`")));
            }
            Some((m, reduct_along_substitution(theta, m)?))
        }
        None => None,
    };
    let mut agree = true;
    for (label, s) in sentences(&spec, &source, names)? {
        let t = apply_substitution(theta, &s);
        report.add("substituted", format!("{label}: {}", print_sentence(&target, &t)));
        if let Some((m, r)) = &target_model {
            let (a, b) = (try_satisfies(r, &s)?, try_satisfies(m, &t)?);
            agree &= a == b;
            report.add("satisfaction", format!("{label}: reduct {a}, model {b}"));
        }
    }
    if agree {
        report.verdict(Status::Holds, "done");
    } else {
        report.verdict(Status::Fails, "satisfaction-condition-violated");
    }
    Ok(())
}

fn generation(report: &mut Report, file: &str, model_name: &str, ctor: bool) -> Res<()> {
    let spec = load(report, file)?;
    let (_, m) = model(&spec, model_name)?;
    report.add("model", model_name);
    let g = if ctor { is_constructor_based(m)? } else { is_reachable(m) };
    match g {
        Generation::Generated(certs) => {
            for (sort, terms) in &certs {
                for (i, t) in terms.iter().enumerate() {
                    let text = ta_core::surface::print_term(m.signature(), t);
                    report.add("witness", format!("{sort} {} = {text}", m.carrier(sort)[i]));
                }
            }
            report.verdict(Status::Holds, if ctor { "constructor-based" } else { "reachable" });
        }
        Generation::Missing { sort, element } => {
            report.add("missing", format!("{sort} {element}"));
            report.verdict(Status::Fails, if ctor { "not-constructor-based" } else { "not-reachable" });
        }
    }
    Ok(())
}

fn entails(
    report: &mut Report,
    cli: &Cli,
    file: &str,
    goal: &str,
    theories: &[String],
    flavor: &str,
    bounds: &BoundArgs,
) -> Res<()> {
    let spec = load(report, file)?;
    let flavor = Flavor::parse(flavor).ok_or_else(|| Fail(format!("unknown flavor `{flavor}` (plain, ctor, fin)")))?;
    let (sig_name, phi) = spec.sentence(goal).ok_or_else(|| Fail(format!("unknown goal `{goal}`")))?;
    let sig = signature(&spec, sig_name)?;
    let names: Vec<String> = if theories.is_empty() {
        spec.theories.iter().filter(|(_, t)| t.sig == sig_name).map(|(n, _)| n.clone()).collect()
    } else {
        theories.to_vec()
    };
    let premises: Vec<Sentence> = sentences(&spec, sig, &names)?.into_iter().map(|(_, s)| s).collect();
    report.add("goal", goal).add("flavor", flavor.name());
    for n in &names {
        report.add("theory", n);
    }
    let cfg = EntailConfig {
        bounds: size_bounds(report, bounds)?,
        node_budget: Some(cli.budget),
        iso_pruning: false,
    };
    match semantic_entails(sig, &premises, &phi, flavor, &cfg)? {
        Verdict::HoldsUpToBound(_) => {
            report.verdict(Status::Holds, "holds-up-to-bound");
        }
        Verdict::Counterexample(m) => {
            report.add("size", m.total_size());
            report.add("counterexample", print_model("counterexample", sig_name, &m));
            report.verdict(Status::Fails, "counterexample");
        }
    }
    Ok(())
}

fn check_proof(report: &mut Report, file: &str, only: Option<&str>) -> Res<()> {
    let spec = load(report, file)?;
    if let Some(p) = only {
        if !spec.proofs.contains_key(p) {
            return Err(Fail(format!("unknown proof `{p}`")));
        }
    }
    let mut ok = true;
    for (name, d) in spec.proofs.iter().filter(|(n, _)| only.is_none_or(|p| p == *n)) {
        let r = check_derivation(&d.derivation);
        ok &= r.is_empty();
        report.add("proof", format!("{name}: {} steps, {}", d.derivation.steps.len(), if r.is_empty() { "valid" } else { "invalid" }));
        for v in r.violations() {
            report.add("violation", format!("{name}: {}: {}", v.location, v.message));
        }
        for n in r.notes() {
            report.add("note", format!("{name}: {n}"));
        }
    }
    if ok {
        report.verdict(Status::Holds, "valid");
    } else {
        report.verdict(Status::Fails, "invalid");
    }
    Ok(())
}

fn realize(report: &mut Report, file: &str, model_name: &str, ty: &str) -> Res<()> {
    let spec = load(report, file)?;
    let (_, m) = model(&spec, model_name)?;
    let t = spec.types.get(ty).ok_or_else(|| Fail(format!("unknown type `{ty}`")))?;
    report.add("model", model_name).add("type", ty);
    match realizes(m, &t.ty)? {
        Some(v) => {
            for (x, i) in &v {
                report.add("valuation", format!("{}:{} = {}", x.name, x.sort, m.carrier(&x.sort)[*i]));
            }
            report.verdict(Status::Holds, "realized");
        }
        None => {
            report.verdict(Status::Fails, "omitted");
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn isolate(
    report: &mut Report,
    cli: &Cli,
    file: &str,
    ty: &str,
    phi: Option<&str>,
    pool: Option<&str>,
    max_gamma: usize,
    max_constants: Option<usize>,
    bounds: &BoundArgs,
) -> Res<()> {
    let spec = load(report, file)?;
    let t = spec.types.get(ty).ok_or_else(|| Fail(format!("unknown type `{ty}`")))?;
    report.add("type", ty);
    let premises = match phi {
        Some(name) => {
            report.add("phi", name);
            sentences(&spec, &t.ty.sig, &[name.to_string()])?.into_iter().map(|(_, s)| s).collect()
        }
        None => Vec::new(),
    };
    let pool = match pool {
        Some(name) => {
            let p = spec.types.get(name).ok_or_else(|| Fail(format!("unknown pool type `{name}`")))?;
            if p.ty.block != t.ty.block || p.ty.sig != t.ty.sig {
                return Err(Fail(format!("pool `{name}` is not over the block of `{ty}`")));
            }
            report.add("pool", name);
            p.ty.sentences.clone()
        }
        None => Vec::new(),
    };
    let mut b = IsolationBounds::new(pool, size_bounds(report, bounds)?);
    b.max_gamma = max_gamma;
    b.node_budget = Some(cli.budget);
    if let Some(n) = max_constants {
        b.max_constants = n;
    }
    report.add("max-gamma", max_gamma);
    let found = search_isolation(&premises, &t.ty, &b).map_err(|e| match e {
        TypeError::ResourceLimit(n) => Fail(format!("node budget of {n} exhausted")),
        e => Fail(e.to_string()),
    })?;
    report.add("candidates", found.candidates).add("unsatisfiable", found.unsatisfiable);
    match found.witness {
        Some(w) => {
            for (x, c) in &w.theta {
                report.add("theta", format!("{} := {}", x.name, c.name()));
            }
            for g in &w.gamma {
                report.add("gamma", print_sentence(&w.extended, g));
            }
            report.add("model", print_model("witness", "EXT", &w.model));
            report.verdict(Status::Holds, "isolated");
        }
        None => {
            report.verdict(Status::Fails, "locally-omitted-within-bounds");
        }
    }
    Ok(())
}

fn forcing<'a>(spec: &'a SpecFile, name: &str) -> Res<&'a ForcingProperty> {
    spec.forcings
        .get(name)
        .map(|d| &d.property)
        .ok_or_else(|| Fail(format!("unknown forcing property `{name}`")))
}

fn search_bounds(report: &mut Report, cli: &Cli, s: &SearchArgs) -> SearchBounds {
    report.add("term-depth", s.term_depth).add("star-cap", s.star_cap);
    SearchBounds {
        term_depth: s.term_depth,
        star_cap: s.star_cap,
        node_budget: cli.budget,
        ..SearchBounds::default()
    }
}

fn condition(prop: &ForcingProperty, name: &str) -> Res<usize> {
    prop.index(name).ok_or_else(|| Fail(format!("unknown condition `{name}`")))
}

fn force(report: &mut Report, cli: &Cli, args: &ForceArgs, weak: bool) -> Res<()> {
    let spec = load(report, &args.file)?;
    let prop = forcing(&spec, &args.forcing)?;
    let p = condition(prop, &args.condition)?;
    if args.sentence.is_empty() {
        return Err(Fail("no --sentence given".into()));
    }
    report.add("forcing", &args.forcing).add("condition", &args.condition);
    let bounds = search_bounds(report, cli, &args.search);
    let forcer = Forcer::new(prop, bounds);
    let sig = &prop.condition(p).sig;
    let mut all = true;
    let mut truncated = false;
    for (label, s) in sentences(&spec, sig, &args.sentence)? {
        if !forcer.fits(p, &s) {
            return Err(Fail(format!("`{label}` is not over the signature of `{}`", args.condition)));
        }
        let Forced { holds, truncated: t } = if weak { forcer.weakly_forces(p, &s) } else { forcer.forces(p, &s) };
        all &= holds;
        truncated |= t;
        let mark = if t { " (bounded)" } else { "" };
        report.add("sentence", format!("{label}: {holds}{mark}"));
    }
    if forcer.exhausted() {
        return Err(Fail(format!("node budget of {} exhausted", cli.budget)));
    }
    let (yes, no) = if weak { ("weakly-forced", "not-weakly-forced") } else { ("forced", "not-forced") };
    if truncated {
        report.verdict(Status::Error, "inconclusive");
    } else if all {
        report.verdict(Status::Holds, yes);
    } else {
        report.verdict(Status::Fails, no);
    }
    Ok(())
}

fn describe_ideal(report: &mut Report, prop: &ForcingProperty, g: &GenericIdeal) {
    let names = |xs: &[usize]| xs.iter().map(|&i| prop.condition(i).name.as_str()).collect::<Vec<_>>().join(" ");
    report.add("chain", names(&g.chain)).add("members", names(&g.members));
    for d in &g.decisions {
        let sig = &prop.condition(d.condition).sig;
        let sign = if d.positive { "+" } else { "-" };
        report.add("decided", format!("{sign} {} @ {}", print_sentence(sig, &d.sentence), prop.condition(d.condition).name));
    }
    let union = prop.conditions().iter().fold(prop.base.clone(), |a, c| a.union(&c.sig));
    for s in &g.out_of_signature {
        report.add("outside-signature", print_sentence(&union, s));
    }
}

fn generic(report: &mut Report, cli: &Cli, args: &GenericArgs, build_model: bool) -> Res<()> {
    let spec = load(report, &args.file)?;
    let prop = forcing(&spec, &args.forcing)?;
    report.add("forcing", &args.forcing);
    let bounds = search_bounds(report, cli, &args.search);
    let forcer = Forcer::new(prop, bounds);
    let pool = match &args.pool {
        Some(name) => {
            report.add("pool", name);
            let union = prop.conditions().iter().fold(prop.base.clone(), |a, c| a.union(&c.sig));
            sentences(&spec, &union, std::slice::from_ref(name))?.into_iter().map(|(_, s)| s).collect()
        }
        None => atomic_pool(&forcer),
    };
    report.add("pool-size", pool.len());
    if let Some(list) = &args.members {
        let members = list
            .split(',')
            .map(|n| condition(prop, n.trim()))
            .collect::<Res<Vec<usize>>>()?;
        return match validate_generic(&forcer, &members, &pool) {
            Ok(()) => {
                report.verdict(Status::Holds, "generic");
                Ok(())
            }
            Err(ForcingError::ResourceLimit(n)) => Err(Fail(format!("node budget of {n} exhausted"))),
            Err(e) => {
                report.add("reason", e);
                report.verdict(Status::Fails, "not-generic");
                Ok(())
            }
        };
    }
    let start = match &args.condition {
        Some(name) => condition(prop, name)?,
        None => prop.bottom().ok_or_else(|| Fail("the property has no least condition; pass --condition".into()))?,
    };
    let g = match extend_to_generic(&forcer, start, &pool) {
        Ok(g) => g,
        Err(ForcingError::DirectednessFailure(a, b)) => {
            report.add("reason", ForcingError::DirectednessFailure(a, b));
            report.verdict(Status::Fails, "not-generic");
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    describe_ideal(report, prop, &g);
    if !build_model {
        report.verdict(
            if g.truncated { Status::Error } else { Status::Holds },
            if g.truncated { "inconclusive" } else { "generic" },
        );
        return Ok(());
    }
    let mut m = generic_model(&forcer, &g)?;
    let sig = m.signature().clone();
    for (sort, classes) in m.elements() {
        for class in classes {
            let terms: Vec<String> = class.iter().map(|t| ta_core::surface::print_term(&sig, t)).collect();
            report.add("element", format!("{sort} {{{}}}", terms.join(", ")));
        }
    }
    for (label, pairs) in m.transitions().clone() {
        for (a, b) in pairs {
            report.add(
                "transition",
                format!("{label}: {} -> {}", ta_core::surface::print_term(&sig, &a), ta_core::surface::print_term(&sig, &b)),
            );
        }
    }
    let mut adequate = 0;
    for d in &g.decisions {
        if m.satisfies(&d.sentence)? == d.positive {
            adequate += 1;
        } else {
            report.add("inadequate", print_sentence(&sig, &d.sentence));
        }
    }
    report.add("adequate", format!("{adequate}/{}", g.decisions.len()));
    if let Some((a, b)) = m.congruence_violation() {
        report.add(
            "congruence-violation",
            format!("{} ~ {}", ta_core::surface::print_term(&sig, &a), ta_core::surface::print_term(&sig, &b)),
        );
    }
    if g.truncated {
        report.verdict(Status::Error, "inconclusive");
    } else if adequate == g.decisions.len() && m.congruence_violation().is_none() {
        report.verdict(Status::Holds, "adequate");
    } else {
        report.verdict(Status::Fails, "inadequate");
    }
    Ok(())
}

fn fixture_text(name: &str, k: Option<usize>) -> Res<String> {
    let spec = fixtures::spec(name, k)?;
    let &(_, default, about) = FIXTURES.iter().find(|(n, ..)| *n == name).expect("spec() accepted it");
    let mut out = format!("-- fixture {name}: {about}\n");
    if let Some(k) = k.or(default) {
        out.push_str(&format!("-- truncation k = {k}\n"));
    }
    out.push_str(&print_spec(&spec));
    Ok(out)
}

fn list_fixtures(report: &mut Report) -> Res<()> {
    for (name, default, about) in FIXTURES {
        let k = default.map_or("-".to_string(), |k| k.to_string());
        report.add("fixture", format!("{name} k={k}: {about}"));
    }
    report.verdict(Status::Holds, "listed");
    Ok(())
}

fn fuzz(report: &mut Report, seed: u64, cases: usize, kind: &str) -> Res<()> {
    let kinds: &[&str] = match kind {
        "both" => &["morphism", "subst"],
        "morphism" => &["morphism"],
        "subst" => &["subst"],
        _ => return Err(Fail(format!("unknown kind `{kind}` (morphism, subst, both)"))),
    };
    report.add("seed", seed).add("cases", cases);
    let cfg = GenConfig::default();
    let mut ok = true;
    for k in kinds {
        let out: FuzzOutcome = if *k == "morphism" {
            fuzz_morphisms(seed, cases, &cfg)
        } else {
            fuzz_substitutions(seed, cases, &cfg)
        };
        ok &= out.all_agree();
        report.add(
            k,
            format!(
                "{}/{} agree, {} with an empty carrier, {} with a star",
                out.agreements, out.cases, out.empty_carrier_cases, out.star_cases
            ),
        );
        for f in &out.failures {
            report.add("failure", f);
        }
    }
    if ok {
        report.verdict(Status::Holds, "holds");
    } else {
        report.verdict(Status::Fails, "fails");
    }
    Ok(())
}

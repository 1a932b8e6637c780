//! The `ta` command-line front end.
//!
//! Every verb produces a [`Report`]; [`run`] renders it and returns the
//! exit status (0 holds, 1 counterexample or violation, 2 usage or
//! resource error).

mod commands;
mod report;

use clap::{Args, Parser, Subcommand};

pub use report::{Report, Status, SCHEMA};

#[derive(Parser, Debug)]
#[command(name = "ta", version, about = "Transition-algebra specifications: checking, bounded search and forcing")]
pub struct Cli {
    /// Seed for randomized verbs; `TA_SEED` overrides it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Render the report for people instead of as key/value lines.
    #[arg(long, global = true)]
    pub human: bool,
    /// Node budget for bounded searches.
    #[arg(long, global = true, default_value_t = 50_000_000)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a file and check every declaration.
    Check { file: String },
    /// Evaluate sentences in a model.
    Sat {
        file: String,
        #[arg(long)]
        model: String,
        /// A sentence name, `THEORY.name`, a theory, inline text, or `all`.
        #[arg(long, default_value = "all")]
        sentence: Vec<String>,
    },
    /// Reduct of a model along a morphism.
    Reduct {
        file: String,
        #[arg(long)]
        morphism: String,
        #[arg(long)]
        model: String,
    },
    /// Translate sentences along a morphism.
    Translate {
        file: String,
        #[arg(long)]
        morphism: String,
        #[arg(long, default_value = "all")]
        sentence: Vec<String>,
        /// Also check the satisfaction condition against this target model.
        #[arg(long)]
        model: Option<String>,
    },
    /// Apply a substitution to sentences.
    Subst {
        file: String,
        #[arg(long)]
        subst: String,
        #[arg(long)]
        sentence: Vec<String>,
        /// A model over the target signature, for the satisfaction condition.
        #[arg(long)]
        model: Option<String>,
    },
    /// Is every element the value of a ground term?
    Reachable {
        file: String,
        #[arg(long)]
        model: String,
    },
    /// Is the model generated by its constructors over the loose sorts?
    CtorBased {
        file: String,
        #[arg(long)]
        model: String,
    },
    /// Bounded semantic entailment.
    Entails {
        file: String,
        #[arg(long)]
        goal: String,
        /// Premise theories; all theories over the goal's signature by default.
        #[arg(long)]
        theory: Vec<String>,
        #[arg(long, default_value = "plain")]
        flavor: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Check proof trees against the rule schemas.
    CheckProof {
        file: String,
        #[arg(long)]
        proof: Option<String>,
    },
    /// Does the model realize the type?
    Realize {
        file: String,
        #[arg(long)]
        model: String,
        #[arg(long = "type")]
        ty: String,
    },
    /// Bounded search for an isolation of a type by a theory.
    Isolate {
        file: String,
        #[arg(long = "type")]
        ty: String,
        /// Theory the isolation is relative to; empty by default.
        #[arg(long)]
        phi: Option<String>,
        /// A type over the same block whose sentences are the candidate pool.
        #[arg(long)]
        pool: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_gamma: usize,
        #[arg(long)]
        max_constants: Option<usize>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Does a condition force a sentence?
    Force(ForceArgs),
    /// Does a condition weakly force a sentence?
    Wforce(ForceArgs),
    /// Extend a condition to a generic ideal deciding a pool.
    GenericExtend(GenericArgs),
    /// Build the generic model of the ideal through a condition.
    GenericModel(GenericArgs),
    /// List the built-in fixtures, or print one as a `.ta` file.
    Fixtures {
        name: Option<String>,
        /// Truncation parameter.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Random satisfaction-condition campaign for morphisms and substitutions.
    FuzzSatcond {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// morphism, subst or both.
        #[arg(long, default_value = "both")]
        kind: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct BoundArgs {
    /// Per-sort carrier bounds, `S=k,T=m`.
    #[arg(long, default_value = "")]
    pub bound: String,
    /// Carrier bound for sorts not listed in `--bound`.
    #[arg(long, default_value_t = 3)]
    pub default_bound: usize,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Deepest ground term tried as a witness.
    #[arg(long, default_value_t = 1)]
    pub term_depth: usize,
    /// Largest power tried when unfolding a star.
    #[arg(long, default_value_t = 8)]
    pub star_cap: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ForceArgs {
    pub file: String,
    #[arg(long)]
    pub forcing: String,
    #[arg(long)]
    pub condition: String,
    #[arg(long)]
    pub sentence: Vec<String>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GenericArgs {
    pub file: String,
    #[arg(long)]
    pub forcing: String,
    /// Start condition; the least one by default.
    #[arg(long)]
    pub condition: Option<String>,
    /// Theory of sentences to decide; all atoms over the conditions by default.
    #[arg(long)]
    pub pool: Option<String>,
    /// Check this comma-separated set of conditions instead of building one.
    #[arg(long)]
    pub members: Option<String>,
    #[command(flatten)]
    pub search: SearchArgs,
}

/// Output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs `ta` on `args` (including the program name). `env_seed` is the value
/// of `TA_SEED`, if set.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let mut cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Some(s) = env_seed {
        match s.trim().parse() {
            Ok(seed) => cli.seed = seed,
            Err(_) => {
                return Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error: TA_SEED must be an unsigned integer, got `{s}`\n"),
                }
            }
        }
    }
    let (report, raw, stderr) = commands::dispatch(&cli);
    let stdout = match raw {
        Some(text) => text,
        None if cli.human => report.render_human(),
        None => report.render(),
    };
    Outcome {
        code: report.status.code(),
        stdout,
        stderr,
    }
}

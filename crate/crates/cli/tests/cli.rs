use std::path::PathBuf;
use std::process::Command;

use ta_cli::{run, Outcome};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", &format!("{name}.ta")].iter().collect();
    p.to_string_lossy().into_owned()
}

fn ta(args: &[&str]) -> Outcome {
    let mut argv = vec!["ta"];
    argv.extend_from_slice(args);
    run(argv, None)
}

fn line<'a>(out: &'a Outcome, key: &str) -> Vec<&'a str> {
    let prefix = format!("{key}: ");
    out.stdout.lines().filter_map(|l| l.strip_prefix(prefix.as_str())).collect()
}

#[test]
fn shipped_fixtures_are_current() {
    for name in ["list", "list-saturated", "uls", "example28", "inf", "tf", "forcing"] {
        let out = ta(&["fixtures", name]);
        assert_eq!(out.code, 0);
        let shipped = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(out.stdout, shipped, "fixtures/{name}.ta is stale");
        let check = ta(&["check", &fixture(name)]);
        assert_eq!(check.code, 0, "{}", check.stdout);
    }
}

#[test]
fn uls_model_satisfies_gamma() {
    let out = ta(&["sat", &fixture("uls"), "--model", "M", "--sentence", "all"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(line(&out, "sentence").len(), 4);
    assert!(line(&out, "sentence").iter().all(|l| l.ends_with("true")));
}

#[test]
fn plain_entailment_of_associativity_fails() {
    let out = ta(&["entails", &fixture("list"), "--flavor", "plain", "--goal", "assoc", "--bound", "List=6,Elt=1"]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert_eq!(line(&out, "verdict"), ["counterexample"]);
    assert!(out.stdout.contains("counterexample: model counterexample over LIST {"));

    // the quotient model from the fixture is a counterexample too
    let out = ta(&["sat", &fixture("list"), "--model", "B", "--sentence", "PHI", "--sentence", "assoc"]);
    assert_eq!(out.code, 1);
    assert_eq!(line(&out, "sentence"), ["PHI.add_empty: true", "PHI.add_cons: true", "assoc: false"]);

    let out = ta(&["entails", &fixture("list"), "--flavor", "ctor", "--goal", "assoc", "--bound", "List=3,Elt=1"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(line(&out, "verdict"), ["holds-up-to-bound"]);
}

#[test]
fn empty_file_checks() {
    let dir = std::env::temp_dir().join(format!("ta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.ta");
    std::fs::write(&empty, "").unwrap();
    let out = ta(&["check", empty.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert_eq!(line(&out, "declarations"), ["0"]);
    assert!(line(&out, "violation").is_empty());

    let bad = dir.join("bad.ta");
    std::fs::write(&bad, "sig S { sorts s }\ngoal g over S : forall x:t . x = x\n").unwrap();
    let out = ta(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert_eq!(out.stderr, format!("{}:2:26: unknown sort `t`\n", bad.display()));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ta(&["sat", &fixture("uls"), "--model", "M", "--bogus"]).code, 2);
    assert_eq!(ta(&["frobnicate"]).code, 2);
    assert_eq!(ta(&[]).code, 2);
    let out = ta(&["sat", &fixture("uls"), "--model", "Nope"]);
    assert_eq!(out.code, 2);
    assert_eq!(line(&out, "error"), ["unknown model `Nope`"]);
    assert_eq!(ta(&["entails", &fixture("list"), "--goal", "assoc", "--flavor", "odd"]).code, 2);
    assert_eq!(ta(&["fixtures", "nope"]).code, 2);
    assert_eq!(ta(&["fixtures", "forcing", "--k", "2"]).code, 2);
    assert_eq!(ta(&["--help"]).code, 0);
}

#[test]
fn budgets_exhausted_exit_two() {
    let out = ta(&["--budget", "10", "entails", &fixture("list"), "--goal", "assoc", "--flavor", "ctor", "--bound", "List=3,Elt=1"]);
    assert_eq!(out.code, 2, "{}", out.stdout);
    assert_eq!(line(&out, "verdict"), ["error"]);
}

#[test]
fn classes_and_types() {
    let list = fixture("list");
    assert_eq!(ta(&["ctor-based", &list, "--model", "C"]).code, 0);
    let out = ta(&["ctor-based", &list, "--model", "B"]);
    assert_eq!((out.code, line(&out, "missing")), (1, vec!["List N0"]));
    assert_eq!(ta(&["reachable", &fixture("uls"), "--model", "M"]).code, 0);
    // Elt has no ground terms
    assert_eq!(ta(&["reachable", &list, "--model", "C"]).code, 1);

    let out = ta(&["realize", &list, "--model", "B", "--type", "TC"]);
    assert_eq!((out.code, line(&out, "valuation")), (0, vec!["x:List = N0"]));
    assert_eq!(ta(&["realize", &list, "--model", "C", "--type", "TC"]).code, 1);
    assert_eq!(ta(&["check-proof", &list]).code, 0);

    let out = ta(&["isolate", &fixture("inf"), "--type", "T", "--phi", "PHI", "--pool", "POOL", "--bound", "s1=4", "--default-bound", "1"]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert_eq!(line(&out, "candidates"), ["11"]);
}

#[test]
fn institution_verbs() {
    let list = fixture("list");
    let out = ta(&["subst", &list, "--subst", "theta", "--sentence", "add(a, a) = a", "--model", "C"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(
        line(&out, "substituted"),
        ["add(a, a) = a: add(add(empty, empty), add(empty, empty)) = add(empty, empty)"]
    );
    let out = ta(&["translate", &list, "--morphism", "id", "--model", "B"]);
    assert_eq!(out.code, 0);
    assert_eq!(line(&out, "satisfaction").len(), 3);
    assert!(ta(&["reduct", &list, "--morphism", "id", "--model", "B"]).stdout.contains("reduct: model B_reduct over LIST {"));
}

#[test]
fn forcing_verbs() {
    let f = fixture("forcing");
    let args = |verb: &'static str, p: &'static str, s: &'static str| vec![verb, f.as_str(), "--forcing", "D", "--condition", p, "--sentence", s];
    assert_eq!(ta(&args("force", "a", "lambda(c, d)")).code, 0);
    assert_eq!(ta(&args("force", "z", "lambda(c, d)")).code, 1);
    assert_eq!(ta(&args("force", "z", "not lambda(c, d)")).code, 1);
    assert_eq!(ta(&args("force", "z", "not lambda(d, c)")).code, 0);
    assert_eq!(ta(&args("wforce", "z", "lambda(c, d)")).code, 0);
    assert_eq!(ta(&args("wforce", "z", "lambda(c, c)")).code, 1);
    // a star capped below the path length is inconclusive, not false
    let mut capped = args("force", "t", "lambda*(c, k)");
    assert_eq!(ta(&capped).code, 0);
    capped.extend(["--star-cap", "1"]);
    let out = ta(&capped);
    assert_eq!((out.code, line(&out, "verdict")), (2, vec!["inconclusive"]));
    // k is not a constant of a
    assert_eq!(ta(&args("force", "a", "lambda(d, k)")).code, 2);

    let out = ta(&["generic-model", &f, "--forcing", "D"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(line(&out, "members"), ["z a"]);
    assert_eq!(line(&out, "transition"), ["lambda: c -> d"]);
    let out = ta(&["generic-model", &f, "--forcing", "D", "--condition", "b"]);
    assert_eq!(line(&out, "chain"), ["b t"]);
    assert_eq!(line(&out, "members"), ["z a b t"]);
    assert_eq!(line(&out, "transition").len(), 2);

    let out = ta(&["generic-extend", &f, "--forcing", "D", "--members", "z,a,b"]);
    assert_eq!(out.code, 1);
    assert_eq!(line(&out, "reason"), ["directedness fails: a and b have no common upper bound in the set"]);
    assert_eq!(ta(&["generic-extend", &f, "--forcing", "D", "--members", "z,a,b,t"]).code, 0);
}

#[test]
fn seeds_and_determinism() {
    let out = ta(&["fuzz-satcond", "--cases", "50", "--seed", "3"]);
    assert_eq!(out.code, 0);
    assert_eq!(line(&out, "seed"), ["3"]);
    let env = run(["ta", "fuzz-satcond", "--cases", "50", "--seed", "3"], Some("9"));
    assert_eq!(line(&env, "seed"), ["9"]);
    assert_ne!(env.stdout, out.stdout);
    assert_eq!(run(["ta", "fuzz-satcond", "--cases", "50"], Some("9")).stdout, env.stdout);
    assert_eq!(run(["ta", "check", "x"], Some("nine")).code, 2);

    let human = ta(&["--human", "sat", &fixture("uls"), "--model", "M"]);
    assert!(human.stdout.starts_with("HOLDS\n"));
    assert_eq!(human.code, 0);
}

#[test]
fn binary_matches_library() {
    let bin = env!("CARGO_BIN_EXE_ta");
    let args = ["sat", &fixture("list"), "--model", "B", "--sentence", "all"];
    let out = Command::new(bin).args(args).env_remove("TA_SEED").output().unwrap();
    let lib = ta(&args);
    assert_eq!(out.status.code(), Some(lib.code));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);

    let seeded = Command::new(bin).args(["fuzz-satcond", "--cases", "20"]).env("TA_SEED", "5").output().unwrap();
    assert!(String::from_utf8(seeded.stdout).unwrap().contains("seed: 5\n"));
}

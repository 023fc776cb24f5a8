mod support;

use std::collections::BTreeMap;

use support::{check_goldens, golden_dir, run_bin, spec_path};

#[test]
fn golden_corpus_matches() {
    let failures: Vec<String> = check_goldens()
        .into_iter()
        .filter_map(|(name, r)| r.err().map(|e| format!("{name}: {e}")))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

#[test]
fn golden_corpus_covers_every_command() {
    let cases = support::golden_cases();
    let commands = [
        "chow build", "chow nf", "chow betti", "fib classes", "fib exists", "fib search", "iso multi", "iso sym",
        "sym invariants", "aut multi", "aut sym", "check lemma-alg",
    ];
    for cmd in commands {
        let words: Vec<&str> = cmd.split(' ').collect();
        for format in ["json", "text"] {
            let hit = cases.iter().any(|c| {
                c.args.len() >= 2
                    && c.args[0] == words[0]
                    && c.args[1] == words[1]
                    && (c.args.iter().any(|a| a == "json") == (format == "json"))
            });
            assert!(hit, "no {format} golden case for `{cmd}`");
        }
    }
}

fn code(args: &[&str]) -> i32 {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    run_bin(&args, &BTreeMap::new()).code
}

#[test]
fn exit_codes() {
    let f1 = spec_path("f1");
    assert_eq!(code(&["chow", "betti", "--spec", &f1]), 0);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["chow", "frob"]), 2);
    assert_eq!(code(&["chow", "nf", "--spec", &f1, "--expr", "u1 +"]), 2);
    assert_eq!(code(&["fib", "classes", "--spec", &f1, "--bound", "-1"]), 2);
    let missing = golden_dir().join("specs").join("missing.json").display().to_string();
    assert_eq!(code(&["chow", "betti", "--spec", &missing]), 2);
    let bad = golden_dir().join("bad");
    for (file, want) in [
        ("tangent_p1", 3),
        ("rank_one", 3),
        ("unknown_key", 3),
        ("mult_length", 3),
        ("truncated", 2),
        ("not_json", 2),
    ] {
        let p = bad.join(format!("{file}.json")).display().to_string();
        assert_eq!(code(&["chow", "betti", "--spec", &p]), want, "{file}");
    }
    let big = spec_path("big");
    let env = BTreeMap::from([("BUNDLECHOW_MAX_BASIS".to_string(), "63".to_string())]);
    let args: Vec<String> = ["chow", "betti", "--spec", &big].iter().map(|s| s.to_string()).collect();
    assert_eq!(run_bin(&args, &env).code, 4);
    let env = BTreeMap::from([("BUNDLECHOW_MAX_BASIS".to_string(), "lots".to_string())]);
    assert_eq!(run_bin(&args, &env).code, 2);
    assert_eq!(run_bin(&args, &BTreeMap::new()).code, 0);
}

#[test]
fn output_is_deterministic() {
    let args: Vec<String> = ["check", "lemma-alg", "--random", "40", "--seed", "11", "--format", "json"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let a = run_bin(&args, &BTreeMap::new());
    let b = run_bin(&args, &BTreeMap::new());
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

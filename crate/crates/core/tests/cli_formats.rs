mod support;

use bundlechow::cli::{ExistsPayload, VerdictPayload};
use bundlechow::run_command;
use support::spec_path;

const SPECS: [&str; 12] = [
    "p1xp1", "f1", "f1_shift", "f2", "flag", "p2xp2", "p2xp1", "e013", "e568", "a", "b", "mixed",
];

fn run(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["bundlechow"];
    argv.extend_from_slice(args);
    let r = run_command(argv);
    (r.exit_code, r.payload)
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
}

fn ints(s: &str) -> Vec<i64> {
    let inner = s.trim_start_matches('[').trim_end_matches(']');
    if inner.is_empty() {
        return Vec::new();
    }
    inner.split(',').map(|x| x.parse().unwrap()).collect()
}

fn assert_same_verdict(text: &str, json: &str, label: &str) {
    let verdict: VerdictPayload = serde_json::from_str(json).unwrap_or_else(|e| panic!("{label}: {e}"));
    match verdict {
        VerdictPayload::Isomorphic { certificate } => {
            assert_eq!(text.lines().next(), Some("isomorphic"), "{label}");
            let sigma: Vec<usize> = ints(field(text, "sigma").unwrap()).into_iter().map(|x| x as usize).collect();
            assert_eq!(sigma, certificate.sigma, "{label}");
            assert_eq!(ints(field(text, "shifts").unwrap()), certificate.shifts, "{label}");
        }
        VerdictPayload::NotIsomorphic { obstruction } => {
            assert_eq!(text.lines().next(), Some("not isomorphic"), "{label}");
            assert_eq!(field(text, "reason"), Some(obstruction.reason.to_string().as_str()), "{label}");
            assert_eq!(field(text, "detail"), Some(obstruction.detail.as_str()), "{label}");
        }
    }
}

#[test]
fn multi_verdicts_agree_across_formats() {
    let mut pairs = 0;
    let (mut iso, mut non) = (0, 0);
    for l in SPECS {
        for r in SPECS {
            let (lp, rp) = (spec_path(l), spec_path(r));
            let (c1, text) = run(&["iso", "multi", "--left", &lp, "--right", &rp]);
            let (c2, json) = run(&["iso", "multi", "--left", &lp, "--right", &rp, "--format", "json"]);
            assert_eq!((c1, c2), (0, 0), "{l} vs {r}");
            assert_same_verdict(&text, &json, &format!("{l} vs {r}"));
            if text.starts_with("isomorphic") {
                iso += 1;
            } else {
                non += 1;
            }
            pairs += 1;
        }
    }
    assert!(pairs >= 20);
    assert!(iso >= 12 && non >= 20, "{iso} isomorphic, {non} not");
}

#[test]
fn sym_verdicts_agree_across_formats() {
    let specs = ["e013", "e568", "e001", "e011", "p2xp2", "tan3", "p3xp3"];
    let mut pairs = 0;
    for l in specs {
        for r in specs {
            for (rr, ss) in [("2", "2"), ("2", "3"), ("3", "3")] {
                let (lp, rp) = (spec_path(l), spec_path(r));
                let (c1, text) = run(&["iso", "sym", "--left", &lp, "--r", rr, "--right", &rp, "--s", ss]);
                let (c2, json) =
                    run(&["iso", "sym", "--left", &lp, "--r", rr, "--right", &rp, "--s", ss, "--format", "json"]);
                assert_eq!((c1, c2), (0, 0), "{l} vs {r}");
                assert_same_verdict(&text, &json, &format!("S^{rr} {l} vs S^{ss} {r}"));
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 20);
}

#[test]
fn exists_agrees_across_formats() {
    for s in SPECS.iter().chain(&["tan_triv", "f1_sq", "mixed_swap", "tan3"]) {
        let p = spec_path(s);
        let (_, text) = run(&["fib", "exists", "--spec", &p]);
        let (_, json) = run(&["fib", "exists", "--spec", &p, "--format", "json"]);
        let e: ExistsPayload = serde_json::from_str(&json).unwrap();
        assert_eq!(text.trim_end(), format!("{} ({})", e.exists, e.case), "{s}");
    }
}

#[test]
fn error_payloads_are_json_in_json_mode() {
    let bad = support::golden_dir().join("bad").join("rank_one.json").display().to_string();
    let (code, json) = run(&["chow", "betti", "--spec", &bad, "--format", "json"]);
    assert_eq!(code, 3);
    let e: bundlechow::cli::ErrorPayload = serde_json::from_str(&json).unwrap();
    assert_eq!(e.exit_code, 3);
}

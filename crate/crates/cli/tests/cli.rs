use std::io::Write;
use std::process::{Command, Output, Stdio};

use dyckstream::format::chars2;
use dyckstream::metrics::parse_record;
use dyckstream::word::oracle_check;

fn dyck(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dyck"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn oracle_accepts_a_single_pair() {
    let o = dyck(&["check", "--algo", "oracle"], "()");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "accept\n");
}

#[test]
fn one_pass_reports_mismatch() {
    let o = dyck(&["check", "--algo", "onepass"], "(]");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("mismatched"), "{}", stderr(&o));
}

#[test]
fn two_pass_reduces_larger_alphabets() {
    let o = dyck(&["check", "--algo", "twopass", "--s", "4", "--format", "tokens"], "+3 \u{2212}3");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = dyck(&["check", "--algo", "twopass", "--s", "4", "--format", "tokens"], "+3 -4");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn every_algorithm_agrees_on_files_and_stdin() {
    let cases = ["", "()", "([])[]", "(]", ")(", "((", "([)]", "((][))", "[[]](()[])"];
    for word in cases {
        let expected = if oracle_check(chars2(word).unwrap().letters()).accepted() { 0 } else { 1 };
        let f = file(word);
        for algo in ["oracle", "onepass", "twopass"] {
            for seed in ["0", "9"] {
                let o = dyck(&["check", "--algo", algo, "--seed", seed, f.path().to_str().unwrap()], "");
                assert_eq!(o.status.code(), Some(expected), "{algo} {word:?}: {}", stderr(&o));
                let o = dyck(&["check", "--algo", algo, "--seed", seed, "-"], word);
                assert_eq!(o.status.code(), Some(expected), "{algo} stdin {word:?}: {}", stderr(&o));
            }
        }
    }
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(dyck(&["check"], "(x)").status.code(), Some(2));
    assert_eq!(dyck(&["check", "--format", "tokens", "--s", "2"], "+3 -3").status.code(), Some(2));
    assert_eq!(dyck(&["check", "--algo", "nope"], "()").status.code(), Some(2));
    assert_eq!(dyck(&["check", "/no/such/file"], "").status.code(), Some(2));
    assert_eq!(dyck(&["check", "--mode", "fixed_prime", "--c", "0"], "()").status.code(), Some(2));
    assert_eq!(dyck(&["gen", "ascension", "--m", "2", "--n", "4", "--fault", "3"], "").status.code(), Some(2));
    assert_eq!(dyck(&["gen", "mutate", "-"], "(]").status.code(), Some(2));
    assert_eq!(dyck(&["bench", "--sizes", "7"], "").status.code(), Some(2));
    assert_eq!(dyck(&[], "").status.code(), Some(2));
}

#[test]
fn metrics_record_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    let f = file("# label=member\n([()])\n[]\n");
    for algo in ["onepass", "twopass"] {
        let o = dyck(&["check", "--algo", algo, "--metrics", path.to_str().unwrap(), f.path().to_str().unwrap()], "");
        assert_eq!(o.status.code(), Some(0));
    }
    let o = dyck(&["check", "--algo", "twopass", "--metrics", path.to_str().unwrap()], "([()])[]");
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let records: Vec<_> = text.lines().map(|l| parse_record(l).unwrap()).collect();
    assert_eq!(records.len(), 3);
    assert_eq!(records[0]["algo"], "onepass");
    assert_eq!(records[0]["n"], "8");
    assert_eq!(records[1]["pass_count"], "2");
    assert_eq!(records[1]["buffered_reverse"], "false");
    assert_eq!(records[2]["buffered_reverse"], "true");
    assert!(records.iter().all(|r| r["verdict"] == "accept"));
}

#[test]
fn gen_dyck_single_pair() {
    let o = dyck(&["gen", "dyck", "--pairs", "1", "--seed", "0"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let body: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert!(body == ["()"] || body == ["[]"], "{body:?}");
    assert!(out.starts_with("# label=member\n"));
}

#[test]
fn gen_ascension_fault_is_rejected() {
    let o = dyck(&["gen", "ascension", "--m", "2", "--n", "4", "--seed", "7", "--fault", "1"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("# label=nonmember\n"), "{out}");
    assert!(out.contains("# instance m=2 n=4 "));
    for algo in ["oracle", "onepass", "twopass"] {
        assert_eq!(dyck(&["check", "--algo", algo], &out).status.code(), Some(1), "{algo}");
    }
    let o = dyck(&["gen", "ascension", "--m", "2", "--n", "4", "--seed", "7"], "");
    assert!(stdout(&o).starts_with("# label=member\n"));
    assert_eq!(dyck(&["check", "--algo", "twopass"], &stdout(&o)).status.code(), Some(0));
}

#[test]
fn gen_mountain_labels_match_the_oracle() {
    // x = 0xb = b a b b; position n-k+1 = 3 holds b.
    for (c, label, code) in [("b", "member", 0), ("a", "nonmember", 1)] {
        let o = dyck(&["gen", "mountain", "--n", "4", "--k", "2", "--c", c, "--x", "b"], "");
        let out = stdout(&o);
        assert!(out.starts_with(&format!("# label={label}\n")), "{out}");
        assert!(out.contains("x=babb k=2"), "{out}");
        assert_eq!(dyck(&["check", "--algo", "oracle"], &out).status.code(), Some(code));
    }
    let o = dyck(&["gen", "mountain", "--n", "8", "--k", "3", "--c", "a", "--seed", "4"], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(dyck(&["gen", "mountain", "--n", "4", "--k", "2", "--c", "a"], "").status.code(), Some(2));
}

#[test]
fn gen_mutate_yields_a_non_member() {
    let member = stdout(&dyck(&["gen", "dyck", "--pairs", "50", "--seed", "3"], ""));
    for seed in ["0", "1", "2"] {
        let o = dyck(&["gen", "mutate", "-", "--seed", seed], &member);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let out = stdout(&o);
        assert!(out.starts_with("# label=nonmember\n"));
        assert_eq!(dyck(&["check", "--algo", "oracle"], &out).status.code(), Some(1));
    }
}

#[test]
fn gen_is_reproducible() {
    let args = ["gen", "ascension", "--m", "3", "--n", "9", "--seed", "11"];
    assert_eq!(dyck(&args, "").stdout, dyck(&args, "").stdout);
    let args = ["gen", "dyck", "--pairs", "300", "--seed", "5"];
    let a = dyck(&args, "");
    assert_eq!(a.stdout, dyck(&args, "").stdout);
    assert!(stdout(&a).lines().all(|l| l.len() <= 80));
}

#[test]
fn check_metrics_are_reproducible_apart_from_timing() {
    let word = stdout(&dyck(&["gen", "dyck", "--pairs", "200", "--seed", "1"], ""));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    for _ in 0..2 {
        dyck(&["check", "--algo", "twopass", "--seed", "4", "--metrics", path.to_str().unwrap()], &word);
    }
    let text = std::fs::read_to_string(&path).unwrap();
    let mut records: Vec<_> = text.lines().map(|l| parse_record(l).unwrap()).collect();
    for r in &mut records {
        r.remove("elapsed_us");
    }
    assert_eq!(records[0], records[1]);
}

#[test]
fn token_round_trip_through_gen_and_check() {
    let tokens = stdout(&dyck(&["gen", "dyck", "--pairs", "40", "--seed", "2", "--format", "tokens"], ""));
    let chars = stdout(&dyck(&["gen", "dyck", "--pairs", "40", "--seed", "2"], ""));
    let reduced = stdout(&dyck(&["reduce", "--format", "tokens", "--s", "2"], &tokens));
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with('#')).collect::<String>();
    assert_eq!(strip(&reduced), strip(&chars));
    assert_eq!(dyck(&["check", "--format", "tokens"], &tokens).status.code(), Some(0));
}

#[test]
fn reduce_preserves_membership() {
    let cases = [("+5 +2 -2 -5", true), ("+5 -4", false), ("+1 +7 -7 +3 -3 -1", true), ("-1 +1", false)];
    for (tokens, member) in cases {
        let o = dyck(&["reduce", "--format", "tokens", "--s", "7"], tokens);
        assert_eq!(o.status.code(), Some(0));
        let letters = chars2(&stdout(&o)).unwrap();
        assert_eq!(oracle_check(letters.letters()).accepted(), member, "{tokens}");
        let code = if member { 0 } else { 1 };
        assert_eq!(dyck(&["check", "--algo", "onepass"], &stdout(&o)).status.code(), Some(code));
    }
    let tags = "<html\n<body\n>body\n>html\n";
    assert_eq!(dyck(&["check", "--format", "tags", "--algo", "twopass"], tags).status.code(), Some(0));
    assert_eq!(dyck(&["check", "--format", "tags"], "<p\n>q\n").status.code(), Some(1));
}

#[test]
fn bench_peaks_stay_under_the_block_bound() {
    let o = dyck(&["bench", "--algo", "onepass", "--sizes", "2^10,2^12"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let records: Vec<_> = out.lines().filter(|l| !l.starts_with('#')).map(|l| parse_record(l).unwrap()).collect();
    assert_eq!(records.len(), 2);
    for (r, bound) in records.iter().zip([33u64, 65]) {
        assert!(r["peak_stack_items"].parse::<u64>().unwrap() <= bound, "{r:?}");
    }
    assert!(out.contains("# size n=1024 "));
    assert!(out.contains("false_accepts=0"));
    assert!(out.contains("# scaling algo=onepass"));
}

#[test]
fn bench_two_pass_and_oracle() {
    for algo in ["twopass", "oracle"] {
        let o = dyck(&["bench", "--algo", algo, "--sizes", "64,256", "--seeds", "3", "--trials", "5"], "");
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let out = stdout(&o);
        assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 6);
        assert!(out.contains("over_bound=0"), "{out}");
    }
}

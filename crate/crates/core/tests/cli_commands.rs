use std::path::PathBuf;

use omt_core::cli::format::serialize;
use omt_core::cli::fuzz::fuzz_generate;
use omt_core::cli::report::Color;
use omt_core::cli::{run_command, zoo, Outcome};

fn file_for(tag: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("omt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(format!("{tag}.space"));
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Outcome {
    let mut argv = vec!["omt"];
    argv.extend_from_slice(args);
    run_command(argv, Color::Never)
}

fn example_file(name: &str) -> String {
    file_for(name, &serialize(&zoo::example(name).unwrap())).display().to_string()
}

#[test]
fn compact_split() {
    let o = run(&["check", "--compact", &example_file("split")]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "compact: true\n");
}

#[test]
fn single_false_predicate_exits_one() {
    let o = run(&["check", "--regular", &example_file("a9-nonregular")]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.starts_with("regular: false\n  witness: "), "{}", o.stdout);
}

#[test]
fn several_predicates_exit_zero() {
    let o = run(&["check", "--regular", "--compact", &example_file("a9-nonregular")]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().filter(|l| !l.starts_with(' ')).count(), 2);
}

#[test]
fn sorgenfrey_table() {
    let o = run(&["decompose", &example_file("sorgenfrey")]);
    assert_eq!(o.code, 0);
    let rows: Vec<&str> = o.stdout.lines().filter(|l| l.contains("half-open")).collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].contains("right-half-open"));
}

#[test]
fn errors_exit_two() {
    assert_eq!(run(&["two-to-one", &example_file("alex(2)")]).code, 2);
    assert_eq!(run(&["example", "nope"]).code, 2);
    assert_eq!(run(&["bogus"]).code, 2);
    let broken = file_for("broken", "[space]\nname = x\n[track]\nid = 0\n");
    let o = run(&["validate", broken.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line"), "{}", o.stderr);
}

#[test]
fn validate_reports_mutants() {
    let m = fuzz_generate(4, 10).into_iter().find(|f| !f.valid).unwrap();
    let o = run(&["validate", file_for("mutant", &serialize(&m.space)).to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.starts_with("valid: false"));
    assert_eq!(run(&["validate", &example_file("split")]).code, 0);
}

#[test]
fn reports_are_stable() {
    for cmd in ["check", "decompose", "decompose-t3", "compactify", "components", "two-to-one"] {
        let f = example_file("split");
        let a = run(&[cmd, &f]);
        assert_eq!(a.code, 0, "{cmd}: {}", a.stderr);
        assert_eq!(a, run(&[cmd, &f]), "{cmd}");
    }
    assert_eq!(run(&["fuzz", "--seed", "3", "--count", "4"]), run(&["fuzz", "--seed", "3", "--count", "4"]));
}

#[test]
fn outputs_round_trip_through_files() {
    let f = example_file("euclidean");
    let out = std::env::temp_dir().join(format!("omt-cli-{}", std::process::id())).join("compact.space");
    assert_eq!(run(&["compactify", &f, "-o", out.to_str().unwrap()]).code, 0);
    let o = run(&["check", "--compact", out.to_str().unwrap()]);
    assert_eq!(o.stdout, "compact: true\n");
    let m = run(&["metric", &example_file("a8-onepoint")]);
    assert!(m.stdout.contains("hub 0:(0,1) at v0"), "{}", m.stdout);
}

#[test]
fn limit_command() {
    let f = example_file("sorgenfrey");
    let o = run(&["limit", "--curve", "track=0; map=t+1/2; domain=(0,1); end=a", &f]);
    assert!(o.stdout.contains("limit: 0: {1/2}"), "{}", o.stdout);
    let o = run(&["limit", "--curve", "track=0; map=-t+1/2; domain=(0,1/4); end=a", &f]);
    assert!(o.stdout.contains("divergent"), "{}", o.stdout);
}

use std::path::Path;
use std::process::{Command, Output};

use csfa::format::{parse_text, read_automaton, write_automaton};
use csfa::{figure_1, unary_cycle, FamilySpec};
use tempfile::TempDir;

fn csfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csfa"))
        .args(args)
        .output()
        .expect("run csfa")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn analyze_figure_1() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("f1.txt");
    write_automaton(&path, &figure_1()).unwrap();
    let out = csfa(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("CSFA, two bpis {0,2}, minimal"));
}

#[test]
fn analyze_unary_cycle_has_no_bpis() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("u.json");
    write_automaton(&path, &unary_cycle(5).unwrap()).unwrap();
    let out = csfa(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("CSFA, no bpis"));
}

#[test]
fn analyze_json_is_one_document() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("f1.txt");
    write_automaton(&path, &figure_1()).unwrap();
    let out = csfa(&["analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["bpi_class"], "two-bpi");
    assert_eq!(v["is_csfa"], true);
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.txt",
        "states: 2\nalphabet: a\ninitial: 0\nfinal: 0\na: 1 5\n",
    );
    let out = csfa(&["analyze", &bad]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error"));

    let out = csfa(&["analyze", "/nonexistent/automaton.txt"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn monoid_lists_shortlex_witnesses() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "u3.txt",
        "states: 3\nalphabet: a\ninitial: 0\nfinal: 0\na: 1 2 0\n",
    );
    let out = csfa(&["monoid", &path]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("|M| = 3"));
    let witnesses: Vec<&str> = text
        .lines()
        .skip(2)
        .filter_map(|l| l.split_whitespace().last())
        .collect();
    assert_eq!(witnesses, ["ε", "a", "aa"]);
}

#[test]
fn monoid_json_orbits_and_idempotents() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("a5.txt");
    write_automaton(&path, &csfa::witness_aprime(5).unwrap()).unwrap();
    let out = csfa(&[
        "monoid",
        path.to_str().unwrap(),
        "--orbits",
        "--idempotents",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["size"], 60);
    assert_eq!(v["orbits"]["count"], 12);
    assert_eq!(v["idempotents"]["basic_idempotent_count"], 12);
    assert_eq!(v["idempotents"]["kappa"], 4);
}

#[test]
fn budget_exceeded_exits_3() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("a5.txt");
    write_automaton(&path, &csfa::witness_aprime(5).unwrap()).unwrap();
    let out = csfa(&["monoid", path.to_str().unwrap(), "--budget", "10"]);
    assert_eq!(code(&out), 3);
    let out = csfa(&["verify", path.to_str().unwrap(), "--budget", "10"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_family_reports_complexity() {
    let out = csfa(&["verify", "--family", "aprime", "--n", "6"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("complexity: 84"));

    let out = csfa(&["verify", "--family", "aprime", "--n", "6", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["complexity"], 84);
    assert_eq!(v["kappa"], 5);
}

#[test]
fn verify_figure_2_passes_as_documented_exception() {
    let out = csfa(&["verify", "--family", "figure2"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("complexity: 110"));
}

#[test]
fn verify_rejects_non_sfa() {
    let dir = TempDir::new().unwrap();
    // 1 -> 2 -> 1 is a cycle that avoids state 0
    let path = write(
        &dir,
        "loop.txt",
        "states: 3\nalphabet: a b\ninitial: 0\nfinal: 0\na: 1 2 1\nb: 0 0 0\n",
    );
    let out = csfa(&["verify", &path]);
    assert_eq!(code(&out), 1);
    let all = stdout(&out) + &stderr(&out);
    assert!(all.contains("not an SFA: cycle avoiding q0"), "{all}");
}

#[test]
fn verify_needs_a_source() {
    assert_eq!(code(&csfa(&["verify"])), 2);
    assert_eq!(code(&csfa(&["verify", "--family", "nonsense"])), 2);
    assert_eq!(
        code(&csfa(&["verify", "--family", "aprime", "--n", "2"])),
        2
    );
}

#[test]
fn enumerate_matches_bound() {
    for n in ["3", "4"] {
        let out = csfa(&["enumerate", "--n", n]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains("MATCH"), "{}", stdout(&out));
    }
    let out = csfa(&["enumerate", "--n", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["max_complexity"], 40);
    assert_eq!(v["instance_count"], 11);
}

#[test]
fn enumerate_out_of_range_exits_2() {
    assert_eq!(code(&csfa(&["enumerate", "--n", "11"])), 2);
    assert_eq!(code(&csfa(&["enumerate", "--n", "2"])), 2);
}

#[test]
fn enumerate_dump_writes_a_maximizer() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("max.txt");
    let out = csfa(&["enumerate", "--n", "4", "--dump", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let aut = read_automaton(&path).unwrap();
    assert_eq!(csfa::syntactic_complexity(&aut, 1000).unwrap(), 40);
}

fn round_trip(args: &[&str], spec: &FamilySpec, dir: &Path) {
    let expected = spec.build().unwrap();
    let out = csfa(args);
    assert_eq!(code(&out), 0, "{args:?}");
    assert_eq!(parse_text(&stdout(&out)).unwrap(), expected, "{args:?}");

    for ext in ["txt", "json"] {
        let path = dir.join(format!("w.{ext}"));
        let mut with_file: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap();
        with_file.extend(["-o", p]);
        assert_eq!(code(&csfa(&with_file)), 0);
        assert_eq!(read_automaton(&path).unwrap(), expected);
    }
}

#[test]
fn witness_round_trips_every_family() {
    let dir = TempDir::new().unwrap();
    for n in 1..=8usize {
        let ns = n.to_string();
        round_trip(
            &["witness", "--family", "unary", "--n", &ns],
            &FamilySpec::UnaryCycle { n },
            dir.path(),
        );
        if n >= 2 {
            for k in [2usize, 3] {
                let ks = k.to_string();
                round_trip(
                    &[
                        "witness",
                        "--family",
                        "one-bpi",
                        "--n",
                        &ns,
                        "--alphabet-size",
                        &ks,
                    ],
                    &FamilySpec::OneBpi {
                        n,
                        alphabet_size: k,
                    },
                    dir.path(),
                );
            }
        }
        if n >= 3 {
            round_trip(
                &["witness", "--family", "aprime", "--n", &ns],
                &FamilySpec::WitnessAprime { n },
                dir.path(),
            );
        }
    }
    round_trip(
        &["witness", "--family", "figure1"],
        &FamilySpec::Figure1,
        dir.path(),
    );
    round_trip(
        &["witness", "--family", "figure2"],
        &FamilySpec::Figure2Ternary,
        dir.path(),
    );
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn poly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poly")).args(args).output().expect("poly runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn search_pair_found_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let out = poly(&["search", "pair", "--sigma", "1,3,2", "--pos", "0", "--neg", "3", "--n", "100000", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let r = read_json(&json);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "search pair");
    assert_eq!(r["outcome"]["status"], "found");
    assert!(r["outcome"]["certificate"]["rational_coefficients"].is_array());
    assert_eq!(r["config"]["n"], 100000);
}

#[test]
fn search_is_reproducible_from_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = poly(&["search", "moduli", "--sigma", "2,3,2", "--order", "[2,1,1]", "--seed", "9", "--n", "100000", "--json", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        read_json(&path)["outcome"].clone()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(a["attempt_index"], b["attempt_index"]);
    assert_eq!(a["roots"], b["roots"]);
}

#[test]
fn exhausted_search_exits_one() {
    let out = poly(&["search", "pair", "--sigma", "+---+", "--pos", "0", "--neg", "2", "--n", "2000"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("unresolved"));
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(code(&poly(&["search", "pair", "--sigma", "+x", "--pos", "0", "--neg", "1"])), 2);
    assert_eq!(code(&poly(&["search", "pair", "--sigma", "++-", "--pos", "2", "--neg", "0"])), 2);
    assert_eq!(code(&poly(&["search", "gaps", "--degree", "5", "--class", "L?R+"])), 2);
    assert_eq!(code(&poly(&["search", "pair", "--sigma", "+-", "--pos", "1", "--neg", "0", "--dup-prob", "0.3"])), 2);
    assert_eq!(code(&poly(&["catalog", "show", "no-such-id"])), 2);
    assert_eq!(code(&poly(&["verify", "--roots", "/nonexistent/roots.txt", "--sigma", "+-", "--pos", "1", "--neg", "0"])), 2);
}

#[test]
fn verify_pair_and_order() {
    let dir = tempfile::tempdir().unwrap();
    let roots = write(dir.path(), "r.txt", "# hyperbolic\n-0.3\n0.6\n");
    assert_eq!(code(&poly(&["verify", "--roots", &roots, "--sigma", "+--", "--pos", "1", "--neg", "1"])), 0);
    assert_eq!(code(&poly(&["verify", "--roots", &roots, "--sigma", "+--", "--order", "NP"])), 0);
    assert_eq!(code(&poly(&["verify", "--roots", &roots, "--sigma", "+--", "--order", "PN"])), 1);
    let complex = write(dir.path(), "c.txt", "1\n0.5\nc: 0.2,0.3\n");
    let out = poly(&["verify", "--roots", &complex, "--sigma", "+--++", "--pos", "2", "--neg", "0"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("not verified"));
}

#[test]
fn gaps_on_the_degree_six_witness() {
    let dir = tempfile::tempdir().unwrap();
    let roots = write(dir.path(), "g.txt", "-0.19\n-0.18\n0.13\n0.21\n0.67\n0.96\n");
    let json = dir.path().join("g.json");
    let out = poly(&["gaps", "--roots", &roots, "--certify", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("certified: L-R+"));
    let r = read_json(&json);
    assert_eq!(r["outcome"]["gap_report"]["class"], "L-R+");
    assert_eq!(r["outcome"]["status"], "verified");
}

#[test]
fn concat_catalog_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("c.json");
    let out = poly(&["concat", "--left", "q1", "--right", "q2", "--json", json.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let r = read_json(&json);
    assert_eq!(r["outcome"]["couple"]["pos"], 0);
    assert_eq!(r["outcome"]["couple"]["neg"], 6);
    assert_eq!(code(&poly(&["concat", "--left", "grabiner-d4", "--right", "q2"])), 2);
}

#[test]
fn sweep_moduli_json_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = poly(&["sweep", "moduli", "--sigma", "2,3,2", "--budget", "100000", "--json", p.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(read_json(&a)["totals"]["realized"], 15);
}

#[test]
fn sweep_with_unresolved_couples_exits_one() {
    let out = poly(&["sweep", "pairs", "--degree", "4", "--budget", "20000", "--orbits"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("46 couples"));
}

#[test]
fn catalog_lists_and_shows() {
    let out = poly(&["catalog", "list"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("sigma1232-table"));
    let shown: Value = serde_json::from_slice(&poly(&["catalog", "show", "gap-d6-LmRp"]).stdout).unwrap();
    assert_eq!(shown["id"], "gap-d6-LmRp");
}

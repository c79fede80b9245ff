use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_branchlie")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn classify_restricted() {
    let v = json(&["classify", "--rank", "3", "--p", "3", "--lambda", "1,1,0"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["outcome"], "TwoFactors");
    assert_eq!(v["fired_condition"]["kind"], "Thm1_case3");
    assert_eq!(v["completely_reducible"], true);
    assert_eq!(v["factors"].as_array().unwrap().len(), 2);
    let v = json(&["classify", "--rank", "3", "--p", "5", "--lambda", "0,0,1"]);
    assert_eq!(v["outcome"], "TwoFactors");
    assert_eq!(v["fired_condition"]["kind"], "Thm1_case2");
}

#[test]
fn classify_rejects_unrestricted_without_general() {
    assert_eq!(run(&["classify", "--rank", "3", "--p", "5", "--lambda", "5,0,0"]).status.code(), Some(2));
    let v = json(&["classify", "--rank", "3", "--p", "5", "--lambda", "5,0,0", "--general"]);
    assert_eq!(v["fired_condition"]["kind"], "Cor2_case1");
    assert_eq!(run(&["classify", "--rank", "3", "--p", "4", "--lambda", "1,0,0"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--rank", "3", "--p", "5", "--lambda", "1,0"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--rank", "2", "--p", "5", "--lambda", "1,0"]).status.code(), Some(2));
}

#[test]
fn char_tsv() {
    let out = run(&["char", "--type", "D", "--rank", "3", "--lambda", "0,1,1", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "weight\tmultiplicity");
    assert_eq!(lines[1], "0,1,1\t1");
    assert_eq!(*lines.last().unwrap(), "dimension\t15");
}

#[test]
fn mult_json() {
    let v = json(&["mult", "--type", "B", "--rank", "3", "--lambda", "1,1,0", "--mu-delta", "1,2,2", "--p", "5"]);
    assert_eq!(v["weyl_mult"], 5);
    assert_eq!(v["irreducible_mult"], 5);
    let v = json(&["mult", "--type", "B", "--rank", "3", "--lambda", "1,1,0", "--mu-delta", "1,2,2", "--p", "3"]);
    assert_eq!(v["weyl_mult"], 5);
    assert!(v["irreducible_mult"].as_u64().unwrap() < 5);
}

#[test]
fn maxvec_json() {
    let v = json(&["maxvec", "--case", "B_aλ1λk", "--n", "4", "--k", "3", "--a", "2", "--p", "5"]);
    assert_eq!(v["dim"], 0);
    assert_eq!(v["divisibility_holds"], false);
    assert!(v["basis"].as_array().unwrap().is_empty());
    let v = json(&["maxvec", "--case", "B_aλ1", "--n", "3", "--a", "2", "--p", "7"]);
    assert_eq!(v["dim"], 1);
    assert_eq!(v["divisibility_holds"], true);
    assert_eq!(v["proportional"], true);
    let v = json(&["maxvec", "--case", "A_row", "--n", "3", "--a", "2", "--b", "1", "--p", "5"]);
    assert_eq!(v["dim"], 1);
    assert_eq!(run(&["maxvec", "--case", "A_row", "--n", "3", "--a", "2", "--p", "5"]).status.code(), Some(2));
}

#[test]
fn decompose_and_budget() {
    let v = json(&["decompose", "--rank", "3", "--p", "5", "--lambda", "1,1,0", "--budget-ms", "120000"]);
    assert_eq!(v["dim_y"], v["dim_sum"]);
    assert!(v["factors"].as_array().unwrap().len() > 2);
    let v = json(&["decompose", "--rank", "3", "--p", "5", "--lambda", "0,1,0"]);
    assert_eq!(v["count"], 2);
    assert_eq!(v["dim_y"], 21);
    assert_eq!(run(&["decompose", "--rank", "3", "--p", "7", "--lambda", "6,6,6", "--budget-ms", "1"]).status.code(), Some(3));
}

#[test]
fn verify_suites() {
    for suite in ["chevalley", "table2", "appendix"] {
        let v = json(&["verify", "--suite", suite, "--rank-max", "4", "--primes", "3,5,7,11"]);
        assert_eq!(v["failures"], 0, "{suite}");
        assert_eq!(v["suite"], suite);
    }
    let v = json(&["verify", "--suite", "chevalley", "--rank-max", "4"]);
    let systems = v["systems"].as_array().unwrap();
    assert!(systems.iter().all(|s| s["violations"].as_array().unwrap().is_empty() && s["pairs_checked"].as_u64().unwrap() > 0));
    assert!(systems.iter().any(|s| s["type"] == "D" && s["rank"] == 4));
    let v = json(&["verify", "--suite", "branching", "--primes", "3"]);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["undecided"], 0);
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn table_contract() {
    let args = ["table", "--rank", "3", "--primes", "3", "--out", "tsv"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let s = String::from_utf8(a.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "n\tp\tlambda\tverdict\tcondition\tomega\tomega_prime");
    assert_eq!(lines.len(), 27);
    assert!(lines.iter().all(|l| l.split('\t').count() == 7));
    let keys: Vec<Vec<i64>> = lines[1..].iter().map(|l| l.split('\t').nth(2).unwrap().split(',').map(|x| x.parse().unwrap()).collect()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let s = String::from_utf8(run(&["table", "--rank", "3..4", "--primes", "3,5"]).stdout).unwrap();
    assert_eq!(s.lines().count(), 1 + 26 + 124 + 80 + 624);
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_branchlie"))
        .env("BRANCHLIE_THREADS", "0")
        .args(["classify", "--rank", "3", "--p", "3", "--lambda", "1,1,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_branchlie"))
        .env("BRANCHLIE_THREADS", "1")
        .args(["classify", "--rank", "3", "--p", "3", "--lambda", "1,1,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

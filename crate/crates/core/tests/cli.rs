use std::process::{Command, Output};

use serde_json::Value;

fn frobtrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobtrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json")
}

fn stdout_text(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .trim()
        .to_string()
}

#[test]
fn charpoly_json() {
    let v = stdout_json(&frobtrace(&[
        "charpoly", "--q", "3", "--p", "T^2+1", "--gamma", "1", "--delta", "T",
    ]));
    assert_eq!(v, serde_json::json!({"a": "2", "u": "1"}));
}

#[test]
fn class_number_and_mass() {
    assert_eq!(
        stdout_text(&frobtrace(&["classnumber", "--q", "3", "--d", "T^3"])),
        "3"
    );
    assert_eq!(
        stdout_text(&frobtrace(&[
            "classnumber",
            "--q",
            "3",
            "--d",
            "[1,2,0,0,0,1]"
        ])),
        "29"
    );
    assert_eq!(
        stdout_text(&frobtrace(&[
            "mass", "--q", "3", "--p", "T^2+1", "--a", "1", "--u", "1"
        ])),
        "2"
    );
}

#[test]
fn cache_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("frobtrace-cache-{}", std::process::id()));
    let path = dir.to_str().unwrap();
    assert_eq!(
        stdout_text(&frobtrace(&[
            "classnumber",
            "--q",
            "3",
            "--d",
            "T^5+2*T+1",
            "--cache",
            path
        ])),
        "29"
    );
    let text = std::fs::read_to_string(&dir).unwrap();
    assert!(text.lines().any(|l| l.ends_with("\t29")), "{text}");
    assert_eq!(
        stdout_text(&frobtrace(&[
            "classnumber",
            "--q",
            "3",
            "--d",
            "T^5+2*T+1",
            "--cache",
            path
        ])),
        "29"
    );
    std::fs::remove_file(dir).unwrap();
}

#[test]
fn constant_both_routes() {
    let v = stdout_json(&frobtrace(&[
        "constant",
        "--q",
        "3",
        "--a",
        "T",
        "--U",
        "2",
        "--V",
        "3",
        "--max-prime-deg",
        "4",
        "--route",
        "both",
    ]));
    assert_eq!(v["routes_agree"], Value::Bool(true));
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 2);
    assert_eq!(values[0]["route"], "euler");
    assert_eq!(values[1]["route"], "doublesum");
    assert_eq!(values[1]["num"], "1852681");
    assert_eq!(values[1]["den"], "2047032");
    assert_eq!(values[1]["half_power"], 0);
}

#[test]
fn average_report_and_csv() {
    let dir = std::env::temp_dir();
    let out = dir.join(format!("frobtrace-report-{}.json", std::process::id()));
    let csv = dir.join(format!("frobtrace-table-{}.csv", std::process::id()));
    let status = frobtrace(&[
        "average",
        "--q",
        "3",
        "--x",
        "3",
        "--a",
        "0",
        "--u",
        "1",
        "--max-prime-deg",
        "6",
        "--threads",
        "1",
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["classnumber_s"]["num"], "16");
    assert_eq!(report["classnumber_s"]["den"], "27");
    assert_eq!(report["checks"]["empirical_equals_classnumber"], true);
    assert_eq!(report["hypotheses"]["label"], "outside theorem hypotheses");
    let table = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "x,route,num,den,half_power,decimal");
    assert_eq!(lines[1], "3,empirical,16,27,0,0.592592592593");
    assert!(lines[3].starts_with("3,main,"));
    std::fs::remove_file(out).unwrap();
    std::fs::remove_file(csv).unwrap();
}

#[test]
fn verify_subset_and_errors() {
    let out = frobtrace(&["verify", "--only", "4,7"]);
    let text = stdout_text(&out);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.contains(" PASS: ")), "{text}");
    let bad = frobtrace(&["mass", "--q", "3", "--p", "T^2", "--a", "1", "--u", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not a monic irreducible"));
    let bad = frobtrace(&["average", "--q", "5", "--x", "2", "--a", "0", "--u", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

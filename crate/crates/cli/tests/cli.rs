//! End-to-end checks of the binary: worked examples, exit-status mapping,
//! JSON schema, and byte-for-byte determinism.

use std::process::Command;

fn tamesym(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_tamesym"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn symbol3_worked_example() {
    let out = tamesym(&["symbol3", "-p", "7", "t1", "t2", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"value\":3"), "{text}");

    let out = tamesym(&["symbol3", "-p", "7", "t2", "t1", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"value\":5"), "{text}");
}

#[test]
fn parshin_point_worked_example() {
    let out = tamesym(&["parshin-point", "-p", "7", "x", "y", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"nu_sum\":0"), "{text}");
    assert!(text.contains("\"product\":1"), "{text}");
    assert!(text.contains("pass: true"), "{text}");
}

#[test]
fn syntax_error_exit_code_and_position() {
    let out = tamesym(&["symbol1d", "t1^", "t"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("offset 3"), "{err}");
}

#[test]
fn verdict_failure_exit_code() {
    // An invalid cocycle table: valid header, one duplicated-triple line
    // whose value breaks the cocycle identity.
    let dir = std::env::temp_dir().join("tamesym-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_table.txt");
    std::fs::write(&path, "group 2\n0 0 0 2\n").unwrap();
    let out = tamesym(&["cocycle", path.to_str().unwrap(), "-p", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pass: false"), "{text}");
}

#[test]
fn cocycle_accepts_valid_table_and_evaluates_phi() {
    let dir = std::env::temp_dir().join("tamesym-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cup_table.txt");
    // The cup-product cocycle on (Z/2)^3: value -1 exactly when
    // a1 = b2 = c3 = 1.
    let mut text = String::from("group 2 2 2\n");
    for a in 0..8u32 {
        for b in 0..8u32 {
            for c in 0..8u32 {
                let (a, b, c) = (
                    [a >> 2 & 1, a >> 1 & 1, a & 1],
                    [b >> 2 & 1, b >> 1 & 1, b & 1],
                    [c >> 2 & 1, c >> 1 & 1, c & 1],
                );
                if a[0] * b[1] * c[2] == 1 {
                    text.push_str(&format!(
                        "{},{},{} {},{},{} {},{},{} -1\n",
                        a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]
                    ));
                }
            }
        }
    }
    std::fs::write(&path, text).unwrap();
    let out = tamesym(&[
        "cocycle",
        path.to_str().unwrap(),
        "-p",
        "5",
        "--phi",
        "1,0,0 0,1,0 0,0,1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["aggregate"]["valid"], serde_json::json!(true));
    assert_eq!(v["aggregate"]["phi"], serde_json::json!(4)); // -1 mod 5
}

#[test]
fn weil_report_and_determinism() {
    let run = || tamesym(&["weil", "-p", "7", "t", "t-1", "--format", "json"]);
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical");
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8(a.stdout).unwrap()).unwrap();
    // Fixed top-level schema.
    for key in ["command", "prime", "inputs", "places", "aggregate", "pass", "windows"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(v["pass"], serde_json::json!(true));
    let symbols: Vec<u64> = v["places"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["symbol"].as_u64().unwrap())
        .collect();
    assert_eq!(symbols, vec![6, 1, 6]);
}

#[test]
fn direct_sum_pairs() {
    let out = tamesym(&["direct-sum", "t1", "t2", "1+t1", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"whole\":-1"), "{text}");
    // Odd argument count is an input error.
    let out = tamesym(&["direct-sum", "t1", "t2", "1+t1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_single_criterion() {
    let out = tamesym(&["selftest", "--criterion", "7", "--seed", "42"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("criterion  7 [PASS]"), "{text}");
    // Determinism under a fixed seed.
    let again = tamesym(&["selftest", "--criterion", "7", "--seed", "42"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn window_overrides_are_honored() {
    let out = tamesym(&["psi-op", "t1", "t2", "--n1", "9", "--n2", "8", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(v["aggregate"]["value"], serde_json::json!(-1));
    assert_eq!(v["windows"]["n1"], serde_json::json!(9));
    assert_eq!(v["windows"]["n2"], serde_json::json!(8));
}

#[test]
fn psi_op_reports_windows() {
    let out = tamesym(&["psi-op", "t1", "t2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(v["aggregate"]["value"], serde_json::json!(-1));
    assert!(v["windows"]["n1"].as_i64().unwrap() >= 1);
    assert!(v["windows"]["stability"].as_str().unwrap().contains("+2"));
}

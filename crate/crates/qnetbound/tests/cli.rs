//! End-to-end checks of the binary: output contracts and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qnetbound"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn write_network(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("qnetbound-test-{name}-{}.json", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn channel_report_amplitude_damping() {
    let out = run(&["channel", "--kind", "amplitude_damping", "--param", "0.5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("choi_simulable=false"), "{text}");
    assert!(text.contains("e_max(closed)=0.584963"), "{text}");
    assert!(text.contains("e_max(sdp)=0.584963"), "{text}");
    assert!(text.contains("e_sq_ub=0.410870"), "{text}");
}

#[test]
fn channel_report_dephasing() {
    let out = run(&["channel", "--kind", "dephasing", "--param", "0.0"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("e_r=1.000000"));

    let out = run(&["channel", "--kind", "dephasing", "--param", "0.5"]);
    let text = stdout(&out);
    assert!(text.contains("e_r=0.188722"), "{text}");
    assert!(text.contains("e_sq_ub=0.354579"), "{text}");
}

#[test]
fn channel_bad_param_is_usage_error() {
    let out = run(&["channel", "--kind", "dephasing", "--param", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["channel", "--kind", "bogus", "--param", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn emax_methods_agree() {
    for method in ["sdp", "reduced", "closed"] {
        let out = run(&["emax", "--kind", "amplitude_damping", "--param", "0.3", "--method", method]);
        assert!(out.status.success(), "{method}");
        let text = stdout(&out);
        assert!(text.contains("e_max=0.765535"), "{method}: {text}");
    }
    // no closed form for the dephasing value
    let out = run(&["emax", "--kind", "dephasing", "--param", "0.3", "--method", "closed"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn network_report_and_min_cut() {
    let path = write_network(
        "chain",
        r#"{
            "epsilon": 0.0,
            "nodes": ["A", "C1", "B"],
            "edges": [
                {"from": "A", "to": "C1", "channel": {"kind": "dephasing", "param": 0.5}, "avg_uses": 2},
                {"from": "C1", "to": "B", "channel": {"kind": "amplitude_damping", "param": 0.5}, "avg_uses": 1}
            ]
        }"#,
    );
    let out = run(&["network", "--file", path.to_str().unwrap(), "--min-cut"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mc = &v["min_cut"];
    assert_eq!(mc["cut"].as_array().unwrap().len(), 0);
    let e = mc["e_versatile"].as_f64().unwrap();
    assert!((e - 0.3774437510817343).abs() < 1e-9);
    // at epsilon 0 the ebit bound equals the cut weight exactly
    assert_eq!(mc["ebit_versatile"], mc["e_versatile"]);

    // full enumeration lists both cuts deterministically
    let out2 = run(&["network", "--file", path.to_str().unwrap()]);
    let v2: serde_json::Value = serde_json::from_str(&stdout(&out2)).unwrap();
    let cuts = v2["cuts"].as_array().unwrap();
    assert_eq!(cuts.len(), 2);
    assert_eq!(cuts[0]["crossing_edges"], serde_json::json!([0]));
    assert_eq!(cuts[1]["crossing_edges"], serde_json::json!([1]));

    // byte-identical reruns
    let again = run(&["network", "--file", path.to_str().unwrap(), "--min-cut"]);
    assert_eq!(out.stdout, again.stdout);
    std::fs::remove_file(path).ok();
}

#[test]
fn network_saturated_bound_prints_inf() {
    let path = write_network(
        "sat",
        r#"{
            "epsilon": 0.2,
            "nodes": ["A", "B"],
            "edges": [
                {"from": "A", "to": "B", "channel": {"kind": "dephasing", "param": 0.5}, "avg_uses": 1}
            ]
        }"#,
    );
    let out = run(&["network", "--file", path.to_str().unwrap(), "--min-cut"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["min_cut"]["ebit_versatile"], serde_json::json!("inf"));
    std::fs::remove_file(path).ok();
}

#[test]
fn network_parse_and_missing_measure_exit_codes() {
    let out = run(&["network", "--file", "/nonexistent/net.json"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = write_network("bad", r#"{"epsilon": 0.0, "nodes": ["A","B"], "edges": [], "zzz": 1}"#);
    let out = run(&["network", "--file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(bad).ok();

    // a simulable custom channel with no override has no e_r anywhere
    let missing = write_network(
        "missing",
        r#"{
            "epsilon": 0.0,
            "nodes": ["A", "B"],
            "edges": [{
                "from": "A", "to": "B",
                "channel": {
                    "kind": "custom",
                    "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]],
                    "choi_simulable": true
                },
                "avg_uses": 1
            }]
        }"#,
    );
    let out = run(&["network", "--file", missing.to_str().unwrap(), "--min-cut"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("e_r"), "{err}");
    assert!(err.contains("custom"), "{err}");
    std::fs::remove_file(missing).ok();
}

#[test]
fn network_epsilon_override_and_method_flags() {
    let path = write_network(
        "flags",
        r#"{
            "epsilon": 0.0,
            "nodes": ["A", "C1", "B"],
            "edges": [
                {"from": "A", "to": "C1", "channel": {"kind": "erasure", "param": 0.25}, "avg_uses": 1},
                {"from": "C1", "to": "B", "channel": {"kind": "depolarizing", "param": 0.4}, "avg_uses": 2}
            ]
        }"#,
    );
    let a = run(&["network", "--file", path.to_str().unwrap(), "--min-cut", "--exhaustive"]);
    let b = run(&["network", "--file", path.to_str().unwrap(), "--min-cut", "--maxflow"]);
    assert!(a.status.success() && b.status.success());
    let va: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let vb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    let ea = va["min_cut"]["e_versatile"].as_f64().unwrap();
    let eb = vb["min_cut"]["e_versatile"].as_f64().unwrap();
    assert!((ea - eb).abs() < 1e-9);

    let c = run(&["network", "--file", path.to_str().unwrap(), "--min-cut", "--epsilon", "0.05"]);
    let vc: serde_json::Value = serde_json::from_str(&stdout(&c)).unwrap();
    assert_eq!(vc["epsilon"].as_f64().unwrap(), 0.05);
    assert!(vc["min_cut"]["ebit_versatile"].as_f64().unwrap() > ea);
    std::fs::remove_file(path).ok();
}

#[test]
fn sweep_csv_contract() {
    let out = run(&["sweep", "--k", "1,5", "--grid", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,x,lambda,mu");
    assert_eq!(lines.len(), 1 + 2 * 5 * 5);
    assert_eq!(lines[1], "1,0,0,0");
    assert!(text.ends_with('\n'));
    assert!(!text.contains('\r'));

    // identical invocations produce byte-identical output
    let again = run(&["sweep", "--k", "1,5", "--grid", "5"]);
    assert_eq!(out.stdout, again.stdout);

    // known value at (1, 0.5, 1.0)
    let row = lines.iter().find(|l| l.starts_with("1,0.5,1,")).expect("row present");
    let mu: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((mu - 0.305276624).abs() < 1e-6, "{row}");
}

#[test]
fn sweep_writes_file_and_sdp_check_passes() {
    let path = std::env::temp_dir().join(format!("qnetbound-sweep-{}.csv", std::process::id()));
    let out = run(&[
        "sweep",
        "--k",
        "1",
        "--grid",
        "3",
        "--sdp-check",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1 + 9);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("sdp check ok"), "{err}");
    std::fs::remove_file(path).ok();

    let out = run(&["sweep", "--k", "1", "--grid", "3", "--output", "/nonexistent/dir/s.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_error_exit_code() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["channel", "--kind", "dephasing"]);
    assert_eq!(out.status.code(), Some(2));
}

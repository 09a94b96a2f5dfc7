use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn catxi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catxi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn complex_reports_betti_and_periods() {
    let out = catxi(&[
        "complex",
        &fixture("circle.cx"),
        "--cocycle",
        &fixture("circle.cc"),
    ]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["betti"], serde_json::json!([1, 1]));
    assert_eq!(r["periods"][0]["period"], 1);
    assert_eq!(r["period_gcd"], 1);

    let r = json(&catxi(&["complex", &fixture("torus2.cx")]));
    assert_eq!(r["betti"], serde_json::json!([1, 2, 1]));
}

#[test]
fn bad_input_exits_2() {
    let out = catxi(&["complex", &fixture("malformed.cx")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(code(&catxi(&["complex", &fixture("missing.cx")])), 2);
    assert_eq!(
        code(&catxi(&[
            "catbounds",
            &fixture("circle.cx"),
            &fixture("circle.cc"),
            "--pool",
            "2,x"
        ])),
        2
    );
    assert_eq!(code(&catxi(&["flow-audit", &fixture("circle.cx")])), 2);
    assert_eq!(
        code(&catxi(&[
            "flow-audit",
            &fixture("morse.toml"),
            "--delta",
            "0.7"
        ])),
        2
    );
    assert_eq!(code(&catxi(&["no-such-command"])), 2);
}

#[test]
fn movability_examples() {
    let r = json(&catxi(&[
        "movability",
        &fixture("circle.cx"),
        &fixture("circle.cc"),
    ]));
    assert_eq!(
        r["modules"][0]["factors"][0]["roots_are_dirichlet_units"],
        true
    );
    assert_eq!(
        (
            r["verdict"]["minus_end"].as_str(),
            r["verdict"]["plus_end"].as_str()
        ),
        (Some("yes"), Some("yes"))
    );
    assert_eq!(r["witnesses"].as_array().unwrap().len(), 2);

    let out = catxi(&[
        "movability",
        &fixture("doubling.cx"),
        &fixture("doubling.cc"),
        "--loop",
        "0,1,2,0",
    ]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(
        (
            r["verdict"]["minus_end"].as_str(),
            r["verdict"]["plus_end"].as_str()
        ),
        (Some("yes"), Some("no"))
    );
    let w = &r["witnesses"][0];
    assert_eq!(
        (w["end"].as_str(), w["verified"].as_bool()),
        (Some("minus"), Some(true))
    );
}

#[test]
fn zero_class_is_refused() {
    let out = catxi(&["movability", &fixture("circle.cx"), &fixture("zero.cc")]);
    assert_eq!(code(&out), 2);
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("class must be nonzero for cover analysis")
    );
}

#[test]
fn catbounds_examples() {
    let r = json(&catxi(&[
        "catbounds",
        &fixture("torus3_wedge_circle.cx"),
        &fixture("torus3_wedge_circle.cc"),
        "--user-cat",
        "4",
    ]));
    assert!(r["lower"].as_u64().unwrap() >= 2);
    assert_eq!(r["exact"], 3);

    let r = json(&catxi(&[
        "catbounds",
        &fixture("torus2.cx"),
        &fixture("torus2_x1.cc"),
    ]));
    assert_eq!(
        (r["lower"].as_u64(), r["upper"].as_u64()),
        (Some(0), Some(2))
    );
    let r = json(&catxi(&[
        "catbounds",
        &fixture("torus2.cx"),
        &fixture("zero.cc"),
    ]));
    assert_eq!(r["exact"], 3);

    let out = catxi(&[
        "catbounds",
        &fixture("torus2.cx"),
        &fixture("zero.cc"),
        "--user-cat",
        "1",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn flow_audit_exit_codes() {
    let out = catxi(&["flow-audit", &fixture("constant.toml")]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], "PASS");

    let out = catxi(&["flow-audit", &fixture("morse.toml")]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(
        (r["zero_count"].as_u64(), r["cat_exact"].as_u64()),
        (Some(4), Some(3))
    );

    let out = catxi(&["flow-audit", &fixture("saddle_loop.toml")]);
    assert_eq!(code(&out), 3);
    let r = json(&out);
    assert_eq!(r["verdict"], "HYPOTHESIS-FAILURE");
    assert_eq!(r["isolation"][0]["status"], "NOT-ISOLATED");
    assert!(r["failed_hypotheses"]
        .as_array()
        .unwrap()
        .iter()
        .any(|h| h["hypothesis"] == "not_isolated"));
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let dir = std::env::temp_dir().join(format!("catxi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let runs: [&[&str]; 3] = [
        &[
            "movability",
            &fixture("doubling.cx"),
            &fixture("doubling.cc"),
            "--loop",
            "0,1,2,0",
        ],
        &[
            "catbounds",
            &fixture("torus3_wedge_circle.cx"),
            &fixture("torus3_wedge_circle.cc"),
            "--user-cat",
            "4",
        ],
        &["flow-audit", &fixture("morse.toml")],
    ];
    for (i, args) in runs.iter().enumerate() {
        let first = catxi(args);
        let threaded = Command::new(env!("CARGO_BIN_EXE_catxi"))
            .args(*args)
            .env("CATXI_THREADS", "1")
            .output()
            .unwrap();
        assert_eq!(first.stdout, threaded.stdout, "run {i}");
        let path = dir.join(format!("{i}.json"));
        let mut with_out = args.to_vec();
        let p = path.to_string_lossy().into_owned();
        with_out.extend(["--out", &p]);
        assert_eq!(code(&catxi(&with_out)), 0);
        assert_eq!(std::fs::read(&path).unwrap(), first.stdout, "run {i}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn keys_are_sorted() {
    let out = catxi(&["flow-audit", &fixture("morse.toml")]);
    let text = String::from_utf8(out.stdout).unwrap();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
    assert!(text.contains("\"class\": [\n    \"0\",\n    \"0\"\n  ]"));
}

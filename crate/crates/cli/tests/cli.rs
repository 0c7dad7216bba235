use std::process::{Command, Output};

fn wickrot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wickrot"))
        .args(args)
        .env_remove("WICKROT_CATALOG")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn check_value(report: &serde_json::Value, name: &str) -> f64 {
    report["summary"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["value"]
        .as_f64()
        .unwrap()
}

#[test]
fn verify_scherk() {
    let out = wickrot(&["verify", "--catalog", "scherk-E3", "--grid", "41"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["summary"]["max_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(r["points"].as_array().unwrap().len(), 41 * 41);
}

#[test]
fn wick_scherk_to_kobayashi() {
    let out = wickrot(&[
        "wick",
        "--catalog",
        "scherk-E3",
        "--transform",
        "T5",
        "--domain",
        "-2:2:-2:2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert!(check_value(&r, "sup_diff_closed_form") < 1e-9);
    assert_eq!(r["details"]["closed_form"]["against"], "scherk-kobayashi");
    assert_eq!(r["meta"]["kind"], "ZMC");
}

#[test]
fn classify_alpha_plus() {
    let out = wickrot(&["classify-line", "--catalog", "alpha-plus-scherk"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["line"]["fit"]["class"], "alpha+");
    assert!((r["line"]["fit"]["mu"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn exit_codes_by_error_class() {
    let code = |args: &[&str]| wickrot(args).status.code();
    assert_eq!(
        code(&[
            "verify",
            "--expr",
            "log(cos(x)",
            "--kind",
            "E3",
            "--domain",
            "-1:1:-1:1"
        ]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "verify",
            "--expr",
            "log(x)",
            "--kind",
            "E3",
            "--domain",
            "-1:1:-1:1"
        ]),
        Some(3)
    );
    assert_eq!(code(&["verify", "--catalog", "no-such-entry"]), Some(3));
    assert_eq!(
        code(&["wick", "--catalog", "helicoid", "--transform", "T1"]),
        Some(4)
    );
    assert_eq!(
        code(&[
            "classify-line",
            "--expr",
            "x^2+y",
            "--kind",
            "ZMC",
            "--domain",
            "-1:1:-1:1",
            "--witness",
            "0.5,0.3"
        ]),
        Some(5)
    );
    assert_eq!(
        code(&[
            "verify",
            "--expr",
            "x^3",
            "--kind",
            "E3",
            "--domain",
            "-1:1:-1:1",
            "--grid",
            "5"
        ]),
        Some(6)
    );
    assert_eq!(
        code(&["verify", "--domain", "1:0:0:1", "--expr", "x", "--kind", "E3"]),
        Some(2)
    );
}

#[test]
fn json_reports_are_byte_identical() {
    let args = [
        "wick",
        "--catalog",
        "helicoid",
        "--transform",
        "T2",
        "--grid",
        "9",
    ];
    let a = wickrot(&args);
    let b = wickrot(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("e0") && !text.contains("NaN"));
}

#[test]
fn export_csv_and_obj() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let out = wickrot(&[
        "export",
        "--catalog",
        "lightlike-plane",
        "--format",
        "csv",
        "--grid",
        "5",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "u,v,height,B,H,K,character,residual");
    assert_eq!(lines.len(), 26);
    assert!(
        lines[1].ends_with(",lightlike,0.0000000000000000e0"),
        "{}",
        lines[1]
    );

    let obj = dir.path().join("g.obj");
    let out = wickrot(&[
        "export",
        "--catalog",
        "alpha-plus-scherk",
        "--format",
        "obj",
        "--grid",
        "11",
        "--out",
        obj.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&obj).unwrap();
    let verts: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| l.starts_with("v "))
        .map(|l| l[2..].split(' ').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(verts.len(), 121);
    assert!(verts.iter().flatten().all(|x| x.is_finite()));
    for f in text.lines().filter(|l| l.starts_with("f ")) {
        for i in f[2..].split(' ') {
            let i: usize = i.parse().unwrap();
            assert!(i >= 1 && i <= verts.len());
        }
    }
    // the line x = 0 is the middle column of the 11 x 11 grid
    let side = std::fs::read_to_string(dir.path().join("g.obj.lightlike")).unwrap();
    assert_eq!(side.lines().count(), 11);
}

#[test]
fn calabi_and_conjugate() {
    let out = wickrot(&[
        "calabi",
        "--catalog",
        "scherk-E3",
        "--domain",
        "-1:1:-1:1",
        "--grid",
        "11",
        "--compare",
        "arcsin(sin(x)*sin(y))",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(check_value(&json(&out), "sup_diff_mod_sign") < 1e-6);

    let out = wickrot(&[
        "calabi",
        "--expr",
        "log(cos(x)/cos(y))+0.1*x^3",
        "--kind",
        "E3",
        "--domain",
        "-1:1:-1:1",
    ]);
    assert_eq!(out.status.code(), Some(6));

    let out = wickrot(&["conjugate", "--curve", "s", "cos(s)", "sin(s)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);
}

#[test]
fn parity_and_curvature() {
    let out = wickrot(&["parity", "--catalog", "helicoid"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["slots"][0]["parity"], "odd");
    assert_eq!(r["slots"][1]["parity"], "odd");

    let out = wickrot(&["curvature", "--catalog", "kobayashi-graph", "--at", "0,0"]);
    let r = json(&out);
    assert!((r["point"]["gauss"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn catalog_listing_and_override() {
    let out = wickrot(&["catalog", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("scherk-E3 ")));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.json");
    std::fs::write(
        &path,
        r#"{"version": 1, "entries": [{"id": "plane", "name": "plane", "dsl": "x+y",
            "kind": "E3", "domain": [-1, 1, -1, 1], "parity": ["neither", "neither"]}]}"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wickrot"))
        .args(["verify", "--catalog", "plane", "--grid", "5"])
        .env("WICKROT_CATALOG", &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_wickrot"))
        .args(["catalog", "audit"])
        .env("WICKROT_CATALOG", &path)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

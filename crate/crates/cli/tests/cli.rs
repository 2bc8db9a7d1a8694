use std::process::{Command, Output};

fn gcikit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcikit"))
        .args(args)
        .output()
        .expect("spawn gcikit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn decompose_first_twist() {
    let o = gcikit(&[
        "decompose",
        "--a0",
        "1",
        "--max-twist",
        "1",
        "--max-spin",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("kappa,l,numerator,denominator,decimal,closed_form,match\n"));
    assert!(out.contains("\n1,0,2,1,"), "{out}");
    assert!(out.contains("1,1,1,3,"));
    assert!(!out.contains("false"));
}

#[test]
fn decompose_second_twist() {
    let o = gcikit(&["decompose", "--c", "1", "--max-twist", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\n2,0,1,1,"));
}

#[test]
fn decompose_writes_files() {
    let dir = std::env::temp_dir().join(format!("gcikit-cli-{}", std::process::id()));
    let json = dir.join("out.json");
    let o = gcikit(&[
        "decompose",
        "--a1",
        "1/2",
        "--b",
        "-1/3",
        "--csv-dir",
        dir.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let sc = std::fs::read_to_string(dir.join("structure_constants.csv")).unwrap();
    assert!(sc.lines().count() > 1);
    assert!(std::fs::read_to_string(dir.join("g_series.csv"))
        .unwrap()
        .starts_with("kappa,power"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["closed_form_match"], serde_json::Value::Bool(true));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn config_file_and_override() {
    let dir = std::env::temp_dir().join(format!("gcikit-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"params":{"a0":"3"},"max_twist":1,"max_spin":1}"#).unwrap();
    let o = gcikit(&["decompose", "--config", cfg.to_str().unwrap()]);
    assert!(stdout(&o).contains("\n1,0,6,1,"));
    let o = gcikit(&[
        "decompose",
        "--config",
        cfg.to_str().unwrap(),
        "--a0",
        "1/2",
    ]);
    assert!(stdout(&o).contains("\n1,0,1,1,"));
    std::fs::write(&cfg, r#"{"nonsense":true}"#).unwrap();
    assert_eq!(
        gcikit(&["decompose", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn positivity_grid_flips() {
    let o = gcikit(&["positivity", "--a1", "1", "--grid", "b=-4:0:5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let verdicts: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap())
        .collect();
    assert_eq!(
        verdicts,
        [
            "rejected",
            "admissible",
            "admissible",
            "admissible",
            "admissible"
        ]
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        gcikit(&["positivity", "--grid", "b=1:0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        gcikit(&["positivity", "--grid", "zz=0:1:2"]).status.code(),
        Some(2)
    );
    assert_eq!(gcikit(&["decompose", "--bogus"]).status.code(), Some(2));
    assert_eq!(gcikit(&["decompose", "--a0", "1/0"]).status.code(), Some(2));
    assert_eq!(gcikit(&["decompose", "--B", "-1"]).status.code(), Some(2));
    assert_eq!(
        gcikit(&["thermal", "energy", "--model", "vector"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gcikit(&["verify-all", "--only", "14"]).status.code(),
        Some(2)
    );
    assert_eq!(gcikit(&["oracle", "--n", "7"]).status.code(), Some(2));
}

#[test]
fn oracle_pass_and_corruption() {
    let o = gcikit(&["oracle", "--n", "2", "--count", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("c_2 = -2/1"));
    assert_eq!(
        gcikit(&["oracle", "--n", "2", "--count", "5", "--corrupt-sign"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn thermal_outputs() {
    let o = gcikit(&["thermal", "energy", "--model", "scalar4", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("0/1,1,240"));
    assert!(out.contains("4/1,73,1"), "{out}");
    let o = gcikit(&["thermal", "energy", "--model", "weyl", "--order", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0/1,17,960"));
    assert_eq!(
        gcikit(&["thermal", "modular", "--k", "3", "--tau", "0.2+1.4i"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(gcikit(&["thermal", "anomaly"]).status.code(), Some(0));
    assert_eq!(
        gcikit(&["thermal", "kms", "--model", "scalar"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        gcikit(&["thermal", "modular", "--tol", "1e-30"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn verify_subset() {
    let o = gcikit(&["verify-all", "--only", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[PASS]"));
    assert_eq!(
        gcikit(&["verify-all", "--only", "10", "--tol", "1e-40"])
            .status
            .code(),
        Some(1)
    );
}

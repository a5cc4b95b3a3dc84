use std::process::{Command, Output};

fn mm_forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mm-forge"))
        .args(args)
        .env_remove("MMFORGE_CACHE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn table_csv_is_stable() {
    let a = mm_forge(&["table", "--n1", "3", "--q-min", "2", "--q-max", "16"]);
    let b = mm_forge(&["table", "--n1", "3", "--q-min", "2", "--q-max", "16", "--jobs", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.starts_with("q,n2,constant\n2,1666,5.6009e23\n"));
    assert_eq!(out.lines().count(), 11);
    let big = stdout(&mm_forge(&["table", "--n1", "3", "--q-min", "17", "--q-max", "19"]));
    assert_eq!(big, "q,n2,constant\n17,3723,\n19,1314,\n");
}

#[test]
fn json_format() {
    let o = mm_forge(&["table", "--n1", "2", "--q-min", "19", "--q-max", "19", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["n2"], 39);
    assert_eq!(v[0]["constant"], "3261.6401");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mm_forge(&["table"]).status.code(), Some(2));
    assert_eq!(mm_forge(&["table", "--n1", "3", "--q-min", "20", "--q-max", "10"]).status.code(), Some(2));
    assert_eq!(mm_forge(&["exceptions", "--n1", "2", "--filter-variant", "loose"]).status.code(), Some(2));
    let o = mm_forge(&["witness", "--q", "2", "--n", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not coprime"));
    assert_eq!(mm_forge(&["selftest", "nothing"]).status.code(), Some(2));
}

#[test]
fn verification_exit_codes() {
    assert_eq!(mm_forge(&["verify", "--n1", "2"]).status.code(), Some(0));
    let o = mm_forge(&["verify", "--n1", "3", "--q-min", "2", "--q-max", "16"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fails: q=13 n2=24"));
}

#[test]
fn filter_variants_change_counts() {
    let count = |v: &str| {
        let o = mm_forge(&["exceptions", "--n1", "2", "--filter-variant", v]);
        stdout(&o).lines().count() - 1
    };
    assert_eq!(count("plain"), 195);
    assert_eq!(count("coprime"), 144);
    assert_eq!(count("hh202"), 86);
    assert_eq!(count("coprime+hh202"), 69);
}

#[test]
fn witness_and_construct() {
    let o = mm_forge(&["witness", "--q", "2", "--n", "6"]);
    assert!(o.status.success());
    let w: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(w["verification"]["primitive"], true);
    assert_eq!(w["verification"]["completely_normal"], true);
    let c = mm_forge(&["construct", "--q", "2", "--n", "6"]);
    assert!(c.status.success());
    assert_eq!(stdout(&c).lines().filter(|l| l.ends_with(",true")).count(), 2);
}

#[test]
fn cache_environment_variable_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_mm-forge"))
        .args(["verify", "--n1", "2", "--q-min", "2", "--q-max", "5"])
        .env("MMFORGE_CACHE", &path)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&path).unwrap().lines().count() > 0);
}

#[test]
fn selftest_characters_passes() {
    let o = mm_forge(&["selftest", "characters"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).lines().all(|l| l.contains("PASS")));
}

use std::fs;

use serde_json::Value;
use unital_forge::cli::main_with;
use unital_forge::unitals::UnitalFile;

fn forge(args: &[&str]) -> i32 {
    main_with(std::iter::once("unital-forge").chain(args.iter().copied()))
}

fn json_report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let mut all = args.to_vec();
    let out_s = out.to_str().unwrap().to_string();
    all.extend(["--report", "json", "--out", &out_s]);
    let code = forge(&all);
    let v = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    (code, v)
}

fn check<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn named_examples() {
    let (code, v) = json_report(&["experiments", "wantz-is-unital", "--q", "3"]);
    assert_eq!(code, 0);
    assert_eq!(check(&v, "design")["status"], "pass");

    let (code, v) = json_report(&["experiments", "stabilizer-order", "--q", "3"]);
    assert_eq!(code, 0);
    assert_eq!(check(&v, "linear-stabilizer-order")["witness"], "order 24");

    let (code, v) = json_report(&["experiments", "onan-absent-wantz", "--q", "5", "--threads", "4"]);
    assert_eq!(code, 0);
    assert_eq!(check(&v, "through-vertex")["status"], "pass");
}

#[test]
fn exit_codes() {
    assert_eq!(forge(&["experiments", "no-such-thing"]), 2);
    assert_eq!(forge(&["experiments", "plane-axioms", "--q", "4"]), 2);
    assert_eq!(forge(&["experiments", "plane-axioms", "--report", "xml"]), 2);
    assert_eq!(forge(&["bogus"]), 2);
    assert_eq!(forge(&["experiments", "wantz-is-unital", "--a", "not an element"]), 2);
    // b² − a² = −1 is a non-square of GF(3)
    let (code, v) = json_report(&["unital", "--family", "wantz", "--a", "1", "--b", "0"]);
    assert_eq!(code, 1);
    assert_eq!(check(&v, "design")["status"], "fail");
    assert!(check(&v, "design")["witness"].as_str().unwrap().starts_with("line "));
    let (code, _) = json_report(&["unital", "--family", "B", "--a", "1", "--b", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn subcommands_run() {
    for sub in ["field", "nearfield", "plane", "poly"] {
        let (code, v) = json_report(&[sub, "--q", "3"]);
        assert_eq!(code, 0, "{sub}: {v}");
        assert_eq!(v["experiment"], sub);
    }
    let (_, v) = json_report(&["onan", "--q", "3"]);
    assert_eq!(v["summary"]["fail"], 0);
}

#[test]
fn unital_export_and_reload() {
    let dir = tempfile::tempdir().unwrap();
    for (family, extra) in [("hermitian", vec![]), ("U", vec!["--j", "1", "--b", "2"]), ("wantz", vec!["--a", "i", "--b", "1+i"]), ("V", vec!["--j", "1"])] {
        let path = dir.path().join(format!("{family}.json"));
        let p = path.to_str().unwrap();
        let mut args = vec!["unital", "--q", "3", "--family", family, "--export", p];
        args.extend(extra.iter().copied());
        let (code, v) = json_report(&args);
        let file: UnitalFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let raw: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(raw["q"], 3);
        assert!(raw["points"][0].as_array().unwrap().len() == 3);
        if family != "V" {
            assert_eq!(file.points.len(), 28, "{family}");
        }
        let (code2, v2) = json_report(&["unital", "--input", p]);
        assert_eq!(code, code2, "{family}");
        assert_eq!(check(&v2, "matches-family")["status"], "pass");
        assert_eq!(check(&v, "design")["status"], check(&v2, "design")["status"]);
    }
}

#[test]
fn text_report_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    assert_eq!(forge(&["field", "--out", out.to_str().unwrap()]), 0);
    let text = fs::read_to_string(out).unwrap();
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(checks.len(), 7);
}

use serde_json::{json, Value};
use unital_forge::report::{Check, Fingerprint, Recorder, Report, Status, SCHEMA};

fn sample() -> Report {
    let mut rec = Recorder::new();
    rec.run("one", || (Status::Pass, None));
    rec.scope("grp");
    rec.run("two", || (Status::Fail, Some("line [0,1,0] meets the set in 2 points".into())));
    rec.run("three", || (Status::Inapplicable, Some("needs q = 3 mod 4".into())));
    Report::new("demo", json!({ "q": 3 }), rec.finish(), Fingerprint::current(4, true))
}

#[test]
fn json_round_trips_through_a_strict_parser() {
    let r = sample();
    let text = r.to_json();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert_eq!(v["checks"][1]["status"], "fail");
    assert_eq!(v["checks"][2]["status"], "inapplicable");
    assert!(v["checks"][0]["witness"].is_null());
    assert_eq!(v["fingerprint"]["threads"], 4);
    assert_eq!(v["fingerprint"]["cache"], true);
    assert_eq!(Report::from_json(&text).unwrap(), r);
    let keys: Vec<&str> = ["\"schema\"", "\"experiment\"", "\"params\"", "\"checks\"", "\"summary\"", "\"fingerprint\""].to_vec();
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "stable field order");
}

#[test]
fn text_has_one_line_per_check() {
    let r = sample();
    let text = r.to_text();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + r.checks.len() + 1);
    assert!(lines[1].starts_with("PASS one"));
    assert!(lines[2].starts_with("FAIL grp/two"));
    assert!(lines[3].contains("grp/three"));
    assert!(!r.passed());
    assert_eq!((r.summary.pass, r.summary.fail, r.summary.inapplicable), (1, 1, 1));
}

#[test]
fn canonical_ignores_timing_and_fingerprint() {
    let a = sample();
    let mut b = a.clone();
    b.fingerprint = Fingerprint::current(1, false);
    for c in &mut b.checks {
        c.elapsed_ms += 17;
    }
    assert_eq!(a.canonical(), b.canonical());
    assert!(!a.canonical().contains("elapsed_ms"));
    b.checks.push(Check { name: "extra".into(), status: Status::Pass, witness: None, elapsed_ms: 0 });
    assert_ne!(a.canonical(), b.canonical());
}

//! The JSON report layout is pinned by a golden file; bump the schema
//! version and regenerate when the shape changes intentionally:
//!
//! ```text
//! cargo run --bin realvar -- solve --json golden/uni2.sys > golden/uni2.json
//! ```

use realvar_cli::{corpus, json};
use realvar_core::{solve, SolveConfig};

#[test]
fn solve_report_matches_golden() {
    let sys = corpus::system("uni2").unwrap();
    let result = solve(&sys, &SolveConfig::default()).unwrap();
    let got = serde_json::to_string_pretty(&json::report(&result)).unwrap();
    let want = include_str!("../golden/uni2.json");
    assert_eq!(got.trim(), want.trim(), "JSON schema drifted; regenerate the golden file if intentional");
}

#[test]
fn schema_version_is_declared() {
    let v: serde_json::Value = serde_json::from_str(include_str!("../golden/uni2.json")).unwrap();
    assert_eq!(v["schema_version"], serde_json::json!(json::SCHEMA_VERSION));
    assert!(v["outcome"]["status"].is_string());
}

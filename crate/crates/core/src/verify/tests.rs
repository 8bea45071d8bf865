use std::collections::HashSet;
use std::sync::OnceLock;

use super::*;

fn full() -> &'static VerificationReport {
    static R: OnceLock<VerificationReport> = OnceLock::new();
    R.get_or_init(|| run_identity_suite(&VerifyConfig::reference()))
}

#[test]
fn table_and_checks_agree() {
    let names: HashSet<&str> = TOLERANCES.iter().map(|t| t.name).collect();
    assert_eq!(names.len(), TOLERANCES.len());
    assert_eq!(checks::CHECKS.len(), TOLERANCES.len());
    for ((name, _), tol) in checks::CHECKS.iter().zip(TOLERANCES) {
        assert_eq!(*name, tol.name);
    }
}

#[test]
fn empty_selection_gives_empty_report() {
    let r = run_identity_suite(&VerifyConfig::reference().with_groups(vec![]));
    assert!(r.entries.is_empty());
    assert_eq!(r.summary.total, 0);
    assert_eq!(r.summary.failed, 0);
    assert_eq!(r.summary.max_error_ratio, 0.0);
}

#[test]
fn full_suite_passes_on_reference() {
    let r = full();
    for e in &r.entries {
        println!("{} {:e} <= {:e} {}", e.name, e.error, e.tolerance, e.passed);
    }
    assert_eq!(r.entries.len(), TOLERANCES.len());
    assert!(
        r.all_passed(),
        "{:?}",
        r.entries.iter().filter(|e| !e.passed).collect::<Vec<_>>()
    );
    for e in &r.entries {
        assert_eq!(e.passed, e.error <= e.tolerance);
    }
}

#[test]
fn corrupted_g1_fails_matsubara_entry() {
    let cfg = VerifyConfig {
        g1_scale: 1.01,
        ..VerifyConfig::reference().with_groups(vec![Group::Symbols])
    };
    let r = run_identity_suite(&cfg);
    let m = r.entries.iter().find(|e| e.name == "matsubara_g1").unwrap();
    assert!(!m.passed);
    assert!(r
        .entries
        .iter()
        .filter(|e| e.name != "matsubara_g1")
        .all(|e| e.passed));
}

#[test]
fn failing_prerequisite_becomes_failed_entries() {
    let mut cfg = VerifyConfig::reference().with_groups(vec![Group::Gap]);
    cfg.mu = f64::NAN;
    let r = run_identity_suite(&cfg);
    assert!(!r.entries.is_empty());
    assert!(r.entries.iter().all(|e| !e.passed && e.note.is_some()));
    assert!(r.to_jsonl().lines().count() == r.entries.len() + 1);
}

#[test]
fn report_is_reproducible() {
    let cfg = VerifyConfig::reference().with_groups(vec![Group::Symbols]);
    assert_eq!(
        run_identity_suite(&cfg).to_jsonl(),
        run_identity_suite(&cfg).to_jsonl()
    );
}

#[test]
fn jsonl_has_one_line_per_entry_plus_summary() {
    let text = full().to_jsonl();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), full().entries.len() + 1);
    let last: serde_json::Value = serde_json::from_str(lines.last().unwrap()).unwrap();
    assert_eq!(last["summary"]["failed"], 0);
}

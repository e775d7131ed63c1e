use boolmetric::oracle::{default_envelope, run_theorem_suite, SuiteConfig};

#[test]
fn theorem_suite_over_default_envelope() {
    let cfg = SuiteConfig::default();
    let mut failures = vec![];
    for (spec, n) in default_envelope() {
        let report = run_theorem_suite(spec, n, &cfg);
        failures.extend(report.failures().cloned());
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

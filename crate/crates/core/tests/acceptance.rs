use holoww::runner::{run_suite, VerifyOptions, DEFAULT_SEED};

fn criterion(k: usize, suite: &str) {
    let opts = VerifyOptions { modes: None, seed: DEFAULT_SEED };
    let report = run_suite(suite, &opts).unwrap_or_else(|e| panic!("[{k}] {suite}: error: {e}"));
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    let detail: Vec<String> = report.lines();
    println!("[{k}] {suite}: {verdict}");
    for line in &detail {
        println!("    {line}");
    }
    let failed: Vec<String> = report.failures().map(|c| c.id.clone()).collect();
    assert!(failed.is_empty(), "[{k}] {suite}: FAIL {failed:?}");
}

#[test]
fn c1_identities() {
    criterion(1, "identities");
}

#[test]
fn c2_linear_exactness() {
    criterion(2, "linear");
}

#[test]
fn c3_conservation() {
    criterion(3, "conservation");
}

#[test]
fn c4_cancellation_ladder() {
    criterion(4, "scaling");
}

#[test]
fn c5_consistency() {
    criterion(5, "consistency");
}

#[test]
fn c6_packet_laws() {
    criterion(6, "packets");
}

#[test]
fn c7_gamma_behavior() {
    criterion(7, "gamma");
}

#[test]
fn c8_decay() {
    criterion(8, "decay");
}

#[test]
fn c9_structure() {
    criterion(9, "structure");
}

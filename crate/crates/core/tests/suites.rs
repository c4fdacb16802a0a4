use bondspan::verify::{run_suite, Suite, VerifyOptions};

fn assert_passes(suite: Suite, opts: &VerifyOptions) {
    let report = run_suite(suite, opts).unwrap();
    for c in &report.checks {
        assert!(c.checked > 0, "{} never ran", c.name);
    }
    assert!(report.passed(), "{report:#?}");
}

#[test]
fn graph_lemmas_up_to_seven_edges() {
    let opts = VerifyOptions {
        max_edges: 7,
        trials: Some(10),
        ..VerifyOptions::default()
    };
    assert_passes(Suite::Graphs, &opts);
}

#[test]
fn stochastic_checks() {
    let opts = VerifyOptions {
        trials: Some(100),
        ..VerifyOptions::default()
    };
    assert_passes(Suite::Stochastic, &opts);
}

#[test]
fn matroid_checks() {
    let opts = VerifyOptions {
        trials: Some(50),
        ..VerifyOptions::default()
    };
    assert_passes(Suite::Matroids, &opts);
}

#[test]
fn different_seeds_change_nothing_structural() {
    let opts = |seed| VerifyOptions {
        max_vertices: 4,
        max_edges: 5,
        trials: Some(5),
        seed,
        ..VerifyOptions::default()
    };
    let a = run_suite(Suite::Graphs, &opts(1)).unwrap();
    let b = run_suite(Suite::Graphs, &opts(2)).unwrap();
    let count = |r: &bondspan::verify::SuiteReport, n: &str| r.check(n).unwrap().checked;
    assert_eq!(count(&a, "contraction_never_grows_bond"), count(&b, "contraction_never_grows_bond"));
}

use orbitdepth::curve::{default_eps_grid, four_pi_squared_check, pairing_table, v3_crosscheck};
use orbitdepth::melnikov::{classify, mv, parse_ratfunc, ClassTag, Deformation};
use orbitdepth::report::{full_pipeline, run_suite, Config, Suite};

#[test]
fn flagship_hierarchy_and_class() {
    let d = Deformation::flagship();
    assert_eq!(mv(3, &d).unwrap().value, parse_ratfunc("t^2").unwrap());
    assert!(mv(2, &d).unwrap().value.is_zero());
    assert_eq!(classify(&d).tag, ClassTag::Length3);
}

#[test]
fn periods_at_two_levels() {
    for t in [0.2, 0.36, 0.45] {
        assert!(
            pairing_table(t, 1e-9).unwrap().pass,
            "pairing table at t = {t}"
        );
        assert!(
            four_pi_squared_check(t, 1e-6).unwrap().pass,
            "4 pi^2 at t = {t}"
        );
    }
}

#[test]
fn v3_coefficient_matches_closed_form() {
    let r = v3_crosscheck(&Deformation::flagship(), 0.36, &default_eps_grid(), 5e-3).unwrap();
    assert!(r.check.pass, "{:?}", r.check);
}

#[test]
fn exact_suites_pass_except_the_stated_corner() {
    let cfg = Config {
        k_max: 3,
        samples: 20,
        ..Config::default()
    };
    for suite in [Suite::Orbit, Suite::Melnikov] {
        let report = run_suite(suite, &cfg).unwrap();
        assert!(
            report.pass,
            "{suite}: {:?}",
            report.failures().map(|r| &r.id).collect::<Vec<_>>()
        );
    }
    let repr = run_suite(Suite::Repr, &cfg).unwrap();
    let failing: Vec<&str> = repr.failures().map(|r| r.id.as_str()).collect();
    assert_eq!(
        failing,
        [
            "repr.stated_corner.k1",
            "repr.stated_corner.k2",
            "repr.stated_corner.k3"
        ]
    );
}

#[test]
fn numeric_suite_fails_only_the_stated_scaling() {
    let report = run_suite(Suite::Numeric, &Config::default()).unwrap();
    let failing: Vec<&str> = report.failures().map(|r| r.id.as_str()).collect();
    assert_eq!(failing, ["num.center_scaling_stated"]);
}

#[test]
fn pipeline_runs_every_job_in_order() {
    let cfg = Config {
        k_max: 2,
        samples: 10,
        ..Config::default()
    };
    let report = full_pipeline(&cfg).unwrap();
    assert!(report.aborted.is_none());
    let ids: Vec<&str> = report.records.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids.first(), Some(&"orbit.mon1_images"));
    assert!(
        ids.iter().position(|id| id.starts_with("repr."))
            < ids.iter().position(|id| id.starts_with("mel."))
    );
    assert!(
        ids.iter().position(|id| id.starts_with("mel."))
            < ids.iter().position(|id| id.starts_with("num."))
    );
    assert_eq!(report.exit_code(), 1);
}

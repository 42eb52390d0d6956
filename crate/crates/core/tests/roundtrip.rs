use sftlab_core::builtins::catalog;
use sftlab_core::suite::{run_suite, SuiteOptions};
use sftlab_core::system::{build_system, parse_system, to_system_file};

#[test]
fn builtins_survive_a_rule_table_round_trip() {
    for (name, shift, auto) in catalog().unwrap() {
        let file = to_system_file(&name, &auto);
        let text = serde_json::to_string(&file).unwrap();
        let system = build_system(&parse_system(&text).unwrap()).unwrap();
        assert_eq!(system.shift.matrix(), shift.matrix(), "{name}");
        assert!(system.automorphisms[&name].same_map(&auto), "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    let opts = SuiteOptions::default();
    for suite in ["profile", "spectra"] {
        let a = serde_json::to_string(&run_suite(suite, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(suite, &opts).unwrap()).unwrap();
        assert_eq!(a, b, "{suite}");
    }
}

use ta_core::testgen::{fuzz_morphisms, fuzz_substitutions, GenConfig};

#[test]
fn morphism_satisfaction_condition() {
    let out = fuzz_morphisms(7, 400, &GenConfig::default());
    assert!(out.all_agree(), "{:?}", out.failures);
    assert!(out.empty_carrier_cases > 0);
    assert!(out.star_cases > 0);
}

#[test]
fn substitution_satisfaction_condition() {
    let out = fuzz_substitutions(11, 400, &GenConfig::default());
    assert!(out.all_agree(), "{:?}", out.failures);
}

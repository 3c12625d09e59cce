use std::time::Instant;

use critlab::criticality::{classify, Classification, ClassifyOptions, DirectionVerdict};
use critlab::operator::{PresetRegistry, CE1_DRIFT, CE1_SA, CE2_DRIFT, CE2_SA, LIMIT_SA};

fn run(name: &str) -> critlab::criticality::CriticalityReport {
    let reg = PresetRegistry::with_defaults(1e-9).unwrap();
    let p = reg.get(name).unwrap();
    let op = p.build().unwrap();
    let phi = p.ground_state().unwrap();
    let t = Instant::now();
    let r = classify(&op, phi.as_ref(), &ClassifyOptions::default()).unwrap();
    eprintln!("{name}: {:?} in {:?}\n{:?}\n{:?}", r.classification, t.elapsed(), r.forward, r.backward);
    for d in &r.integrals {
        eprintln!("  R={} fwd={:?} bwd={:?}", d.radius, d.forward, d.backward);
    }
    r
}

#[test]
fn trichotomy() {
    assert_eq!(run(CE1_SA).classification, Classification::Critical);
    assert_eq!(run(CE2_SA).classification, Classification::Subcritical);
    assert_eq!(run(LIMIT_SA).classification, Classification::Critical);
}

#[test]
fn drift_forms_agree_with_gauged_forms() {
    assert_eq!(run(CE1_DRIFT).classification, Classification::Critical);
    let r = run(CE2_DRIFT);
    assert_eq!(r.classification, Classification::Subcritical);
    assert!(matches!(r.forward, DirectionVerdict::Converges { .. }));
}

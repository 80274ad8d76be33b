use walg_core::algebra::presets::{triplet_p2, TripletConstants};
use walg_core::algebra::{canonical_words, Engine};
use walg_core::c2::{
    certificate_from_json, certificate_to_json, certify_triplet_p2, manifest_member, verify_certificate,
    Certificate, NullCoefficients, Rule, StepParams,
};
use walg_core::scalar::{rat, Poly};
use walg_core::{AlgebraSpec, State};

fn setup() -> (AlgebraSpec, Engine) {
    let spec = triplet_p2(&TripletConstants::symbolic());
    let engine = Engine::new(spec.clone());
    (spec, engine)
}

fn cert(engine: &Engine) -> Certificate {
    certify_triplet_p2(engine, &NullCoefficients::default()).unwrap()
}

#[test]
fn triplet_certificate_verifies() {
    let (spec, engine) = setup();
    let c = cert(&engine);
    let report = verify_certificate(&c, &spec);
    assert!(report.valid, "{:?}", report.failure);
    assert_eq!(report.checked, c.steps.len());
}

#[test]
fn targets_cover_the_listed_vectors() {
    let (_, engine) = setup();
    let c = cert(&engine);
    let vectors: Vec<&State> = c.target_steps().map(|s| &s.claim.vector).collect();
    let l2 = engine.mode("T", -2).unwrap();
    let l6 = engine.normal_order(&[l2; 6]).unwrap();
    assert!(vectors.contains(&&l6));
    for a in 1..=3 {
        let w = engine.mode(&format!("W{a}"), -3).unwrap();
        for m in 3..=5 {
            let power = engine.normal_order(&vec![w; m]).unwrap();
            assert!(vectors.contains(&&power), "W{a}^{m}");
        }
    }
    assert_eq!(c.targets.len(), 3 * 5 + 1);
}

#[test]
fn corrupting_a_step_is_detected() {
    let (spec, engine) = setup();
    let c = cert(&engine);
    let l2 = engine.mode("T", -2).unwrap();
    let bump = engine.normal_order(&[l2, l2, l2]).unwrap();
    for i in 0..c.steps.len() {
        let mut bad = c.clone();
        let w = bad.steps[i].claim.vector.weight().unwrap().unwrap();
        let extra = if w == 6 { bump.clone() } else { engine.normal_order(&vec![l2; (w / 2) as usize]).unwrap() };
        bad.steps[i].claim.vector += &extra;
        let report = verify_certificate(&bad, &spec);
        assert!(!report.valid, "step {i} corruption went unnoticed");
        assert_eq!(report.checked, i, "step {i}");
    }
}

#[test]
fn forward_references_are_rejected() {
    let (spec, engine) = setup();
    let mut c = cert(&engine);
    let last = c.steps.len() - 1;
    c.steps[1].uses.push(last);
    assert!(!verify_certificate(&c, &spec).valid);
}

#[test]
fn lone_virasoro_cube_is_not_manifest() {
    let (spec, engine) = setup();
    let mut c = cert(&engine);
    let l2 = engine.mode("T", -2).unwrap();
    let step = &mut c.steps[0];
    step.claim.vector = engine.normal_order(&[l2, l2, l2]).unwrap();
    step.rule = Rule::ManifestMember;
    step.params = StepParams::None;
    step.uses.clear();
    assert!(!verify_certificate(&c, &spec).valid);
}

#[test]
fn wrong_coefficient_table_still_verifies_with_dependencies_flagged() {
    let (spec, engine) = setup();
    let mut k = NullCoefficients::default();
    k.l2_cubed = Poly::constant(rat(1, 2));
    let c = certify_triplet_p2(&engine, &k).unwrap();
    assert!(verify_certificate(&c, &spec).valid);
    let l6 = c.step(*c.targets.last().unwrap()).unwrap();
    assert!(l6.depends_on.contains("l2_cubed"));
    for s in c.target_steps() {
        let w = s.claim.vector.weight().unwrap().unwrap();
        if w == 9 || w == 12 && s.id != l6.id || w == 15 {
            assert!(s.depends_on.contains("l2_cubed"), "step {}", s.id);
        }
    }
    k.l2_cubed = Poly::zero();
    assert!(certify_triplet_p2(&engine, &k).is_err());
}

#[test]
fn manifest_membership_is_monotone() {
    let (spec, _) = setup();
    for weight in 0..=8 {
        for word in canonical_words(&spec, weight) {
            for n in 1..4 {
                if manifest_member(&word, n + 1, &spec) {
                    assert!(manifest_member(&word, n, &spec));
                }
            }
        }
    }
}

#[test]
fn json_round_trip() {
    let (spec, engine) = setup();
    let c = cert(&engine);
    let text = certificate_to_json(&c, &spec);
    let back = certificate_from_json(&text, &spec).unwrap();
    assert_eq!(back, c);
    assert!(verify_certificate(&back, &spec).valid);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["steps"][0]["claim"]["space"], "C2");
}

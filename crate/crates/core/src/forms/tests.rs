use super::*;
use crate::report::Status;
use Letter::*;

fn q() -> ParamRational {
    param(Param::Q)
}
fn p() -> ParamRational {
    param(Param::P)
}
fn r() -> ParamRational {
    param(Param::R)
}
fn s() -> ParamRational {
    param(Param::S)
}

fn at_s_qr() -> Bindings {
    let mut b = Bindings::new();
    b.insert(Param::S, &q() * &r());
    b
}

fn rule_for(rels: &[DerivedRelation], lhs: (Letter, Letter)) -> &DerivedRelation {
    rels.iter().find(|d| d.lhs == lhs).unwrap()
}

#[test]
fn embeddings_have_expected_normal_forms() {
    let gamma = Relations::differential(Family::I, &Bindings::new()).unwrap();
    assert_eq!(embed_w(&gamma).to_string(), "dx*xinv");
    // dx x⁻¹ θ x⁻¹ = q⁻¹ dx θ x⁻², from θ x⁻¹ = q x⁻¹ θ.
    assert_eq!(embed_u(&gamma).to_string(), "dth*xinv - q^-1*dx*th*xinv^2");
}

#[test]
fn family_one_cross_relations() {
    let d = derive_cross_relations(Family::I, &Bindings::new()).unwrap();
    let xw = rule_for(&d, (X, W));
    assert!(xw.matches());
    assert!(same_rhs(&xw.derived, &[term(p(), &[W, X])]));
    assert!(same_rhs(&rule_for(&d, (Theta, U)).derived, &[term(&p() * &q(), &[U, Theta])]));
    assert!(same_rhs(&rule_for(&d, (X, U)).derived, &[term(&p() * &q(), &[U, X])]));
    // By hand: θ dx x⁻¹ = −q⁻¹ dx θ x⁻¹ + (1 − p) dθ = −wθ + (1 − p)(ux + wθ).
    let tw = rule_for(&d, (Theta, W));
    let one = ParamRational::one();
    assert!(same_rhs(&tw.derived, &[term(-p(), &[W, Theta]), term(&one - &p(), &[U, X])]));
    assert!(!tw.matches());
}

#[test]
fn family_two_cross_relations() {
    let d = derive_cross_relations(Family::II, &Bindings::new()).unwrap();
    assert!(d.iter().all(|r| r.matches()), "{d:?}");
    let at = derive_cross_relations(Family::II, &at_s_qr()).unwrap();
    assert!(same_rhs(&rule_for(&at, (X, U)).derived, &[term(q(), &[U, X])]));
}

#[test]
fn form_form_relations() {
    let one = derive_form_form_relations(Family::I, &Bindings::new()).unwrap();
    assert!(one.iter().all(|r| r.matches()));
    assert!(rule_for(&one, (W, W)).derived.is_empty());

    let two = derive_form_form_relations(Family::II, &Bindings::new()).unwrap();
    let wu = rule_for(&two, (W, U));
    let lambda = &s() * &(&q() * &r()).inv().unwrap();
    assert!(same_rhs(&wu.derived, &[term(lambda, &[U, W])]));
    assert!(!wu.matches());
    let at = derive_form_form_relations(Family::II, &at_s_qr()).unwrap();
    assert!(at.iter().all(|r| r.matches()));
}

#[test]
fn derived_relations_hold_in_the_differential_algebra() {
    for (family, bindings) in [(Family::I, Bindings::new()), (Family::II, Bindings::new()), (Family::II, at_s_qr())] {
        let gamma = Relations::differential(family, &bindings).unwrap();
        let omega = omega_relations(family, &bindings).unwrap();
        for (_, lhs, rhs) in crate::algebra::defining_relations(&omega) {
            assert!(embed(&gamma, &(&lhs - &rhs)).is_zero(), "{lhs} = {rhs}");
        }
    }
}

#[test]
fn re_expression_of_simple_elements() {
    let gamma = Relations::differential(Family::I, &Bindings::new()).unwrap();
    let free = Relations::free(Family::I, AlgebraKind::Forms);
    let x = word(&gamma, &[X]);
    let back = re_express(&gamma, &free, &x).unwrap();
    assert_eq!(back.to_string(), "x");
    let w = embed_w(&gamma);
    assert_eq!(re_express(&gamma, &free, &(&w * &x)).unwrap().to_string(), "w*x");
}

#[test]
fn omega_checks() {
    let b = Bindings::new();
    let one = verify_omega(Family::I, &b, 20, 3, AntipodeConvention::Graded).unwrap();
    assert!(one.iter().all(|c| c.passed()), "{one:#?}");
    assert!(one.iter().any(|c| c.status == Status::Info && c.paper_eq == "38a"));

    let two = verify_omega(Family::II, &at_s_qr(), 20, 3, AntipodeConvention::Graded).unwrap();
    assert!(two.iter().all(|c| c.passed()), "{two:#?}");

    let generic = verify_omega(Family::II, &b, 20, 3, AntipodeConvention::Graded).unwrap();
    let failed: Vec<_> = generic.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    assert!(failed.contains(&"coproduct preserves th*w = -q*r*w*th"), "{failed:?}");
    assert!(generic.iter().any(|c| c.name == "relations at s = q*r"));
}

#[test]
fn derive_forms_records_flag_the_two_printed_mismatches() {
    let one = derive_forms_records(Family::I, &Bindings::new()).unwrap();
    assert_eq!(one.iter().filter(|c| !c.passed()).count(), 1);
    let two = derive_forms_records(Family::II, &Bindings::new()).unwrap();
    assert_eq!(two.iter().filter(|c| !c.passed()).count(), 1);
    assert!(two.iter().find(|c| !c.passed()).unwrap().paper_eq == "39b");
}

use std::sync::Arc;

use super::*;
use crate::coeffs::{Bindings, Param, ParamRational};
use Letter::*;

fn q() -> ParamRational {
    Param::Q.into()
}

fn p() -> ParamRational {
    Param::P.into()
}

fn gamma(f: Family) -> Arc<Relations> {
    Relations::differential(f, &Bindings::new()).unwrap()
}

fn w(rels: &Arc<Relations>, letters: &[Letter]) -> Element {
    Element::word(rels, Word(letters.to_vec()), ParamRational::one()).unwrap()
}

fn c(rels: &Arc<Relations>, k: ParamRational, letters: &[Letter]) -> Element {
    Element::word(rels, Word(letters.to_vec()), k).unwrap()
}

#[test]
fn raw_multiply_is_concatenation() {
    let g = gamma(Family::I);
    let x = w(&g, &[X]);
    let th = w(&g, &[Theta]);
    assert_eq!(x.multiply(&th).unwrap(), w(&g, &[X, Theta]));
    let a = c(&g, &ParamRational::from_int(2) * &q(), &[X]);
    let b = c(&g, ParamRational::from_int(3), &[Dx]);
    assert_eq!(a.multiply(&b).unwrap(), c(&g, &ParamRational::from_int(6) * &q(), &[X, Dx]));
    let sum = (&x + &th).multiply(&th).unwrap();
    assert_eq!(sum, &w(&g, &[X, Theta]) + &w(&g, &[Theta, Theta]));
    let other = gamma(Family::II);
    assert!(matches!(
        x.multiply(&w(&other, &[X])),
        Err(AlgebraError::FamilyMismatch(..))
    ));
}

#[test]
fn normalize_examples() {
    let g1 = gamma(Family::I);
    let g2 = gamma(Family::II);
    assert_eq!(w(&g1, &[X, Theta]).normalize(), c(&g1, q(), &[Theta, X]));
    assert!(w(&g1, &[Theta, Theta]).normalize().is_zero());
    let qinv = q().inv().unwrap();
    let expected = &c(&g1, -&qinv, &[Dx, Theta]) + &c(&g1, &ParamRational::one() - &p(), &[DTheta, X]);
    assert_eq!(w(&g1, &[Theta, Dx]).normalize(), expected);
    let rinv = ParamRational::param(Param::R).inv().unwrap();
    assert_eq!(w(&g2, &[Dx, DTheta]).normalize(), c(&g2, rinv, &[DTheta, Dx]));
}

#[test]
fn inverse_rules_match_conjugation_oracle() {
    let g = gamma(Family::I);
    let qinv = q().inv().unwrap();
    let got = w(&g, &[XInv, Theta]).normalize();
    assert_eq!(got, c(&g, qinv, &[Theta, XInv]));
    // x⁻¹·normalize(xθ) must give θ back.
    let back = &w(&g, &[XInv]) * &w(&g, &[X, Theta]).normalize();
    assert_eq!(back, w(&g, &[Theta]));

    let pinv = p().inv().unwrap();
    assert_eq!(w(&g, &[XInv, Dx]).normalize(), c(&g, pinv.clone(), &[Dx, XInv]));
    let rel = &w(&g, &[X, Dx]) - &c(&g, p(), &[Dx, X]);
    let conj = w(&g, &[XInv]).multiply(&rel).unwrap().multiply(&w(&g, &[XInv])).unwrap();
    assert!(conj.normalize().is_zero());

    let pqinv = (&p() * &q()).inv().unwrap();
    assert_eq!(w(&g, &[XInv, DTheta]).normalize(), c(&g, pqinv, &[DTheta, XInv]));
    assert!(w(&g, &[XInv, X]).normalize() == Element::one(&g));
    assert!(w(&g, &[X, XInv]).normalize() == Element::one(&g));
}

#[test]
fn family_two_inverse_rule_for_dtheta() {
    // x⁻¹ dθ = q⁻¹ dθ x⁻¹ − (qr − 1) q⁻² s⁻¹ dx θ x⁻², checked by multiplying
    // back with x on the left.
    let g = gamma(Family::II);
    let got = w(&g, &[XInv, DTheta]).normalize();
    let back = &w(&g, &[X]) * &got;
    assert_eq!(back, w(&g, &[DTheta]));
    let r: ParamRational = Param::R.into();
    let s: ParamRational = Param::S.into();
    let k = -&(&(&(&q() * &r) - &ParamRational::one()) * &(&q().pow(-2).unwrap() * &s.inv().unwrap()));
    let expected = &c(&g, q().inv().unwrap(), &[DTheta, XInv]) + &c(&g, k, &[Dx, Theta, XInv, XInv]);
    assert_eq!(got, expected);
}

#[test]
fn x_inverse_consistency_on_generators() {
    for f in Family::ALL {
        let g = gamma(f);
        for l in [X, XInv, Theta, Dx, DTheta] {
            let gx = w(&g, &[X]) * w(&g, &[l]);
            assert_eq!(&w(&g, &[XInv]) * &gx, w(&g, &[l]).normalize(), "{f} {l}");
            let gi = w(&g, &[XInv]) * w(&g, &[l]);
            assert_eq!(&w(&g, &[X]) * &gi, w(&g, &[l]).normalize(), "{f} {l}");
        }
    }
}

#[test]
fn defining_relations_lie_in_the_ideal() {
    for f in Family::ALL {
        let g = gamma(f);
        for (eq, lhs, rhs) in defining_relations(&g) {
            assert!((&lhs - &rhs).normalize().is_zero(), "{f} ({eq})");
        }
    }
}

#[test]
fn every_out_of_order_pair_has_a_rule() {
    for f in Family::ALL {
        let g = gamma(f);
        for &a in AlgebraKind::Differential.alphabet() {
            for &b in AlgebraKind::Differential.alphabet() {
                let word = w(&g, &[a, b]).normalize();
                assert!(word.is_normal(), "{a}{b}");
                for (m, _) in word.monomials() {
                    assert!(m.b <= 1 && m.e <= 1);
                }
            }
        }
    }
}

#[test]
fn strategies_agree_and_normal_form_is_idempotent() {
    let g = gamma(Family::II);
    let word = w(&g, &[DTheta, Theta, X, Dx, XInv, Theta, DTheta, X, Dx, X]);
    let left = word.normalize_with(Strategy::Leftmost).unwrap();
    let right = word.normalize_with(Strategy::Rightmost).unwrap();
    let random = word.normalize_with(Strategy::Random(11)).unwrap();
    assert_eq!(left, right);
    assert_eq!(left, random);
    assert_eq!(left.normalize(), left);
}

#[test]
fn tensor_products_carry_koszul_signs() {
    let g = gamma(Family::I);
    let t = |a: &[Letter], b: &[Letter]| TensorElement::pure(&g, vec![Word(a.to_vec()), Word(b.to_vec())], ParamRational::one());
    let prod = t(&[Theta], &[X]).tensor_multiply(&t(&[X], &[Theta])).unwrap();
    let expected = TensorElement::pure(&g, vec![Word(vec![Theta, X]), Word(vec![Theta, X])], q());
    assert_eq!(prod, expected);

    let prod = t(&[X], &[Theta]).tensor_multiply(&t(&[Theta], &[X])).unwrap();
    let expected = TensorElement::pure(&g, vec![Word(vec![Theta, X]), Word(vec![Theta, X])], -q());
    assert_eq!(prod, expected);

    let unit = TensorElement::unit(&g, 2);
    let ab = t(&[Dx, X], &[Theta]);
    assert_eq!(unit.tensor_multiply(&ab).unwrap(), ab.normalize());
    assert!(matches!(
        unit.tensor_multiply(&TensorElement::unit(&g, 3)),
        Err(AlgebraError::ArityMismatch(2, 3))
    ));
}

#[test]
fn grades() {
    let g = gamma(Family::I);
    assert_eq!(
        w(&g, &[Theta, Dx]).grade_of(),
        GradeOf::Homogeneous(Grade { parity: Parity::Even, form_degree: 1 })
    );
    assert_eq!(
        w(&g, &[Dx, XInv]).normalize().grade_of(),
        GradeOf::Homogeneous(Grade { parity: Parity::Odd, form_degree: 1 })
    );
    assert_eq!((&w(&g, &[X]) + &w(&g, &[Dx])).grade_of(), GradeOf::Inhomogeneous);
    assert_eq!(Element::zero(&g).grade_of(), GradeOf::Zero);
}

#[test]
fn foreign_generators_are_rejected() {
    let g = gamma(Family::I);
    assert!(matches!(
        Element::generator(&g, W),
        Err(AlgebraError::ForeignGenerator(W, _))
    ));
}

#[test]
fn rewriting_checks_pass() {
    for f in Family::ALL {
        let records = verify_consistency(f, &Bindings::new(), 60, 1).unwrap();
        assert!(records.iter().all(|r| r.passed()), "{records:#?}");
    }
}

#[test]
fn supercommutative_oracle() {
    let (m, neg) = supercommutative_normal_form(&[Theta, X, Dx, DTheta]).unwrap();
    assert_eq!(m, NormalMonomial { a: 1, b: 1, e: 1, n: 1 });
    assert!(neg);
    assert!(supercommutative_normal_form(&[Dx, X, Dx]).is_none());
    let records = verify_classical_limit(100, 9).unwrap();
    assert!(records.iter().all(|r| r.passed()), "{records:#?}");
}

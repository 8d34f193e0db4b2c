//! Soundness checks for the rewrite systems themselves.

use std::sync::Arc;

use super::{defining_relations, AlgebraError, AlgebraKind, Element, Family, Letter, NormalMonomial, Relations, Strategy};
use crate::algebra::ConsistencyCoefficients;
use crate::coeffs::{Bindings, Param, ParamRational};
use crate::random::Sampler;
use crate::report::CheckRecord;

pub const CONFLUENCE_WORD_LEN: usize = 12;

/// Every defining relation normalises to zero, and three rewrite strategies
/// agree on `fuel` random words of length at most 12.
pub fn verify_rewriting(rels: &Arc<Relations>, fuel: usize, seed: u64) -> Result<Vec<CheckRecord>, AlgebraError> {
    let mut out = Vec::new();
    for (eq, lhs, rhs) in defining_relations(rels) {
        let diff = (&lhs - &rhs).normalize();
        out.push(CheckRecord::from_outcome(
            format!("normalize({lhs} - ({rhs})) = 0"),
            eq,
            (!diff.is_zero()).then(|| diff.to_string()),
        ));
    }
    for l in [Letter::X, Letter::XInv] {
        let other = if l == Letter::X { Letter::XInv } else { Letter::X };
        let e = Element::word(rels, super::Word(vec![l, other]), ParamRational::one())?.normalize();
        out.push(CheckRecord::from_outcome(
            format!("{l}*{other} = 1"),
            "",
            (!e.as_scalar().is_some_and(|c| c.is_one())).then(|| e.to_string()),
        ));
    }

    let mut sampler = Sampler::new(seed);
    let alphabet = rels.kind().alphabet();
    let mut witness = None;
    for i in 0..fuel {
        let w = sampler.word(alphabet, 1, CONFLUENCE_WORD_LEN);
        let e = Element::word(rels, w.clone(), ParamRational::one())?;
        let left = e.normalize_with(Strategy::Leftmost)?;
        let right = e.normalize_with(Strategy::Rightmost)?;
        let random = e.normalize_with(Strategy::Random(seed.wrapping_add(i as u64)))?;
        if left != right || left != random {
            witness = Some(format!("{w}: leftmost {left}, rightmost {right}, random {random}"));
            break;
        }
    }
    out.push(CheckRecord::from_outcome(
        format!("leftmost, rightmost and random rewriting agree on {fuel} words of length <= {CONFLUENCE_WORD_LEN}"),
        "",
        witness,
    ));
    Ok(out)
}

/// Normal form of a word in the free supercommutative algebra on `x` (even,
/// invertible), `θ`, `dx` (odd) and `dθ` (even).
pub fn supercommutative_normal_form(letters: &[Letter]) -> Option<(NormalMonomial, bool)> {
    let mut m = NormalMonomial { a: 0, b: 0, e: 0, n: 0 };
    let mut negative = false;
    let mut thetas_seen = 0;
    for &l in letters {
        match l {
            Letter::X => m.n += 1,
            Letter::XInv => m.n -= 1,
            Letter::DTheta => m.a += 1,
            Letter::Theta => {
                m.e += 1;
                thetas_seen += 1;
            }
            Letter::Dx => {
                m.b += 1;
                // dx sorts before every θ already written.
                negative ^= thetas_seen % 2 == 1;
            }
            Letter::W | Letter::U => return None,
        }
    }
    (m.b <= 1 && m.e <= 1).then_some((m, negative))
}

/// Family I at `q = p = 1` is the free supercommutative algebra; its normal
/// forms are compared with [`supercommutative_normal_form`] on random
/// elements.
pub fn verify_classical_limit(fuel: usize, seed: u64) -> Result<Vec<CheckRecord>, AlgebraError> {
    use Letter::*;
    let bindings = Bindings::from([(Param::Q, ParamRational::one()), (Param::P, ParamRational::one())]);
    let rels = Relations::differential(Family::I, &bindings)?;
    let word = |l: &[Letter]| Element::word(&rels, super::Word(l.to_vec()), ParamRational::one());
    let mut out = Vec::new();
    for (lhs, rhs) in [([X, Theta], [Theta, X]), ([X, Dx], [Dx, X])] {
        let diff = (&word(&lhs)? - &word(&rhs)?).normalize();
        out.push(CheckRecord::from_outcome(
            format!("classical limit: {} = {}", super::Word(lhs.to_vec()), super::Word(rhs.to_vec())),
            "1",
            (!diff.is_zero()).then(|| diff.to_string()),
        ));
    }
    let tt = word(&[Theta, Theta])?.normalize();
    out.push(CheckRecord::from_outcome(
        "classical limit: th^2 = 0",
        "1",
        (!tt.is_zero()).then(|| tt.to_string()),
    ));

    let mut sampler = Sampler::new(seed);
    let mut witness = None;
    for _ in 0..fuel {
        let e = sampler.element(&rels, AlgebraKind::Differential.alphabet(), 8);
        let mut expected = Element::zero(&rels);
        for (w, c) in e.terms() {
            if let Some((m, negative)) = supercommutative_normal_form(w.letters()) {
                let c = if negative { -c } else { c.clone() };
                expected = &expected + &Element::word(&rels, m.to_word(false), c)?;
            }
        }
        let got = e.normalize();
        if got != expected {
            witness = Some(format!("{e}: engine {got}, supercommutative {expected}"));
            break;
        }
    }
    out.push(CheckRecord::from_outcome(
        format!("classical limit q = p = 1 is supercommutative on {fuel} elements"),
        "11a",
        witness,
    ));
    Ok(out)
}

/// Residuals of the consistency system for the family's coefficients, then the
/// rewrite-system checks on its differential algebra.
pub fn verify_consistency(
    family: Family,
    bindings: &Bindings,
    fuel: usize,
    seed: u64,
) -> Result<Vec<CheckRecord>, AlgebraError> {
    let coeffs = ConsistencyCoefficients::for_family(family).substitute(bindings)?;
    let mut out: Vec<CheckRecord> = coeffs
        .consistency_residuals()
        .into_iter()
        .enumerate()
        .map(|(i, (name, v))| {
            let eq = if i < 3 { "6a" } else { "6b" };
            CheckRecord::from_outcome(format!("{name} = 0"), eq, (!v.is_zero()).then(|| v.to_string()))
        })
        .collect();
    let rels = Relations::differential(family, bindings)?;
    out.extend(verify_rewriting(&rels, fuel, seed)?);
    if family == Family::I {
        out.extend(verify_classical_limit(fuel, seed)?);
    }
    Ok(out)
}

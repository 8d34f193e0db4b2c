//! The exterior differential as a graded derivation, and the derivation of
//! the two-form relations from the first-order ones.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{
    defining_relations, two_form_coefficient, two_form_rules, AlgebraError, AlgebraKind, Element, Family, GradeOf,
    Letter, Relations, Rule, Word,
};
use crate::coeffs::{Bindings, ParamRational};
use crate::random::Sampler;
use crate::report::CheckRecord;

/// `d` on a single letter, as a raw element (`None` for `d(dx) = d(dθ) = 0`).
fn d_letter(rels: &Arc<Relations>, l: Letter) -> Result<Option<Element>, AlgebraError> {
    let one = ParamRational::one();
    Ok(match l {
        Letter::X => Some(Element::from_terms(rels, [(Word::letter(Letter::Dx), one)])?),
        Letter::Theta => Some(Element::from_terms(rels, [(Word::letter(Letter::DTheta), one)])?),
        // From d(x x⁻¹) = 0.
        Letter::XInv => Some(Element::from_terms(
            rels,
            [(Word(vec![Letter::XInv, Letter::Dx, Letter::XInv]), -one)],
        )?),
        Letter::Dx | Letter::DTheta => None,
        Letter::W | Letter::U => {
            return Err(AlgebraError::ForeignGenerator(l, rels.label().to_string()));
        }
    })
}

/// `d(g₁…g_k) = Σᵢ (−1)^{|g₁…g_{i−1}|} g₁…g_{i−1} d(gᵢ) g_{i+1}…g_k`, unnormalised.
pub fn differentiate_raw(a: &Element) -> Result<Element, AlgebraError> {
    let rels = a.relations();
    let mut out = Element::zero(rels);
    for (w, c) in a.terms() {
        let letters = w.letters();
        let mut prefix_odd = false;
        for (i, &l) in letters.iter().enumerate() {
            if let Some(dl) = d_letter(rels, l)? {
                let sign = if prefix_odd { -c } else { c.clone() };
                let prefix = Word(letters[..i].to_vec());
                let suffix = Word(letters[i + 1..].to_vec());
                for (dw, dc) in dl.terms() {
                    out.add_term(prefix.concat(dw).concat(&suffix), &sign * dc);
                }
            }
            prefix_odd ^= l.parity().is_odd();
        }
    }
    Ok(out)
}

/// The exterior differential on the differential algebra; the result is
/// normalised.
pub fn differentiate(a: &Element) -> Result<Element, AlgebraError> {
    Ok(differentiate_raw(a)?.normalize())
}

fn require_differential(rels: &Arc<Relations>) -> Result<(), AlgebraError> {
    match rels.kind() {
        AlgebraKind::Differential => Ok(()),
        AlgebraKind::Forms => Err(AlgebraError::ForeignGenerator(Letter::W, rels.label().to_string())),
    }
}

const WORD_LEN: usize = 8;

/// `d² = 0` on `fuel` random elements of word length at most 8.
pub fn verify_nilpotency(rels: &Arc<Relations>, fuel: usize, seed: u64) -> Result<CheckRecord, AlgebraError> {
    require_differential(rels)?;
    let mut sampler = Sampler::new(seed);
    let alphabet = AlgebraKind::Differential.alphabet();
    let mut fixed = vec![Element::one(rels)];
    fixed.push(word(rels, &[Letter::X, Letter::Theta]));
    fixed.push(word(rels, &[Letter::Theta, Letter::DTheta, Letter::X]));
    let random = (0..fuel).map(|_| sampler.element(rels, alphabet, WORD_LEN));
    for a in fixed.into_iter().chain(random) {
        let dd = differentiate(&differentiate(&a)?)?;
        if !dd.is_zero() {
            return Ok(CheckRecord::fail("d^2 = 0", "4", format!("d(d({a})) = {dd}")));
        }
    }
    Ok(CheckRecord::pass(format!("d^2 = 0 on {} elements", fuel + 3), "4"))
}

fn word(rels: &Arc<Relations>, letters: &[Letter]) -> Element {
    Element::from_terms_unchecked(rels, [(Word(letters.to_vec()), ParamRational::one())])
}

fn parity_of(a: &Element) -> Option<bool> {
    match a.grade_of() {
        GradeOf::Homogeneous(g) => Some(g.parity.is_odd()),
        GradeOf::Zero => Some(false),
        GradeOf::Inhomogeneous => None,
    }
}

/// `d(ab) = d(a) b + (−1)^{|a|} a d(b)` on `fuel` random homogeneous pairs.
pub fn verify_leibniz(rels: &Arc<Relations>, fuel: usize, seed: u64) -> Result<CheckRecord, AlgebraError> {
    require_differential(rels)?;
    let mut sampler = Sampler::new(seed ^ 0x1e1b);
    let alphabet = AlgebraKind::Differential.alphabet();
    for _ in 0..fuel {
        let a = sampler.homogeneous(rels, alphabet, WORD_LEN / 2);
        let b = sampler.homogeneous(rels, alphabet, WORD_LEN / 2);
        let odd = parity_of(&a).expect("sampler yields homogeneous elements");
        let lhs = differentiate(&a.multiply(&b)?)?;
        let first = &differentiate(&a)? * &b;
        let second = &a * &differentiate(&b)?;
        let rhs = if odd { &first - &second } else { &first + &second };
        if lhs != rhs {
            return Ok(CheckRecord::fail(
                "graded Leibniz rule",
                "5",
                format!("a = {a}, b = {b}: d(ab) = {lhs}, expected {rhs}"),
            ));
        }
    }
    Ok(CheckRecord::pass(format!("graded Leibniz rule on {fuel} pairs"), "5"))
}

/// `form_degree(d a) = form_degree(a) + 1` and `d` flips parity.
pub fn verify_degree(rels: &Arc<Relations>, fuel: usize, seed: u64) -> Result<CheckRecord, AlgebraError> {
    require_differential(rels)?;
    let mut sampler = Sampler::new(seed ^ 0xde9);
    let alphabet = AlgebraKind::Differential.alphabet();
    for _ in 0..fuel {
        let a = sampler.homogeneous(rels, alphabet, WORD_LEN);
        let a = a.normalize();
        let da = differentiate(&a)?;
        if let (GradeOf::Homogeneous(ga), GradeOf::Homogeneous(gd)) = (a.grade_of(), da.grade_of()) {
            if gd.form_degree != ga.form_degree + 1 || gd.parity != ga.parity.flip() {
                return Ok(CheckRecord::fail("d raises form degree", "3", format!("a = {a}, d(a) = {da}")));
            }
        } else if !da.is_zero() {
            return Ok(CheckRecord::fail("d raises form degree", "3", format!("d({a}) = {da} is inhomogeneous")));
        }
    }
    Ok(CheckRecord::pass(format!("d raises form degree and flips parity on {fuel} elements"), "3"))
}

/// `d(LHS − RHS)` normalises to 0 for every defining relation.
pub fn verify_relations_closed(rels: &Arc<Relations>) -> Result<Vec<CheckRecord>, AlgebraError> {
    require_differential(rels)?;
    let mut out = Vec::new();
    for (eq, lhs, rhs) in defining_relations(rels) {
        let rel = &lhs - &rhs;
        let d = differentiate(&rel)?;
        let name = format!("d({} - ({})) = 0", lhs, rhs);
        out.push(CheckRecord::from_outcome(name, eq, (!d.is_zero()).then(|| d.to_string())));
    }
    Ok(out)
}

/// Pivot order for the two-form elimination: words with more out-of-order
/// adjacent pairs are eliminated first.
fn disorder(w: &Word) -> usize {
    w.letters().windows(2).filter(|p| p[0] > p[1] || (p[0] == p[1] && p[0].parity().is_odd())).count()
}

/// Applies `d` to the first-order relations, normalises without two-form
/// rules and solves the resulting linear system for the two-form words.
pub fn derive_two_form_relations(family: Family, bindings: &Bindings) -> Result<Vec<Rule>, AlgebraError> {
    let rels = Relations::first_order(family, bindings)?;
    let mut rows: Vec<BTreeMap<Word, ParamRational>> = Vec::new();
    for (_, lhs, rhs) in defining_relations(&rels) {
        if lhs.terms().keys().all(|w| w.form_degree() == 0) {
            continue;
        }
        let d = differentiate(&(&lhs - &rhs))?;
        if !d.is_zero() {
            rows.push(d.terms().clone());
        }
    }

    let key = |w: &Word| (std::cmp::Reverse(disorder(w)), std::cmp::Reverse(w.clone()));
    let mut solved: Vec<(Word, BTreeMap<Word, ParamRational>)> = Vec::new();
    while let Some(row) = rows.pop() {
        let mut row = row;
        for (pivot, expr) in &solved {
            if let Some(c) = row.remove(pivot) {
                for (w, v) in expr {
                    add(&mut row, w.clone(), &c * v);
                }
            }
        }
        let Some(pivot) = row.keys().min_by_key(|w| key(w)).cloned() else {
            continue;
        };
        if disorder(&pivot) == 0 {
            return Err(AlgebraError::InconsistentTwoForms(format!("{pivot} would have to vanish")));
        }
        let c = row.remove(&pivot).unwrap();
        let scale = -c.inv()?;
        let expr: BTreeMap<Word, ParamRational> = row.into_iter().map(|(w, v)| (w, &v * &scale)).collect();
        for (_, other) in solved.iter_mut() {
            if let Some(k) = other.remove(&pivot) {
                for (w, v) in &expr {
                    add(other, w.clone(), &k * v);
                }
            }
        }
        solved.push((pivot, expr));
    }

    let mut rules = Vec::new();
    for (pivot, expr) in solved {
        if pivot.len() != 2 {
            return Err(AlgebraError::InconsistentTwoForms(format!("unexpected relation for {pivot}")));
        }
        let label = match family {
            Family::I => "12a",
            Family::II => "12b",
        };
        let rhs = expr.into_iter().map(|(w, c)| (c, w)).collect();
        rules.push(Rule::new((pivot.letters()[0], pivot.letters()[1]), rhs, label));
    }
    rules.sort_by_key(|r| r.lhs);
    Ok(rules)
}

fn add(map: &mut BTreeMap<Word, ParamRational>, w: Word, c: ParamRational) {
    let v = map.entry(w.clone()).or_insert_with(ParamRational::zero);
    *v += &c;
    if v.is_zero() {
        map.remove(&w);
    }
}

/// Compares the derived two-form rules with the printed ones.
pub fn two_form_records(family: Family, bindings: &Bindings) -> Result<Vec<CheckRecord>, AlgebraError> {
    let derived = derive_two_form_relations(family, bindings)?;
    let printed = two_form_rules(two_form_coefficient(family).substitute(bindings)?, "");
    let mut out = Vec::new();
    for p in &printed {
        let eq = match family {
            Family::I => "12a",
            Family::II => "12b",
        };
        let name = format!("derived {}", p.display());
        let found = derived.iter().find(|r| r.lhs == p.lhs);
        let witness = match found {
            Some(r) if same_rhs(&r.rhs, &p.rhs) => None,
            Some(r) => Some(format!("derived {}", r.display())),
            None => Some("no relation derived for this pair".to_string()),
        };
        out.push(CheckRecord::from_outcome(name, eq, witness));
    }
    Ok(out)
}

pub(crate) fn same_rhs(a: &[(ParamRational, Word)], b: &[(ParamRational, Word)]) -> bool {
    let collect = |r: &[(ParamRational, Word)]| {
        let mut m = BTreeMap::new();
        for (c, w) in r {
            add(&mut m, w.clone(), c.clone());
        }
        m
    };
    collect(a) == collect(b)
}

/// The calculus suite: closure of the relations under `d`, nilpotency,
/// Leibniz, degree bookkeeping and the two-form derivation.
pub fn verify_calculus(
    family: Family,
    bindings: &Bindings,
    fuel: usize,
    seed: u64,
) -> Result<Vec<CheckRecord>, AlgebraError> {
    let rels = Relations::differential(family, bindings)?;
    let mut out = verify_relations_closed(&rels)?;
    let xinv = word(&rels, &[Letter::XInv]);
    let x = word(&rels, &[Letter::X]);
    let dxinv = differentiate(&xinv)?;
    let check = (&(&differentiate(&x)? * &xinv) + &(&x * &dxinv)).normalize();
    out.push(CheckRecord::from_outcome(
        "d(x xinv) = dx xinv + x d(xinv) = 0",
        "5",
        (!check.is_zero()).then(|| check.to_string()),
    ));
    out.push(verify_nilpotency(&rels, fuel, seed)?);
    out.push(verify_leibniz(&rels, fuel, seed)?);
    out.push(verify_degree(&rels, fuel, seed)?);
    out.extend(two_form_records(family, bindings)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Param;
    use crate::report::Status;
    use Letter::*;

    fn gamma(f: Family) -> Arc<Relations> {
        Relations::differential(f, &Bindings::new()).unwrap()
    }

    /// Independent oracle: peel letters off the right,
    /// `d(v g) = d(v) g + (−1)^{|v|} v d(g)`.
    fn d_right_to_left(rels: &Arc<Relations>, letters: &[Letter]) -> Element {
        let Some((&last, init)) = letters.split_last() else {
            return Element::zero(rels);
        };
        let v = word(rels, init);
        let dg = match last {
            X => word(rels, &[Dx]),
            Theta => word(rels, &[DTheta]),
            XInv => -&word(rels, &[XInv, Dx, XInv]),
            _ => Element::zero(rels),
        };
        let first = d_right_to_left(rels, init).multiply(&word(rels, &[last])).unwrap();
        let second = v.multiply(&dg).unwrap();
        let odd = Word(init.to_vec()).parity().is_odd();
        let sum = if odd { &first - &second } else { &first + &second };
        sum.normalize()
    }

    #[test]
    fn derivative_of_generators_and_relations() {
        let g = gamma(Family::I);
        assert_eq!(differentiate(&word(&g, &[X])).unwrap(), word(&g, &[Dx]));
        let rel = &word(&g, &[X, Theta]) - &Element::word(&g, Word(vec![Theta, X]), Param::Q.into()).unwrap();
        assert!(differentiate(&rel).unwrap().is_zero());
        let dxinv = differentiate(&word(&g, &[XInv])).unwrap();
        let oracle = (&word(&g, &[Dx, XInv]) + &word(&g, &[X]).multiply(&dxinv).unwrap()).normalize();
        assert!(oracle.is_zero());
        let p: ParamRational = Param::P.into();
        let expected = Element::word(&g, Word(vec![Dx, X]), &p + &ParamRational::one()).unwrap();
        assert_eq!(differentiate(&word(&g, &[X, X])).unwrap(), expected);
        assert!(differentiate(&Element::one(&g)).unwrap().is_zero());
    }

    #[test]
    fn leibniz_agrees_with_right_to_left_expansion() {
        for f in Family::ALL {
            let g = gamma(f);
            let mut sampler = Sampler::new(5);
            for _ in 0..60 {
                let w = sampler.word(AlgebraKind::Differential.alphabet(), 1, 6);
                let ours = differentiate(&word(&g, w.letters())).unwrap();
                assert_eq!(ours, d_right_to_left(&g, w.letters()), "{w}");
            }
            let w = [Theta, DTheta, X];
            assert_eq!(differentiate(&word(&g, &w)).unwrap(), d_right_to_left(&g, &w));
            assert!(differentiate(&differentiate(&word(&g, &w)).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn two_forms_are_derived() {
        let q: ParamRational = Param::Q.into();
        let p: ParamRational = Param::P.into();
        let r: ParamRational = Param::R.into();
        let rules = derive_two_form_relations(Family::I, &Bindings::new()).unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[0].lhs, (Dx, DTheta));
        assert_eq!(rules[0].rhs, vec![(&p * &q, Word(vec![DTheta, Dx]))]);
        assert_eq!(rules[1].lhs, (Dx, Dx));
        assert!(rules[1].rhs.is_empty());
        let rules = derive_two_form_relations(Family::II, &Bindings::new()).unwrap();
        assert_eq!(rules[0].rhs, vec![(r.inv().unwrap(), Word(vec![DTheta, Dx]))]);
        assert!(rules[1].rhs.is_empty());
    }

    #[test]
    fn calculus_suite_passes() {
        for f in Family::ALL {
            let records = verify_calculus(f, &Bindings::new(), 40, 3).unwrap();
            for r in &records {
                assert_eq!(r.status, Status::Pass, "{f}: {r:?}");
            }
        }
    }
}

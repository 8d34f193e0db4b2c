//! The Cartan–Maurer forms `w`, `u`: their embedding in the differential
//! algebra, the relations they satisfy, and the abstract forms algebra.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::algebra::{
    superplane_rules, AlgebraError, AlgebraKind, Element, Family, GradeOf, Letter, NormalMonomial, Parity, Relations,
    Rule, Word,
};
use crate::calculus::same_rhs;
use crate::coeffs::{Bindings, Param, ParamRational};
use crate::hopf::{self, AntipodeConvention, CoStructure};
use crate::report::CheckRecord;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FormsError {
    #[error("{0} is not a combination of form monomials")]
    NotExpressible(String),
    #[error("{0} has no multiple of {1}")]
    NoSolution(String, String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

impl From<crate::coeffs::CoeffError> for FormsError {
    fn from(e: crate::coeffs::CoeffError) -> Self {
        FormsError::Algebra(e.into())
    }
}

fn word(rels: &Arc<Relations>, letters: &[Letter]) -> Element {
    Element::from_terms_unchecked(rels, [(Word(letters.to_vec()), ParamRational::one())])
}

/// `w = dx x⁻¹`, normalised in Γ.
pub fn embed_w(gamma: &Arc<Relations>) -> Element {
    word(gamma, &[Letter::Dx, Letter::XInv]).normalize()
}

/// `u = dθ x⁻¹ − dx x⁻¹ θ x⁻¹`, normalised in Γ.
pub fn embed_u(gamma: &Arc<Relations>) -> Element {
    use Letter::*;
    (&word(gamma, &[DTheta, XInv]) - &word(gamma, &[Dx, XInv, Theta, XInv])).normalize()
}

/// Image in Γ of a combination of words over `x, x⁻¹, θ, w, u`.
pub fn embed(gamma: &Arc<Relations>, a: &Element) -> Element {
    let w = embed_w(gamma);
    let u = embed_u(gamma);
    a.map_letters(gamma, |l| match l {
        Letter::W => w.clone(),
        Letter::U => u.clone(),
        other => word(gamma, &[other]),
    })
}

/// The form monomial `u^a w^b θ^e x^m` whose image leads with
/// `dθ^a dx^b θ^e x^{m−a−b}`.
fn form_partner(m: &NormalMonomial) -> NormalMonomial {
    NormalMonomial {
        a: m.a,
        b: m.b,
        e: m.e,
        n: m.n + (m.a + m.b) as i32,
    }
}

const MAX_CANDIDATES: usize = 256;

/// Writes a normalised Γ element as a combination of form monomials
/// `u^a w^b θ^e x^m` (returned as formal words in `free`), by solving the
/// linear system given by their embeddings exactly.
pub fn re_express(gamma: &Arc<Relations>, free: &Arc<Relations>, e: &Element) -> Result<Element, FormsError> {
    let e = e.normalize();
    if e.is_zero() {
        return Ok(Element::zero(free));
    }
    let mut candidates: BTreeSet<NormalMonomial> = BTreeSet::new();
    let mut images: BTreeMap<NormalMonomial, Element> = BTreeMap::new();
    let mut queue: Vec<NormalMonomial> = Vec::new();
    for (m, _) in e.monomials() {
        queue.push(form_partner(&m));
    }
    if e.monomials().len() != e.len() {
        return Err(FormsError::NotExpressible(e.to_string()));
    }
    while let Some(c) = queue.pop() {
        if !candidates.insert(c) {
            continue;
        }
        if candidates.len() > MAX_CANDIDATES {
            return Err(FormsError::NotExpressible(e.to_string()));
        }
        let formal = Element::from_terms_unchecked(free, [(c.to_word(true), ParamRational::one())]);
        let image = embed(gamma, &formal);
        for (m, _) in image.monomials() {
            let partner = form_partner(&m);
            if !candidates.contains(&partner) {
                queue.push(partner);
            }
        }
        images.insert(c, image);
    }

    let unknowns: Vec<NormalMonomial> = candidates.into_iter().collect();
    let columns: Vec<BTreeMap<Word, ParamRational>> = unknowns.iter().map(|m| images[m].terms().clone()).collect();
    let solution = solve_linear(&columns, e.terms()).ok_or_else(|| FormsError::NotExpressible(e.to_string()))?;
    let mut out = Element::zero(free);
    for (m, y) in unknowns.iter().zip(solution) {
        out.add_term(m.to_word(true), y);
    }
    Ok(out)
}

/// Solves `Σ_j y_j columns[j] = rhs` exactly; `None` if inconsistent or not
/// uniquely solvable.
fn solve_linear(
    columns: &[BTreeMap<Word, ParamRational>],
    rhs: &BTreeMap<Word, ParamRational>,
) -> Option<Vec<ParamRational>> {
    let n = columns.len();
    let rows: BTreeSet<&Word> = columns.iter().flat_map(|c| c.keys()).chain(rhs.keys()).collect();
    let mut m: Vec<Vec<ParamRational>> = rows
        .iter()
        .map(|w| {
            let mut row: Vec<ParamRational> =
                columns.iter().map(|c| c.get(*w).cloned().unwrap_or_else(ParamRational::zero)).collect();
            row.push(rhs.get(*w).cloned().unwrap_or_else(ParamRational::zero));
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..n {
        let found = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, found);
        let inv = m[pivot_row][col].inv().ok()?;
        for v in m[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..m.len() {
            if r != pivot_row && !m[r][col].is_zero() {
                let k = m[r][col].clone();
                for c in 0..=n {
                    let sub = &k * &m[pivot_row][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// A relation derived in Γ next to the printed one.
#[derive(Clone, Debug)]
pub struct DerivedRelation {
    pub lhs: (Letter, Letter),
    pub derived: Vec<(ParamRational, Word)>,
    pub printed: Vec<(ParamRational, Word)>,
    pub paper_eq: &'static str,
}

impl DerivedRelation {
    pub fn matches(&self) -> bool {
        same_rhs(&self.derived, &self.printed)
    }

    pub fn derived_rule(&self) -> Rule {
        Rule::new(self.lhs, self.derived.clone(), self.paper_eq)
    }

    pub fn printed_rule(&self) -> Rule {
        Rule::new(self.lhs, self.printed.clone(), self.paper_eq)
    }

    pub fn record(&self) -> CheckRecord {
        let name = format!("derived {}", self.printed_rule().display());
        let witness = (!self.matches()).then(|| format!("derived {}", self.derived_rule().display()));
        CheckRecord::from_outcome(name, self.paper_eq, witness)
    }
}

impl fmt::Display for DerivedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.derived_rule().display())
    }
}

fn param(p: Param) -> ParamRational {
    ParamRational::param(p)
}

fn term(c: ParamRational, letters: &[Letter]) -> (ParamRational, Word) {
    (c, Word(letters.to_vec()))
}

/// Reference cross relations, in the order `xw, θw, xu, θu`.
pub fn printed_cross_relations(family: Family) -> Vec<((Letter, Letter), Vec<(ParamRational, Word)>)> {
    use Letter::*;
    let one = ParamRational::one();
    let (q, p, r, s) = (param(Param::Q), param(Param::P), param(Param::R), param(Param::S));
    match family {
        Family::I => vec![
            ((X, W), vec![term(p.clone(), &[W, X])]),
            ((Theta, W), vec![term(-one.clone(), &[W, Theta]), term(&one - &p, &[U, X])]),
            ((X, U), vec![term(&p * &q, &[U, X])]),
            ((Theta, U), vec![term(&p * &q, &[U, Theta])]),
        ],
        Family::II => {
            let qr = &q * &r;
            vec![
                ((X, W), vec![term(s.clone(), &[W, X])]),
                ((Theta, W), vec![term(-&qr, &[W, Theta])]),
                ((X, U), vec![term(q.clone(), &[U, X]), term(&q * &(&qr - &s), &[W, Theta])]),
                ((Theta, U), vec![term(q, &[U, Theta])]),
            ]
        }
    }
}

/// Reference coefficient `λ` of `wu = λ uw`.
pub fn printed_lambda(family: Family) -> ParamRational {
    match family {
        Family::I => ParamRational::one(),
        Family::II => &(&param(Param::Q) * &param(Param::R)) * &param(Param::S).inv().unwrap(),
    }
}

fn eq_labels(family: Family) -> (&'static str, &'static str) {
    match family {
        Family::I => ("38a", "39a"),
        Family::II => ("38b", "39b"),
    }
}

fn substitute_rhs(rhs: &[(ParamRational, Word)], bindings: &Bindings) -> Result<Vec<(ParamRational, Word)>, FormsError> {
    rhs.iter()
        .map(|(c, w)| Ok((c.substitute(bindings)?, w.clone())))
        .filter(|r| !matches!(r, Ok((c, _)) if c.is_zero()))
        .collect()
}

fn rhs_of(e: &Element) -> Vec<(ParamRational, Word)> {
    e.terms().iter().map(|(w, c)| (c.clone(), w.clone())).collect()
}

/// Computes `g · f` in Γ for `g ∈ {x, θ}`, `f ∈ {w, u}` and writes the result
/// back in terms of the forms.
pub fn derive_cross_relations(family: Family, bindings: &Bindings) -> Result<Vec<DerivedRelation>, FormsError> {
    let gamma = Relations::differential(family, bindings)?;
    let free = Relations::free(family, AlgebraKind::Forms);
    let (eq38, _) = eq_labels(family);
    let mut out = Vec::new();
    for (lhs, printed) in printed_cross_relations(family) {
        let formal = word(&free, &[lhs.0, lhs.1]);
        let image = embed(&gamma, &formal);
        let derived = re_express(&gamma, &free, &image)?;
        out.push(DerivedRelation {
            lhs,
            derived: rhs_of(&derived),
            printed: substitute_rhs(&printed, bindings)?,
            paper_eq: eq38,
        });
    }
    Ok(out)
}

/// `w² = 0` and `wu = λ uw`, with `λ` solved from the embeddings.
pub fn derive_form_form_relations(family: Family, bindings: &Bindings) -> Result<Vec<DerivedRelation>, FormsError> {
    use Letter::*;
    let gamma = Relations::differential(family, bindings)?;
    let free = Relations::free(family, AlgebraKind::Forms);
    let (_, eq39) = eq_labels(family);
    let w = embed_w(&gamma);
    let u = embed_u(&gamma);

    let ww = re_express(&gamma, &free, &(&w * &w))?;
    let wu = &w * &u;
    let uw = &u * &w;
    let (probe, c_uw) = uw
        .terms()
        .iter()
        .next()
        .map(|(k, v)| (k.clone(), v.clone()))
        .ok_or_else(|| FormsError::NoSolution(wu.to_string(), uw.to_string()))?;
    let lambda = wu.coefficient(&probe).checked_div(&c_uw)?;
    if &wu - &uw.scale(&lambda) != Element::zero(&gamma) {
        return Err(FormsError::NoSolution(wu.to_string(), uw.to_string()));
    }
    Ok(vec![
        DerivedRelation {
            lhs: (W, W),
            derived: rhs_of(&ww),
            printed: Vec::new(),
            paper_eq: eq39,
        },
        DerivedRelation {
            lhs: (W, U),
            derived: vec![term(lambda, &[U, W])],
            printed: substitute_rhs(&[term(printed_lambda(family), &[U, W])], bindings)?,
            paper_eq: eq39,
        },
    ])
}

/// The abstract forms algebra on `x, x⁻¹, θ, w, u`: the superplane relations
/// plus the cross and form-form relations as derived in Γ.
pub fn omega_relations(family: Family, bindings: &Bindings) -> Result<Arc<Relations>, FormsError> {
    let mut base = superplane_rules();
    for r in &mut base {
        r.rhs = substitute_rhs(&r.rhs, bindings)?;
    }
    for d in derive_cross_relations(family, bindings)?
        .into_iter()
        .chain(derive_form_form_relations(family, bindings)?)
    {
        base.push(d.derived_rule());
    }
    let mut label = format!("Omega/{family}");
    if !bindings.is_empty() {
        let parts: Vec<String> = bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
        label.push_str(&format!("[{}]", parts.join(",")));
    }
    Ok(Relations::from_rules(label, family, AlgebraKind::Forms, bindings.clone(), base, true)?)
}

const OMEGA_WORD_LEN: usize = 6;

/// Embedding consistency, parity audit, the Hopf axioms on the
/// forms algebra and compatibility of its relations with `Δ`, `ε`, `S`.
pub fn verify_omega(
    family: Family,
    bindings: &Bindings,
    fuel: usize,
    seed: u64,
    convention: AntipodeConvention,
) -> Result<Vec<CheckRecord>, FormsError> {
    use Letter::*;
    let gamma = Relations::differential(family, bindings)?;
    let omega = omega_relations(family, bindings)?;
    let (eq38, eq39) = eq_labels(family);
    let mut out = Vec::new();

    for (eq, lhs, rhs) in crate::algebra::defining_relations(&omega) {
        let rel = &lhs - &rhs;
        let image = embed(&gamma, &rel);
        out.push(CheckRecord::from_outcome(
            format!("embedding of {lhs} = {rhs} vanishes in the differential algebra"),
            eq,
            (!image.is_zero()).then(|| image.to_string()),
        ));
    }

    for (name, e, want) in [("w", embed_w(&gamma), Parity::Odd), ("u", embed_u(&gamma), Parity::Even)] {
        let ok = matches!(e.grade_of(), GradeOf::Homogeneous(g) if g.parity == want && g.form_degree == 1);
        out.push(CheckRecord::from_outcome(
            format!("{name} = {e} is homogeneous of parity {}", want.bit()),
            "37",
            (!ok).then(|| format!("{:?}", e.grade_of())),
        ));
    }

    let cs = CoStructure::forms(&omega, convention)?;
    let elems = hopf::sample_elements(&omega, AlgebraKind::Forms.alphabet(), fuel, seed ^ 0x0e, OMEGA_WORD_LEN);
    let n = elems.len();
    out.push(CheckRecord::from_outcome(
        format!("forms algebra: coassociativity on {n} elements"),
        "16",
        hopf::check_coassociativity(&cs, &elems),
    ));
    out.push(CheckRecord::from_outcome(
        format!("forms algebra: counit laws on {n} elements"),
        "17",
        hopf::check_counit(&cs, &elems),
    ));
    out.push(CheckRecord::from_outcome(
        format!("forms algebra: antipode laws ({convention} convention) on {n} elements"),
        "18",
        hopf::check_antipode(&cs, &elems),
    ));
    out.extend(hopf::relation_invariance(&cs, false));

    // The two compatibilities spelled out in the text.
    let xw_coeff = omega.rule(X, W).and_then(|r| r.first().map(|(c, _)| c.clone())).unwrap_or_else(ParamRational::zero);
    let lhs = cs.coproduct(&word(&omega, &[X, W]));
    let rhs = cs.coproduct(&word(&omega, &[W, X])).scale(&xw_coeff);
    let diff = lhs.checked_sub(&rhs).map_err(FormsError::from)?;
    out.push(CheckRecord::from_outcome(
        format!("Delta(x w) = {xw_coeff} Delta(w x)"),
        "40",
        (!diff.is_zero()).then(|| diff.to_string()),
    ));
    let ww = cs.coproduct(&word(&omega, &[W, W]));
    out.push(CheckRecord::from_outcome(
        "Delta(w^2) = 0",
        "40",
        (!ww.is_zero()).then(|| ww.to_string()),
    ));
    let sw = cs.antipode(&word(&omega, &[W, W]));
    out.push(CheckRecord::from_outcome("S(w^2) = 0", "42", (!sw.is_zero()).then(|| sw.to_string())));

    // Printed relations that differ from the derived ones are reported, not
    // used.
    for d in derive_cross_relations(family, bindings)?
        .into_iter()
        .chain(derive_form_form_relations(family, bindings)?)
    {
        let eq = if d.lhs.0 == W { eq39 } else { eq38 };
        if !d.matches() {
            out.push(CheckRecord::info(
                format!("printed {} differs from the derivation", d.printed_rule().display()),
                eq,
                format!("derived {}; the forms algebra uses the derived relation", d.derived_rule().display()),
            ));
        }
    }

    if family == Family::II && !bindings.contains_key(&Param::S) {
        let mut at = bindings.clone();
        at.insert(Param::S, &param(Param::Q) * &param(Param::R));
        let collapsed: Vec<String> = derive_cross_relations(family, &at)?
            .iter()
            .chain(derive_form_form_relations(family, &at)?.iter())
            .map(|d| d.derived_rule().display().to_string())
            .collect();
        out.push(CheckRecord::info("relations at s = q*r", eq38, collapsed.join("; ")));
    }
    Ok(out)
}

/// One record per cross or form-form relation: pass when the derivation
/// reproduces the reference relation.
pub fn derive_forms_records(family: Family, bindings: &Bindings) -> Result<Vec<CheckRecord>, FormsError> {
    let mut out: Vec<CheckRecord> = derive_cross_relations(family, bindings)?.iter().map(|d| d.record()).collect();
    out.extend(derive_form_form_relations(family, bindings)?.iter().map(|d| d.record()));
    Ok(out)
}

#[cfg(test)]
mod tests;

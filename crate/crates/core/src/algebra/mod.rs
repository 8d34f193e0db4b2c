//! Graded words over the superplane alphabet and the rewrite systems that
//! normal-order them.

mod checks;
mod element;
mod letter;
mod relations;
pub mod rewrite;
mod tensor;

pub use checks::{
    supercommutative_normal_form, verify_classical_limit, verify_consistency, verify_rewriting, CONFLUENCE_WORD_LEN,
};
pub use element::{Element, Grade, GradeOf};
pub use letter::{Letter, NormalMonomial, Parity, Word};
pub use relations::{
    derive_inverse_rules, first_order_rules, superplane_rules, two_form_coefficient, two_form_rules,
    AlgebraKind, ConsistencyCoefficients, Family, Relations, Rule,
};
pub use rewrite::Strategy;
pub use tensor::TensorElement;


use crate::coeffs::CoeffError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("elements belong to different algebras: {0} vs {1}")]
    FamilyMismatch(String, String),
    #[error("tensor arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("generator `{0}` does not belong to {1}")]
    ForeignGenerator(Letter, String),
    #[error("coefficient of `{0} x` in the x-rule is not invertible")]
    NonInvertibleCoefficient(Letter),
    #[error("x-inverse rules depend on each other cyclically")]
    InverseRuleCycle,
    #[error("normalization did not terminate")]
    NonTermination,
    #[error("no rewrite rule for the out-of-order pair `{0} {1}`")]
    MissingRule(Letter, Letter),
    #[error("two-form derivation is inconsistent: {0}")]
    InconsistentTwoForms(String),
    #[error("map is only defined up to form degree 1")]
    FormDegreeTooHigh,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// The defining relations of an algebra as `(equation, lhs, rhs)` elements,
/// in the free algebra (both sides unnormalised).
pub fn defining_relations(rels: &std::sync::Arc<Relations>) -> Vec<(&'static str, Element, Element)> {
    rels.base_rules()
        .iter()
        .map(|r| {
            let lhs = Element::from_terms_unchecked(
                rels,
                [(Word(vec![r.lhs.0, r.lhs.1]), crate::coeffs::ParamRational::one())],
            );
            let rhs = Element::from_terms_unchecked(rels, r.rhs.iter().map(|(c, w)| (w.clone(), c.clone())));
            (r.label, lhs, rhs)
        })
        .collect()
}

#[cfg(test)]
mod tests;

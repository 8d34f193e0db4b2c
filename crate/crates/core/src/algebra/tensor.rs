use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{AlgebraError, Element, Relations, Word};
use crate::coeffs::ParamRational;

/// A linear combination of `k`-fold tensors of words (`k` = arity), all
/// slots in the same algebra.
///
/// Products follow the graded rule `(A⊗B)(C⊗D) = (−1)^{|B||C|} AC⊗BD`,
/// iterated for higher arity; every slot is kept normalised.
#[derive(Clone)]
pub struct TensorElement {
    rels: Arc<Relations>,
    arity: usize,
    terms: BTreeMap<Vec<Word>, ParamRational>,
}

impl TensorElement {
    pub fn zero(rels: &Arc<Relations>, arity: usize) -> TensorElement {
        TensorElement {
            rels: rels.clone(),
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// `1 ⊗ … ⊗ 1`.
    pub fn unit(rels: &Arc<Relations>, arity: usize) -> TensorElement {
        TensorElement::pure(rels, vec![Word::empty(); arity], ParamRational::one())
    }

    pub fn pure(rels: &Arc<Relations>, slots: Vec<Word>, c: ParamRational) -> TensorElement {
        let mut t = TensorElement::zero(rels, slots.len());
        t.add_term(slots, c);
        t
    }

    /// `a₁ ⊗ a₂ ⊗ …` expanded bilinearly (no signs: the factors are placed,
    /// not multiplied).
    pub fn from_elements(parts: &[&Element]) -> Result<TensorElement, AlgebraError> {
        let rels = parts
            .first()
            .map(|e| e.relations().clone())
            .ok_or(AlgebraError::ArityMismatch(0, 1))?;
        let mut acc: Vec<(Vec<Word>, ParamRational)> = vec![(Vec::new(), ParamRational::one())];
        for part in parts {
            if !part.relations().same_algebra(&rels) {
                return Err(AlgebraError::FamilyMismatch(
                    rels.label().to_string(),
                    part.relations().label().to_string(),
                ));
            }
            let mut next = Vec::new();
            for (slots, c) in &acc {
                for (w, cw) in part.terms() {
                    let mut s = slots.clone();
                    s.push(w.clone());
                    next.push((s, c * cw));
                }
            }
            acc = next;
        }
        let mut t = TensorElement::zero(&rels, parts.len());
        for (s, c) in acc {
            t.add_term(s, c);
        }
        Ok(t)
    }

    pub(crate) fn add_term(&mut self, slots: Vec<Word>, c: ParamRational) {
        debug_assert_eq!(slots.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&slots) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&slots);
                }
            }
            None => {
                self.terms.insert(slots, c);
            }
        }
    }

    pub fn relations(&self) -> &Arc<Relations> {
        &self.rels
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Word>, ParamRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &TensorElement) -> Result<(), AlgebraError> {
        if self.arity != other.arity {
            return Err(AlgebraError::ArityMismatch(self.arity, other.arity));
        }
        if !self.rels.same_algebra(&other.rels) {
            return Err(AlgebraError::FamilyMismatch(
                self.rels.label().to_string(),
                other.rels.label().to_string(),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &TensorElement) -> Result<TensorElement, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &TensorElement) -> Result<TensorElement, AlgebraError> {
        self.checked_add(&other.scale(&-ParamRational::one()))
    }

    pub fn scale(&self, c: &ParamRational) -> TensorElement {
        let mut out = TensorElement::zero(&self.rels, self.arity);
        for (s, v) in &self.terms {
            out.add_term(s.clone(), v * c);
        }
        out
    }

    /// Normalises every slot.
    pub fn normalize(&self) -> TensorElement {
        let mut out = TensorElement::zero(&self.rels, self.arity);
        for (slots, c) in &self.terms {
            let parts: Vec<Element> = slots
                .iter()
                .map(|w| Element::from_terms_unchecked(&self.rels, [(w.clone(), ParamRational::one())]).normalize())
                .collect();
            out.add_expanded(&parts, c);
        }
        out
    }

    fn add_expanded(&mut self, parts: &[Element], c: &ParamRational) {
        let mut acc: Vec<(Vec<Word>, ParamRational)> = vec![(Vec::new(), c.clone())];
        for part in parts {
            let mut next = Vec::with_capacity(acc.len() * part.len());
            for (slots, cs) in &acc {
                for (w, cw) in part.terms() {
                    let mut s = slots.clone();
                    s.push(w.clone());
                    next.push((s, cs * cw));
                }
            }
            acc = next;
        }
        for (s, v) in acc {
            self.add_term(s, v);
        }
    }

    /// Graded product with slot-wise normalisation.
    pub fn tensor_multiply(&self, other: &TensorElement) -> Result<TensorElement, AlgebraError> {
        self.check(other)?;
        let mut out = TensorElement::zero(&self.rels, self.arity);
        for (sa, ca) in &self.terms {
            for (sb, cb) in &other.terms {
                // b_j passes a_i for every i > j.
                let mut flips = 0u32;
                for (j, wb) in sb.iter().enumerate() {
                    if !wb.parity().is_odd() {
                        continue;
                    }
                    flips += sa[j + 1..].iter().filter(|wa| wa.parity().is_odd()).count() as u32;
                }
                let mut coef = ca * cb;
                if flips % 2 == 1 {
                    coef = -coef;
                }
                let parts: Vec<Element> = sa
                    .iter()
                    .zip(sb.iter())
                    .map(|(wa, wb)| {
                        Element::from_terms_unchecked(&self.rels, [(wa.concat(wb), ParamRational::one())])
                            .normalize()
                    })
                    .collect();
                out.add_expanded(&parts, &coef);
            }
        }
        Ok(out)
    }

    /// Replaces slot `slot` by the tensor `f(word)` (of any arity) in place.
    /// Only even maps are applied this way, so no signs arise.
    pub fn map_slot(&self, slot: usize, f: impl Fn(&Word) -> TensorElement) -> TensorElement {
        let mut out: Option<TensorElement> = None;
        for (slots, c) in &self.terms {
            let image = f(&slots[slot]);
            let acc = out.get_or_insert_with(|| {
                TensorElement::zero(&self.rels, self.arity - 1 + image.arity)
            });
            for (inner, ci) in &image.terms {
                let mut s = Vec::with_capacity(acc.arity);
                s.extend_from_slice(&slots[..slot]);
                s.extend_from_slice(inner);
                s.extend_from_slice(&slots[slot + 1..]);
                acc.add_term(s, c * ci);
            }
        }
        out.unwrap_or_else(|| TensorElement::zero(&self.rels, self.arity))
    }

    /// Replaces slot `slot` by a linear image in the same algebra.
    pub fn map_slot_element(&self, slot: usize, f: impl Fn(&Word) -> Element) -> TensorElement {
        let mut out = TensorElement::zero(&self.rels, self.arity);
        for (slots, c) in &self.terms {
            let image = f(&slots[slot]);
            for (w, ci) in image.terms() {
                let mut s = slots.clone();
                s[slot] = w.clone();
                out.add_term(s, c * ci);
            }
        }
        out
    }

    /// Applies a scalar-valued map to one slot, dropping it.
    pub fn contract_slot(&self, slot: usize, f: impl Fn(&Word) -> ParamRational) -> TensorElement {
        let mut out = TensorElement::zero(&self.rels, self.arity - 1);
        for (slots, c) in &self.terms {
            let v = f(&slots[slot]);
            if v.is_zero() {
                continue;
            }
            let mut s = slots.clone();
            s.remove(slot);
            out.add_term(s, c * &v);
        }
        out
    }

    /// The multiplication map on all slots: `a₁⊗…⊗a_k ↦ a₁⋯a_k`, normalised.
    pub fn multiply_out(&self) -> Element {
        let mut raw = Element::zero(&self.rels);
        for (slots, c) in &self.terms {
            let w = slots.iter().fold(Word::empty(), |acc, s| acc.concat(s));
            raw.add_term(w, c.clone());
        }
        raw.normalize()
    }

    /// Views an arity-1 tensor as an element.
    pub fn into_element(self) -> Result<Element, AlgebraError> {
        if self.arity != 1 {
            return Err(AlgebraError::ArityMismatch(self.arity, 1));
        }
        let terms = self.terms.into_iter().map(|(mut s, c)| (s.remove(0), c));
        Ok(Element::from_terms_unchecked(&self.rels, terms))
    }
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.rels.same_algebra(&other.rels) && self.terms == other.terms
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorElement[{}]({})", self.rels.label(), self)
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (slots, c)) in self.terms.iter().enumerate() {
            let body: Vec<String> = slots.iter().map(|w| w.to_string()).collect();
            let body = body.join(" (x) ");
            let t = super::element::format_term(c, &Word::empty());
            let t = if c.is_one() {
                body
            } else if (-c).is_one() {
                format!("-{body}")
            } else {
                format!("{t}*{body}")
            };
            if i == 0 {
                f.write_str(&t)?;
            } else if let Some(rest) = t.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {t}")?;
            }
        }
        Ok(())
    }
}

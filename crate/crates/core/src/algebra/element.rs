use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::rewrite::Strategy;
use super::{AlgebraError, Letter, NormalMonomial, Parity, Relations, Word};
use crate::coeffs::{Bindings, ParamRational};

/// Common grade of a homogeneous element.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct Grade {
    pub parity: Parity,
    pub form_degree: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GradeOf {
    Homogeneous(Grade),
    Inhomogeneous,
    Zero,
}

/// A finite linear combination of words in one algebra.
///
/// Elements produced by [`Element::normalize`] (and by the `*` operator)
/// contain only normal words, so two normalised elements are equal exactly
/// when they represent the same algebra element.
#[derive(Clone)]
pub struct Element {
    rels: Arc<Relations>,
    terms: BTreeMap<Word, ParamRational>,
}

impl Element {
    pub fn zero(rels: &Arc<Relations>) -> Element {
        Element {
            rels: rels.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rels: &Arc<Relations>) -> Element {
        Element::scalar(rels, ParamRational::one())
    }

    pub fn scalar(rels: &Arc<Relations>, c: ParamRational) -> Element {
        Element::from_terms_unchecked(rels, [(Word::empty(), c)])
    }

    pub fn generator(rels: &Arc<Relations>, l: Letter) -> Result<Element, AlgebraError> {
        Element::word(rels, Word::letter(l), ParamRational::one())
    }

    pub fn word(rels: &Arc<Relations>, w: Word, c: ParamRational) -> Result<Element, AlgebraError> {
        Element::from_terms(rels, [(w, c)])
    }

    pub fn from_terms(
        rels: &Arc<Relations>,
        terms: impl IntoIterator<Item = (Word, ParamRational)>,
    ) -> Result<Element, AlgebraError> {
        let terms: Vec<_> = terms.into_iter().collect();
        for (w, _) in &terms {
            if let Some(&l) = w.letters().iter().find(|l| !rels.kind().admits(**l)) {
                return Err(AlgebraError::ForeignGenerator(l, rels.label().to_string()));
            }
        }
        Ok(Element::from_terms_unchecked(rels, terms))
    }

    pub(crate) fn from_terms_unchecked(
        rels: &Arc<Relations>,
        terms: impl IntoIterator<Item = (Word, ParamRational)>,
    ) -> Element {
        let mut e = Element::zero(rels);
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub(crate) fn from_map(rels: &Arc<Relations>, terms: BTreeMap<Word, ParamRational>) -> Element {
        Element {
            rels: rels.clone(),
            terms,
        }
    }

    pub(crate) fn add_term(&mut self, w: Word, c: ParamRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn relations(&self) -> &Arc<Relations> {
        &self.rels
    }

    pub fn terms(&self) -> &BTreeMap<Word, ParamRational> {
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

    /// Coefficient of the word `w` (zero if absent).
    pub fn coefficient(&self, w: &Word) -> ParamRational {
        self.terms.get(w).cloned().unwrap_or_else(ParamRational::zero)
    }

    /// Rational-function value of a multiple of the unit, if it is one.
    pub fn as_scalar(&self) -> Option<ParamRational> {
        match self.terms.len() {
            0 => Some(ParamRational::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    fn check_same(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.rels.same_algebra(&other.rels) {
            Ok(())
        } else {
            Err(AlgebraError::FamilyMismatch(
                self.rels.label().to_string(),
                other.rels.label().to_string(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ParamRational) -> Element {
        if c.is_zero() {
            return Element::zero(&self.rels);
        }
        Element {
            rels: self.rels.clone(),
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Free-algebra product: concatenation of words, no rewriting.
    pub fn multiply(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check_same(other)?;
        let mut out = Element::zero(&self.rels);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Normal form modulo the relation ideal.
    pub fn normalize(&self) -> Element {
        self.normalize_with(Strategy::Leftmost)
            .expect("the rewrite system terminates on every word")
    }

    pub fn normalize_with(&self, strategy: Strategy) -> Result<Element, AlgebraError> {
        if self.rels.is_free() {
            return Ok(self.clone());
        }
        let terms = self.rels.rewrite(self.terms.clone(), strategy)?;
        Ok(Element::from_map(&self.rels, terms))
    }

    pub fn is_normal(&self) -> bool {
        self.terms
            .keys()
            .all(|w| super::rewrite::is_normal_word(self.rels.table(), w))
    }

    /// Normalised product.
    pub fn product(&self, other: &Element) -> Result<Element, AlgebraError> {
        Ok(self.multiply(other)?.normalize())
    }

    /// Basis expansion of a normalised element.
    pub fn monomials(&self) -> Vec<(NormalMonomial, ParamRational)> {
        let forms = self.rels.kind() == super::AlgebraKind::Forms;
        self.terms
            .iter()
            .filter_map(|(w, c)| NormalMonomial::from_word(w, forms).map(|m| (m, c.clone())))
            .collect()
    }

    pub fn grade_of(&self) -> GradeOf {
        let mut grades = self.terms.keys().map(|w| Grade {
            parity: w.parity(),
            form_degree: w.form_degree(),
        });
        let Some(first) = grades.next() else {
            return GradeOf::Zero;
        };
        if grades.all(|g| g == first) {
            GradeOf::Homogeneous(first)
        } else {
            GradeOf::Inhomogeneous
        }
    }

    /// Substitutes parameter values in the coefficients.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Element, AlgebraError> {
        let mut out = Element::zero(&self.rels);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.substitute(bindings)?);
        }
        Ok(out)
    }

    /// Same coefficients, reinterpreted in another algebra with the same
    /// alphabet.
    pub fn rebase(&self, rels: &Arc<Relations>) -> Result<Element, AlgebraError> {
        Element::from_terms(rels, self.terms.iter().map(|(w, c)| (w.clone(), c.clone())))
    }

    /// Homomorphic image: each letter is replaced by the element `image(l)`
    /// in the target algebra and the result is normalised.
    pub fn map_letters(
        &self,
        target: &Arc<Relations>,
        image: impl Fn(Letter) -> Element,
    ) -> Element {
        let mut out = Element::zero(target);
        for (w, c) in &self.terms {
            let mut acc = Element::scalar(target, c.clone());
            for &l in w.letters() {
                acc = &acc * &image(l);
            }
            for (w2, c2) in acc.terms {
                out.add_term(w2, c2);
            }
        }
        out
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.rels.same_algebra(&other.rels) && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{}]({})", self.rels.label(), self)
    }
}

/// `c*word` with the coefficient omitted when it is 1 and reduced to a
/// sign when it is −1.
pub(crate) fn format_term(c: &ParamRational, w: &Word) -> String {
    if w.is_empty() {
        return if c.is_atomic() || c.is_negative_term() {
            c.to_string()
        } else {
            format!("({c})")
        };
    }
    if c.is_one() {
        return w.to_string();
    }
    if (-c).is_one() {
        return format!("-{w}");
    }
    if c.is_atomic() {
        format!("{c}*{w}")
    } else if c.is_negative_term() {
        format!("-{}*{w}", -c)
    } else {
        format!("({c})*{w}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest words first reads closest to the usual normal-ordered notation.
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let t = format_term(c, w);
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

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("adding elements of different algebras")
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        self.checked_add(&-rhs).expect("subtracting elements of different algebras")
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(&-ParamRational::one())
    }
}

/// Normalised product; panics when the operands live in different algebras.
impl Mul for &Element {
    type Output = Element;

    fn mul(self, rhs: &Element) -> Element {
        self.product(rhs).expect("multiplying elements of different algebras")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Element> for Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

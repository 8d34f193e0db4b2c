//! Exact coefficients: the field of rational functions in the deformation
//! parameters `q, p, r, s` over the rationals.
//!
//! Every value is kept in a canonical form (coprime numerator and
//! denominator, denominator monic under graded-lex order with
//! `q > p > r > s`) so equality is structural.

mod poly;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

pub use poly::{gcd, Exps, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("substitution sends a denominator to zero: {0}")]
    SubstitutionPole(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
}

/// One of the four commuting deformation parameters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Param {
    Q,
    P,
    R,
    S,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::Q, Param::P, Param::R, Param::S];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::Q => "q",
            Param::P => "p",
            Param::R => "r",
            Param::S => "s",
        }
    }
}

impl FromStr for Param {
    type Err = CoeffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" => Ok(Param::Q),
            "p" => Ok(Param::P),
            "r" => Ok(Param::R),
            "s" => Ok(Param::S),
            other => Err(CoeffError::UnknownParameter(other.to_string())),
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A Laurent monomial `q^a p^b r^c s^d` with signed exponents.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ParamMonomial {
    pub exponents: [i32; 4],
}

impl ParamMonomial {
    pub fn new(exponents: [i32; 4]) -> Self {
        ParamMonomial { exponents }
    }

    pub fn param(p: Param, e: i32) -> Self {
        let mut exponents = [0; 4];
        exponents[p.index()] = e;
        ParamMonomial { exponents }
    }

    fn split(&self) -> (Exps, Exps) {
        let pos = std::array::from_fn(|i| self.exponents[i].max(0) as u32);
        let neg = std::array::from_fn(|i| (-self.exponents[i]).max(0) as u32);
        (Exps(pos), Exps(neg))
    }
}

/// An unreduced quotient of two Laurent polynomials, as accepted by
/// [`ParamRational::canonicalize`].
#[derive(Clone, Debug, Default)]
pub struct RawFraction {
    pub numerator: Vec<(ParamMonomial, BigRational)>,
    pub denominator: Vec<(ParamMonomial, BigRational)>,
}

/// Partial assignment of parameters to coefficient values.
pub type Bindings = BTreeMap<Param, ParamRational>;

/// An exact element of `Q(q, p, r, s)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamRational {
    num: Poly,
    den: Poly,
}

impl ParamRational {
    pub fn zero() -> Self {
        ParamRational {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        ParamRational::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        ParamRational::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Self {
        ParamRational {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn param(p: Param) -> Self {
        ParamRational {
            num: Poly::var(p),
            den: Poly::one(),
        }
    }

    /// `c * q^a p^b r^c s^d` with possibly negative exponents.
    pub fn monomial(c: BigRational, m: ParamMonomial) -> Self {
        let (pos, neg) = m.split();
        ParamRational::from_polys(Poly::monomial(c, pos), Poly::monomial(BigRational::one(), neg))
            .expect("monomial denominator is nonzero")
    }

    /// Canonical representative of a raw Laurent fraction.
    pub fn canonicalize(raw: &RawFraction) -> Result<Self, CoeffError> {
        // Clear negative exponents by multiplying both sides by one monomial.
        let mut shift = [0i32; 4];
        for (m, _) in raw.numerator.iter().chain(raw.denominator.iter()) {
            for (s, e) in shift.iter_mut().zip(m.exponents.iter()) {
                *s = (*s).max(-e);
            }
        }
        let lift = |terms: &[(ParamMonomial, BigRational)]| {
            Poly::from_terms(terms.iter().map(|(m, c)| {
                let e = std::array::from_fn(|i| (m.exponents[i] + shift[i]) as u32);
                (Exps(e), c.clone())
            }))
        };
        ParamRational::from_polys(lift(&raw.numerator), lift(&raw.denominator))
    }

    /// Canonical form of `num / den`.
    pub fn from_polys(num: Poly, den: Poly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(ParamRational::zero());
        }
        let common = num.min_exps().meet(&den.min_exps());
        let mut num = num.shift_down(&common);
        let mut den = den.shift_down(&common);
        if !den.is_monomial() && !num.is_monomial() {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(ParamRational { num, den })
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The rational value if this coefficient does not depend on any parameter.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn pow(&self, n: i32) -> Result<Self, CoeffError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs();
        Ok(ParamRational {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        ParamRational::from_polys(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CoeffError> {
        if other.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        ParamRational::from_polys(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    /// Replaces bound parameters by their values.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Self, CoeffError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let eval = |poly: &Poly| {
            poly.eval(
                ParamRational::zero(),
                |c| ParamRational::from_rational(c.clone()),
                |v, k| {
                    let p = Param::ALL[v];
                    match bindings.get(&p) {
                        Some(val) => val.pow(k as i32).expect("nonnegative power"),
                        None => ParamRational::param(p).pow(k as i32).unwrap(),
                    }
                },
                |a, b| a + b,
                |a, b| a * b,
            )
        };
        let num = eval(&self.num);
        let den = eval(&self.den);
        if den.is_zero() {
            return Err(CoeffError::SubstitutionPole(self.to_string()));
        }
        num.checked_div(&den)
    }

    /// True when the canonical display starts with a minus sign and is a
    /// single Laurent term, so a sum printer can write ` - ` instead.
    pub(crate) fn is_negative_term(&self) -> bool {
        self.den.is_monomial()
            && self.num.is_monomial()
            && self.num.leading().is_some_and(|(_, c)| c.is_negative())
    }

    /// True if the display has no top-level `+`/`-` and can be used as a
    /// product factor without parentheses.
    pub(crate) fn is_atomic(&self) -> bool {
        self.den.is_monomial() && self.num.is_monomial() && !self.is_negative_term()
    }
}

impl fmt::Display for ParamRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_monomial() {
            // Laurent polynomial form: fold the monomial denominator into exponents.
            let (de, dc) = self.den.leading().unwrap();
            debug_assert!(dc.is_one());
            let terms = self.num.terms().rev().map(|(e, c)| {
                let signed = std::array::from_fn(|i| e.0[i] as i64 - de.0[i] as i64);
                (signed, c)
            });
            poly::write_terms(f, terms)
        } else {
            let num = self.num.to_string();
            if self.num.len() > 1 || num.starts_with('-') {
                write!(f, "({num})/({})", self.den)
            } else {
                write!(f, "{num}/({})", self.den)
            }
        }
    }
}

impl fmt::Debug for ParamRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamRational({self})")
    }
}

impl From<i64> for ParamRational {
    fn from(n: i64) -> Self {
        ParamRational::from_int(n)
    }
}

impl From<Param> for ParamRational {
    fn from(p: Param) -> Self {
        ParamRational::param(p)
    }
}

impl<'a> Add<&'a ParamRational> for &'a ParamRational {
    type Output = ParamRational;

    fn add(self, rhs: &'a ParamRational) -> ParamRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let (num, den) = if self.den == rhs.den {
            (self.num.add(&rhs.num), self.den.clone())
        } else {
            (
                self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
                self.den.mul(&rhs.den),
            )
        };
        ParamRational::from_polys(num, den).expect("product of nonzero denominators")
    }
}

impl<'a> Sub<&'a ParamRational> for &'a ParamRational {
    type Output = ParamRational;

    fn sub(self, rhs: &'a ParamRational) -> ParamRational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a ParamRational> for &'a ParamRational {
    type Output = ParamRational;

    fn mul(self, rhs: &'a ParamRational) -> ParamRational {
        if self.is_zero() || rhs.is_zero() {
            return ParamRational::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return ParamRational {
                num: self.num.mul(&rhs.num),
                den: Poly::one(),
            };
        }
        ParamRational::from_polys(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
            .expect("product of nonzero denominators")
    }
}

impl Neg for &ParamRational {
    type Output = ParamRational;

    fn neg(self) -> ParamRational {
        ParamRational {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ParamRational> for ParamRational {
            type Output = ParamRational;
            fn $m(self, rhs: ParamRational) -> ParamRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ParamRational> for ParamRational {
            type Output = ParamRational;
            fn $m(self, rhs: &'a ParamRational) -> ParamRational {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ParamRational {
    type Output = ParamRational;

    fn neg(self) -> ParamRational {
        -&self
    }
}

impl AddAssign<&ParamRational> for ParamRational {
    fn add_assign(&mut self, rhs: &ParamRational) {
        *self = &*self + rhs;
    }
}

/// Arithmetic operation selector for [`cf_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn cf_arith(a: &ParamRational, b: &ParamRational, op: ArithOp) -> Result<ParamRational, CoeffError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> ParamRational {
        Param::Q.into()
    }
    fn p() -> ParamRational {
        Param::P.into()
    }
    fn r() -> ParamRational {
        Param::R.into()
    }
    fn s() -> ParamRational {
        Param::S.into()
    }
    fn int(n: i64) -> ParamRational {
        n.into()
    }

    #[test]
    fn additive_cancellation() {
        assert_eq!(cf_arith(&(q() - int(1)), &int(1), ArithOp::Add).unwrap(), q());
    }

    #[test]
    fn inverse_pair() {
        assert!((q() * q().inv().unwrap()).is_one());
    }

    #[test]
    fn quotient_checked_by_multiplying_back() {
        let a = q() * q() - int(1);
        let b = q() - int(1);
        let quot = cf_arith(&a, &b, ArithOp::Div).unwrap();
        // oracle: (result) * (q - 1) expanded equals q^2 - 1
        let back = quot.numerator().mul(b.numerator());
        assert_eq!(&back, a.numerator());
        assert!(quot.denominator().is_one());
        assert_eq!(quot, q() + int(1));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let zero = q() - q();
        assert_eq!(q().checked_div(&zero), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn canonicalize_removes_content() {
        let two = BigRational::from_integer(2.into());
        let raw = RawFraction {
            numerator: vec![(ParamMonomial::param(Param::Q, 1), two.clone())],
            denominator: vec![(ParamMonomial::default(), two)],
        };
        assert_eq!(ParamRational::canonicalize(&raw).unwrap(), q());
    }

    #[test]
    fn canonicalize_cancels_common_factor() {
        let one = BigRational::one();
        let raw = RawFraction {
            // (pq - q) / (p - 1)
            numerator: vec![
                (ParamMonomial::new([1, 1, 0, 0]), one.clone()),
                (ParamMonomial::param(Param::Q, 1), -one.clone()),
            ],
            denominator: vec![
                (ParamMonomial::param(Param::P, 1), one.clone()),
                (ParamMonomial::default(), -one),
            ],
        };
        let v = ParamRational::canonicalize(&raw).unwrap();
        // oracle: cross-multiply, v * (p - 1) == pq - q
        assert_eq!(&v * &(p() - int(1)), p() * q() - q());
        assert_eq!(v, q());
    }

    #[test]
    fn canonicalize_zero_and_zero_denominator() {
        let raw = RawFraction {
            numerator: vec![],
            denominator: vec![(ParamMonomial::param(Param::Q, 3), BigRational::one())],
        };
        assert!(ParamRational::canonicalize(&raw).unwrap().is_zero());
        let bad = RawFraction {
            numerator: vec![(ParamMonomial::default(), BigRational::one())],
            denominator: vec![],
        };
        assert_eq!(ParamRational::canonicalize(&bad), Err(CoeffError::ZeroDenominator));
    }

    #[test]
    fn laurent_monomials_canonicalize() {
        let m = ParamRational::monomial(BigRational::one(), ParamMonomial::new([-1, 2, 0, 0]));
        assert_eq!(m, p() * p() * q().inv().unwrap());
        assert_eq!(m.to_string(), "q^-1*p^2");
    }

    #[test]
    fn substitution_examples() {
        let mut b = Bindings::new();
        b.insert(Param::P, q().pow(-2).unwrap());
        assert_eq!((p() * q()).substitute(&b).unwrap(), q().inv().unwrap());

        let mut b = Bindings::new();
        b.insert(Param::S, q() * r());
        assert!((q() * r() - s()).substitute(&b).unwrap().is_zero());

        assert_eq!(q().substitute(&Bindings::new()).unwrap(), q());
    }

    #[test]
    fn substitution_pole() {
        let mut b = Bindings::new();
        b.insert(Param::S, q() * r());
        let f = (q() * r() - s()).inv().unwrap();
        assert!(matches!(f.substitute(&b), Err(CoeffError::SubstitutionPole(_))));
    }

    #[test]
    fn display_forms() {
        assert_eq!((int(1) - p()).to_string(), "-p + 1");
        assert_eq!(q().inv().unwrap().to_string(), "q^-1");
        assert_eq!((-q().inv().unwrap()).to_string(), "-q^-1");
        let f = (q() * q() - int(1)).checked_div(&(p() + int(1))).unwrap();
        assert_eq!(f.to_string(), "(q^2 - 1)/(p + 1)");
        assert_eq!(ParamRational::zero().to_string(), "0");
    }

    #[test]
    fn general_denominators_cancel() {
        let a = (q() + p()).checked_div(&(q() * r() - s())).unwrap();
        let b = (q() * r() - s()).checked_div(&(q() + p())).unwrap();
        assert!((a * b).is_one());
    }
}

//! Multivariate polynomials over the rationals in the four deformation
//! parameters, with exact division and a gcd built from a specialisation
//! test for coprime inputs, a heuristic evaluation gcd and a recursive
//! primitive PRS as the fallback.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Param;

pub(crate) const NVARS: usize = 4;

/// Exponent vector of a polynomial term, indexed as `[q, p, r, s]`.
///
/// Ordered graded-lexicographically with `q > p > r > s`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Exps(pub [u32; NVARS]);

impl Exps {
    pub const ZERO: Exps = Exps([0; NVARS]);

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; NVARS]
    }

    pub fn divides(&self, other: &Exps) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Exps) -> Exps {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0.iter()) {
            *o += b;
        }
        Exps(out)
    }

    /// Componentwise difference; caller guarantees `other.divides(self)`.
    pub fn sub(&self, other: &Exps) -> Exps {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0.iter()) {
            *o -= b;
        }
        Exps(out)
    }

    pub fn meet(&self, other: &Exps) -> Exps {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0.iter()) {
            *o = (*o).min(*b);
        }
        Exps(out)
    }

    fn with(&self, var: usize, e: u32) -> Exps {
        let mut out = self.0;
        out[var] = e;
        Exps(out)
    }
}

impl Ord for Exps {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exps {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `q, p, r, s` with rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exps, BigRational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Poly {
        Poly::monomial(c, Exps::ZERO)
    }

    pub fn monomial(c: BigRational, e: Exps) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    pub fn var(p: Param) -> Poly {
        let mut e = [0; NVARS];
        e[p.index()] = 1;
        Poly::monomial(BigRational::one(), Exps(e))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exps, BigRational)>) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => self.terms.keys().next().unwrap().is_zero(),
            _ => false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.values().next().is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.is_monomial() {
            let (e, c) = other.leading().unwrap();
            return self.mul_term(c, e);
        }
        if self.is_monomial() {
            let (e, c) = self.leading().unwrap();
            return other.mul_term(c, e);
        }
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, c: &BigRational, e: &Exps) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.add(e), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Componentwise minimum exponent over all terms (the monomial content).
    pub fn min_exps(&self) -> Exps {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Exps::ZERO;
        };
        it.fold(*first, |acc, e| acc.meet(e))
    }

    /// Divides every term by the monomial `x^e`; `e` must divide every term.
    pub fn shift_down(&self, e: &Exps) -> Poly {
        if e.is_zero() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.sub(e), v.clone())).collect(),
        }
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.0[var]).max().unwrap_or(0)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (de, dc) = d.leading()?;
        if d.is_monomial() {
            if !self.terms.keys().all(|e| de.divides(e)) {
                return None;
            }
            let inv = dc.recip();
            return Some(Poly {
                terms: self
                    .terms
                    .iter()
                    .map(|(e, c)| (e.sub(de), c * &inv))
                    .collect(),
            });
        }
        let (de, dc) = (*de, dc.clone());
        let mut quot = Poly::zero();
        let mut rem = self.clone();
        while let Some((re, rc)) = rem.leading() {
            if !de.divides(re) {
                return None;
            }
            let te = re.sub(&de);
            let tc = rc / &dc;
            rem = rem.sub(&d.mul_term(&tc, &te));
            quot.add_term(te, tc);
        }
        Some(quot)
    }

    fn to_univariate(&self, var: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.degree_in(var) as usize + 1];
        for (e, c) in &self.terms {
            out[e.0[var] as usize].add_term(e.with(var, 0), c.clone());
        }
        trim(&mut out);
        out
    }

    fn from_univariate(coeffs: &[Poly], var: usize) -> Poly {
        let mut out = Poly::zero();
        for (k, coeff) in coeffs.iter().enumerate() {
            for (e, c) in &coeff.terms {
                out.add_term(e.with(var, k as u32), c.clone());
            }
        }
        out
    }

    /// Substitutes values for the variables, evaluated in any commutative
    /// ring provided through the callbacks.
    pub fn eval<T: Clone>(
        &self,
        zero: T,
        from_coeff: impl Fn(&BigRational) -> T,
        var_pow: impl Fn(usize, u32) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        let mut acc = zero;
        for (e, c) in &self.terms {
            let mut term = from_coeff(c);
            for (v, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    term = mul(&term, &var_pow(v, k));
                }
            }
            acc = add(&acc, &term);
        }
        acc
    }
}

fn trim(u: &mut Vec<Poly>) {
    while u.last().is_some_and(|c| c.is_zero()) {
        u.pop();
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let ma = a.min_exps();
    let mb = b.min_exps();
    let common = ma.meet(&mb);
    let g = gcd_nonmonomial(&a.shift_down(&ma), &b.shift_down(&mb));
    g.mul_term(&BigRational::one(), &common).monic()
}

// Neither argument carries a monomial factor.
fn gcd_nonmonomial(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if a.div_exact(b).is_some() {
        return b.monic();
    }
    if b.div_exact(a).is_some() {
        return a.monic();
    }
    if certainly_coprime(a, b) {
        return Poly::one();
    }
    if let Some(g) = heuristic_gcd(&integer_primitive(a), &integer_primitive(b)) {
        return g.monic();
    }
    let var = (0..NVARS)
        .filter(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .min_by_key(|&v| a.degree_in(v).max(b.degree_in(v)))
        .expect("non-constant polynomial has a variable");
    if a.degree_in(var) == 0 {
        return gcd(a, &content(&b.to_univariate(var)));
    }
    if b.degree_in(var) == 0 {
        return gcd(&content(&a.to_univariate(var)), b);
    }
    let ua = a.to_univariate(var);
    let ub = b.to_univariate(var);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = gcd(&ca, &cb);
    let pa = primitive_with(&ua, &ca);
    let pb = primitive_with(&ub, &cb);
    let g = primitive_prs(pa, pb);
    c.mul(&Poly::from_univariate(&g, var)).monic()
}

/// Image of `p` as a univariate polynomial in `var` with the other variables
/// set to `point`.
fn specialize(p: &Poly, var: usize, point: &[BigRational; NVARS]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p.degree_in(var) as usize + 1];
    for (e, c) in &p.terms {
        let mut v = c.clone();
        for (w, &k) in e.0.iter().enumerate() {
            if w != var && k > 0 {
                v *= num_traits::pow(point[w].clone(), k as usize);
            }
        }
        out[e.0[var] as usize] += v;
    }
    out
}

fn univariate_degree_of_gcd(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> usize {
    let trim = |u: &mut Vec<BigRational>| {
        while u.last().is_some_and(|c| c.is_zero()) {
            u.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let k = &a[a.len() - 1] / &b[b.len() - 1];
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[i + shift] -= &k * c;
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when a specialisation proves `gcd(a, b)` has degree zero in every
/// variable. A univariate image keeps its degree when the leading coefficient
/// survives, and the image of the gcd divides the gcd of the images.
fn certainly_coprime(a: &Poly, b: &Poly) -> bool {
    const POINTS: [[i64; NVARS]; 3] = [[3, 5, 7, 11], [-2, 13, 4, -9], [17, -3, 19, 6]];
    (0..NVARS).all(|var| {
        if a.degree_in(var) == 0 || b.degree_in(var) == 0 {
            return true;
        }
        POINTS.iter().any(|pt| {
            let point = pt.map(|v| BigRational::from_integer(v.into()));
            let (ia, ib) = (specialize(a, var, &point), specialize(b, var, &point));
            let full = |u: &[BigRational], d: u32| u.len() == d as usize + 1 && !u[d as usize].is_zero();
            full(&ia, a.degree_in(var)) && full(&ib, b.degree_in(var)) && univariate_degree_of_gcd(ia, ib) == 0
        })
    })
}

/// `p` scaled to integer coefficients with no common integer factor.
fn integer_primitive(p: &Poly) -> Poly {
    let denominators = p.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<(Exps, BigInt)> =
        p.terms.iter().map(|(e, c)| (*e, (c * BigRational::from_integer(denominators.clone())).to_integer())).collect();
    let g = scaled.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    Poly::from_terms(scaled.into_iter().map(|(e, c)| (e, BigRational::from_integer(c / &g))))
}

fn integer_content(p: &Poly) -> BigInt {
    p.terms.values().fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms.values().map(|c| c.numer().abs()).max().unwrap_or_default()
}

fn evaluate_at(p: &Poly, var: usize, xi: &BigInt) -> Poly {
    let mut out = Poly::zero();
    for (e, c) in &p.terms {
        let v = num_traits::pow(xi.clone(), e.0[var] as usize);
        out.add_term(e.with(var, 0), c * BigRational::from_integer(v));
    }
    out
}

/// Coefficient-wise symmetric remainder modulo `xi`.
fn symmetric_mod(p: &Poly, xi: &BigInt) -> Poly {
    let half = xi / 2;
    Poly::from_terms(p.terms.iter().map(|(e, c)| {
        let mut r = c.numer().mod_floor(xi);
        if r > half {
            r -= xi;
        }
        (*e, BigRational::from_integer(r))
    }))
}

/// Heuristic gcd of integer polynomials: evaluate one variable at a large
/// integer, take the gcd of the images recursively and read the candidate off
/// its `xi`-adic digits. A candidate is accepted only when it divides both
/// inputs; the result carries the integer content so images interpolate.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    let Some(var) = (0..NVARS).find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0) else {
        let (x, y) = (a.constant_value()?, b.constant_value()?);
        return Some(Poly::constant(BigRational::from_integer(x.numer().gcd(y.numer()))));
    };
    let bound = max_norm(a).min(max_norm(b));
    let mut xi: BigInt = bound * 2 + 29;
    for _ in 0..6 {
        if let Some(h) = heuristic_gcd(&evaluate_at(a, var, &xi), &evaluate_at(b, var, &xi)) {
            let mut candidate = Poly::zero();
            let mut rest = h;
            let mut k = 0;
            while !rest.is_zero() {
                let digit = symmetric_mod(&rest, &xi);
                for (e, c) in &digit.terms {
                    candidate.add_term(e.with(var, k), c.clone());
                }
                rest = rest.sub(&digit).scale(&BigRational::new(BigInt::one(), xi.clone()));
                k += 1;
            }
            if !candidate.is_zero() {
                let candidate = integer_primitive(&candidate);
                if a.div_exact(&candidate).is_some() && b.div_exact(&candidate).is_some() {
                    let content = integer_content(a).gcd(&integer_content(b));
                    return Some(candidate.scale(&BigRational::from_integer(content)));
                }
            }
        }
        xi = &xi * 73794 * xi.sqrt().sqrt() / 27011;
    }
    None
}

fn content(u: &[Poly]) -> Poly {
    let mut acc = Poly::zero();
    for c in u {
        acc = gcd(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn primitive_with(u: &[Poly], cont: &Poly) -> Vec<Poly> {
    if cont.is_one() {
        return u.to_vec();
    }
    u.iter()
        .map(|c| c.div_exact(cont).expect("content divides every coefficient"))
        .collect()
}

fn primitive(u: &[Poly]) -> Vec<Poly> {
    let mut p = primitive_with(u, &content(u));
    // Fix the scalar normalisation so coefficient sizes stay bounded.
    if let Some((_, lc)) = p.last().and_then(|c| c.leading()) {
        let inv = lc.recip();
        if !inv.is_one() {
            p = p.iter().map(|c| c.scale(&inv)).collect();
        }
    }
    p
}

fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&lr.mul(bc));
        }
        trim(&mut r);
    }
    r
}

// Gcd of two primitive univariate polynomials (coefficients in the other
// variables); the result is primitive.
fn primitive_prs(mut a: Vec<Poly>, mut b: Vec<Poly>) -> Vec<Poly> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 {
            return vec![Poly::one()];
        }
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return primitive(&b);
        }
        a = b;
        b = primitive(&r);
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().rev().map(|(e, c)| {
            let signed: [i64; NVARS] = std::array::from_fn(|i| e.0[i] as i64);
            (signed, c)
        }))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// Writes `c*q^a*p^b...` terms joined by `+`/`-`; exponents may be negative.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = ([i64; NVARS], &'a BigRational)>,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if negative { " - " } else { " + " })?;
        }
        first = false;
        let mut factors: Vec<String> = Vec::new();
        let is_const = e.iter().all(|&k| k == 0);
        if !mag.is_one() || is_const {
            factors.push(mag.to_string());
        }
        for (v, &k) in e.iter().enumerate() {
            let name = Param::ALL[v].name();
            match k {
                0 => {}
                1 => factors.push(name.to_string()),
                _ => factors.push(format!("{name}^{k}")),
            }
        }
        write!(f, "{}", factors.join("*"))?;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

use std::fmt;
use std::sync::Arc;

use super::rewrite::{rewrite, Rhs, RuleTable, Strategy};
use super::{AlgebraError, Letter, Word};
use crate::coeffs::{Bindings, Param, ParamRational};

/// The two one-parameter families of first-order calculi.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize)]
pub enum Family {
    I,
    II,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::I, Family::II];

    pub fn name(self) -> &'static str {
        match self {
            Family::I => "I",
            Family::II => "II",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "1" | "i" => Ok(Family::I),
            "II" | "2" | "ii" => Ok(Family::II),
            other => Err(format!("unknown family `{other}` (expected I or II)")),
        }
    }
}

/// Coefficients of the first-order ansatz
///
/// ```text
/// x dx = A dx x          x dθ = F11 dθ x + F12 dx θ
/// θ dx = F21 dx θ + F22 dθ x     θ dθ = B dθ θ
/// ```
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConsistencyCoefficients {
    pub a: ParamRational,
    pub b: ParamRational,
    pub f11: ParamRational,
    pub f12: ParamRational,
    pub f21: ParamRational,
    pub f22: ParamRational,
}

fn q() -> ParamRational {
    Param::Q.into()
}

impl ConsistencyCoefficients {
    pub fn for_family(family: Family) -> Self {
        let one = ParamRational::one();
        let (p, r, s) = (
            ParamRational::param(Param::P),
            ParamRational::param(Param::R),
            ParamRational::param(Param::S),
        );
        match family {
            Family::I => ConsistencyCoefficients {
                a: p.clone(),
                b: one.clone(),
                f11: &p * &q(),
                f12: ParamRational::zero(),
                f21: -q().inv().unwrap(),
                f22: &one - &p,
            },
            Family::II => ConsistencyCoefficients {
                a: s,
                b: one.clone(),
                f11: q(),
                f12: &(&q() * &r) - &one,
                f21: -r,
                f22: ParamRational::zero(),
            },
        }
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<Self, AlgebraError> {
        Ok(ConsistencyCoefficients {
            a: self.a.substitute(bindings)?,
            b: self.b.substitute(bindings)?,
            f11: self.f11.substitute(bindings)?,
            f12: self.f12.substitute(bindings)?,
            f21: self.f21.substitute(bindings)?,
            f22: self.f22.substitute(bindings)?,
        })
    }

    /// Residuals of the consistency system; all four vanish for a valid
    /// calculus (together with `B = 1`).
    pub fn consistency_residuals(&self) -> [(&'static str, ParamRational); 5] {
        let one = ParamRational::one();
        [
            ("F11 + q F22 - q", &(&self.f11 + &(&q() * &self.f22)) - &q()),
            ("F12 + q F21 + 1", &(&self.f12 + &(&q() * &self.f21)) + &one),
            ("B - 1", &self.b - &one),
            ("F12 F22", &self.f12 * &self.f22),
            ("(F11 - q A) F22", &(&self.f11 - &(&q() * &self.a)) * &self.f22),
        ]
    }
}

/// Coefficient `k` of the two-form relation `dx dθ = k dθ dx` as printed for
/// each family.
pub fn two_form_coefficient(family: Family) -> ParamRational {
    match family {
        Family::I => &ParamRational::param(Param::P) * &q(),
        Family::II => ParamRational::param(Param::R).inv().unwrap(),
    }
}

/// Which alphabet an algebra uses.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum AlgebraKind {
    /// `x, x⁻¹, θ, dx, dθ`
    Differential,
    /// `x, x⁻¹, θ, w, u`
    Forms,
}

impl AlgebraKind {
    pub fn alphabet(self) -> &'static [Letter] {
        match self {
            AlgebraKind::Differential => &[
                Letter::X,
                Letter::XInv,
                Letter::Theta,
                Letter::Dx,
                Letter::DTheta,
            ],
            AlgebraKind::Forms => &[Letter::X, Letter::XInv, Letter::Theta, Letter::W, Letter::U],
        }
    }

    pub fn admits(self, l: Letter) -> bool {
        self.alphabet().contains(&l)
    }

    /// The odd and even one-form letters of this alphabet.
    pub fn form_letters(self) -> (Letter, Letter) {
        match self {
            AlgebraKind::Differential => (Letter::Dx, Letter::DTheta),
            AlgebraKind::Forms => (Letter::W, Letter::U),
        }
    }
}

/// A length-two rewrite rule `lhs → rhs`, with the equation it encodes.
#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: (Letter, Letter),
    pub rhs: Rhs,
    pub label: &'static str,
}

impl Rule {
    pub fn new(lhs: (Letter, Letter), rhs: Rhs, label: &'static str) -> Rule {
        Rule { lhs, rhs, label }
    }

    pub fn display(&self) -> String {
        let lhs = Word(vec![self.lhs.0, self.lhs.1]).to_string();
        format!("{lhs} = {}", format_rhs(&self.rhs))
    }
}

pub(crate) fn format_rhs(rhs: &Rhs) -> String {
    let mut out = String::new();
    for (i, (c, w)) in rhs.iter().enumerate() {
        let term = super::element::format_term(c, w);
        if i == 0 {
            out.push_str(&term);
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn term(c: ParamRational, letters: &[Letter]) -> (ParamRational, Word) {
    (c, Word(letters.to_vec()))
}

/// `xθ = qθx`, `θ² = 0`.
pub fn superplane_rules() -> Vec<Rule> {
    use Letter::*;
    vec![
        Rule::new((X, Theta), vec![term(q(), &[Theta, X])], "1"),
        Rule::new((Theta, Theta), vec![], "1"),
    ]
}

/// First-order rules built from a coefficient table.
pub fn first_order_rules(c: &ConsistencyCoefficients, label: &'static str) -> Vec<Rule> {
    use Letter::*;
    vec![
        Rule::new((X, Dx), vec![term(c.a.clone(), &[Dx, X])], label),
        Rule::new(
            (X, DTheta),
            vec![term(c.f11.clone(), &[DTheta, X]), term(c.f12.clone(), &[Dx, Theta])],
            label,
        ),
        Rule::new(
            (Theta, Dx),
            vec![term(c.f21.clone(), &[Dx, Theta]), term(c.f22.clone(), &[DTheta, X])],
            label,
        ),
        Rule::new((Theta, DTheta), vec![term(c.b.clone(), &[DTheta, Theta])], label),
    ]
}

/// `(dx)² = 0`, `dx dθ = k dθ dx`.
pub fn two_form_rules(k: ParamRational, label: &'static str) -> Vec<Rule> {
    use Letter::*;
    vec![
        Rule::new((Dx, Dx), vec![], label),
        Rule::new((Dx, DTheta), vec![term(k, &[DTheta, Dx])], label),
    ]
}

/// A rewrite system presenting one of the algebras: the ordered base rules,
/// the derived `x⁻¹` rules, and the `x x⁻¹ = 1` cancellations.
pub struct Relations {
    label: String,
    family: Family,
    kind: AlgebraKind,
    bindings: Bindings,
    base: Vec<Rule>,
    inverse: Vec<Rule>,
    table: RuleTable,
    free: bool,
}

impl fmt::Debug for Relations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relations").field("label", &self.label).finish()
    }
}

fn bindings_suffix(bindings: &Bindings) -> String {
    if bindings.is_empty() {
        return String::new();
    }
    let parts: Vec<String> = bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("[{}]", parts.join(","))
}

impl Relations {
    /// The differential algebra Γ (with `x⁻¹` adjoined) of `family`.
    pub fn differential(family: Family, bindings: &Bindings) -> Result<Arc<Relations>, AlgebraError> {
        Self::differential_with(family, bindings, true)
    }

    /// Γ without the two-form relations; `dx dθ`, `dθ dx` and `dx dx` stay
    /// as independent words.
    pub fn first_order(family: Family, bindings: &Bindings) -> Result<Arc<Relations>, AlgebraError> {
        Self::differential_with(family, bindings, false)
    }

    fn differential_with(
        family: Family,
        bindings: &Bindings,
        with_two_forms: bool,
    ) -> Result<Arc<Relations>, AlgebraError> {
        let table = ConsistencyCoefficients::for_family(family).substitute(bindings)?;
        let eq = match family {
            Family::I => "11a",
            Family::II => "11b",
        };
        let mut base = superplane_rules();
        for r in &mut base {
            r.rhs = substitute_rhs(&r.rhs, bindings)?;
        }
        base.extend(first_order_rules(&table, eq));
        let mut label = format!("Gamma/{family}");
        if with_two_forms {
            let k = two_form_coefficient(family).substitute(bindings)?;
            let eq2 = match family {
                Family::I => "12a",
                Family::II => "12b",
            };
            base.extend(two_form_rules(k, eq2));
        } else {
            label.push_str("/first-order");
        }
        label.push_str(&bindings_suffix(bindings));
        Relations::from_rules(label, family, AlgebraKind::Differential, bindings.clone(), base, with_two_forms)
    }

    /// Builds a rewrite system from base rules; the cancellation rules and
    /// the `x⁻¹` rules are added here. With `complete`, every out-of-order
    /// pair of the alphabet must have a rule.
    pub fn from_rules(
        label: String,
        family: Family,
        kind: AlgebraKind,
        bindings: Bindings,
        base: Vec<Rule>,
        complete: bool,
    ) -> Result<Arc<Relations>, AlgebraError> {
        let inverse = derive_inverse_rules(&base)?;
        let mut table = RuleTable::default();
        for r in base.iter().chain(inverse.iter()) {
            table.insert(r.lhs, r.rhs.clone());
        }
        insert_cancellations(&mut table);
        if complete {
            let alphabet = kind.alphabet();
            for &a in alphabet {
                for &b in alphabet {
                    let needs = a.rank() > b.rank()
                        || (a == b && a.parity().is_odd())
                        || matches!((a, b), (Letter::X, Letter::XInv) | (Letter::XInv, Letter::X));
                    if needs && !table.contains(a, b) {
                        return Err(AlgebraError::MissingRule(a, b));
                    }
                }
            }
        }
        Ok(Arc::new(Relations {
            label,
            family,
            kind,
            bindings,
            base,
            inverse,
            table,
            free: false,
        }))
    }

    /// The free algebra on `kind`'s alphabet (no relations at all, not even
    /// `x x⁻¹ = 1`); used to hold formal linear combinations of words.
    pub fn free(family: Family, kind: AlgebraKind) -> Arc<Relations> {
        Arc::new(Relations {
            label: format!("free/{kind:?}/{family}"),
            family,
            kind,
            bindings: Bindings::new(),
            base: Vec::new(),
            inverse: Vec::new(),
            table: RuleTable::default(),
            free: true,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    pub fn is_free(&self) -> bool {
        self.free
    }

    pub fn base_rules(&self) -> &[Rule] {
        &self.base
    }

    pub fn inverse_rules(&self) -> &[Rule] {
        &self.inverse
    }

    pub fn table(&self) -> &RuleTable {
        &self.table
    }

    /// The rule for the pair `(a, b)`, if any.
    pub fn rule(&self, a: Letter, b: Letter) -> Option<&Rhs> {
        self.table.get(a, b)
    }

    pub(crate) fn rewrite(
        &self,
        input: impl IntoIterator<Item = (Word, ParamRational)>,
        strategy: Strategy,
    ) -> Result<std::collections::BTreeMap<Word, ParamRational>, AlgebraError> {
        rewrite(&self.table, input, strategy)
    }

    pub fn same_algebra(&self, other: &Relations) -> bool {
        std::ptr::eq(self, other) || self.label == other.label
    }
}

fn substitute_rhs(rhs: &Rhs, bindings: &Bindings) -> Result<Rhs, AlgebraError> {
    rhs.iter()
        .map(|(c, w)| Ok((c.substitute(bindings)?, w.clone())))
        .collect()
}

fn insert_cancellations(table: &mut RuleTable) {
    table.insert((Letter::X, Letter::XInv), vec![(ParamRational::one(), Word::empty())]);
    table.insert((Letter::XInv, Letter::X), vec![(ParamRational::one(), Word::empty())]);
}

/// Derives the `x⁻¹ g` rules from the `x g` rules by conjugation.
///
/// From `x g = c g x + T` one gets `x⁻¹ g = c⁻¹ g x⁻¹ − c⁻¹ x⁻¹ T x⁻¹`, and the
/// tail is normalised with the rules derived so far. Generators are
/// processed once every letter occurring in their tail has its own rule.
pub fn derive_inverse_rules(base: &[Rule]) -> Result<Vec<Rule>, AlgebraError> {
    struct Pending {
        g: Letter,
        c: ParamRational,
        tail: Rhs,
    }
    let mut pending = Vec::new();
    for r in base.iter().filter(|r| r.lhs.0 == Letter::X) {
        let g = r.lhs.1;
        let lead = Word(vec![g, Letter::X]);
        let c = r
            .rhs
            .iter()
            .filter(|(_, w)| *w == lead)
            .fold(ParamRational::zero(), |acc, (c, _)| &acc + c);
        if c.is_zero() {
            return Err(AlgebraError::NonInvertibleCoefficient(g));
        }
        let tail = r.rhs.iter().filter(|(_, w)| *w != lead).cloned().collect();
        pending.push(Pending { g, c, tail });
    }

    let mut table = RuleTable::default();
    for r in base {
        table.insert(r.lhs, r.rhs.clone());
    }
    insert_cancellations(&mut table);

    let mut derived: Vec<Rule> = Vec::new();
    while !pending.is_empty() {
        let ready = pending.iter().position(|p| {
            p.tail.iter().all(|(_, w)| {
                w.letters()
                    .iter()
                    .all(|&l| matches!(l, Letter::X | Letter::XInv) || table.contains(Letter::XInv, l))
            })
        });
        let Some(i) = ready else {
            return Err(AlgebraError::InverseRuleCycle);
        };
        let p = pending.remove(i);
        let cinv = p.c.inv()?;
        let conj = p.tail.iter().map(|(c, w)| {
            let word = Word::letter(Letter::XInv)
                .concat(w)
                .concat(&Word::letter(Letter::XInv));
            (word, -&(&cinv * c))
        });
        let mut rhs: Rhs = vec![(cinv.clone(), Word(vec![p.g, Letter::XInv]))];
        for (w, c) in rewrite(&table, conj, Strategy::Leftmost)? {
            rhs.push((c, w));
        }
        table.insert((Letter::XInv, p.g), rhs.clone());
        derived.push(Rule::new((Letter::XInv, p.g), rhs, "inverse"));
    }
    Ok(derived)
}

//! Exact branching solver for the consistency system. Every
//! equation is a product of affine forms in the unknowns `A, B, F11, F12,
//! F21, F22`, so each branch stays affine.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{ConsistencyCoefficients, Family};
use crate::coeffs::{Param, ParamRational};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Unknown {
    A,
    B,
    F11,
    F12,
    F21,
    F22,
}

impl Unknown {
    pub const ALL: [Unknown; 6] = [Unknown::A, Unknown::B, Unknown::F11, Unknown::F12, Unknown::F21, Unknown::F22];

    /// Order in which unknowns are eliminated; the last ones tend to stay free.
    const PIVOTS: [Unknown; 6] = [Unknown::B, Unknown::F11, Unknown::F21, Unknown::F22, Unknown::F12, Unknown::A];
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unknown::A => "A",
            Unknown::B => "B",
            Unknown::F11 => "F11",
            Unknown::F12 => "F12",
            Unknown::F21 => "F21",
            Unknown::F22 => "F22",
        })
    }
}

/// `constant + Σ c_u u`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Affine {
    constant: ParamRational,
    coeffs: BTreeMap<Unknown, ParamRational>,
}

impl Affine {
    pub fn constant(c: ParamRational) -> Affine {
        Affine {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn unknown(u: Unknown) -> Affine {
        Affine::constant(ParamRational::zero()).plus(u, ParamRational::one())
    }

    fn plus(mut self, u: Unknown, c: ParamRational) -> Affine {
        let v = self.coeffs.remove(&u).map_or(c.clone(), |old| &old + &c);
        if !v.is_zero() {
            self.coeffs.insert(u, v);
        }
        self
    }

    pub fn add(&self, other: &Affine) -> Affine {
        let mut out = Affine::constant(&self.constant + &other.constant);
        out.coeffs = self.coeffs.clone();
        for (u, c) in &other.coeffs {
            out = out.plus(*u, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &ParamRational) -> Affine {
        if k.is_zero() {
            return Affine::constant(ParamRational::zero());
        }
        Affine {
            constant: &self.constant * k,
            coeffs: self.coeffs.iter().map(|(u, c)| (*u, c * k)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn unknowns(&self) -> impl Iterator<Item = Unknown> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn substitute(&self, u: Unknown, value: &Affine) -> Affine {
        match self.coeffs.get(&u) {
            None => self.clone(),
            Some(c) => {
                let mut rest = self.clone();
                rest.coeffs.remove(&u);
                rest.add(&value.scale(c))
            }
        }
    }

    pub fn substitute_all(&self, values: &BTreeMap<Unknown, Affine>) -> Affine {
        values.iter().fold(self.clone(), |acc, (u, v)| acc.substitute(*u, v))
    }

    /// Value once every unknown is given; `None` if one is missing.
    pub fn evaluate(&self, values: &BTreeMap<Unknown, ParamRational>) -> Option<ParamRational> {
        let mut out = self.constant.clone();
        for (u, c) in &self.coeffs {
            out = &out + &(c * values.get(u)?);
        }
        Some(out)
    }

    /// Scaled so the first coefficient (or the constant) is 1.
    fn monic(&self) -> Affine {
        let lead = self.coeffs.values().next().unwrap_or(&self.constant);
        if lead.is_zero() {
            return self.clone();
        }
        self.scale(&lead.inv().expect("nonzero"))
    }

    /// Solves `self = 0` for `u`.
    fn solve_for(&self, u: Unknown) -> Affine {
        let c = &self.coeffs[&u];
        let mut rest = self.clone();
        rest.coeffs.remove(&u);
        rest.scale(&-c.inv().expect("pivot is nonzero"))
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (u, c) in &self.coeffs {
            parts.push(if c.is_one() {
                u.to_string()
            } else if (-c).is_one() {
                format!("-{u}")
            } else if c.is_atomic() {
                format!("{c}*{u}")
            } else if c.is_negative_term() {
                format!("-{}*{u}", -c)
            } else {
                format!("({c})*{u}")
            });
        }
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {p}")),
            }
        }
        f.write_str(&out)
    }
}

/// An equation `Π factors = 0`.
pub type Equation = Vec<Affine>;

/// The consistency system, each equation tagged with its label.
pub fn consistency_equations() -> Vec<(&'static str, Equation)> {
    use Unknown::*;
    let q = ParamRational::param(Param::Q);
    let u = Affine::unknown;
    let k = Affine::constant;
    vec![
        ("6a", vec![u(F11).plus(F22, q.clone()).add(&k(-&q))]),
        ("6a", vec![u(F12).plus(F21, q.clone()).add(&k(ParamRational::one()))]),
        ("6a", vec![u(B).add(&k(-ParamRational::one()))]),
        ("6b", vec![u(F12), u(F22)]),
        ("6b", vec![u(F11).plus(A, -&q), u(F22)]),
    ]
}

/// One branch of solutions: pinned unknowns as affine functions of the free
/// ones, valid where the recorded factors do not vanish.
#[derive(Clone, Debug)]
pub struct SolutionFamily {
    pub branch: Vec<Affine>,
    pub values: BTreeMap<Unknown, Affine>,
    pub free: Vec<Unknown>,
    pub nonzero: Vec<Affine>,
}

impl SolutionFamily {
    fn contains(&self, other: &SolutionFamily) -> bool {
        self.values
            .iter()
            .all(|(u, e)| Affine::unknown(*u).add(&e.scale(&-ParamRational::one())).substitute_all(&other.values).is_zero())
    }

    /// Coefficients after giving each free unknown a value; `None` unless
    /// exactly the free unknowns are renamed.
    pub fn rename(&self, renaming: &BTreeMap<Unknown, ParamRational>) -> Option<ConsistencyCoefficients> {
        let mut free: Vec<Unknown> = renaming.keys().copied().collect();
        free.sort();
        if free != self.free {
            return None;
        }
        let value = |u: Unknown| match self.values.get(&u) {
            Some(e) => e.evaluate(renaming),
            None => renaming.get(&u).cloned(),
        };
        Some(ConsistencyCoefficients {
            a: value(Unknown::A)?,
            b: value(Unknown::B)?,
            f11: value(Unknown::F11)?,
            f12: value(Unknown::F12)?,
            f21: value(Unknown::F21)?,
            f22: value(Unknown::F22)?,
        })
    }
}

impl fmt::Display for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let branch: Vec<String> = self.branch.iter().map(|b| format!("{b} = 0")).collect();
        write!(f, "branch {}:", branch.join(", "))?;
        let values: Vec<String> = self.values.iter().map(|(u, e)| format!("{u} = {e}")).collect();
        write!(f, " {}", values.join(", "))?;
        let free: Vec<String> = self.free.iter().map(|u| u.to_string()).collect();
        write!(f, "; free {}", free.join(", "))
    }
}

/// The renaming that turns a solution family into the parameters `p`, `r`, `s`.
pub fn renaming(family: Family) -> BTreeMap<Unknown, ParamRational> {
    let p = |x| ParamRational::param(x);
    match family {
        Family::I => BTreeMap::from([(Unknown::A, p(Param::P))]),
        Family::II => BTreeMap::from([
            (Unknown::A, p(Param::S)),
            (Unknown::F12, &(&p(Param::Q) * &p(Param::R)) - &ParamRational::one()),
        ]),
    }
}

struct Branch {
    equations: Vec<Equation>,
    values: BTreeMap<Unknown, Affine>,
    nonzero: Vec<Affine>,
    branch: Vec<Affine>,
}

fn pin(values: &mut BTreeMap<Unknown, Affine>, u: Unknown, e: Affine) {
    for v in values.values_mut() {
        *v = v.substitute(u, &e);
    }
    values.insert(u, e);
}

fn explore(mut b: Branch, out: &mut Vec<SolutionFamily>) {
    loop {
        for n in &mut b.nonzero {
            *n = n.substitute_all(&b.values);
            if n.is_zero() {
                return;
            }
        }
        let assumed: Vec<Affine> = b.nonzero.iter().map(Affine::monic).collect();
        let mut remaining = Vec::new();
        for eq in &b.equations {
            let factors: Vec<Affine> = eq.iter().map(|f| f.substitute_all(&b.values)).collect();
            if factors.iter().any(Affine::is_zero) {
                continue;
            }
            let live: Vec<Affine> = factors
                .into_iter()
                .filter(|f| !f.is_constant() && !assumed.contains(&f.monic()))
                .collect();
            if live.is_empty() {
                return;
            }
            remaining.push(live);
        }
        b.equations = remaining;

        let Some(pos) = b.equations.iter().position(|e| e.len() == 1) else {
            break;
        };
        let eq = b.equations.remove(pos).remove(0);
        let u = Unknown::PIVOTS
            .into_iter()
            .find(|u| eq.coeffs.contains_key(u))
            .expect("non-constant equation");
        let value = eq.solve_for(u);
        pin(&mut b.values, u, value);
    }

    let Some(first) = b.equations.first().cloned() else {
        out.push(SolutionFamily {
            free: Unknown::ALL.into_iter().filter(|u| !b.values.contains_key(u)).collect(),
            branch: b.branch,
            values: b.values,
            nonzero: b.nonzero,
        });
        return;
    };
    for (k, factor) in first.iter().enumerate() {
        let mut equations = b.equations[1..].to_vec();
        equations.push(vec![factor.clone()]);
        let mut nonzero = b.nonzero.clone();
        nonzero.extend(first[..k].iter().cloned());
        let mut branch = b.branch.clone();
        branch.push(factor.clone());
        explore(
            Branch {
                equations,
                values: b.values.clone(),
                nonzero,
                branch,
            },
            out,
        );
    }
}

/// All solution families of the consistency system, minus families
/// contained in another one.
pub fn solve_consistency() -> Vec<SolutionFamily> {
    let mut raw = Vec::new();
    explore(
        Branch {
            equations: consistency_equations().into_iter().map(|(_, e)| e).collect(),
            values: BTreeMap::new(),
            nonzero: Vec::new(),
            branch: Vec::new(),
        },
        &mut raw,
    );
    let mut kept: Vec<SolutionFamily> = Vec::new();
    for (i, s) in raw.iter().enumerate() {
        let subsumed = raw
            .iter()
            .enumerate()
            .any(|(j, t)| j != i && t.contains(s) && (!s.contains(t) || j < i));
        if !subsumed {
            kept.push(s.clone());
        }
    }
    kept
}

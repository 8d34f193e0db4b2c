//! The C-matrix of a calculus, the superpermutation and the braid
//! conditions, plus the solver for the consistency system.

mod solve;

use std::fmt;

use crate::algebra::{first_order_rules, ConsistencyCoefficients, Family, Letter, Rule, Word};
use crate::calculus::same_rhs;
use crate::coeffs::{Bindings, CoeffError, Param, ParamRational};
use crate::report::CheckRecord;

pub use solve::{consistency_equations, renaming, solve_consistency, Affine, SolutionFamily, Unknown};

/// Square matrix over ℚ(q, p, r, s), row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    n: usize,
    entries: Vec<ParamRational>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Matrix {
        Matrix {
            n,
            entries: vec![ParamRational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, ParamRational::one());
        }
        m
    }

    /// Panics unless `rows` is square.
    pub fn from_rows(rows: Vec<Vec<ParamRational>>) -> Matrix {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ParamRational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ParamRational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (n, m) = (self.n, other.n);
        let mut out = Matrix::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.set(i * m + k, j * m + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ParamRational::is_zero)
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<Matrix, CoeffError> {
        Ok(Matrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e.substitute(bindings)).collect::<Result<_, _>>()?,
        })
    }

    /// Nonzero entries as `(row, column, value)`, 1-based.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, ParamRational)> {
        (0..self.n * self.n)
            .filter(|&k| !self.entries[k].is_zero())
            .map(|k| (k / self.n + 1, k % self.n + 1, self.entries[k].clone()))
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// How the superpermutation treats `e₂ ⊗ e₂` (both legs odd).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum PermConvention {
    /// `P(e_i ⊗ e_j) = (−1)^{î ĵ} e_j ⊗ e_i`
    #[default]
    Graded,
    /// Plain flip without signs.
    Ungraded,
}

impl PermConvention {
    pub const ALL: [PermConvention; 2] = [PermConvention::Graded, PermConvention::Ungraded];

    pub fn name(self) -> &'static str {
        match self {
            PermConvention::Graded => "graded",
            PermConvention::Ungraded => "ungraded",
        }
    }
}

impl fmt::Display for PermConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Basis `Z¹ = x`, `Z² = θ`.
const COORDS: [Letter; 2] = [Letter::X, Letter::Theta];
const DIFFS: [Letter; 2] = [Letter::Dx, Letter::DTheta];

fn parity(i: usize) -> u8 {
    COORDS[i].parity().bit()
}

/// Index of `e_i ⊗ e_j` (0-based `i`, `j`).
fn pair(i: usize, j: usize) -> usize {
    2 * i + j
}

/// The 4×4 coefficient matrix C built from the consistency coefficients.
pub fn build_c(c: &ConsistencyCoefficients) -> Matrix {
    let z = ParamRational::zero;
    Matrix::from_rows(vec![
        vec![c.a.clone(), z(), z(), z()],
        vec![z(), -&c.f21, -&c.f22, z()],
        vec![z(), c.f12.clone(), c.f11.clone(), z()],
        vec![z(), z(), z(), ParamRational::one()],
    ])
}

pub fn superpermutation(conv: PermConvention) -> Matrix {
    let mut p = Matrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            let odd = conv == PermConvention::Graded && parity(i) * parity(j) == 1;
            let sign = if odd { -ParamRational::one() } else { ParamRational::one() };
            p.set(pair(j, i), pair(i, j), sign);
        }
    }
    p
}

/// `Ĉ = P C`.
pub fn c_hat(c: &Matrix, conv: PermConvention) -> Matrix {
    superpermutation(conv).mul(c)
}

/// Reference matrices Ĉ_I and Ĉ_II, entry for entry.
pub fn printed_c_hat(family: Family) -> Matrix {
    let one = ParamRational::one();
    let z = ParamRational::zero;
    let q = ParamRational::param(Param::Q);
    match family {
        Family::I => {
            let p = ParamRational::param(Param::P);
            Matrix::from_rows(vec![
                vec![p.clone(), z(), z(), z()],
                vec![z(), z(), &p * &q, z()],
                vec![z(), q.inv().unwrap(), &p - &one, z()],
                vec![z(), z(), z(), one],
            ])
        }
        Family::II => {
            let (r, s) = (ParamRational::param(Param::R), ParamRational::param(Param::S));
            Matrix::from_rows(vec![
                vec![s, z(), z(), z()],
                vec![z(), r.clone(), q.clone(), z()],
                vec![z(), &(&q * &r) - &one, z(), z()],
                vec![z(), z(), z(), one],
            ])
        }
    }
}

/// The two braid-type identities.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BraidIdentity {
    /// `C₁₂ C₁₃ C₂₃ = C₂₃ C₁₃ C₁₂`
    Triple,
    /// `Ĉ₁₂ Ĉ₂₃ Ĉ₁₂ = Ĉ₂₃ Ĉ₁₂ Ĉ₂₃`
    Braid,
}

impl BraidIdentity {
    pub fn describe(self) -> &'static str {
        match self {
            BraidIdentity::Triple => "C12 C13 C23 = C23 C13 C12",
            BraidIdentity::Braid => "Ch12 Ch23 Ch12 = Ch23 Ch12 Ch23",
        }
    }
}

/// `LHS − RHS` of the first identity, with `C₁₃ = P₂₃ C₁₂ P₂₃`.
pub fn triple_residual(c: &Matrix, conv: PermConvention) -> Matrix {
    let i2 = Matrix::identity(2);
    let c12 = c.kron(&i2);
    let c23 = i2.kron(c);
    let p23 = i2.kron(&superpermutation(conv));
    let c13 = p23.mul(&c12).mul(&p23);
    c12.mul(&c13).mul(&c23).sub(&c23.mul(&c13).mul(&c12))
}

/// `LHS − RHS` of the braid relation for a given `Ĉ`.
pub fn braid_residual(c_hat: &Matrix) -> Matrix {
    let i2 = Matrix::identity(2);
    let a = c_hat.kron(&i2);
    let b = i2.kron(c_hat);
    a.mul(&b).mul(&a).sub(&b.mul(&a).mul(&b))
}

/// Residual of one identity for the matrix `C`.
pub fn braid_check(c: &Matrix, identity: BraidIdentity, conv: PermConvention) -> Matrix {
    match identity {
        BraidIdentity::Triple => triple_residual(c, conv),
        BraidIdentity::Braid => braid_residual(&c_hat(c, conv)),
    }
}

fn residual_witness(m: &Matrix) -> Option<String> {
    let nz = m.nonzero_entries();
    let (i, j, v) = nz.first()?;
    Some(format!("{} nonzero residual entries, first ({i},{j}) = {v}", nz.len()))
}

/// Relations `Z^i dZ^j = (−1)^{î(ĵ+1)} C^{ji}_{kl} dZ^k Z^l`.
pub fn rules_from_c(c: &Matrix) -> Vec<Rule> {
    let d = |k: usize| DIFFS[k];
    let mut out = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let negative = parity(i) * (parity(j) + 1) % 2 == 1;
            let row = pair(j, i);
            let mut rhs = Vec::new();
            for k in 0..2 {
                for l in 0..2 {
                    let v = c.get(row, pair(k, l));
                    if !v.is_zero() {
                        let v = if negative { -v } else { v.clone() };
                        rhs.push((v, Word(vec![d(k), COORDS[l]])));
                    }
                }
            }
            out.push(Rule::new((COORDS[i], d(j)), rhs, "7"));
        }
    }
    out
}

fn family_eq(family: Family) -> &'static str {
    match family {
        Family::I => "10a",
        Family::II => "10b",
    }
}

/// Braid checks for the family's C under both conventions, comparison with
/// the reference Ĉ, and coherence of the rules generated by C with the
/// rewrite rules.
pub fn verify_braid(family: Family, bindings: &Bindings) -> Result<Vec<CheckRecord>, CoeffError> {
    let coeffs = ConsistencyCoefficients::for_family(family).substitute(bindings).map_err(|e| match e {
        crate::algebra::AlgebraError::Coeff(c) => c,
        other => panic!("unexpected error {other}"),
    })?;
    let c = build_c(&coeffs);
    let mut out = Vec::new();

    for conv in PermConvention::ALL {
        for id in [BraidIdentity::Triple, BraidIdentity::Braid] {
            let res = braid_check(&c, id, conv);
            let name = format!("{} with C from the {family} coefficients ({conv} permutation)", id.describe());
            let witness = residual_witness(&res);
            if conv == PermConvention::default() {
                out.push(CheckRecord::from_outcome(name, "9", witness.clone()));
                if let Some(w) = witness {
                    if family == Family::II && !bindings.contains_key(&Param::S) {
                        let mut at = bindings.clone();
                        at.insert(Param::S, &ParamRational::param(Param::Q) * &ParamRational::param(Param::R));
                        let vanishes = res.substitute(&at)?.is_zero();
                        out.push(CheckRecord::info(
                            format!("{} residual at s = q*r", id.describe()),
                            "9",
                            if vanishes { "vanishes".to_string() } else { format!("does not vanish ({w})") },
                        ));
                    }
                }
            } else {
                out.push(CheckRecord::info(name, "9", witness.unwrap_or_else(|| "holds".into())));
            }
        }
    }

    let printed = printed_c_hat(family).substitute(bindings)?;
    let eq = family_eq(family);
    for conv in PermConvention::ALL {
        let diff = printed.sub(&c_hat(&c, conv));
        let text = match diff.nonzero_entries().as_slice() {
            [] => "equal".to_string(),
            entries => entries
                .iter()
                .map(|(i, j, _)| format!("({i},{j}) printed {} vs {}", printed.get(i - 1, j - 1), c_hat(&c, conv).get(i - 1, j - 1)))
                .collect::<Vec<_>>()
                .join("; "),
        };
        out.push(CheckRecord::info(format!("printed Ch vs P C ({conv} permutation)"), eq, text));
    }
    let printed_res = braid_residual(&printed);
    out.push(CheckRecord::info(
        "braid relation for the printed Ch",
        eq,
        residual_witness(&printed_res).unwrap_or_else(|| "holds".into()),
    ));

    for (from_c, rule) in rules_from_c(&c).iter().zip(first_order_rules(&coeffs, "11")) {
        let rhs: Vec<_> = rule.rhs.iter().filter(|(v, _)| !v.is_zero()).cloned().collect();
        let ok = same_rhs(&from_c.rhs, &rhs);
        out.push(CheckRecord::from_outcome(
            format!("C generates {}", from_c.display()),
            "7",
            (!ok).then(|| format!("rewrite rule is {}", rule.display())),
        ));
    }
    Ok(out)
}

/// Solves the consistency system, matches the families with Family I and II
/// after renaming and substitutes them back into the system.
pub fn solve_records() -> Vec<CheckRecord> {
    let families = solve_consistency();
    let mut out = vec![CheckRecord::from_outcome(
        format!("consistency system has {} solution families", families.len()),
        "6",
        (families.len() != 2).then(|| families.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" | ")),
    )];
    for sol in &families {
        out.push(CheckRecord::info("solution family", "6", sol.to_string()));
    }
    for family in Family::ALL {
        let expected = ConsistencyCoefficients::for_family(family);
        let renaming = renaming(family);
        let found = families.iter().find_map(|s| s.rename(&renaming).filter(|c| *c == expected));
        let names: Vec<String> = renaming.iter().map(|(u, v)| format!("{u} -> {v}")).collect();
        out.push(CheckRecord::from_outcome(
            format!("a solution family with {} is Family {family}", names.join(", ")),
            family_eq(family),
            found.is_none().then(|| "no family matches".to_string()),
        ));
        if let Some(c) = found {
            let bad: Vec<String> = c
                .consistency_residuals()
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(n, v)| format!("{n} = {v}"))
                .collect();
            out.push(CheckRecord::from_outcome(
                format!("Family {family} satisfies the consistency system"),
                "6",
                (!bad.is_empty()).then(|| bad.join("; ")),
            ));
        }
    }
    out
}

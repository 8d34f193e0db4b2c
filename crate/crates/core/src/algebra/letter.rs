use std::fmt;
use std::ops::Add;

/// Z2 degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^(self * other)` as a boolean "flip".
    pub fn koszul(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Alphabet letter. `DTheta`..`XInv` span the differential algebra; `U`
/// and `W` are the abstract forms generators used in place of the
/// differentials in the forms algebra.
///
/// The derived `Ord` is the normal-ordering rank: `dθ < dx < θ < x`,
/// `u < w < θ < x`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    U,
    DTheta,
    W,
    Dx,
    Theta,
    X,
    XInv,
}

impl Letter {
    pub fn parity(self) -> Parity {
        match self {
            Letter::X | Letter::XInv | Letter::DTheta | Letter::U => Parity::Even,
            Letter::Theta | Letter::Dx | Letter::W => Parity::Odd,
        }
    }

    pub fn form_degree(self) -> u32 {
        match self {
            Letter::Dx | Letter::DTheta | Letter::W | Letter::U => 1,
            _ => 0,
        }
    }

    /// Position class in a normal monomial; letters of equal rank may sit
    /// next to each other (except `x x⁻¹`, which cancels).
    pub fn rank(self) -> u8 {
        match self {
            Letter::U | Letter::DTheta => 0,
            Letter::W | Letter::Dx => 1,
            Letter::Theta => 2,
            Letter::X | Letter::XInv => 3,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Letter::X => "x",
            Letter::XInv => "xinv",
            Letter::Theta => "th",
            Letter::Dx => "dx",
            Letter::DTheta => "dth",
            Letter::W => "w",
            Letter::U => "u",
        }
    }

    pub fn from_token(s: &str) -> Option<Letter> {
        Some(match s {
            "x" => Letter::X,
            "xinv" => Letter::XInv,
            "th" => Letter::Theta,
            "dx" => Letter::Dx,
            "dth" => Letter::DTheta,
            "w" => Letter::W,
            "u" => Letter::U,
            _ => return None,
        })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// A word in the free algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self) -> Parity {
        self.0.iter().fold(Parity::Even, |acc, l| acc + l.parity())
    }

    pub fn form_degree(&self) -> u32 {
        self.0.iter().map(|l| l.form_degree()).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    /// Run-length form: `dth^2*dx*x^3`; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if j - i > 1 {
                write!(f, "{}^{}", l, j - i)?;
            } else {
                write!(f, "{l}")?;
            }
            i = j;
        }
        Ok(())
    }
}

/// Basis monomial `dθ^a dx^b θ^e x^n` of the differential algebra (or
/// `u^a w^b θ^e x^n` of the forms algebra); negative `n` stands for
/// powers of `x⁻¹`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct NormalMonomial {
    pub a: u32,
    pub b: u32,
    pub e: u32,
    pub n: i32,
}

impl NormalMonomial {
    /// Reads a normal word; `None` if the word is not in normal order.
    pub fn from_word(w: &Word, forms: bool) -> Option<NormalMonomial> {
        let (first, second) = if forms {
            (Letter::U, Letter::W)
        } else {
            (Letter::DTheta, Letter::Dx)
        };
        let mut m = NormalMonomial { a: 0, b: 0, e: 0, n: 0 };
        let mut stage = 0u8;
        for &l in w.letters() {
            let s = match l {
                l if l == first => 0,
                l if l == second => 1,
                Letter::Theta => 2,
                Letter::X => 3,
                Letter::XInv => 4,
                _ => return None,
            };
            if s < stage || (stage == 3 && s == 4) {
                return None;
            }
            stage = s;
            match s {
                0 => m.a += 1,
                1 => m.b += 1,
                2 => m.e += 1,
                3 => m.n += 1,
                _ => m.n -= 1,
            }
        }
        if m.b > 1 || m.e > 1 {
            return None;
        }
        Some(m)
    }

    pub fn to_word(&self, forms: bool) -> Word {
        let (first, second) = if forms {
            (Letter::U, Letter::W)
        } else {
            (Letter::DTheta, Letter::Dx)
        };
        let mut v = Vec::new();
        v.extend(std::iter::repeat_n(first, self.a as usize));
        v.extend(std::iter::repeat_n(second, self.b as usize));
        v.extend(std::iter::repeat_n(Letter::Theta, self.e as usize));
        let x = if self.n >= 0 { Letter::X } else { Letter::XInv };
        v.extend(std::iter::repeat_n(x, self.n.unsigned_abs() as usize));
        Word(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parities_and_degrees() {
        assert_eq!(Letter::X.parity(), Parity::Even);
        assert_eq!(Letter::XInv.parity(), Parity::Even);
        assert_eq!(Letter::Theta.parity(), Parity::Odd);
        assert_eq!(Letter::Dx.parity(), Parity::Odd);
        assert_eq!(Letter::DTheta.parity(), Parity::Even);
        for l in [Letter::X, Letter::XInv, Letter::Theta] {
            assert_eq!(l.form_degree(), 0);
        }
        for l in [Letter::Dx, Letter::DTheta] {
            assert_eq!(l.form_degree(), 1);
        }
    }

    #[test]
    fn word_display_and_monomial_roundtrip() {
        let w = Word(vec![Letter::DTheta, Letter::DTheta, Letter::Dx, Letter::XInv, Letter::XInv]);
        assert_eq!(w.to_string(), "dth^2*dx*xinv^2");
        let m = NormalMonomial::from_word(&w, false).unwrap();
        assert_eq!(m, NormalMonomial { a: 2, b: 1, e: 0, n: -2 });
        assert_eq!(m.to_word(false), w);
        assert!(NormalMonomial::from_word(&Word(vec![Letter::X, Letter::Theta]), false).is_none());
        assert!(NormalMonomial::from_word(&Word(vec![Letter::X, Letter::XInv]), false).is_none());
    }
}

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlgebraError, Letter, Word};
use crate::coeffs::ParamRational;

/// Right-hand side of a rewrite rule: a linear combination of words.
pub type Rhs = Vec<(ParamRational, Word)>;

const NLETTERS: usize = 7;

fn slot(l: Letter) -> usize {
    l as usize
}

/// Table of length-two rewrite rules indexed by the left pair.
#[derive(Clone, Default)]
pub struct RuleTable {
    table: [[Option<Rhs>; NLETTERS]; NLETTERS],
}

impl RuleTable {
    pub fn insert(&mut self, pair: (Letter, Letter), rhs: Rhs) {
        let rhs = rhs.into_iter().filter(|(c, _)| !c.is_zero()).collect();
        self.table[slot(pair.0)][slot(pair.1)] = Some(rhs);
    }

    pub fn get(&self, a: Letter, b: Letter) -> Option<&Rhs> {
        self.table[slot(a)][slot(b)].as_ref()
    }

    pub fn contains(&self, a: Letter, b: Letter) -> bool {
        self.get(a, b).is_some()
    }
}

/// Where to apply the next rewrite inside a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// Uniformly random redex, seed-reproducible.
    Random(u64),
}

// Generous: a length-12 word over the largest alphabet needs a few hundred
// rounds at most.
const MAX_ROUNDS: usize = 100_000;

fn add_into(acc: &mut BTreeMap<Word, ParamRational>, w: Word, c: ParamRational) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&w) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                acc.remove(&w);
            }
        }
        None => {
            acc.insert(w, c);
        }
    }
}

fn redexes<'a>(rules: &'a RuleTable, w: &'a Word) -> impl Iterator<Item = usize> + 'a {
    let l = w.letters();
    (0..l.len().saturating_sub(1)).filter(move |&i| rules.contains(l[i], l[i + 1]))
}

/// True if no rule applies anywhere in `w`.
pub fn is_normal_word(rules: &RuleTable, w: &Word) -> bool {
    redexes(rules, w).next().is_none()
}

/// Rewrites a linear combination of words to normal form. Identical words
/// are merged after every round, so branching rules do not blow up.
pub fn rewrite(
    rules: &RuleTable,
    input: impl IntoIterator<Item = (Word, ParamRational)>,
    strategy: Strategy,
) -> Result<BTreeMap<Word, ParamRational>, AlgebraError> {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut pending = BTreeMap::new();
    for (w, c) in input {
        add_into(&mut pending, w, c);
    }
    let mut done = BTreeMap::new();
    let mut rounds = 0;
    while !pending.is_empty() {
        rounds += 1;
        if rounds > MAX_ROUNDS {
            return Err(AlgebraError::NonTermination);
        }
        let mut next = BTreeMap::new();
        for (w, c) in pending {
            let pos = match strategy {
                Strategy::Leftmost => redexes(rules, &w).next(),
                Strategy::Rightmost => redexes(rules, &w).last(),
                Strategy::Random(_) => {
                    let all: Vec<usize> = redexes(rules, &w).collect();
                    if all.is_empty() {
                        None
                    } else {
                        let rng = rng.as_mut().unwrap();
                        Some(all[rng.random_range(0..all.len())])
                    }
                }
            };
            let Some(i) = pos else {
                add_into(&mut done, w, c);
                continue;
            };
            let l = w.letters();
            let rhs = rules.get(l[i], l[i + 1]).unwrap();
            for (rc, r) in rhs {
                let mut v = Vec::with_capacity(l.len() + r.len());
                v.extend_from_slice(&l[..i]);
                v.extend_from_slice(r.letters());
                v.extend_from_slice(&l[i + 2..]);
                add_into(&mut next, Word(v), &c * rc);
            }
        }
        pending = next;
    }
    Ok(done)
}

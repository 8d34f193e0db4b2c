//! Seeded generators of random words and elements for the property suites.

use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Element, Letter, Relations, Word};
use crate::coeffs::{Param, ParamRational};

/// The fixed coefficient pool `{1, q, p − 1, q⁻¹}`.
pub fn coefficient_pool() -> [ParamRational; 4] {
    let q = ParamRational::param(Param::Q);
    let p = ParamRational::param(Param::P);
    [
        ParamRational::one(),
        q.clone(),
        &p - &ParamRational::one(),
        q.inv().expect("q is nonzero"),
    ]
}

pub const SUPERPLANE: &[Letter] = &[Letter::X, Letter::XInv, Letter::Theta];

pub struct Sampler {
    rng: ChaCha8Rng,
    pool: [ParamRational; 4],
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool: coefficient_pool(),
        }
    }

    pub fn word(&mut self, alphabet: &[Letter], min_len: usize, max_len: usize) -> Word {
        let len = self.rng.random_range(min_len..=max_len);
        Word((0..len).map(|_| *alphabet.choose(&mut self.rng).unwrap()).collect())
    }

    pub fn letter(&mut self, alphabet: &[Letter]) -> Letter {
        *alphabet.choose(&mut self.rng).unwrap()
    }

    pub fn coefficient(&mut self) -> ParamRational {
        self.pool.choose(&mut self.rng).unwrap().clone()
    }

    /// One to three random words of length `1..=max_len` with pool
    /// coefficients (raw, not normalised).
    pub fn element(&mut self, rels: &Arc<Relations>, alphabet: &[Letter], max_len: usize) -> Element {
        let n = self.rng.random_range(1..=3);
        let terms: Vec<_> = (0..n)
            .map(|_| (self.word(alphabet, 1, max_len), self.coefficient()))
            .collect();
        Element::from_terms(rels, terms).expect("alphabet belongs to the algebra")
    }

    /// Like [`Sampler::element`], but every term is a permutation of the
    /// first word, so all terms share parity and form degree.
    pub fn homogeneous(&mut self, rels: &Arc<Relations>, alphabet: &[Letter], max_len: usize) -> Element {
        let base = self.word(alphabet, 1, max_len);
        let n = self.rng.random_range(1..=3);
        let mut terms = vec![(base.clone(), self.coefficient())];
        for _ in 1..n {
            let mut letters = base.0.clone();
            letters.shuffle(&mut self.rng);
            terms.push((Word(letters), self.coefficient()));
        }
        Element::from_terms(rels, terms).expect("alphabet belongs to the algebra")
    }
}

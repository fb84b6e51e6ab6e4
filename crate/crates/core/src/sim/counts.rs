use std::ops::{Add, AddAssign};

use serde::Serialize;

use crate::qpsk::BIT_MAP;
use crate::scma::BitMap;

/// Error tallies of one user. All fields add under merging.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct UserCounts {
    pub symbols: u64,
    pub symbol_errors: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub blocks: u64,
    pub block_errors: u64,
}

impl AddAssign for UserCounts {
    fn add_assign(&mut self, o: Self) {
        self.symbols += o.symbols;
        self.symbol_errors += o.symbol_errors;
        self.bits += o.bits;
        self.bit_errors += o.bit_errors;
        self.blocks += o.blocks;
        self.block_errors += o.block_errors;
    }
}

/// How message entries map to bits when counting.
#[derive(Debug, Clone, Copy)]
pub enum Alphabet<'a> {
    Qpsk,
    Codebook(&'a BitMap),
}

impl Alphabet<'_> {
    fn bit_errors(&self, a: usize, b: usize) -> u64 {
        match self {
            Alphabet::Qpsk => BIT_MAP[a]
                .iter()
                .zip(&BIT_MAP[b])
                .filter(|(x, y)| x != y)
                .count() as u64,
            Alphabet::Codebook(map) => {
                (0..map.bits()).filter(|&i| map.bit(a, i) != map.bit(b, i)).count() as u64
            }
        }
    }

    fn bits(&self) -> u64 {
        match self {
            Alphabet::Qpsk => 2,
            Alphabet::Codebook(map) => map.bits() as u64,
        }
    }
}

impl UserCounts {
    /// Tallies one symbol-level block; `alphabet_of(i)` says how entry `i` is labelled.
    pub fn symbols<'a>(
        sent: &[usize],
        got: &[usize],
        alphabet_of: impl Fn(usize) -> Alphabet<'a>,
    ) -> Self {
        let mut c = Self {
            blocks: 1,
            ..Self::default()
        };
        for (i, (&a, &b)) in sent.iter().zip(got).enumerate() {
            let alphabet = alphabet_of(i);
            c.symbols += 1;
            c.bits += alphabet.bits();
            if a != b {
                c.symbol_errors += 1;
                c.bit_errors += alphabet.bit_errors(a, b);
            }
        }
        c.block_errors = u64::from(c.symbol_errors > 0);
        c
    }

    /// Tallies one block of information bits; symbols are consecutive bit pairs.
    pub fn bits(sent: &[u8], got: &[u8]) -> Self {
        let mut c = Self {
            blocks: 1,
            bits: sent.len() as u64,
            ..Self::default()
        };
        for (a, b) in sent.chunks(2).zip(got.chunks(2)) {
            c.symbols += 1;
            let wrong = a.iter().zip(b).filter(|(x, y)| x != y).count() as u64;
            c.bit_errors += wrong;
            c.symbol_errors += u64::from(wrong > 0);
        }
        c.block_errors = u64::from(c.bit_errors > 0);
        c
    }
}

/// Per-user tallies of a batch of frames.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub trials: u64,
    pub users: Vec<UserCounts>,
}

impl Counts {
    pub fn zero(users: usize) -> Self {
        Self {
            trials: 0,
            users: vec![UserCounts::default(); users],
        }
    }

    pub fn total(&self) -> UserCounts {
        let mut t = UserCounts::default();
        for &u in &self.users {
            t += u;
        }
        t
    }
}

impl Add for Counts {
    type Output = Counts;

    fn add(mut self, o: Counts) -> Counts {
        self.trials += o.trials;
        if self.users.len() < o.users.len() {
            self.users.resize(o.users.len(), UserCounts::default());
        }
        for (a, b) in self.users.iter_mut().zip(o.users) {
            *a += b;
        }
        self
    }
}

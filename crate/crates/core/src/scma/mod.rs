//! Sparse code multiple access: codebooks, encoding and detection.

mod codebook;
mod indicator;
mod ml;
mod mpa;

pub use codebook::{CodebookSet, ENERGY_TOLERANCE, ZERO_TOLERANCE};
pub use indicator::IndicatorMatrix;
pub use ml::{ml_detect, ML_MAX_HYPOTHESES};
pub use mpa::{mpa_detect, mpa_detect_per_resource, DEFAULT_MPA_ITERATIONS};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{argmax, clamp_llr};

/// Output of [`scma_encode`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScmaFrame {
    /// Selected codeword of each user.
    pub per_user: Vec<Vec<Complex64>>,
    /// Sum of all users' codewords.
    pub superposed: Vec<Complex64>,
}

/// Maps one symbol index per user to its codeword and sums them.
pub fn scma_encode(symbols: &[usize], cb: &CodebookSet) -> Result<ScmaFrame> {
    if symbols.len() != cb.users() {
        return Err(Error::Dimension {
            what: "symbol vector",
            expected: cb.users(),
            found: symbols.len(),
        });
    }
    let mut superposed = vec![Complex64::new(0.0, 0.0); cb.resources()];
    let mut per_user = Vec::with_capacity(symbols.len());
    for (j, &m) in symbols.iter().enumerate() {
        if m >= cb.alphabet() {
            return Err(Error::SymbolOutOfRange {
                user: j,
                index: m,
                alphabet: cb.alphabet(),
            });
        }
        let word = cb.codeword(j, m);
        for (s, x) in superposed.iter_mut().zip(word) {
            *s += x;
        }
        per_user.push(word.to_vec());
    }
    Ok(ScmaFrame {
        per_user,
        superposed,
    })
}

/// Assignment of bit patterns to symbol indices. Bit 0 is the most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMap {
    bits: usize,
    patterns: Vec<u32>,
}

impl BitMap {
    /// Symbol `m` carries the binary expansion of `m`.
    pub fn natural(alphabet: usize) -> Self {
        assert!(alphabet.is_power_of_two() && alphabet >= 2);
        Self {
            bits: alphabet.trailing_zeros() as usize,
            patterns: (0..alphabet as u32).collect(),
        }
    }

    pub fn from_patterns(bits: usize, patterns: Vec<u32>) -> Self {
        Self { bits, patterns }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn alphabet(&self) -> usize {
        self.patterns.len()
    }

    /// Value (0 or 1) of bit `b` (0 = MSB) of symbol `m`.
    pub fn bit(&self, symbol: usize, b: usize) -> u8 {
        ((self.patterns[symbol] >> (self.bits - 1 - b)) & 1) as u8
    }

    pub fn bits_of(&self, symbol: usize) -> Vec<u8> {
        (0..self.bits).map(|b| self.bit(symbol, b)).collect()
    }

    /// Inverse lookup; `None` when the pattern is not in the map.
    pub fn symbol_of(&self, bits: &[u8]) -> Option<usize> {
        let word = bits.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b & 1));
        self.patterns.iter().position(|&p| p == word)
    }
}

/// Symbol posterior of one user after detection.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPosterior {
    /// Probability of each codeword index; sums to one.
    pub probs: Vec<f64>,
    /// Bit LLRs (positive favours 0) under the natural bit map.
    pub llrs: Vec<f64>,
}

impl SymbolPosterior {
    pub fn from_probs(probs: Vec<f64>) -> Self {
        let llrs = posterior_to_bit_llr(&probs, &BitMap::natural(probs.len()));
        Self { probs, llrs }
    }

    /// Most probable index, lowest index on ties.
    pub fn hard_decision(&self) -> usize {
        argmax(&self.probs)
    }
}

/// Marginalizes a symbol posterior into per-bit LLRs, clamped to `±LLR_MAX`.
pub fn posterior_to_bit_llr(probs: &[f64], bit_map: &BitMap) -> Vec<f64> {
    (0..bit_map.bits())
        .map(|b| {
            let (mut zero, mut one) = (0.0, 0.0);
            for (m, &p) in probs.iter().enumerate() {
                if bit_map.bit(m, b) == 0 {
                    zero += p;
                } else {
                    one += p;
                }
            }
            clamp_llr(zero.ln() - one.ln())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::LLR_MAX;

    #[test]
    fn all_zero_symbols_sum_first_columns() {
        let cb = CodebookSet::builtin("scma-6x4").unwrap();
        let frame = scma_encode(&[0; 6], &cb).unwrap();
        for k in 0..4 {
            let expected: Complex64 = (0..6).map(|j| cb.codeword(j, 0)[k]).sum();
            assert!((frame.superposed[k] - expected).norm() < 1e-15);
        }
        assert_eq!(frame.per_user[3], cb.codeword(3, 0));
    }

    #[test]
    fn encoded_codewords_respect_sparsity() {
        let cb = CodebookSet::builtin("scma-6x4").unwrap();
        let frame = scma_encode(&[1, 2, 3, 0, 1, 2], &cb).unwrap();
        for (j, word) in frame.per_user.iter().enumerate() {
            for (k, x) in word.iter().enumerate() {
                assert_eq!(x.norm() > ZERO_TOLERANCE, cb.indicator().get(k, j));
            }
        }
    }

    #[test]
    fn single_user_encode_is_codeword() {
        let f = IndicatorMatrix::from_rows(&[vec![1], vec![1]]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let words = vec![vec![
            vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            vec![Complex64::new(-s, 0.0), Complex64::new(s, 0.0)],
        ]];
        let cb = CodebookSet::new(f, 2, words).unwrap();
        let frame = scma_encode(&[1], &cb).unwrap();
        assert_eq!(frame.superposed, cb.codeword(0, 1));
    }

    #[test]
    fn encode_rejects_bad_input() {
        let cb = CodebookSet::builtin("scma-6x4").unwrap();
        assert!(matches!(
            scma_encode(&[0, 0, 4, 0, 0, 0], &cb),
            Err(Error::SymbolOutOfRange { user: 2, index: 4, .. })
        ));
        assert!(scma_encode(&[0; 5], &cb).is_err());
    }

    #[test]
    fn bit_llr_certainty_and_symmetry() {
        let map = BitMap::natural(4);
        assert_eq!(posterior_to_bit_llr(&[1.0, 0.0, 0.0, 0.0], &map), vec![LLR_MAX, LLR_MAX]);
        assert_eq!(posterior_to_bit_llr(&[0.25; 4], &map), vec![0.0, 0.0]);
        // m=0 -> 00, m=1 -> 01: MSB certainly 0, LSB balanced
        assert_eq!(posterior_to_bit_llr(&[0.5, 0.5, 0.0, 0.0], &map), vec![LLR_MAX, 0.0]);
        assert_eq!(posterior_to_bit_llr(&[0.0, 0.0, 0.0, 1.0], &map), vec![-LLR_MAX, -LLR_MAX]);
    }

    #[test]
    fn bit_llr_matches_direct_formula() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let llr = posterior_to_bit_llr(&p, &BitMap::natural(4));
        assert!((llr[0] - ((0.1f64 + 0.2) / (0.3 + 0.4)).ln()).abs() < 1e-12);
        assert!((llr[1] - ((0.1f64 + 0.3) / (0.2 + 0.4)).ln()).abs() < 1e-12);
    }

    #[test]
    fn bit_map_lookup_round_trips() {
        let map = BitMap::natural(4);
        for m in 0..4 {
            assert_eq!(map.symbol_of(&map.bits_of(m)), Some(m));
        }
        assert_eq!(map.bits_of(2), vec![1, 0]);
        let gray = BitMap::from_patterns(2, vec![0b00, 0b01, 0b11, 0b10]);
        assert_eq!(gray.bits_of(2), vec![1, 1]);
        assert_eq!(gray.symbol_of(&[1, 0]), Some(3));
    }
}

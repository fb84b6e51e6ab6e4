//! Dense GF(2) elimination used to derive a systematic encoder from `H`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub(crate) fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub(crate) fn from_bits(bits: &[u8]) -> Self {
        let mut row = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                row.set(i);
            }
        }
        row
    }

    pub(crate) fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub(crate) fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn xor_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub(crate) fn dot(&self, other: &Self) -> u8 {
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        (ones & 1) as u8
    }
}

#[cfg(test)]
/// Rank of a dense binary matrix given as rows of `n` bits.
pub(crate) fn rank(rows: &[BitRow], n: usize) -> usize {
    reduce(rows.to_vec(), n).1.len()
}

/// Gauss-Jordan reduction scanning columns from the right; returns the reduced
/// rows and the pivot column of each of the first `rank` rows.
fn reduce(mut rows: Vec<BitRow>, n: usize) -> (Vec<BitRow>, Vec<usize>) {
    let mut pivots = Vec::new();
    for col in (0..n).rev() {
        let r = pivots.len();
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i].get(col)) else {
            continue;
        };
        rows.swap(r, found);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(col);
    }
    (rows, pivots)
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct SystematicEncoder {
    n: usize,
    info_positions: Vec<usize>,
    /// `(pivot column, mask over info bits)` per parity bit.
    parity: Vec<(usize, BitRow)>,
}

impl SystematicEncoder {
    pub(crate) fn new(n: usize, checks: &[Vec<usize>]) -> Result<Self> {
        let rows: Vec<BitRow> = checks
            .iter()
            .map(|check| {
                let mut row = BitRow::zeros(n);
                for &v in check {
                    row.set(v);
                }
                row
            })
            .collect();
        let m = rows.len();
        let (reduced, pivots) = reduce(rows, n);
        if pivots.len() < m {
            return Err(Error::RankDeficient {
                rows: m,
                rank: pivots.len(),
            });
        }
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let info_positions: Vec<usize> = (0..n).filter(|&v| !is_pivot[v]).collect();
        let parity = pivots
            .iter()
            .zip(&reduced)
            .map(|(&p, row)| {
                let mut mask = BitRow::zeros(info_positions.len());
                for (i, &v) in info_positions.iter().enumerate() {
                    if row.get(v) {
                        mask.set(i);
                    }
                }
                (p, mask)
            })
            .collect();
        Ok(Self {
            n,
            info_positions,
            parity,
        })
    }

    pub(crate) fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub(crate) fn encode(&self, info: &[u8]) -> Vec<u8> {
        let packed = BitRow::from_bits(info);
        let mut c = vec![0u8; self.n];
        for (&p, &b) in self.info_positions.iter().zip(info) {
            c[p] = b & 1;
        }
        for (p, mask) in &self.parity {
            c[*p] = mask.dot(&packed);
        }
        c
    }
}

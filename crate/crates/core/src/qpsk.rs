//! Gray-mapped QPSK for the common stream: modulation, exact LLRs and soft symbols.
//!
//! Points are indexed 0..4 (s1..s4 in the usual numbering) with unit energy:
//!
//! | index | point        | (MSB, LSB) |
//! |-------|--------------|------------|
//! | 0     | ( 1 + j)/√2  | (0, 0)     |
//! | 1     | (-1 + j)/√2  | (0, 1)     |
//! | 2     | (-1 - j)/√2  | (1, 1)     |
//! | 3     | ( 1 - j)/√2  | (1, 0)     |
//!
//! So the MSB is carried by the sign of the imaginary part and the LSB by the
//! sign of the real part.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{argmin, clamp_llr, logistic, max_star};

/// Bit pair of each constellation index.
pub const BIT_MAP: [[u8; 2]; 4] = [[0, 0], [0, 1], [1, 1], [1, 0]];

/// Constellation point of each index.
pub const POINTS: [Complex64; 4] = [
    Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex64::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
];

/// Indices with MSB = 0 / MSB = 1.
const MSB_SETS: ([usize; 2], [usize; 2]) = ([0, 1], [2, 3]);
/// Indices with LSB = 0 / LSB = 1.
const LSB_SETS: ([usize; 2], [usize; 2]) = ([0, 3], [1, 2]);

/// Per-resource (MSB, LSB) LLRs of a received QPSK vector.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrFrame {
    pub llrs: Vec<[f64; 2]>,
    /// Per-dimension noise variance each row was computed with.
    pub noise_vars: Vec<f64>,
}

impl LlrFrame {
    /// Wraps externally produced LLR pairs (decoder posteriors, for instance).
    pub fn from_llrs(llrs: Vec<[f64; 2]>) -> Self {
        let llrs: Vec<[f64; 2]> = llrs.iter().map(|l| [clamp_llr(l[0]), clamp_llr(l[1])]).collect();
        let noise_vars = vec![f64::NAN; llrs.len()];
        Self { llrs, noise_vars }
    }

    pub fn len(&self) -> usize {
        self.llrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llrs.is_empty()
    }

    /// Forces row `k` to zero confidence.
    pub fn erase(&mut self, k: usize) {
        self.llrs[k] = [0.0, 0.0];
    }
}

/// Index of the point carrying `bits`.
pub fn index_of(bits: [u8; 2]) -> usize {
    BIT_MAP.iter().position(|b| *b == bits).expect("bits must be 0 or 1")
}

pub fn qpsk_modulate(bits: &[[u8; 2]]) -> Vec<Complex64> {
    bits.iter().map(|&b| POINTS[index_of(b)]).collect()
}

/// `|y - s_i|^2` for the four points.
pub fn euclidean_distances(y: Complex64) -> [f64; 4] {
    POINTS.map(|s| (y - s).norm_sqr())
}

/// Nearest-point decisions; ties go to the lowest point index.
pub fn qpsk_hard_demod(y: &[Complex64]) -> Vec<[u8; 2]> {
    y.iter().map(|&v| BIT_MAP[argmin(&euclidean_distances(v))]).collect()
}

/// Exact (sum-form) bit LLRs.
///
/// `noise_var` is the per-dimension variance: the metrics are
/// `exp(-d_i / (2 noise_var))`, so for complex noise of total variance `N0`
/// pass `N0 / 2`.
pub fn qpsk_llr(y: &[Complex64], noise_var: f64) -> Result<LlrFrame> {
    qpsk_llr_per_element(y, &vec![noise_var; y.len()])
}

/// As [`qpsk_llr`] with one per-dimension noise variance per element.
pub fn qpsk_llr_per_element(y: &[Complex64], noise_vars: &[f64]) -> Result<LlrFrame> {
    if noise_vars.len() != y.len() {
        return Err(Error::Dimension {
            what: "noise variances",
            expected: y.len(),
            found: noise_vars.len(),
        });
    }
    let mut llrs = Vec::with_capacity(y.len());
    for (&v, &nv) in y.iter().zip(noise_vars) {
        if !(nv > 0.0 && nv.is_finite()) {
            return Err(Error::NoiseVariance(nv));
        }
        let d = euclidean_distances(v);
        let metric = d.map(|di| -di / (2.0 * nv));
        let bit_llr = |(zero, one): ([usize; 2], [usize; 2])| {
            let num = max_star(metric[zero[0]], metric[zero[1]]);
            let den = max_star(metric[one[0]], metric[one[1]]);
            clamp_llr(num - den)
        };
        llrs.push([bit_llr(MSB_SETS), bit_llr(LSB_SETS)]);
    }
    Ok(LlrFrame {
        llrs,
        noise_vars: noise_vars.to_vec(),
    })
}

/// `P(bit = 0)` for each (MSB, LSB) entry.
pub fn llr_to_bit_probabilities(frame: &LlrFrame) -> Vec<[f64; 2]> {
    frame.llrs.iter().map(|l| [logistic(l[0]), logistic(l[1])]).collect()
}

/// Posterior mean of the transmitted point, treating MSB and LSB as independent.
pub fn soft_symbols(frame: &LlrFrame) -> Vec<Complex64> {
    llr_to_bit_probabilities(frame)
        .iter()
        .map(|&[msb0, lsb0]| {
            let (msb1, lsb1) = (1.0 - msb0, 1.0 - lsb0);
            let probs = [msb0 * lsb0, msb0 * lsb1, msb1 * lsb1, msb1 * lsb0];
            probs.iter().zip(POINTS.iter()).map(|(p, s)| s * *p).sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::LLR_MAX;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constellation_is_unit_energy_gray() {
        for (i, s) in POINTS.iter().enumerate() {
            assert!((s.norm() - 1.0).abs() < 1e-12);
            let next = BIT_MAP[(i + 1) % 4];
            let diff = (BIT_MAP[i][0] ^ next[0]) + (BIT_MAP[i][1] ^ next[1]);
            assert_eq!(diff, 1, "points {i} and {} are adjacent", (i + 1) % 4);
        }
    }

    #[test]
    fn modulation_table() {
        let s = FRAC_1_SQRT_2;
        assert_eq!(qpsk_modulate(&[[0, 0]]), vec![c(s, s)]);
        assert_eq!(qpsk_modulate(&[[1, 1]]), vec![c(-s, -s)]);
        let all = [[0, 0], [0, 1], [1, 1], [1, 0]];
        assert_eq!(qpsk_hard_demod(&qpsk_modulate(&all)), all.to_vec());
    }

    #[test]
    fn distances_at_reference_points() {
        let d = euclidean_distances(POINTS[0]);
        let expected = [0.0, 2.0, 4.0, 2.0];
        for i in 0..4 {
            assert!((d[i] - expected[i]).abs() < 1e-12);
        }
        let d0 = euclidean_distances(c(0.0, 0.0));
        assert!(d0.iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn hard_demod_nearest_and_tie_rule() {
        assert_eq!(qpsk_hard_demod(&[POINTS[2] * 0.9]), vec![[1, 1]]);
        // positive real axis is equidistant from s1 and s4
        assert_eq!(qpsk_hard_demod(&[c(0.7, 0.0)]), vec![[0, 0]]);
    }

    #[test]
    fn llr_reference_values() {
        let f = qpsk_llr(&[c(0.0, 0.0)], 0.3).unwrap();
        assert_eq!(f.llrs[0], [0.0, 0.0]);
        let f = qpsk_llr(&[POINTS[0]], 0.5).unwrap();
        let e = |x: f64| x.exp();
        let msb = ((e(0.0) + e(-2.0)) / (e(-4.0) + e(-2.0))).ln();
        assert!((f.llrs[0][0] - msb).abs() < 1e-12);
        assert!(f.llrs[0][0] > 0.0);
        assert!(qpsk_llr(&[POINTS[0]], 0.0).is_err());
        assert!(qpsk_llr(&[POINTS[0]], -2.0).is_err());
    }

    #[test]
    fn llr_saturates_instead_of_overflowing() {
        let f = qpsk_llr(&[POINTS[3] * 5.0], 1e-6).unwrap();
        assert_eq!(f.llrs[0], [-LLR_MAX, LLR_MAX]);
    }

    #[test]
    fn bit_probabilities() {
        let f = LlrFrame::from_llrs(vec![[0.0, LLR_MAX], [2.0, -2.0]]);
        let p = llr_to_bit_probabilities(&f);
        assert_eq!(p[0][0], 0.5);
        assert!(p[0][1] >= 1.0 - 1e-12);
        assert!((p[1][0] - 1.0 / (1.0 + (-2f64).exp())).abs() < 1e-15);
        assert!((p[1][1] - (1.0 - 1.0 / (1.0 + (-2f64).exp()))).abs() < 1e-15);
    }

    #[test]
    fn soft_symbol_limits() {
        let f = LlrFrame::from_llrs(vec![[0.0, 0.0], [LLR_MAX, LLR_MAX], [LLR_MAX, 0.0]]);
        let s = soft_symbols(&f);
        assert!(s[0].norm() < 1e-15);
        assert!((s[1] - POINTS[0]).norm() < 1e-9);
        // average of s1 and s2
        assert!((s[2] - c(0.0, FRAC_1_SQRT_2)).norm() < 1e-9);
    }

    #[test]
    fn soft_symbols_approach_nearest_point_as_noise_vanishes() {
        let y = [c(0.3, -0.9), c(-1.2, 0.05), c(-0.4, -0.6)];
        let hard = qpsk_hard_demod(&y);
        let s = soft_symbols(&qpsk_llr(&y, 1e-4).unwrap());
        for (v, b) in s.iter().zip(hard) {
            assert!((v - POINTS[index_of(b)]).norm() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn soft_symbols_stay_in_unit_disc(a in -LLR_MAX..LLR_MAX, b in -LLR_MAX..LLR_MAX) {
            let s = soft_symbols(&LlrFrame::from_llrs(vec![[a, b]]));
            prop_assert!(s[0].norm() <= 1.0 + 1e-12);
        }

        #[test]
        fn llr_antisymmetry(re in -3.0..3.0f64, im in -3.0..3.0f64, nv in 0.01..4.0f64) {
            let base = qpsk_llr(&[c(re, im)], nv).unwrap().llrs[0];
            let flip_im = qpsk_llr(&[c(re, -im)], nv).unwrap().llrs[0];
            let flip_re = qpsk_llr(&[c(-re, im)], nv).unwrap().llrs[0];
            prop_assert_eq!(flip_im[0], -base[0]);
            prop_assert_eq!(flip_im[1], base[1]);
            prop_assert_eq!(flip_re[1], -base[1]);
            prop_assert_eq!(flip_re[0], base[0]);
        }

        #[test]
        fn thresholded_probabilities_match_hard_demod(
            re in -3.0..3.0f64, im in -3.0..3.0f64, nv in 0.01..4.0f64
        ) {
            prop_assume!(re.abs() > 1e-6 && im.abs() > 1e-6);
            let y = [c(re, im)];
            let p = llr_to_bit_probabilities(&qpsk_llr(&y, nv).unwrap())[0];
            let bits = [(p[0] < 0.5) as u8, (p[1] < 0.5) as u8];
            prop_assert_eq!(bits, qpsk_hard_demod(&y)[0]);
        }
    }
}

//! Exhaustive maximum-likelihood detection, used as a reference for MPA.

use num_complex::Complex64;

use super::mpa::{check_noise_var, check_observation};
use super::CodebookSet;
use crate::error::{Error, Result};

/// Largest hypothesis count `ml_detect` will enumerate.
pub const ML_MAX_HYPOTHESES: u128 = 1 << 24;

/// Returns the symbol vector minimizing `||y - sum_j diag(g_j) x_{j,s_j}||^2`.
///
/// Ties go to the lexicographically smallest index vector (user 0 most significant).
pub fn ml_detect(
    y: &[Complex64],
    cb: &CodebookSet,
    gains: &[Vec<Complex64>],
    noise_var: f64,
) -> Result<Vec<usize>> {
    check_observation(y, cb, gains)?;
    check_noise_var(noise_var)?;
    let (m, j_users) = (cb.alphabet(), cb.users());
    let combinations = (m as u128).checked_pow(j_users as u32).unwrap_or(u128::MAX);
    if combinations > ML_MAX_HYPOTHESES {
        return Err(Error::MlGuard { combinations });
    }

    // Each resource only depends on the users it carries, so tabulate its squared
    // residual over their local combinations once.
    let f = cb.indicator();
    let tables: Vec<(Vec<usize>, Vec<f64>)> = (0..cb.resources())
        .map(|k| {
            let users = f.users_on(k).to_vec();
            let combos = m.pow(users.len() as u32);
            let table = (0..combos)
                .map(|c| {
                    let mut rest = c;
                    let mut sum = Complex64::new(0.0, 0.0);
                    for &j in &users {
                        sum += gains[j][k] * cb.codeword(j, rest % m)[k];
                        rest /= m;
                    }
                    (y[k] - sum).norm_sqr()
                })
                .collect();
            (users, table)
        })
        .collect();

    let mut symbols = vec![0usize; j_users];
    let mut best = symbols.clone();
    let mut best_dist = f64::INFINITY;
    loop {
        let dist: f64 = tables
            .iter()
            .map(|(users, table)| {
                let idx = users.iter().rev().fold(0, |acc, &j| acc * m + symbols[j]);
                table[idx]
            })
            .sum();
        if dist < best_dist {
            best_dist = dist;
            best.copy_from_slice(&symbols);
        }
        // lexicographic successor, last user fastest
        let mut pos = j_users;
        loop {
            if pos == 0 {
                return Ok(best);
            }
            pos -= 1;
            symbols[pos] += 1;
            if symbols[pos] < m {
                break;
            }
            symbols[pos] = 0;
        }
    }
}

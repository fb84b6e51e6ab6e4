use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rate_split::{complexity_ratio, overloading_factor_for_alpha};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisRow {
    pub alpha: f64,
    pub lambda: f64,
    pub complexity_ratio: f64,
}

/// Overloading factor for each `alpha` with `users` SCMA users on `resources`
/// resources, and the receiver complexity ratio for resource degree `degree`.
pub fn analyze(
    users: usize,
    resources: usize,
    alphabet: usize,
    degree: usize,
    alphas: &[f64],
) -> Result<Vec<AnalysisRow>> {
    if resources == 0 || users < resources {
        return Err(Error::InvalidArgument(format!(
            "need users >= resources > 0, got {users} users on {resources} resources"
        )));
    }
    if alphabet < 2 || degree == 0 {
        return Err(Error::InvalidArgument("alphabet must be >= 2 and degree >= 1".into()));
    }
    let ratio = complexity_ratio(alphabet, degree);
    alphas
        .iter()
        .map(|&alpha| {
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1]")));
            }
            Ok(AnalysisRow {
                alpha,
                lambda: overloading_factor_for_alpha(alpha, resources, users, resources),
                complexity_ratio: ratio,
            })
        })
        .collect()
}

/// Resource degree of a regular design where every user occupies two resources.
pub fn default_degree(users: usize, resources: usize) -> usize {
    (2 * users).div_ceil(resources.max(1))
}

pub fn format_table(rows: &[AnalysisRow]) -> String {
    let mut out = String::from("alpha\tlambda\tlambda_pct\tcomplexity_ratio\n");
    for r in rows {
        writeln!(
            out,
            "{}\t{:.6}\t{:.2}\t{:.6}",
            r.alpha,
            r.lambda,
            100.0 * r.lambda,
            r.complexity_ratio
        )
        .unwrap();
    }
    out
}

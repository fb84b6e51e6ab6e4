//! Log-domain sum-product detection on the SCMA factor graph.

use num_complex::Complex64;

use super::{CodebookSet, SymbolPosterior};
use crate::error::{Error, Result};

pub const DEFAULT_MPA_ITERATIONS: usize = 10;

pub(super) fn check_observation(
    y: &[Complex64],
    cb: &CodebookSet,
    gains: &[Vec<Complex64>],
) -> Result<()> {
    if y.len() != cb.resources() {
        return Err(Error::Dimension {
            what: "received vector",
            expected: cb.resources(),
            found: y.len(),
        });
    }
    if gains.len() != cb.users() {
        return Err(Error::Dimension {
            what: "per-user gains",
            expected: cb.users(),
            found: gains.len(),
        });
    }
    if let Some(g) = gains.iter().find(|g| g.len() != cb.resources()) {
        return Err(Error::Dimension {
            what: "gain vector",
            expected: cb.resources(),
            found: g.len(),
        });
    }
    Ok(())
}

pub(super) fn check_noise_var(noise_var: f64) -> Result<()> {
    if noise_var > 0.0 && noise_var.is_finite() {
        Ok(())
    } else {
        Err(Error::NoiseVariance(noise_var))
    }
}

/// Runs `iterations` rounds of MPA with a common noise variance on every resource.
///
/// `gains[j][k]` is the complex gain applied to user `j`'s codeword on resource `k`,
/// and `noise_var` is the variance of the circularly-symmetric complex noise, so
/// the likelihood of a hypothesis is proportional to `exp(-|y_k - sum|^2 / noise_var)`.
pub fn mpa_detect(
    y: &[Complex64],
    cb: &CodebookSet,
    gains: &[Vec<Complex64>],
    noise_var: f64,
    iterations: usize,
) -> Result<Vec<SymbolPosterior>> {
    check_noise_var(noise_var)?;
    mpa_detect_per_resource(y, cb, gains, &vec![noise_var; y.len()], iterations)
}

/// As [`mpa_detect`], with a separate noise variance per resource.
pub fn mpa_detect_per_resource(
    y: &[Complex64],
    cb: &CodebookSet,
    gains: &[Vec<Complex64>],
    noise_vars: &[f64],
    iterations: usize,
) -> Result<Vec<SymbolPosterior>> {
    check_observation(y, cb, gains)?;
    if noise_vars.len() != cb.resources() {
        return Err(Error::Dimension {
            what: "noise variances",
            expected: cb.resources(),
            found: noise_vars.len(),
        });
    }
    for &v in noise_vars {
        check_noise_var(v)?;
    }
    if iterations == 0 {
        return Err(Error::InvalidArgument("MPA needs at least one iteration".into()));
    }
    let mut graph = Graph::new(y, cb, gains, noise_vars);
    for it in 0..iterations {
        graph.update_resources();
        if it + 1 < iterations {
            graph.update_users();
        }
    }
    Ok(graph.posteriors())
}

struct ResourceNode {
    /// Edge index of each connected user, in the order of `IndicatorMatrix::users_on`.
    edges: Vec<usize>,
    /// `-|y_k - sum_i g x|^2 / noise_var` for every local codeword combination.
    metric: Vec<f64>,
    /// Codeword index of each connected user per combination, row-major.
    digits: Vec<usize>,
}

struct Graph {
    alphabet: usize,
    resources: Vec<ResourceNode>,
    /// Edge indices of each user.
    user_edges: Vec<Vec<usize>>,
    user_to_resource: Vec<f64>,
    resource_to_user: Vec<f64>,
    totals: Vec<f64>,
    maxes: Vec<f64>,
    sums: Vec<f64>,
}

impl Graph {
    fn new(
        y: &[Complex64],
        cb: &CodebookSet,
        gains: &[Vec<Complex64>],
        noise_vars: &[f64],
    ) -> Self {
        let f = cb.indicator();
        let m = cb.alphabet();
        let mut user_edges = vec![Vec::new(); cb.users()];
        let mut resources = Vec::with_capacity(cb.resources());
        let mut edge = 0;
        let mut largest = 1;
        for k in 0..cb.resources() {
            let users = f.users_on(k);
            let degree = users.len();
            let combos = m.pow(degree as u32);
            largest = largest.max(combos);
            let mut edges = Vec::with_capacity(degree);
            for &j in users {
                user_edges[j].push(edge);
                edges.push(edge);
                edge += 1;
            }
            let contrib: Vec<Vec<Complex64>> = users
                .iter()
                .map(|&j| (0..m).map(|s| gains[j][k] * cb.codeword(j, s)[k]).collect())
                .collect();
            let mut digits = vec![0; combos * degree];
            let mut metric = Vec::with_capacity(combos);
            for c in 0..combos {
                let mut rest = c;
                let mut sum = Complex64::new(0.0, 0.0);
                for i in 0..degree {
                    let d = rest % m;
                    rest /= m;
                    digits[c * degree + i] = d;
                    sum += contrib[i][d];
                }
                metric.push(-(y[k] - sum).norm_sqr() / noise_vars[k]);
            }
            resources.push(ResourceNode {
                edges,
                metric,
                digits,
            });
        }
        let width = f.max_resource_degree() * m;
        Self {
            alphabet: m,
            resources,
            user_edges,
            user_to_resource: vec![0.0; edge * m],
            resource_to_user: vec![0.0; edge * m],
            totals: vec![0.0; largest],
            maxes: vec![0.0; width],
            sums: vec![0.0; width],
        }
    }

    fn update_resources(&mut self) {
        let m = self.alphabet;
        for node in &self.resources {
            let degree = node.edges.len();
            let combos = node.metric.len();
            let maxes = &mut self.maxes[..degree * m];
            let sums = &mut self.sums[..degree * m];
            maxes.fill(f64::NEG_INFINITY);
            sums.fill(0.0);
            for c in 0..combos {
                let digits = &node.digits[c * degree..(c + 1) * degree];
                let mut t = node.metric[c];
                for (i, &d) in digits.iter().enumerate() {
                    t += self.user_to_resource[node.edges[i] * m + d];
                }
                self.totals[c] = t;
                for (i, &d) in digits.iter().enumerate() {
                    let slot = &mut maxes[i * m + d];
                    if t > *slot {
                        *slot = t;
                    }
                }
            }
            for c in 0..combos {
                let digits = &node.digits[c * degree..(c + 1) * degree];
                let t = self.totals[c];
                for (i, &d) in digits.iter().enumerate() {
                    sums[i * m + d] += (t - maxes[i * m + d]).exp();
                }
            }
            for (i, &e) in node.edges.iter().enumerate() {
                let out = &mut self.resource_to_user[e * m..(e + 1) * m];
                let incoming = &self.user_to_resource[e * m..(e + 1) * m];
                for d in 0..m {
                    // the combination total includes this edge's own message; take it back out
                    out[d] = maxes[i * m + d] + sums[i * m + d].ln() - incoming[d];
                }
                normalize_log(out);
            }
        }
    }

    fn update_users(&mut self) {
        let m = self.alphabet;
        for edges in &self.user_edges {
            for &e in edges {
                for d in 0..m {
                    self.user_to_resource[e * m + d] = edges
                        .iter()
                        .filter(|&&other| other != e)
                        .map(|&other| self.resource_to_user[other * m + d])
                        .sum();
                }
                normalize_log(&mut self.user_to_resource[e * m..(e + 1) * m]);
            }
        }
    }

    fn posteriors(&self) -> Vec<SymbolPosterior> {
        let m = self.alphabet;
        self.user_edges
            .iter()
            .map(|edges| {
                let log_post: Vec<f64> = (0..m)
                    .map(|d| edges.iter().map(|&e| self.resource_to_user[e * m + d]).sum())
                    .collect();
                let max = log_post.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let weights: Vec<f64> = log_post.iter().map(|l| (l - max).exp()).collect();
                let total: f64 = weights.iter().sum();
                SymbolPosterior::from_probs(weights.iter().map(|w| w / total).collect())
            })
            .collect()
    }
}

fn normalize_log(values: &mut [f64]) {
    let lse = crate::math::log_sum_exp(values);
    if lse.is_finite() {
        values.iter_mut().for_each(|v| *v -= lse);
    }
}

use super::ParityCheckMatrix;
use crate::error::{Error, Result};
use crate::math::{clamp_llr, LLR_MAX};

pub const DEFAULT_BP_ITERATIONS: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct BpOutput {
    /// A-posteriori LLRs for all `n` bits, clamped to `±LLR_MAX`.
    pub posterior: Vec<f64>,
    pub hard: Vec<u8>,
    /// The hard decision satisfies every check.
    pub converged: bool,
    pub iterations: usize,
}

/// Flooding sum-product decoding with the tanh rule.
///
/// The syndrome of the hard decision is tested after every iteration and
/// decoding stops as soon as it is zero, so `iterations >= 1`.
pub fn bp_decode(channel_llrs: &[f64], h: &ParityCheckMatrix, max_iters: usize) -> Result<BpOutput> {
    if channel_llrs.len() != h.n() {
        return Err(Error::Dimension {
            what: "channel LLR vector",
            expected: h.n(),
            found: channel_llrs.len(),
        });
    }
    if max_iters == 0 {
        return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
    }
    let g = &h.graph;
    let channel: Vec<f64> = channel_llrs.iter().map(|&l| clamp_llr(l)).collect();
    let mut v2c: Vec<f64> = g.edge_var.iter().map(|&v| channel[v]).collect();
    let mut c2v = vec![0.0; v2c.len()];
    let mut totals = vec![0.0; h.n()];
    let mut hard = vec![0u8; h.n()];
    let mut tanhs = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iters {
        iterations += 1;
        for w in g.check_offsets.windows(2) {
            let edges = w[0]..w[1];
            tanhs.clear();
            tanhs.extend(v2c[edges.clone()].iter().map(|&l| (0.5 * l).tanh()));
            // exclusive products via a forward pass then a backward pass
            let mut prefix = 1.0;
            for (t, e) in edges.clone().enumerate() {
                c2v[e] = prefix;
                prefix *= tanhs[t];
            }
            let mut suffix = 1.0;
            for (t, e) in edges.enumerate().rev() {
                let p = c2v[e] * suffix;
                c2v[e] = clamp_llr(2.0 * p.atanh());
                suffix *= tanhs[t];
            }
        }
        for v in 0..h.n() {
            let edges = &g.var_edges[g.var_offsets[v]..g.var_offsets[v + 1]];
            let total = channel[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
            totals[v] = total;
            hard[v] = u8::from(total < 0.0);
            for &e in edges {
                v2c[e] = clamp_llr(total - c2v[e]);
            }
        }
        if h.syndrome_is_zero(&hard) {
            converged = true;
            break;
        }
    }
    let posterior = totals.iter().map(|&l| l.clamp(-LLR_MAX, LLR_MAX)).collect();
    Ok(BpOutput {
        posterior,
        hard,
        converged,
        iterations,
    })
}

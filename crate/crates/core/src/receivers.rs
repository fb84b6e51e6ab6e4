//! Per-user receiver pipelines.
//!
//! Every receiver works on one user's observations `y_t = h ⊙ s_t + w_t`, one
//! vector of length K per channel use, and returns that user's decisions.
//! Superposed uses are processed in this order: zero-forcing, QPSK LLRs of the
//! common layer (channel noise only), common symbol
//! regeneration, cancellation, then MPA on the residual.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{soft_sic, zf_equalize, ChannelRealization, PowerAllocation};
use crate::error::{Error, Result};
use crate::ldpc::{bp_decode, BpOutput, ParityCheckMatrix};
use crate::qpsk::{qpsk_hard_demod, qpsk_llr_per_element, soft_symbols, LlrFrame, POINTS};
use crate::rate_split::{combine_messages, SplitConfig};
use crate::scma::{mpa_detect_per_resource, CodebookSet, SymbolPosterior};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SicMode {
    #[default]
    Soft,
    Hard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxOptions {
    pub mpa_iterations: usize,
    pub bp_max_iterations: usize,
    /// Adds `P_c |h_k|^2 (1 - |ŝ_k|^2) / P_p` to the MPA noise variance.
    pub residual_variance: bool,
}

impl Default for RxOptions {
    fn default() -> Self {
        Self {
            mpa_iterations: crate::scma::DEFAULT_MPA_ITERATIONS,
            bp_max_iterations: crate::ldpc::DEFAULT_BP_ITERATIONS,
            residual_variance: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// `sum |y - sqrt(P_c) h ⊙ ŝ|^2` over all superposed uses.
    pub sic_residual_energy: f64,
    pub mpa_runs: usize,
    pub mpa_iterations: usize,
    /// Convergence of each common decode, in resource order.
    pub common_converged: Vec<bool>,
    pub private_converged: Option<bool>,
    pub bp_iterations: usize,
}

/// Decisions of one user. `T` is a symbol index (uncoded) or a bit (coded).
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverOutput<T> {
    pub user: usize,
    /// The user's own common stream; empty for private-only users.
    pub common: Vec<T>,
    pub private: Vec<T>,
    /// Common part followed by private part.
    pub combined: Vec<T>,
    pub diagnostics: Diagnostics,
}

/// One superposed use: LLRs and hard decisions for every common stream and the
/// private symbol posteriors of every user.
#[derive(Debug, Clone)]
pub struct SuperposedDetection {
    pub common_llrs: LlrFrame,
    pub common_hard: Vec<[u8; 2]>,
    /// Symbols that were cancelled.
    pub cancelled: Vec<Complex64>,
    pub residual: Vec<Complex64>,
    pub private: Vec<SymbolPosterior>,
}

/// What to subtract on a superposed use.
#[derive(Debug, Clone, Copy)]
pub enum Cancellation<'a> {
    Soft,
    Hard,
    /// Known common symbols, for bounds and tests.
    Known(&'a [Complex64]),
    /// Soft symbols from externally supplied LLR pairs (decoder posteriors).
    Llrs(&'a [[f64; 2]]),
}

fn check_user(user: usize, cb: &CodebookSet) -> Result<()> {
    if user < cb.users() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "user {user} out of range for {} users",
            cb.users()
        )))
    }
}

fn check_uses(y: &[Vec<Complex64>], ch: &[ChannelRealization], expected: usize) -> Result<()> {
    if y.len() != expected || ch.len() != expected {
        return Err(Error::Dimension {
            what: "channel uses",
            expected,
            found: if y.len() != expected { y.len() } else { ch.len() },
        });
    }
    Ok(())
}

fn broadcast_gains(h: &[Complex64], users: usize) -> Vec<Vec<Complex64>> {
    vec![h.to_vec(); users]
}

/// Common-layer LLRs of a ZF-equalized use, scaled by `1/sqrt(P_c)`.
fn common_llrs(
    y: &[Complex64],
    ch: &ChannelRealization,
    pa: &PowerAllocation,
) -> Result<(LlrFrame, Vec<[u8; 2]>)> {
    let eq = zf_equalize(y, &ch.gains, ch.noise_var)?;
    let a = pa.common().sqrt();
    let z: Vec<Complex64> = eq.y.iter().map(|v| v / a).collect();
    let vars: Vec<f64> = eq
        .noise_vars
        .iter()
        .zip(&eq.erased)
        .map(|(nv, &erased)| if erased { 1.0 } else { nv / pa.common() / 2.0 })
        .collect();
    let mut llrs = qpsk_llr_per_element(&z, &vars)?;
    for (k, &erased) in eq.erased.iter().enumerate() {
        if erased {
            llrs.erase(k);
        }
    }
    Ok((llrs, qpsk_hard_demod(&z)))
}

/// Runs the superposed-use pipeline for one observation.
pub fn detect_superposed(
    y: &[Complex64],
    ch: &ChannelRealization,
    pa: &PowerAllocation,
    cb: &CodebookSet,
    cancellation: Cancellation<'_>,
    opts: &RxOptions,
) -> Result<SuperposedDetection> {
    if !(pa.common() > 0.0 && pa.private() > 0.0) {
        return Err(Error::PowerAllocation(
            "a superposed use needs power on both layers".into(),
        ));
    }
    let (llrs, hard) = common_llrs(y, ch, pa)?;
    let cancelled = match cancellation {
        Cancellation::Soft => soft_symbols(&llrs),
        Cancellation::Hard => hard.iter().map(|&b| POINTS[crate::qpsk::index_of(b)]).collect(),
        Cancellation::Known(s) => s.to_vec(),
        Cancellation::Llrs(l) => soft_symbols(&LlrFrame::from_llrs(l.to_vec())),
    };
    let residual = soft_sic(y, &ch.gains, pa, &cancelled)?;
    let b = pa.private().sqrt();
    let scaled: Vec<Complex64> = residual.iter().map(|v| v / b).collect();
    let noise_vars: Vec<f64> = ch
        .gains
        .iter()
        .zip(&cancelled)
        .map(|(g, s)| {
            let mut v = ch.noise_var / pa.private();
            if opts.residual_variance {
                v += pa.common() * g.norm_sqr() * (1.0 - s.norm_sqr()).max(0.0) / pa.private();
            }
            v
        })
        .collect();
    let private = mpa_detect_per_resource(
        &scaled,
        cb,
        &broadcast_gains(&ch.gains, cb.users()),
        &noise_vars,
        opts.mpa_iterations,
    )?;
    Ok(SuperposedDetection {
        common_llrs: llrs,
        common_hard: hard,
        cancelled,
        residual,
        private,
    })
}

/// MPA on a use that carries only private symbols at full power.
pub fn detect_private_only(
    y: &[Complex64],
    ch: &ChannelRealization,
    cb: &CodebookSet,
    opts: &RxOptions,
) -> Result<Vec<SymbolPosterior>> {
    mpa_detect_per_resource(
        y,
        cb,
        &broadcast_gains(&ch.gains, cb.users()),
        &vec![ch.noise_var; y.len()],
        opts.mpa_iterations,
    )
}

/// ZF and minimum-distance QPSK decisions on a use that carries only common symbols.
pub fn detect_common_only(y: &[Complex64], ch: &ChannelRealization) -> Result<Vec<[u8; 2]>> {
    let eq = zf_equalize(y, &ch.gains, ch.noise_var)?;
    Ok(qpsk_hard_demod(&eq.y))
}

fn rx1_uncoded_inner(
    user: usize,
    y: &[Vec<Complex64>],
    ch: &[ChannelRealization],
    pa: &PowerAllocation,
    cb: &CodebookSet,
    cfg: &SplitConfig,
    cancel: impl Fn(usize) -> Cancellation<'static>,
    known: Option<&[Vec<usize>]>,
    opts: &RxOptions,
) -> Result<ReceiverOutput<usize>> {
    check_user(user, cb)?;
    let schedule = cfg.schedule();
    check_uses(y, ch, schedule.len())?;
    let own_common = cfg.is_split_user(user);
    let mut common = vec![0usize; cfg.common_len()];
    let mut private = vec![0usize; cfg.private_len()];
    let mut diag = Diagnostics::default();

    for (t, u) in schedule.iter().enumerate() {
        match (u.common, u.private) {
            (Some(c), Some(p)) => {
                let truth: Vec<Complex64>;
                let how = match known {
                    Some(streams) => {
                        truth = streams.iter().map(|s| POINTS[s[c]]).collect();
                        Cancellation::Known(&truth)
                    }
                    None => cancel(t),
                };
                let det = detect_superposed(&y[t], &ch[t], pa, cb, how, opts)?;
                diag.sic_residual_energy += det.residual.iter().map(|v| v.norm_sqr()).sum::<f64>();
                diag.mpa_runs += 1;
                diag.mpa_iterations += opts.mpa_iterations;
                if own_common {
                    common[c] = crate::qpsk::index_of(det.common_hard[user]);
                }
                private[p] = det.private[user].hard_decision();
            }
            (None, Some(p)) => {
                let post = detect_private_only(&y[t], &ch[t], cb, opts)?;
                diag.mpa_runs += 1;
                diag.mpa_iterations += opts.mpa_iterations;
                private[p] = post[user].hard_decision();
            }
            (Some(c), None) => {
                if own_common {
                    common[c] = crate::qpsk::index_of(detect_common_only(&y[t], &ch[t])?[user]);
                }
            }
            (None, None) => unreachable!("every scheduled use carries a stream"),
        }
    }
    if !own_common {
        common.clear();
    }
    let combined = if own_common {
        common.iter().chain(&private).copied().collect()
    } else {
        private.clone()
    };
    Ok(ReceiverOutput {
        user,
        common,
        private,
        combined,
        diagnostics: diag,
    })
}

/// Uncoded Rx-1 for `user` over one frame following `cfg.schedule()`.
///
/// `pa` is the split used on superposed uses; uses carrying a single layer are
/// sent at full power. Combined symbols are QPSK indices for the common part
/// and codebook indices for the private part.
pub fn rx1_uncoded(
    user: usize,
    y: &[Vec<Complex64>],
    ch: &[ChannelRealization],
    pa: &PowerAllocation,
    cb: &CodebookSet,
    cfg: &SplitConfig,
    sic: SicMode,
    opts: &RxOptions,
) -> Result<ReceiverOutput<usize>> {
    let how = match sic {
        SicMode::Soft => Cancellation::Soft,
        SicMode::Hard => Cancellation::Hard,
    };
    rx1_uncoded_inner(user, y, ch, pa, cb, cfg, |_| how, None, opts)
}

/// As [`rx1_uncoded`], cancelling the true common symbols (`common[k][t]` is
/// the QPSK index of stream `k` at position `t`).
pub fn rx1_uncoded_perfect_sic(
    user: usize,
    y: &[Vec<Complex64>],
    ch: &[ChannelRealization],
    pa: &PowerAllocation,
    cb: &CodebookSet,
    cfg: &SplitConfig,
    common: &[Vec<usize>],
    opts: &RxOptions,
) -> Result<ReceiverOutput<usize>> {
    if common.len() != cfg.resources() || common.iter().any(|c| c.len() != cfg.common_len()) {
        return Err(Error::Dimension {
            what: "known common streams",
            expected: cfg.resources(),
            found: common.len(),
        });
    }
    rx1_uncoded_inner(user, y, ch, pa, cb, cfg, |_| Cancellation::Soft, Some(common), opts)
}

/// Code pair and block geometry of a coded frame.
#[derive(Debug, Clone, Copy)]
pub struct CodedLink<'a> {
    pub common: &'a ParityCheckMatrix,
    pub private: &'a ParityCheckMatrix,
}

impl<'a> CodedLink<'a> {
    /// Checks that both codes share an even block length and the codebook is 4-ary.
    pub fn new(
        common: &'a ParityCheckMatrix,
        private: &'a ParityCheckMatrix,
        cb: &CodebookSet,
    ) -> Result<Self> {
        if common.n() != private.n() {
            return Err(Error::InvalidArgument(format!(
                "common and private block lengths differ ({} vs {})",
                common.n(),
                private.n()
            )));
        }
        if !common.n().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "block length {} is odd",
                common.n()
            )));
        }
        if cb.alphabet() != 4 {
            return Err(Error::InvalidArgument(format!(
                "coded frames need a 4-point codebook, got {}",
                cb.alphabet()
            )));
        }
        Ok(Self { common, private })
    }

    pub fn block_len(&self) -> usize {
        self.common.n()
    }

    /// Channel uses per block: two coded bits per symbol on both layers.
    pub fn channel_uses(&self) -> usize {
        self.common.n() / 2
    }

    /// Information bits recovered by `user`.
    pub fn info_bits(&self, user: usize, cb: &CodebookSet) -> usize {
        if user < cb.resources() {
            self.common.k() + self.private.k()
        } else {
            self.private.k()
        }
    }
}

/// Coded-bit index pairs carried by channel use `t`.
fn bit_pair(t: usize) -> [usize; 2] {
    [2 * t, 2 * t + 1]
}

fn decode(
    llrs: &[f64],
    h: &ParityCheckMatrix,
    opts: &RxOptions,
    diag: &mut Diagnostics,
) -> Result<BpOutput> {
    let out = bp_decode(llrs, h, opts.bp_max_iterations)?;
    diag.bp_iterations += out.iterations;
    Ok(out)
}

fn coded_output(
    user: usize,
    common: Vec<u8>,
    private: Vec<u8>,
    diag: Diagnostics,
) -> ReceiverOutput<u8> {
    let combined = common.iter().chain(&private).copied().collect();
    ReceiverOutput {
        user,
        common,
        private,
        combined,
        diagnostics: diag,
    }
}

/// Private bit LLRs of `user` stitched in transmission order.
pub fn private_llrs(posteriors: &[Vec<SymbolPosterior>], user: usize) -> Vec<f64> {
    posteriors
        .iter()
        .flat_map(|use_post| use_post[user].llrs.iter().copied())
        .collect()
}

/// Coded Rx-1: common symbols are regenerated from the QPSK channel LLRs.
pub fn rx1_coded(
    user: usize,
    y: &[Vec<Complex64>],
    ch: &[ChannelRealization],
    pa: &PowerAllocation,
    cb: &CodebookSet,
    link: &CodedLink<'_>,
    opts: &RxOptions,
) -> Result<ReceiverOutput<u8>> {
    check_user(user, cb)?;
    check_uses(y, ch, link.channel_uses())?;
    let n = link.block_len();
    let mut diag = Diagnostics::default();
    let own_common = user < cb.resources();
    let mut common_llrs = vec![0.0; n];
    let mut posteriors = Vec::with_capacity(link.channel_uses());
    for t in 0..link.channel_uses() {
        let det = detect_superposed(&y[t], &ch[t], pa, cb, Cancellation::Soft, opts)?;
        diag.sic_residual_energy += det.residual.iter().map(|v| v.norm_sqr()).sum::<f64>();
        diag.mpa_runs += 1;
        diag.mpa_iterations += opts.mpa_iterations;
        if own_common {
            let [i, j] = bit_pair(t);
            [common_llrs[i], common_llrs[j]] = det.common_llrs.llrs[user];
        }
        posteriors.push(det.private);
    }
    let common = if own_common {
        let out = decode(&common_llrs, link.common, opts, &mut diag)?;
        diag.common_converged.push(out.converged);
        link.common.extract_info(&out.hard)
    } else {
        Vec::new()
    };
    let out = decode(&private_llrs(&posteriors, user), link.private, opts, &mut diag)?;
    diag.private_converged = Some(out.converged);
    Ok(coded_output(user, common, link.private.extract_info(&out.hard), diag))
}

/// Coded Rx-2: every common codeword is decoded first and its a-posteriori
/// LLRs (message and parity bits) drive the cancellation.
pub fn rx2_coded(
    user: usize,
    y: &[Vec<Complex64>],
    ch: &[ChannelRealization],
    pa: &PowerAllocation,
    cb: &CodebookSet,
    link: &CodedLink<'_>,
    opts: &RxOptions,
) -> Result<ReceiverOutput<u8>> {
    check_user(user, cb)?;
    check_uses(y, ch, link.channel_uses())?;
    let n = link.block_len();
    let k_res = cb.resources();
    let mut diag = Diagnostics::default();

    let mut channel_llrs = vec![vec![0.0; n]; k_res];
    for t in 0..link.channel_uses() {
        let (llrs, _) = common_llrs(&y[t], &ch[t], pa)?;
        let [i, j] = bit_pair(t);
        for (k, pair) in llrs.llrs.iter().enumerate() {
            channel_llrs[k][i] = pair[0];
            channel_llrs[k][j] = pair[1];
        }
    }
    let mut decoded = Vec::with_capacity(k_res);
    for llrs in &channel_llrs {
        let out = decode(llrs, link.common, opts, &mut diag)?;
        diag.common_converged.push(out.converged);
        decoded.push(out);
    }

    let mut posteriors = Vec::with_capacity(link.channel_uses());
    let mut pairs = vec![[0.0; 2]; k_res];
    for t in 0..link.channel_uses() {
        let [i, j] = bit_pair(t);
        for (pair, out) in pairs.iter_mut().zip(&decoded) {
            *pair = [out.posterior[i], out.posterior[j]];
        }
        let det = detect_superposed(&y[t], &ch[t], pa, cb, Cancellation::Llrs(&pairs), opts)?;
        diag.sic_residual_energy += det.residual.iter().map(|v| v.norm_sqr()).sum::<f64>();
        diag.mpa_runs += 1;
        diag.mpa_iterations += opts.mpa_iterations;
        posteriors.push(det.private);
    }
    let common = if user < k_res {
        link.common.extract_info(&decoded[user].hard)
    } else {
        Vec::new()
    };
    let out = decode(&private_llrs(&posteriors, user), link.private, opts, &mut diag)?;
    diag.private_converged = Some(out.converged);
    Ok(coded_output(user, common, link.private.extract_info(&out.hard), diag))
}

/// Reassembles every user's message from per-user outputs via the rate splitter.
pub fn combine_outputs(outputs: &[ReceiverOutput<usize>], cfg: &SplitConfig) -> Result<Vec<Vec<usize>>> {
    let common: Vec<Vec<usize>> = outputs
        .iter()
        .filter(|o| cfg.is_split_user(o.user))
        .map(|o| o.common.clone())
        .collect();
    let private: Vec<Vec<usize>> = outputs.iter().map(|o| o.private.clone()).collect();
    combine_messages(&common, &private, cfg)
}

//! Transmitter side of one frame: message generation, splitting, encoding,
//! superposition and the per-user channel.

use num_complex::Complex64;
use rand::Rng;

use super::rng::{substream, Lane};
use crate::channel::{superpose, transmit, ChannelKind, ChannelRealization, PowerAllocation};
use crate::error::Result;
use crate::ldpc::ParityCheckMatrix;
use crate::qpsk::{index_of, POINTS};
use crate::rate_split::{split_messages, SplitConfig, SplitStreams};
use crate::receivers::CodedLink;
use crate::scma::{scma_encode, BitMap, CodebookSet};

/// Identifies one frame of one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameId {
    pub seed: u64,
    pub point: u64,
    pub frame: u64,
}

impl FrameId {
    pub fn rng(&self, lane: Lane) -> rand_chacha::ChaCha8Rng {
        substream(self.seed, self.point, self.frame, lane)
    }
}

/// Noise-free transmit vectors of an uncoded frame, one per channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct UncodedFrame {
    /// Per-user messages: QPSK indices for the common prefix, codebook indices after.
    pub messages: Vec<Vec<usize>>,
    pub streams: SplitStreams<usize>,
    pub signals: Vec<Vec<Complex64>>,
}

/// Draws each user's message: `l_c` QPSK indices (split users only), then `l_p`
/// codebook indices.
pub fn draw_uncoded_messages(id: FrameId, cfg: &SplitConfig, alphabet: usize) -> Vec<Vec<usize>> {
    (0..cfg.users())
        .map(|j| {
            let mut rng = id.rng(Lane::Message(j));
            let common = if cfg.is_split_user(j) { cfg.common_len() } else { 0 };
            let mut msg: Vec<usize> = (0..common).map(|_| rng.random_range(0..4)).collect();
            msg.extend((0..cfg.private_len()).map(|_| rng.random_range(0..alphabet)));
            msg
        })
        .collect()
}

/// Builds the transmit vectors following `cfg.schedule()`. Superposed uses get
/// `pa`; single-layer uses are sent at full power.
pub fn build_uncoded(
    messages: Vec<Vec<usize>>,
    cfg: &SplitConfig,
    cb: &CodebookSet,
    pa: &PowerAllocation,
) -> Result<UncodedFrame> {
    let streams = split_messages(&messages, cfg)?;
    let k = cb.resources();
    let mut signals = Vec::with_capacity(cfg.channel_uses());
    for u in cfg.schedule() {
        let common: Vec<Complex64> = match u.common {
            Some(c) => streams.common.iter().map(|s| POINTS[s[c]]).collect(),
            None => vec![Complex64::new(0.0, 0.0); k],
        };
        let privates = match u.private {
            Some(p) => {
                let symbols: Vec<usize> = streams.private.iter().map(|s| s[p]).collect();
                scma_encode(&symbols, cb)?.per_user
            }
            None => Vec::new(),
        };
        let use_pa = match (u.common, u.private) {
            (Some(_), Some(_)) => *pa,
            (None, _) => PowerAllocation::private_only(),
            (_, None) => PowerAllocation::common_only(),
        };
        signals.push(superpose(&common, &privates, &use_pa)?);
    }
    Ok(UncodedFrame {
        messages,
        streams,
        signals,
    })
}

/// Channel realizations and observations of one user over a sequence of
/// transmit vectors. Each use draws its gains, then its noise.
pub fn observe(
    id: FrameId,
    user: usize,
    signals: &[Vec<Complex64>],
    kind: ChannelKind,
    noise_var: f64,
) -> Result<(Vec<Vec<Complex64>>, Vec<ChannelRealization>)> {
    let mut rng = id.rng(Lane::Channel(user));
    let mut ys = Vec::with_capacity(signals.len());
    let mut chs = Vec::with_capacity(signals.len());
    for s in signals {
        let ch = ChannelRealization::draw(kind, s.len(), noise_var, &mut rng)?;
        ys.push(transmit(s, &ch, &mut rng)?);
        chs.push(ch);
    }
    Ok((ys, chs))
}

/// One LDPC-coded block: every use superposes the common and private layers.
#[derive(Debug, Clone, PartialEq)]
pub struct CodedFrame {
    /// Information bits per user: common bits (split users only) then private bits.
    pub messages: Vec<Vec<u8>>,
    pub common_codewords: Vec<Vec<u8>>,
    pub private_codewords: Vec<Vec<u8>>,
    /// QPSK index of each common stream per use, `[t][k]`.
    pub common_symbols: Vec<Vec<usize>>,
    pub signals: Vec<Vec<Complex64>>,
}

pub fn build_coded(
    id: FrameId,
    cb: &CodebookSet,
    link: &CodedLink<'_>,
    pa: &PowerAllocation,
) -> Result<CodedFrame> {
    let (hc, hp): (&ParityCheckMatrix, &ParityCheckMatrix) = (link.common, link.private);
    let k_res = cb.resources();
    let mut messages = Vec::with_capacity(cb.users());
    let mut common_codewords = Vec::with_capacity(k_res);
    let mut private_codewords = Vec::with_capacity(cb.users());
    for j in 0..cb.users() {
        let mut rng = id.rng(Lane::Message(j));
        let mut draw = |len: usize| -> Vec<u8> { (0..len).map(|_| rng.random_range(0..2)).collect() };
        let mut msg = Vec::new();
        if j < k_res {
            let u = draw(hc.k());
            common_codewords.push(hc.encode(&u)?);
            msg.extend(u);
        }
        let u = draw(hp.k());
        private_codewords.push(hp.encode(&u)?);
        msg.extend(u);
        messages.push(msg);
    }
    let map = BitMap::natural(cb.alphabet());
    let mut common_symbols = Vec::with_capacity(link.channel_uses());
    let mut signals = Vec::with_capacity(link.channel_uses());
    for t in 0..link.channel_uses() {
        let idx: Vec<usize> = common_codewords
            .iter()
            .map(|c| index_of([c[2 * t], c[2 * t + 1]]))
            .collect();
        let common: Vec<Complex64> = idx.iter().map(|&i| POINTS[i]).collect();
        let symbols: Vec<usize> = private_codewords
            .iter()
            .map(|c| map.symbol_of(&c[2 * t..2 * t + 2]).expect("natural map is complete"))
            .collect();
        let privates = scma_encode(&symbols, cb)?.per_user;
        signals.push(superpose(&common, &privates, pa)?);
        common_symbols.push(idx);
    }
    Ok(CodedFrame {
        messages,
        common_codewords,
        private_codewords,
        common_symbols,
        signals,
    })
}

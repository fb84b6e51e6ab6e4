//! Reference systems without rate splitting: plain SCMA with MPA and
//! orthogonal QPSK with one user per resource.

use num_complex::Complex64;
use rand::Rng;

use super::frame::{observe, FrameId};
use super::rng::Lane;
use crate::channel::{zf_equalize, ChannelKind};
use crate::error::Result;
use crate::qpsk::{index_of, qpsk_hard_demod, POINTS};
use crate::scma::{mpa_detect, scma_encode, CodebookSet};

/// Per-user messages and received decisions of one baseline frame.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineFrame {
    pub sent: Vec<Vec<usize>>,
    pub decided: Vec<Vec<usize>>,
}

/// Every user sends `n` codebook symbols, one per channel use; each user
/// detects its own symbols with MPA.
pub fn scma_frame(
    id: FrameId,
    cb: &CodebookSet,
    n: usize,
    kind: ChannelKind,
    noise_var: f64,
    mpa_iterations: usize,
) -> Result<BaselineFrame> {
    let sent: Vec<Vec<usize>> = (0..cb.users())
        .map(|j| {
            let mut rng = id.rng(Lane::Message(j));
            (0..n).map(|_| rng.random_range(0..cb.alphabet())).collect()
        })
        .collect();
    let signals = (0..n)
        .map(|t| {
            let symbols: Vec<usize> = sent.iter().map(|m| m[t]).collect();
            Ok(scma_encode(&symbols, cb)?.superposed)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut decided = Vec::with_capacity(cb.users());
    for j in 0..cb.users() {
        let (ys, chs) = observe(id, j, &signals, kind, noise_var)?;
        let mut out = Vec::with_capacity(n);
        for (y, ch) in ys.iter().zip(&chs) {
            let gains = vec![ch.gains.clone(); cb.users()];
            let post = mpa_detect(y, cb, &gains, noise_var, mpa_iterations)?;
            out.push(post[j].hard_decision());
        }
        decided.push(out);
    }
    Ok(BaselineFrame { sent, decided })
}

/// `resources` users each own one resource and send `n` QPSK symbols.
pub fn qpsk_frame(
    id: FrameId,
    resources: usize,
    n: usize,
    kind: ChannelKind,
    noise_var: f64,
) -> Result<BaselineFrame> {
    let sent: Vec<Vec<usize>> = (0..resources)
        .map(|k| {
            let mut rng = id.rng(Lane::Message(k));
            (0..n).map(|_| rng.random_range(0..4)).collect()
        })
        .collect();
    let signals: Vec<Vec<Complex64>> = (0..n)
        .map(|t| sent.iter().map(|m| POINTS[m[t]]).collect())
        .collect();
    let mut decided = Vec::with_capacity(resources);
    for k in 0..resources {
        let (ys, chs) = observe(id, k, &signals, kind, noise_var)?;
        let mut out = Vec::with_capacity(n);
        for (y, ch) in ys.iter().zip(&chs) {
            let eq = zf_equalize(y, &ch.gains, noise_var)?;
            out.push(index_of(qpsk_hard_demod(&eq.y)[k]));
        }
        decided.push(out);
    }
    Ok(BaselineFrame { sent, decided })
}

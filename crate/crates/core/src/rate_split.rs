//! Rate splitting: common/private message bookkeeping, the two-phase channel-use
//! schedule, and the closed-form overloading and complexity figures.

use crate::error::{Error, Result};

const LENGTH_TOLERANCE: f64 = 1e-9;

/// Splitting factor together with the system dimensions it applies to.
///
/// The first `resources` users are split: `common_len` symbols go to the common
/// stream and `private_len` to the private stream. The remaining users are
/// private-only and carry `private_len` symbols per frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    alpha: f64,
    symbols_per_user: usize,
    users: usize,
    resources: usize,
    common_len: usize,
    private_len: usize,
}

impl SplitConfig {
    /// Rejects `alpha` outside `[0, 1]`, `users < resources`, and any `(alpha, N)`
    /// whose common length `alpha * N` is not a whole number.
    pub fn new(alpha: f64, symbols_per_user: usize, users: usize, resources: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidSplit(format!("alpha = {alpha} is outside [0, 1]")));
        }
        if resources == 0 || users < resources {
            return Err(Error::InvalidSplit(format!(
                "need users >= resources >= 1, got J = {users}, K = {resources}"
            )));
        }
        if symbols_per_user == 0 {
            return Err(Error::InvalidSplit("N must be positive".into()));
        }
        let exact = alpha * symbols_per_user as f64;
        let common_len = exact.round();
        if (exact - common_len).abs() > LENGTH_TOLERANCE {
            return Err(Error::InvalidSplit(format!(
                "alpha * N = {exact} is not a whole number (alpha = {alpha}, N = {symbols_per_user})"
            )));
        }
        let common_len = common_len as usize;
        Ok(Self {
            alpha,
            symbols_per_user,
            users,
            resources,
            common_len,
            private_len: symbols_per_user - common_len,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// N.
    pub fn symbols_per_user(&self) -> usize {
        self.symbols_per_user
    }

    /// J.
    pub fn users(&self) -> usize {
        self.users
    }

    /// K.
    pub fn resources(&self) -> usize {
        self.resources
    }

    /// l_c = alpha N.
    pub fn common_len(&self) -> usize {
        self.common_len
    }

    /// l_p = (1 - alpha) N.
    pub fn private_len(&self) -> usize {
        self.private_len
    }

    /// Common symbols per channel use (K_c): one per split user.
    pub fn common_per_use(&self) -> usize {
        self.resources
    }

    /// Private symbols per channel use (K_p): one per user.
    pub fn private_per_use(&self) -> usize {
        self.users
    }

    pub fn is_split_user(&self, user: usize) -> bool {
        user < self.resources
    }

    /// Symbols user `j` sends in one frame.
    pub fn message_len(&self, user: usize) -> usize {
        if self.is_split_user(user) {
            self.symbols_per_user
        } else {
            self.private_len
        }
    }

    /// Total information symbols across all users in one frame.
    pub fn symbols_per_frame(&self) -> usize {
        (0..self.users).map(|j| self.message_len(j)).sum()
    }

    /// Channel uses per frame, `max(l_c, l_p)`.
    pub fn channel_uses(&self) -> usize {
        self.common_len.max(self.private_len)
    }

    /// Ordered list of channel uses making up one frame.
    pub fn schedule(&self) -> Vec<ChannelUse> {
        let shared = self.common_len.min(self.private_len);
        let mut uses: Vec<ChannelUse> = (0..shared)
            .map(|t| ChannelUse {
                common: Some(t),
                private: Some(t),
            })
            .collect();
        if self.private_len > self.common_len {
            uses.extend((shared..self.private_len).map(|t| ChannelUse {
                common: None,
                private: Some(t),
            }));
        } else {
            uses.extend((shared..self.common_len).map(|t| ChannelUse {
                common: Some(t),
                private: None,
            }));
        }
        uses
    }
}

/// Which stream positions one channel use carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelUse {
    /// Position within every split user's common stream.
    pub common: Option<usize>,
    /// Position within every user's private stream.
    pub private: Option<usize>,
}

impl ChannelUse {
    pub fn is_superposed(&self) -> bool {
        self.common.is_some() && self.private.is_some()
    }
}

/// Common and private streams of one frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitStreams<T> {
    /// One stream of length l_c per split user.
    pub common: Vec<Vec<T>>,
    /// One stream of length l_p per user.
    pub private: Vec<Vec<T>>,
}

/// Splits each user's message: the first l_c symbols of a split user form its
/// common stream and the rest its private stream. Private-only users' messages
/// pass through whole.
pub fn split_messages<T: Clone>(messages: &[Vec<T>], cfg: &SplitConfig) -> Result<SplitStreams<T>> {
    if messages.len() != cfg.users {
        return Err(Error::Dimension {
            what: "user messages",
            expected: cfg.users,
            found: messages.len(),
        });
    }
    let mut common = Vec::with_capacity(cfg.resources);
    let mut private = Vec::with_capacity(cfg.users);
    for (j, msg) in messages.iter().enumerate() {
        if msg.len() != cfg.message_len(j) {
            return Err(Error::Dimension {
                what: "message length",
                expected: cfg.message_len(j),
                found: msg.len(),
            });
        }
        if cfg.is_split_user(j) {
            common.push(msg[..cfg.common_len].to_vec());
            private.push(msg[cfg.common_len..].to_vec());
        } else {
            private.push(msg.clone());
        }
    }
    Ok(SplitStreams { common, private })
}

/// Inverse of [`split_messages`].
pub fn combine_messages<T: Clone>(
    common: &[Vec<T>],
    private: &[Vec<T>],
    cfg: &SplitConfig,
) -> Result<Vec<Vec<T>>> {
    if common.len() != cfg.resources {
        return Err(Error::Dimension {
            what: "common streams",
            expected: cfg.resources,
            found: common.len(),
        });
    }
    if private.len() != cfg.users {
        return Err(Error::Dimension {
            what: "private streams",
            expected: cfg.users,
            found: private.len(),
        });
    }
    if let Some(c) = common.iter().find(|c| c.len() != cfg.common_len) {
        return Err(Error::Dimension {
            what: "common stream length",
            expected: cfg.common_len,
            found: c.len(),
        });
    }
    if let Some(p) = private.iter().find(|p| p.len() != cfg.private_len) {
        return Err(Error::Dimension {
            what: "private stream length",
            expected: cfg.private_len,
            found: p.len(),
        });
    }
    Ok(private
        .iter()
        .enumerate()
        .map(|(j, p)| {
            if cfg.is_split_user(j) {
                common[j].iter().chain(p).cloned().collect()
            } else {
                p.clone()
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase2Kind {
    CommonOnly,
    PrivateOnly,
    None,
}

/// Two-phase transmission of one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePlan {
    /// Superposed uses, `min(l_c, l_p)`.
    pub phase1_uses: usize,
    /// Uses carrying only the dominant stream, `|l_c - l_p|`.
    pub phase2_uses: usize,
    pub phase2_kind: Phase2Kind,
    /// Overloading during phase 1, `(K_c + K_p) / K`.
    pub lambda1: f64,
    /// Overloading during phase 2; `None` when there is no phase 2.
    pub lambda2: Option<f64>,
}

impl PhasePlan {
    /// Symbols per use in phase 2 (`K_dom`), zero without a phase 2.
    pub fn dominant_per_use(&self, cfg: &SplitConfig) -> usize {
        match self.phase2_kind {
            Phase2Kind::CommonOnly => cfg.common_per_use(),
            Phase2Kind::PrivateOnly => cfg.private_per_use(),
            Phase2Kind::None => 0,
        }
    }
}

pub fn phase_plan(cfg: &SplitConfig) -> PhasePlan {
    let k = cfg.resources as f64;
    let (kc, kp) = (cfg.common_per_use() as f64, cfg.private_per_use() as f64);
    let (lc, lp) = (cfg.common_len, cfg.private_len);
    let (phase2_kind, lambda2) = match lc.cmp(&lp) {
        std::cmp::Ordering::Less => (Phase2Kind::PrivateOnly, Some(kp / k)),
        std::cmp::Ordering::Greater => (Phase2Kind::CommonOnly, Some(kc / k)),
        std::cmp::Ordering::Equal => (Phase2Kind::None, None),
    };
    PhasePlan {
        phase1_uses: lc.min(lp),
        phase2_uses: lc.abs_diff(lp),
        phase2_kind,
        lambda1: (kc + kp) / k,
        lambda2,
    }
}

/// Overall overloading factor of a split configuration.
pub fn overloading_factor(cfg: &SplitConfig) -> f64 {
    overloading_factor_for_alpha(
        cfg.alpha,
        cfg.common_per_use(),
        cfg.private_per_use(),
        cfg.resources,
    )
}

/// Symbol-weighted average of the two phases' overloading, in the alpha form:
///
/// `[min(a, 1-a)(K_c+K_p) l1 + |1-2a| K_dom l2] / [min(a, 1-a)(K_c+K_p) + |1-2a| K_dom]`
///
/// with `l1 = (K_c+K_p)/K`, `K_dom = K_c` for `a > 0.5` and `K_p` otherwise, and
/// `l2 = K_dom / K`.
pub fn overloading_factor_for_alpha(
    alpha: f64,
    common_per_use: usize,
    private_per_use: usize,
    resources: usize,
) -> f64 {
    let (kc, kp, k) = (
        common_per_use as f64,
        private_per_use as f64,
        resources as f64,
    );
    let lambda1 = (kc + kp) / k;
    let k_dom = if alpha > 0.5 { kc } else { kp };
    let lambda2 = k_dom / k;
    let shared = alpha.min(1.0 - alpha) * (kc + kp);
    let dominant = (1.0 - 2.0 * alpha).abs() * k_dom;
    (shared * lambda1 + dominant * lambda2) / (shared + dominant)
}

/// Receiver complexity of RS-SCMA relative to plain SCMA,
/// `((M + 1) + M^d) / M^d` for resource degree `d`.
pub fn complexity_ratio(alphabet: usize, resource_degree: usize) -> f64 {
    let m = alphabet as f64;
    let mpa = m.powi(resource_degree as i32);
    (m + 1.0 + mpa) / mpa
}

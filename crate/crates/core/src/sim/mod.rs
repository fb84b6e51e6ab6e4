//! Monte-Carlo sweeps over Eb/N0.
//!
//! Frames are simulated in fixed-size batches on the current rayon pool. Each
//! frame draws from its own counter-based streams and the per-frame counts are
//! integers, so a sweep is reproducible for any number of threads.

mod analyze;
pub mod baseline;
mod config;
mod counts;
pub mod frame;
mod output;
pub mod rng;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use analyze::{analyze, default_degree, format_table, AnalysisRow};
pub use config::{
    LdpcConfig, Prepared, ReceiverKind, Scenario, SimConfig, StopRule, CONFIG_VERSION,
    RATE_TOLERANCE,
};
pub use counts::{Alphabet, Counts, UserCounts};
pub use output::{emit_csv, read_csv, write_csv, CsvRow, CSV_HEADER};

use crate::channel::{mmf_power_lookup, LinkBudget, PowerAllocation};
use crate::error::Result;
use crate::rate_split::overloading_factor;
use crate::receivers::{rx1_coded, rx1_uncoded, rx2_coded};
use crate::scma::BitMap;
use frame::{build_coded, build_uncoded, draw_uncoded_messages, observe, FrameId};

/// Results at one Eb/N0 point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub noise_var: f64,
    /// Common power fraction on superposed uses.
    pub pc: f64,
    pub lambda: f64,
    pub seed: u64,
    pub trials: u64,
    pub totals: UserCounts,
    pub ser: f64,
    pub ber: f64,
    pub bler: f64,
    pub wall_time_s: f64,
    /// Present when the config asks for per-user counts.
    pub per_user: Option<Vec<UserCounts>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub scenario: Scenario,
    pub config_hash: String,
    pub points: Vec<PointResult>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Operating point of a sweep entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub pa: PowerAllocation,
    pub noise_var: f64,
    pub lambda: f64,
}

impl Prepared {
    /// Power split, noise variance and overloading factor at `ebn0_db`.
    pub fn operating_point(&self, ebn0_db: f64) -> Result<OperatingPoint> {
        let cfg = &self.config;
        let (k, j) = (self.cb.resources(), self.cb.users());
        let pa = match cfg.scenario {
            Scenario::ScmaBaseline => PowerAllocation::private_only(),
            Scenario::QpskBaseline => PowerAllocation::common_only(),
            _ => match cfg.common_power {
                Some(p) => PowerAllocation::new(p)?,
                None => mmf_power_lookup(ebn0_db),
            },
        };
        let n = self.split.symbols_per_user();
        let bits = self.cb.bits_per_symbol();
        let (budget, lambda) = match cfg.scenario {
            Scenario::UncodedRsScma => (
                LinkBudget::uncoded(&self.split, &pa, &self.cb),
                overloading_factor(&self.split),
            ),
            Scenario::ScmaBaseline => (
                LinkBudget {
                    info_bits: 0.0 + (j * n) as f64 * bits as f64,
                    channel_uses: n as f64,
                    resources: k,
                    energy: n as f64 * self.cb.mean_superposed_energy() * k as f64,
                },
                j as f64 / k as f64,
            ),
            Scenario::QpskBaseline => (
                LinkBudget {
                    info_bits: (k * n) as f64 * 2.0,
                    channel_uses: n as f64,
                    resources: k,
                    energy: n as f64 * 1.0 * k as f64,
                },
                1.0,
            ),
            Scenario::CodedRsScma => {
                let link = self.link().expect("coded configs carry codes");
                (
                    LinkBudget::coded(
                        link.common.k(),
                        link.private.k(),
                        link.channel_uses(),
                        &pa,
                        &self.cb,
                    ),
                    (k + j) as f64 / k as f64,
                )
            }
        };
        let noise_var = cfg.noise_var.unwrap_or_else(|| budget.noise_var(ebn0_db));
        Ok(OperatingPoint {
            pa,
            noise_var,
            lambda,
        })
    }

    /// Simulates one frame and tallies every user's errors.
    pub fn simulate_frame(&self, op: &OperatingPoint, id: FrameId) -> Result<Counts> {
        let cfg = &self.config;
        let users = self.cb.users();
        let mut counts = Counts::zero(users);
        counts.trials = 1;
        let map = BitMap::natural(self.cb.alphabet());
        match cfg.scenario {
            Scenario::UncodedRsScma => {
                let split = &self.split;
                let messages = draw_uncoded_messages(id, split, self.cb.alphabet());
                let frame = build_uncoded(messages, split, &self.cb, &op.pa)?;
                let opts = cfg.rx_options();
                for j in 0..users {
                    if split.message_len(j) == 0 {
                        continue;
                    }
                    let (ys, chs) = observe(id, j, &frame.signals, cfg.channel, op.noise_var)?;
                    let out = rx1_uncoded(j, &ys, &chs, &op.pa, &self.cb, split, cfg.sic, &opts)?;
                    let common = if split.is_split_user(j) { split.common_len() } else { 0 };
                    counts.users[j] = UserCounts::symbols(&frame.messages[j], &out.combined, |i| {
                        if i < common {
                            Alphabet::Qpsk
                        } else {
                            Alphabet::Codebook(&map)
                        }
                    });
                }
            }
            Scenario::ScmaBaseline => {
                let f = baseline::scma_frame(
                    id,
                    &self.cb,
                    self.split.symbols_per_user(),
                    cfg.channel,
                    op.noise_var,
                    cfg.mpa_iterations,
                )?;
                for (j, (s, d)) in f.sent.iter().zip(&f.decided).enumerate() {
                    counts.users[j] = UserCounts::symbols(s, d, |_| Alphabet::Codebook(&map));
                }
            }
            Scenario::QpskBaseline => {
                let f = baseline::qpsk_frame(
                    id,
                    self.cb.resources(),
                    self.split.symbols_per_user(),
                    cfg.channel,
                    op.noise_var,
                )?;
                for (k, (s, d)) in f.sent.iter().zip(&f.decided).enumerate() {
                    counts.users[k] = UserCounts::symbols(s, d, |_| Alphabet::Qpsk);
                }
            }
            Scenario::CodedRsScma => {
                let link = self.link().expect("coded configs carry codes");
                let frame = build_coded(id, &self.cb, &link, &op.pa)?;
                let opts = cfg.rx_options();
                for j in 0..users {
                    let (ys, chs) = observe(id, j, &frame.signals, cfg.channel, op.noise_var)?;
                    let out = match cfg.receiver {
                        ReceiverKind::Rx1 => rx1_coded(j, &ys, &chs, &op.pa, &self.cb, &link, &opts)?,
                        ReceiverKind::Rx2 => rx2_coded(j, &ys, &chs, &op.pa, &self.cb, &link, &opts)?,
                    };
                    counts.users[j] = UserCounts::bits(&frame.messages[j], &out.combined);
                }
            }
        }
        Ok(counts)
    }

    /// Errors the stop rule counts: block errors for coded runs, symbol errors otherwise.
    pub fn stop_errors(&self, totals: &UserCounts) -> u64 {
        match self.config.scenario {
            Scenario::CodedRsScma => totals.block_errors,
            _ => totals.symbol_errors,
        }
    }

    /// Runs one sweep point until the stop rule fires.
    pub fn run_point(&self, point: usize) -> Result<PointResult> {
        let cfg = &self.config;
        let ebn0_db = cfg.ebn0_db[point];
        let op = self.operating_point(ebn0_db)?;
        let start = Instant::now();
        let mut counts = Counts::zero(self.cb.users());
        while counts.trials < cfg.stop.max_trials
            && self.stop_errors(&counts.total()) < cfg.stop.min_errors
        {
            let first = counts.trials;
            let last = (first + cfg.stop.batch).min(cfg.stop.max_trials);
            let batch = (first..last)
                .into_par_iter()
                .map(|frame| {
                    self.simulate_frame(
                        &op,
                        FrameId {
                            seed: cfg.seed,
                            point: point as u64,
                            frame,
                        },
                    )
                })
                .try_reduce(|| Counts::zero(self.cb.users()), |a, b| Ok(a + b))?;
            counts = counts + batch;
        }
        let totals = counts.total();
        Ok(PointResult {
            ebn0_db,
            noise_var: op.noise_var,
            pc: op.pa.common(),
            lambda: op.lambda,
            seed: cfg.seed,
            trials: counts.trials,
            totals,
            ser: ratio(totals.symbol_errors, totals.symbols),
            ber: ratio(totals.bit_errors, totals.bits),
            bler: ratio(totals.block_errors, totals.blocks),
            wall_time_s: start.elapsed().as_secs_f64(),
            per_user: cfg.per_user.then(|| counts.users.clone()),
        })
    }
}

/// Runs every point of the sweep on the current rayon pool.
pub fn run_sweep(cfg: &SimConfig) -> Result<SimReport> {
    let prepared = cfg.prepare()?;
    let points = (0..cfg.ebn0_db.len())
        .map(|p| prepared.run_point(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SimReport {
        scenario: cfg.scenario,
        config_hash: cfg.hash(),
        points,
    })
}

//! Downlink channel: power-weighted superposition, per-resource fading and noise,
//! zero-forcing, interference cancellation and Eb/N0 calibration.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qpsk::qpsk_modulate;
use crate::rate_split::{phase_plan, Phase2Kind, SplitConfig};
use crate::scma::CodebookSet;

/// Gains with magnitude at or below this are treated as erasures by [`zf_equalize`].
pub const ZF_GAIN_MIN: f64 = 1e-6;

/// Max-min-fair common power fraction, tabulated by Eb/N0 in dB.
pub const MMF_TABLE: [(f64, f64); 7] = [
    (0.0, 0.9098),
    (5.0, 0.9114),
    (10.0, 0.9156),
    (15.0, 0.9252),
    (20.0, 0.9409),
    (25.0, 0.9585),
    (30.0, 0.9734),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    /// i.i.d. CN(0, 1) gain per resource and channel use.
    Rayleigh,
    /// Unit gains.
    Awgn,
}

/// What one receiver sees during one channel use: a gain per resource and the
/// complex noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub gains: Vec<Complex64>,
    pub noise_var: f64,
}

impl ChannelRealization {
    pub fn new(gains: Vec<Complex64>, noise_var: f64) -> Result<Self> {
        if !(noise_var > 0.0 && noise_var.is_finite()) {
            return Err(Error::NoiseVariance(noise_var));
        }
        if gains.iter().any(|g| !g.re.is_finite() || !g.im.is_finite()) {
            return Err(Error::InvalidArgument("channel gains must be finite".into()));
        }
        Ok(Self { gains, noise_var })
    }

    /// Draws gains for `resources` resources. AWGN consumes no randomness.
    pub fn draw<R: Rng + ?Sized>(
        kind: ChannelKind,
        resources: usize,
        noise_var: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let gains = match kind {
            ChannelKind::Awgn => vec![Complex64::new(1.0, 0.0); resources],
            ChannelKind::Rayleigh => (0..resources).map(|_| complex_gaussian(rng, 1.0)).collect(),
        };
        Self::new(gains, noise_var)
    }
}

/// One CN(0, `variance`) sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * scale, im * scale)
}

/// Power split between the common and private layers, `P_c + P_p = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    common: f64,
    private: f64,
}

impl PowerAllocation {
    /// Any split with `P_c` in `[0, 1]`.
    pub fn new(common: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&common) {
            return Err(Error::PowerAllocation(format!("P_c = {common} is outside [0, 1]")));
        }
        Ok(Self {
            common,
            private: 1.0 - common,
        })
    }

    /// A split for uses carrying both layers, where the common layer must dominate.
    pub fn superposed(common: f64) -> Result<Self> {
        if !(common > 0.5 && common < 1.0) {
            return Err(Error::PowerAllocation(format!(
                "superposed transmission needs 0.5 < P_c < 1, got {common}"
            )));
        }
        Self::new(common)
    }

    pub fn common_only() -> Self {
        Self {
            common: 1.0,
            private: 0.0,
        }
    }

    pub fn private_only() -> Self {
        Self {
            common: 0.0,
            private: 1.0,
        }
    }

    /// P_c.
    pub fn common(&self) -> f64 {
        self.common
    }

    /// P_p.
    pub fn private(&self) -> f64 {
        self.private
    }
}

/// Nearest tabulated max-min-fair split; halfway points go to the lower SNR.
pub fn mmf_power_lookup(ebn0_db: f64) -> PowerAllocation {
    let mut best = MMF_TABLE[0];
    for &entry in &MMF_TABLE[1..] {
        if (entry.0 - ebn0_db).abs() < (best.0 - ebn0_db).abs() {
            best = entry;
        }
    }
    PowerAllocation::new(best.1).expect("tabulated values are valid")
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension {
            what,
            expected,
            found,
        })
    }
}

/// `s = sqrt(P_c) common + sqrt(P_p) sum_j privates[j]`. A layer with zero power
/// is left out entirely.
pub fn superpose(
    common: &[Complex64],
    privates: &[Vec<Complex64>],
    pa: &PowerAllocation,
) -> Result<Vec<Complex64>> {
    let k = common.len();
    for p in privates {
        check_len("private codeword", k, p.len())?;
    }
    let mut s = vec![Complex64::new(0.0, 0.0); k];
    if pa.common() > 0.0 {
        let a = pa.common().sqrt();
        for (out, c) in s.iter_mut().zip(common) {
            *out = c * a;
        }
    }
    if pa.private() > 0.0 && !privates.is_empty() {
        let mut sum = vec![Complex64::new(0.0, 0.0); k];
        for p in privates {
            for (acc, x) in sum.iter_mut().zip(p) {
                *acc += x;
            }
        }
        let b = pa.private().sqrt();
        if pa.common() > 0.0 {
            for (out, x) in s.iter_mut().zip(&sum) {
                *out += x * b;
            }
        } else {
            for (out, x) in s.iter_mut().zip(&sum) {
                *out = x * b;
            }
        }
    }
    Ok(s)
}

/// `y_k = h_k s_k + w_k` with `w_k ~ CN(0, noise_var)`.
pub fn transmit<R: Rng + ?Sized>(
    s: &[Complex64],
    ch: &ChannelRealization,
    rng: &mut R,
) -> Result<Vec<Complex64>> {
    check_len("transmitted vector", ch.gains.len(), s.len())?;
    Ok(s.iter()
        .zip(&ch.gains)
        .map(|(x, h)| h * x + complex_gaussian(rng, ch.noise_var))
        .collect())
}

/// Zero-forced observation with per-element noise bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct Equalized {
    /// `y_k / h_k`, or zero for erased elements.
    pub y: Vec<Complex64>,
    /// Complex noise variance after equalization, `noise_var / |h_k|^2`; infinite when erased.
    pub noise_vars: Vec<f64>,
    pub erased: Vec<bool>,
}

pub fn zf_equalize(y: &[Complex64], h: &[Complex64], noise_var: f64) -> Result<Equalized> {
    check_len("gain vector", y.len(), h.len())?;
    let mut out = Equalized {
        y: Vec::with_capacity(y.len()),
        noise_vars: Vec::with_capacity(y.len()),
        erased: Vec::with_capacity(y.len()),
    };
    for (&v, &g) in y.iter().zip(h) {
        if g.norm() <= ZF_GAIN_MIN {
            out.y.push(Complex64::new(0.0, 0.0));
            out.noise_vars.push(f64::INFINITY);
            out.erased.push(true);
        } else {
            out.y.push(v / g);
            out.noise_vars.push(noise_var / g.norm_sqr());
            out.erased.push(false);
        }
    }
    Ok(out)
}

/// `y - sqrt(P_c) h ⊙ soft_common`.
pub fn soft_sic(
    y: &[Complex64],
    h: &[Complex64],
    pa: &PowerAllocation,
    soft_common: &[Complex64],
) -> Result<Vec<Complex64>> {
    check_len("gain vector", y.len(), h.len())?;
    check_len("soft common symbols", y.len(), soft_common.len())?;
    let a = pa.common().sqrt();
    Ok(y.iter()
        .zip(h)
        .zip(soft_common)
        .map(|((v, g), s)| v - g * s * a)
        .collect())
}

/// Remodulates hard common decisions and cancels them like [`soft_sic`].
pub fn hard_sic(
    y: &[Complex64],
    h: &[Complex64],
    pa: &PowerAllocation,
    hard_common_bits: &[[u8; 2]],
) -> Result<Vec<Complex64>> {
    soft_sic(y, h, pa, &qpsk_modulate(hard_common_bits))
}

/// Energy and information accounting of one frame, for Eb/N0 calibration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Information bits per frame, summed over users.
    pub info_bits: f64,
    pub channel_uses: f64,
    pub resources: usize,
    /// Transmitted energy per frame, summed over resources and uses.
    pub energy: f64,
}

impl LinkBudget {
    /// Uncoded RS-SCMA frame: QPSK common symbols (2 bits) and SCMA private
    /// symbols (log2 M bits), with `pa` applied to the superposed uses only.
    pub fn uncoded(cfg: &SplitConfig, pa: &PowerAllocation, cb: &CodebookSet) -> Self {
        let k = cfg.resources() as f64;
        let private_energy = cb.mean_superposed_energy();
        let plan = phase_plan(cfg);
        let phase2_energy = match plan.phase2_kind {
            Phase2Kind::PrivateOnly => private_energy,
            Phase2Kind::CommonOnly => 1.0,
            Phase2Kind::None => 0.0,
        };
        let per_use =
            plan.phase1_uses as f64 * (pa.common() + pa.private() * private_energy)
                + plan.phase2_uses as f64 * phase2_energy;
        let info_bits = (cfg.resources() * cfg.common_len()) as f64 * 2.0
            + (cfg.users() * cfg.private_len()) as f64 * cb.bits_per_symbol() as f64;
        Self {
            info_bits,
            channel_uses: cfg.channel_uses() as f64,
            resources: cfg.resources(),
            energy: per_use * k,
        }
    }

    /// Coded RS-SCMA block: every use superposes a common and a private layer;
    /// only information bits are counted.
    pub fn coded(
        common_info_bits: usize,
        private_info_bits: usize,
        channel_uses: usize,
        pa: &PowerAllocation,
        cb: &CodebookSet,
    ) -> Self {
        let k = cb.resources();
        let per_use = pa.common() + pa.private() * cb.mean_superposed_energy();
        Self {
            info_bits: (k * common_info_bits + cb.users() * private_info_bits) as f64,
            channel_uses: channel_uses as f64,
            resources: k,
            energy: per_use * k as f64 * channel_uses as f64,
        }
    }

    /// Average energy per resource element.
    pub fn energy_per_resource_use(&self) -> f64 {
        self.energy / (self.resources as f64 * self.channel_uses)
    }

    pub fn bits_per_resource_use(&self) -> f64 {
        self.info_bits / (self.resources as f64 * self.channel_uses)
    }

    /// `sigma^2 = E_s / (bits per resource use * 10^(Eb/N0 / 10))`.
    pub fn noise_var(&self, ebn0_db: f64) -> f64 {
        self.energy_per_resource_use()
            / (self.bits_per_resource_use() * 10f64.powf(ebn0_db / 10.0))
    }
}

/// Complex noise variance giving the requested Eb/N0 for an uncoded frame.
pub fn ebn0_to_noise_var(
    ebn0_db: f64,
    cfg: &SplitConfig,
    pa: &PowerAllocation,
    cb: &CodebookSet,
) -> f64 {
    LinkBudget::uncoded(cfg, pa, cb).noise_var(ebn0_db)
}

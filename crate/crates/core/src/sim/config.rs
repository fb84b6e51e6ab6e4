use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::ChannelKind;
use crate::error::{Error, Result};
use crate::ldpc::ParityCheckMatrix;
use crate::rate_split::SplitConfig;
use crate::receivers::{CodedLink, RxOptions, SicMode};
use crate::scma::CodebookSet;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    UncodedRsScma,
    CodedRsScma,
    ScmaBaseline,
    QpskBaseline,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::UncodedRsScma => "uncoded-rs-scma",
            Scenario::CodedRsScma => "coded-rs-scma",
            Scenario::ScmaBaseline => "scma-baseline",
            Scenario::QpskBaseline => "qpsk-baseline",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReceiverKind {
    #[default]
    Rx1,
    Rx2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdpcConfig {
    /// `builtin:<name>` or an alist path.
    pub common: String,
    pub private: String,
    /// Expected code rates; checked against the loaded matrices when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub private_rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StopRule {
    /// Errors (symbol errors uncoded, block errors coded) ending a point.
    pub min_errors: u64,
    pub max_trials: u64,
    /// Frames simulated between stop-rule checks.
    pub batch: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 100,
            max_trials: 10_000_000,
            batch: 64,
        }
    }
}

/// Tolerance on configured LDPC rates.
pub const RATE_TOLERANCE: f64 = 0.01;

fn default_codebook() -> String {
    "builtin:scma-6x4".into()
}
fn default_symbols() -> usize {
    2
}
fn default_channel() -> ChannelKind {
    ChannelKind::Rayleigh
}
fn default_mpa() -> usize {
    crate::scma::DEFAULT_MPA_ITERATIONS
}
fn default_bp() -> usize {
    crate::ldpc::DEFAULT_BP_ITERATIONS
}

/// A Monte-Carlo sweep, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub version: u32,
    pub scenario: Scenario,
    /// `builtin:<name>` or a codebook file path.
    #[serde(default = "default_codebook")]
    pub codebook: String,
    #[serde(default)]
    pub alpha: f64,
    /// Symbols per user and frame (N).
    #[serde(default = "default_symbols")]
    pub symbols_per_user: usize,
    pub ebn0_db: Vec<f64>,
    #[serde(default = "default_channel")]
    pub channel: ChannelKind,
    #[serde(default)]
    pub sic: SicMode,
    #[serde(default)]
    pub receiver: ReceiverKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ldpc: Option<LdpcConfig>,
    #[serde(default = "default_mpa")]
    pub mpa_iterations: usize,
    #[serde(default = "default_bp")]
    pub bp_max_iterations: usize,
    /// Adds the residual common interference to the post-SIC noise variance.
    #[serde(default)]
    pub residual_variance: bool,
    /// Fixed common power fraction instead of the max-min-fair table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common_power: Option<f64>,
    /// Fixed complex noise variance instead of Eb/N0 calibration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_var: Option<f64>,
    #[serde(default)]
    pub stop: StopRule,
    /// Keep per-user counts in the report.
    #[serde(default)]
    pub per_user: bool,
    #[serde(default)]
    pub seed: u64,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl SimConfig {
    /// Defaults for `scenario` with the given sweep.
    pub fn new(scenario: Scenario, ebn0_db: Vec<f64>) -> Self {
        Self {
            version: CONFIG_VERSION,
            scenario,
            codebook: default_codebook(),
            alpha: 0.0,
            symbols_per_user: default_symbols(),
            ebn0_db,
            channel: default_channel(),
            sic: SicMode::Soft,
            receiver: ReceiverKind::Rx1,
            ldpc: None,
            mpa_iterations: default_mpa(),
            bp_max_iterations: default_bp(),
            residual_variance: false,
            common_power: None,
            noise_var: None,
            stop: StopRule::default(),
            per_user: false,
            seed: 0,
            base_dir: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical TOML form.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    /// Structural checks that need no file access.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.version != CONFIG_VERSION {
            return fail(format!("unsupported config version {}", self.version));
        }
        if self.ebn0_db.is_empty() {
            return fail("ebn0_db sweep is empty".into());
        }
        if self.ebn0_db.iter().any(|x| !x.is_finite()) {
            return fail("ebn0_db entries must be finite".into());
        }
        if self.stop.min_errors == 0 {
            return fail("stop.min_errors must be at least 1".into());
        }
        if self.stop.max_trials == 0 || self.stop.batch == 0 {
            return fail("stop.max_trials and stop.batch must be positive".into());
        }
        if self.mpa_iterations == 0 || self.bp_max_iterations == 0 {
            return fail("iteration counts must be positive".into());
        }
        if let Some(v) = self.noise_var {
            if !(v > 0.0 && v.is_finite()) {
                return fail(format!("noise_var must be positive, got {v}"));
            }
        }
        if let Some(p) = self.common_power {
            if !(p > 0.0 && p < 1.0) {
                return fail(format!("common_power must lie in (0, 1), got {p}"));
            }
        }
        match self.scenario {
            Scenario::CodedRsScma if self.ldpc.is_none() => {
                fail("coded-rs-scma needs an [ldpc] table".into())
            }
            Scenario::UncodedRsScma if !(0.0..=1.0).contains(&self.alpha) => {
                fail(format!("alpha {} outside [0, 1]", self.alpha))
            }
            _ if self.symbols_per_user == 0 => fail("symbols_per_user must be positive".into()),
            _ => Ok(()),
        }
    }

    fn resolve(&self, source: &str) -> String {
        if source.starts_with("builtin:") {
            return source.to_string();
        }
        match &self.base_dir {
            Some(dir) if Path::new(source).is_relative() => dir.join(source).display().to_string(),
            _ => source.to_string(),
        }
    }

    /// Loads the codebook and codes and checks cross-field consistency.
    pub fn prepare(&self) -> Result<Prepared> {
        self.validate()?;
        let cb = CodebookSet::load(self.resolve(&self.codebook))?;
        // coded blocks superpose every use, which is the alpha = 1/2 schedule
        let (alpha, n) = match self.scenario {
            Scenario::UncodedRsScma => (self.alpha, self.symbols_per_user),
            Scenario::ScmaBaseline => (0.0, self.symbols_per_user),
            Scenario::QpskBaseline => (1.0, self.symbols_per_user),
            Scenario::CodedRsScma => (0.5, 2),
        };
        let split = SplitConfig::new(alpha, n, cb.users(), cb.resources())
            .map_err(|e| Error::Config(e.to_string()))?;
        let codes = match (&self.ldpc, self.scenario) {
            (Some(l), Scenario::CodedRsScma) => {
                let hc = ParityCheckMatrix::load(&self.resolve(&l.common))?;
                let hp = ParityCheckMatrix::load(&self.resolve(&l.private))?;
                for (name, h, rate) in [("common", &hc, l.common_rate), ("private", &hp, l.private_rate)] {
                    if let Some(r) = rate {
                        if (h.rate() - r).abs() > RATE_TOLERANCE {
                            return Err(Error::Config(format!(
                                "{name} code has rate {:.4}, config says {r}",
                                h.rate()
                            )));
                        }
                    }
                }
                CodedLink::new(&hc, &hp, &cb)?;
                Some((hc, hp))
            }
            _ => None,
        };
        Ok(Prepared {
            config: self.clone(),
            cb,
            split,
            codes,
        })
    }

    pub fn rx_options(&self) -> RxOptions {
        RxOptions {
            mpa_iterations: self.mpa_iterations,
            bp_max_iterations: self.bp_max_iterations,
            residual_variance: self.residual_variance,
        }
    }
}

/// A validated configuration with its artifacts loaded.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub config: SimConfig,
    pub cb: CodebookSet,
    pub split: SplitConfig,
    pub codes: Option<(ParityCheckMatrix, ParityCheckMatrix)>,
}

impl Prepared {
    pub fn link(&self) -> Option<CodedLink<'_>> {
        self.codes.as_ref().map(|(c, p)| CodedLink {
            common: c,
            private: p,
        })
    }
}

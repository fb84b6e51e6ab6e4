//! Link-level simulation of rate-splitting sparse code multiple access (RS-SCMA)
//! downlinks.
//!
//! Each user's message is split into a common part, QPSK-modulated on one
//! resource per split user, and a private part carried by SCMA codebooks. The
//! two layers are superposed with a power split and received over per-resource
//! fading. Receivers decode the common layer first, cancel it (soft or hard),
//! then run message passing on the residual.
//!
//! Modules, bottom up:
//!
//! - [`scma`]: codebooks, encoding, MPA and exhaustive ML detection
//! - [`qpsk`]: Gray QPSK, exact LLRs, soft symbols
//! - [`rate_split`]: message splitting, transmission phases, overloading factor
//! - [`channel`]: superposition, fading, noise, ZF, interference cancellation
//! - [`ldpc`]: parity-check matrices, systematic encoding, belief propagation
//! - [`receivers`]: complete uncoded and LDPC-coded receiver pipelines
//! - [`sim`]: Monte-Carlo sweeps, configuration, CSV output and analysis tables

pub mod channel;
pub mod error;
pub mod ldpc;
pub mod math;
pub mod qpsk;
pub mod rate_split;
pub mod receivers;
pub mod scma;
pub mod sim;

pub use error::{Error, Result};
pub use math::LLR_MAX;

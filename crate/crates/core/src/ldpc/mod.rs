//! Binary LDPC codes: alist I/O, systematic encoding and sum-product decoding.
//!
//! Bundled matrices are available through [`ParityCheckMatrix::builtin`]:
//!
//! | name          | n   | k   | rate  |
//! |---------------|-----|-----|-------|
//! | `hamming-7-4` | 7   | 4   | 0.571 |
//! | `peg-256-83`  | 256 | 83  | 0.324 |
//! | `peg-256-120` | 256 | 120 | 0.469 |
//! | `peg-256-161` | 256 | 161 | 0.629 |
//!
//! The n = 256 matrices are column-weight-3 PEG constructions.

mod bp;
mod gf2;
mod matrix;
mod peg;

pub use bp::{bp_decode, BpOutput, DEFAULT_BP_ITERATIONS};
pub use matrix::ParityCheckMatrix;
pub use peg::peg;

use crate::error::{Error, Result};

pub const BUILTIN_MATRICES: [&str; 4] = ["hamming-7-4", "peg-256-83", "peg-256-120", "peg-256-161"];

impl ParityCheckMatrix {
    pub fn builtin(name: &str) -> Result<Self> {
        let text = match name {
            "hamming-7-4" => include_str!("../../data/ldpc/hamming_7_4.alist"),
            "peg-256-83" => include_str!("../../data/ldpc/peg_256_83.alist"),
            "peg-256-120" => include_str!("../../data/ldpc/peg_256_120.alist"),
            "peg-256-161" => include_str!("../../data/ldpc/peg_256_161.alist"),
            _ => return Err(Error::Alist(format!("unknown builtin matrix `{name}`"))),
        };
        Self::from_alist(text)
    }

    /// Loads `builtin:<name>` or an alist file path.
    pub fn load(source: &str) -> Result<Self> {
        match source.strip_prefix("builtin:") {
            Some(name) => Self::builtin(name),
            None => Self::load_alist(source),
        }
    }
}

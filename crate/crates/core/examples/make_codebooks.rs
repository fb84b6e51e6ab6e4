//! Regenerates the bundled placeholder codebooks in `data/`.
//!
//! Each user spreads a QPSK symbol over its two resources. The second resource
//! uses a relabelled QPSK so that nearest neighbours on one resource are not
//! nearest neighbours on the other, and the users sharing a resource get evenly
//! spaced phase rotations within a quarter turn.
//!
//! Usage: `cargo run -p rsscma --example make_codebooks -- <out_dir>`

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use rsscma::scma::{CodebookSet, IndicatorMatrix};

const SECOND_DIM_LABELS: [usize; 4] = [0, 2, 1, 3];

fn design(rows: &[Vec<u8>]) -> CodebookSet {
    let f = IndicatorMatrix::from_rows(rows).expect("indicator");
    let qpsk: Vec<Complex64> = (0..4)
        .map(|i| Complex64::from_polar(1.0, FRAC_PI_4 + FRAC_PI_2 * i as f64))
        .collect();
    let scale = 1.0 / (f.user_degree(0) as f64).sqrt();
    let mut books = Vec::new();
    for j in 0..f.users() {
        let mut book = Vec::new();
        for m in 0..4 {
            let mut word = vec![Complex64::new(0.0, 0.0); f.resources()];
            for (dim, &k) in f.resources_of(j).iter().enumerate() {
                let slot = f.users_on(k).iter().position(|&u| u == j).unwrap();
                let theta = slot as f64 * FRAC_PI_2 / f.resource_degree(k) as f64;
                let label = if dim % 2 == 0 { m } else { SECOND_DIM_LABELS[m] };
                word[k] = qpsk[label] * Complex64::from_polar(scale, theta);
            }
            book.push(word);
        }
        books.push(book);
    }
    CodebookSet::new(f, 4, books).expect("valid codebook")
}

fn pairs_indicator(resources: usize) -> Vec<Vec<u8>> {
    let mut cols = Vec::new();
    for a in 0..resources {
        for b in a + 1..resources {
            cols.push((a, b));
        }
    }
    (0..resources)
        .map(|k| cols.iter().map(|&(a, b)| (a == k || b == k) as u8).collect())
        .collect()
}

fn main() {
    let out = std::env::args().nth(1).unwrap_or_else(|| "crates/core/data".into());
    let f6x4 = vec![
        vec![1, 0, 1, 0, 1, 0],
        vec![0, 1, 1, 0, 0, 1],
        vec![1, 0, 0, 1, 0, 1],
        vec![0, 1, 0, 1, 1, 0],
    ];
    let sets = [
        ("scma_6x4.cb", "J=6 users, K=4 resources, M=4", design(&f6x4)),
        ("scma_6x15.cb", "J=15 users, K=6 resources, M=4", design(&pairs_indicator(6))),
    ];
    for (file, title, cb) in sets {
        let text = format!(
            "# Placeholder SCMA codebook set: {title}.\n\
             # Rotated two-dimensional QPSK spreading; replace with an optimized set of the same shape.\n{}",
            cb.to_text()
        );
        std::fs::write(format!("{out}/{file}"), text).expect("write codebook");
    }
}

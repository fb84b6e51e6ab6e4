//! Regenerates the bundled parity-check matrices in `data/ldpc/`.
//!
//! `cargo run -p rsscma --example make_ldpc`

use std::path::Path;

use rsscma::ldpc::{peg, ParityCheckMatrix};

fn main() -> rsscma::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/ldpc");
    std::fs::create_dir_all(&dir).expect("create data/ldpc");

    let hamming =
        ParityCheckMatrix::from_checks(7, vec![vec![0, 1, 3, 4], vec![0, 2, 3, 5], vec![1, 2, 3, 6]])?;
    write(&dir.join("hamming_7_4.alist"), &hamming);

    for k in [83, 120, 161] {
        let n = 256;
        let h = (0..)
            .find_map(|seed| peg(n, n - k, 3, seed).ok())
            .expect("some seed gives full rank");
        assert_eq!(h.k(), k);
        write(&dir.join(format!("peg_{n}_{k}.alist")), &h);
    }
    Ok(())
}

fn write(path: &Path, h: &ParityCheckMatrix) {
    std::fs::write(path, h.to_alist()).expect("write alist");
    println!("{}: n={} k={} rate={:.4}", path.display(), h.n(), h.k(), h.rate());
}

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ParityCheckMatrix;
use crate::error::{Error, Result};

/// Progressive edge-growth construction of a column-regular parity-check matrix.
///
/// Each new edge of bit `v` goes to a lowest-degree check among those farthest
/// from `v` in the current graph; remaining ties are broken by a seeded RNG.
/// Fails with [`Error::RankDeficient`] if the result lacks full row rank.
pub fn peg(n: usize, m: usize, col_degree: usize, seed: u64) -> Result<ParityCheckMatrix> {
    if m == 0 || m >= n || col_degree == 0 || col_degree > m {
        return Err(Error::InvalidArgument(format!(
            "cannot build a {m}x{n} matrix with column degree {col_degree}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut cols: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut mark = vec![usize::MAX; m];

    for v in 0..n {
        for _ in 0..col_degree {
            let candidates = farthest_checks(v, &rows, &cols, &mut mark);
            let min_deg = candidates.iter().map(|&c| rows[c].len()).min().unwrap();
            let best: Vec<usize> = candidates
                .into_iter()
                .filter(|&c| rows[c].len() == min_deg)
                .collect();
            let &c = best.choose(&mut rng).unwrap();
            rows[c].push(v);
            cols[v].push(c);
        }
    }
    ParityCheckMatrix::from_checks(n, rows)
}

fn farthest_checks(
    v: usize,
    rows: &[Vec<usize>],
    cols: &[Vec<usize>],
    mark: &mut [usize],
) -> Vec<usize> {
    let m = rows.len();
    mark.fill(usize::MAX);
    let unreached = |mark: &[usize]| (0..m).filter(|&c| mark[c] == usize::MAX).collect::<Vec<_>>();
    if cols[v].is_empty() {
        return (0..m).collect();
    }
    let mut frontier: Vec<usize> = cols[v].clone();
    for &c in &frontier {
        mark[c] = 0;
    }
    let mut reached = frontier.len();
    let mut depth = 0;
    loop {
        if reached == m {
            // everything is reachable: fall back to checks not adjacent to v
            return (0..m).filter(|c| !cols[v].contains(c)).collect();
        }
        depth += 1;
        let before = unreached(mark);
        let mut next = Vec::new();
        for &c in &frontier {
            for &u in &rows[c] {
                for &c2 in &cols[u] {
                    if mark[c2] == usize::MAX {
                        mark[c2] = depth;
                        next.push(c2);
                    }
                }
            }
        }
        if next.is_empty() || reached + next.len() == m {
            return before;
        }
        reached += next.len();
        frontier = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_columns_and_near_regular_rows() {
        let h = peg(64, 32, 3, 1).unwrap();
        assert_eq!((h.n(), h.m(), h.k()), (64, 32, 32));
        assert!((0..64).all(|v| h.checks_of(v).len() == 3));
        let degrees: Vec<usize> = (0..32).map(|i| h.check(i).len()).collect();
        assert_eq!(degrees.iter().sum::<usize>(), 192);
        assert!(*degrees.iter().max().unwrap() <= 8 && *degrees.iter().min().unwrap() >= 4);
    }

    #[test]
    fn no_four_cycles_in_sparse_graph() {
        let h = peg(96, 48, 3, 7).unwrap();
        for a in 0..h.m() {
            for b in a + 1..h.m() {
                let shared = h.check(a).iter().filter(|v| h.check(b).contains(v)).count();
                assert!(shared <= 1, "checks {a} and {b} share {shared} bits");
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(peg(40, 20, 3, 5).unwrap(), peg(40, 20, 3, 5).unwrap());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(peg(10, 10, 3, 0).is_err());
        assert!(peg(10, 2, 3, 0).is_err());
        assert!(peg(10, 0, 1, 0).is_err());
    }
}

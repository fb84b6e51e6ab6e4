use std::fmt::Write as _;
use std::path::Path;

use super::gf2::SystematicEncoder;
use crate::error::{Error, Result};

/// Sparse binary parity-check matrix with a precomputed systematic encoder.
///
/// Construction rejects empty rows or columns and matrices without full row
/// rank over GF(2), so `k = n - m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityCheckMatrix {
    n: usize,
    /// Column indices of each check, increasing.
    rows: Vec<Vec<usize>>,
    /// Row indices of each bit, increasing.
    cols: Vec<Vec<usize>>,
    pub(crate) graph: TannerGraph,
    encoder: SystematicEncoder,
}

/// Edge layout for message passing; edges are numbered check-major.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TannerGraph {
    /// Edges of check `i` are `check_offsets[i]..check_offsets[i + 1]`.
    pub(crate) check_offsets: Vec<usize>,
    pub(crate) edge_var: Vec<usize>,
    /// Edges of bit `v` are `var_edges[var_offsets[v]..var_offsets[v + 1]]`.
    pub(crate) var_offsets: Vec<usize>,
    pub(crate) var_edges: Vec<usize>,
}

impl TannerGraph {
    fn new(n: usize, rows: &[Vec<usize>]) -> Self {
        let mut check_offsets = vec![0];
        let mut edge_var = Vec::new();
        let mut per_var = vec![Vec::new(); n];
        for row in rows {
            for &v in row {
                per_var[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_offsets.push(edge_var.len());
        }
        let mut var_offsets = vec![0];
        let mut var_edges = Vec::with_capacity(edge_var.len());
        for edges in per_var {
            var_edges.extend(edges);
            var_offsets.push(var_edges.len());
        }
        Self {
            check_offsets,
            edge_var,
            var_offsets,
            var_edges,
        }
    }
}

impl ParityCheckMatrix {
    /// Builds the matrix from the bit positions of each check.
    pub fn from_checks(n: usize, checks: Vec<Vec<usize>>) -> Result<Self> {
        let m = checks.len();
        if n == 0 || m == 0 {
            return Err(Error::Alist(format!("degenerate dimensions {m}x{n}")));
        }
        let mut rows = Vec::with_capacity(m);
        let mut cols = vec![Vec::new(); n];
        for (i, mut check) in checks.into_iter().enumerate() {
            check.sort_unstable();
            if check.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Alist(format!("check {i} lists a bit twice")));
            }
            if check.is_empty() {
                return Err(Error::Alist(format!("check {i} is empty")));
            }
            if let Some(&v) = check.iter().find(|&&v| v >= n) {
                return Err(Error::Alist(format!("check {i} references bit {v} >= n = {n}")));
            }
            for &v in &check {
                cols[v].push(i);
            }
            rows.push(check);
        }
        if let Some(v) = cols.iter().position(Vec::is_empty) {
            return Err(Error::Alist(format!("bit {v} is not in any check")));
        }
        let encoder = SystematicEncoder::new(n, &rows)?;
        let graph = TannerGraph::new(n, &rows);
        Ok(Self {
            n,
            rows,
            cols,
            graph,
            encoder,
        })
    }

    /// Parses the alist interchange format (1-based indices, zero padding optional).
    pub fn from_alist(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let mut numbers = |what: &str| -> Result<Vec<usize>> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Alist(format!("unexpected end of input reading {what}")))?;
            line.split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|e| Error::Alist(format!("bad integer `{t}` in {what}: {e}")))
                })
                .collect()
        };
        let dims = numbers("dimensions")?;
        let [n, m] = dims[..] else {
            return Err(Error::Alist("first line must be `n m`".into()));
        };
        let maxes = numbers("maximum degrees")?;
        let [max_col, max_row] = maxes[..] else {
            return Err(Error::Alist("second line must hold two maximum degrees".into()));
        };
        let col_degrees = numbers("column degrees")?;
        let row_degrees = numbers("row degrees")?;
        if col_degrees.len() != n || row_degrees.len() != m {
            return Err(Error::Alist(format!(
                "degree lists have {} and {} entries for a {m}x{n} matrix",
                col_degrees.len(),
                row_degrees.len()
            )));
        }
        if col_degrees.iter().max() != Some(&max_col) || row_degrees.iter().max() != Some(&max_row) {
            return Err(Error::Alist("maximum degrees disagree with degree lists".into()));
        }
        let mut read_lists = |count: usize, degrees: &[usize], bound: usize, what: &str| {
            (0..count)
                .map(|i| {
                    let entries: Vec<usize> = numbers(what)?.into_iter().filter(|&v| v != 0).collect();
                    if entries.len() != degrees[i] {
                        return Err(Error::Alist(format!(
                            "{what} {} has {} entries, degree list says {}",
                            i + 1,
                            entries.len(),
                            degrees[i]
                        )));
                    }
                    if let Some(v) = entries.iter().find(|&&v| v > bound) {
                        return Err(Error::Alist(format!("{what} {} index {v} out of range", i + 1)));
                    }
                    Ok(entries.into_iter().map(|v| v - 1).collect::<Vec<usize>>())
                })
                .collect::<Result<Vec<_>>>()
        };
        let col_lists = read_lists(n, &col_degrees, m, "column")?;
        let row_lists = read_lists(m, &row_degrees, n, "row")?;
        if lines.next().is_some() {
            return Err(Error::Alist("trailing content after row lists".into()));
        }
        let h = Self::from_checks(n, row_lists)?;
        for (v, list) in col_lists.into_iter().enumerate() {
            let mut list = list;
            list.sort_unstable();
            if list != h.cols[v] {
                return Err(Error::Alist(format!(
                    "column {} disagrees with the row lists",
                    v + 1
                )));
            }
        }
        Ok(h)
    }

    pub fn load_alist(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_alist(&text)
    }

    pub fn to_alist(&self) -> String {
        let mut out = String::new();
        let max_col = self.cols.iter().map(Vec::len).max().unwrap_or(0);
        let max_row = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let join = |v: &mut dyn Iterator<Item = usize>| {
            v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        };
        writeln!(out, "{} {}", self.n, self.rows.len()).unwrap();
        writeln!(out, "{max_col} {max_row}").unwrap();
        writeln!(out, "{}", join(&mut self.cols.iter().map(Vec::len))).unwrap();
        writeln!(out, "{}", join(&mut self.rows.iter().map(Vec::len))).unwrap();
        for col in &self.cols {
            let padded = col.iter().map(|r| r + 1).chain(std::iter::repeat(0)).take(max_col);
            writeln!(out, "{}", join(&mut padded.into_iter())).unwrap();
        }
        for row in &self.rows {
            let padded = row.iter().map(|c| c + 1).chain(std::iter::repeat(0)).take(max_row);
            writeln!(out, "{}", join(&mut padded.into_iter())).unwrap();
        }
        out
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of checks.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Information length.
    pub fn k(&self) -> usize {
        self.encoder.info_positions().len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n as f64
    }

    pub fn check(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn checks_of(&self, v: usize) -> &[usize] {
        &self.cols[v]
    }

    pub fn edges(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Codeword positions holding the information bits, in encoder input order.
    pub fn info_positions(&self) -> &[usize] {
        self.encoder.info_positions()
    }

    /// Systematic encoding: `info` lands on [`Self::info_positions`], parity fills the rest.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k() {
            return Err(Error::Dimension {
                what: "information word",
                expected: self.k(),
                found: info.len(),
            });
        }
        Ok(self.encoder.encode(info))
    }

    /// Reads the information bits back out of a codeword.
    pub fn extract_info(&self, codeword: &[u8]) -> Vec<u8> {
        self.info_positions().iter().map(|&p| codeword[p]).collect()
    }

    /// True iff `H bits = 0` over GF(2).
    pub fn syndrome_check(&self, bits: &[u8]) -> Result<bool> {
        if bits.len() != self.n {
            return Err(Error::Dimension {
                what: "codeword",
                expected: self.n,
                found: bits.len(),
            });
        }
        Ok(self.syndrome_is_zero(bits))
    }

    pub(crate) fn syndrome_is_zero(&self, bits: &[u8]) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &v| acc ^ (bits[v] & 1)) == 0)
    }

    /// Reorders the checks: check `i` of the result is check `order[i]` of `self`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.m()];
        if order.len() != self.m()
            || order.iter().any(|&i| i >= self.m() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::InvalidArgument(format!("{order:?} is not a row permutation")));
        }
        Self::from_checks(self.n, order.iter().map(|&i| self.rows[i].clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hamming() -> ParityCheckMatrix {
        ParityCheckMatrix::from_checks(7, vec![vec![0, 1, 3, 4], vec![0, 2, 3, 5], vec![1, 2, 3, 6]])
            .unwrap()
    }

    #[test]
    fn hamming_parameters() {
        let h = hamming();
        assert_eq!((h.n(), h.m(), h.k()), (7, 3, 4));
        assert!((h.rate() - 4.0 / 7.0).abs() < 1e-15);
        assert_eq!(h.edges(), 12);
    }

    #[test]
    fn alist_round_trip_and_parse() {
        let h = hamming();
        let text = h.to_alist();
        let back = ParityCheckMatrix::from_alist(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_alist(), text);
        // zero padding is optional
        let unpadded = "7 3\n3 4\n2 2 2 3 1 1 1\n4 4 4\n1 2\n1 3\n2 3\n1 2 3\n1\n2\n3\n\
                        1 2 4 5\n1 3 4 6\n2 3 4 7\n";
        assert_eq!(ParityCheckMatrix::from_alist(unpadded).unwrap(), h);
    }

    #[test]
    fn alist_validation() {
        // row degree list claims 3 but row lists 4 entries
        let bad_deg = "7 3\n3 4\n2 2 2 3 1 1 1\n3 4 4\n1 2\n1 3\n2 3\n1 2 3\n1\n2\n3\n\
                       1 2 4 5\n1 3 4 6\n2 3 4 7\n";
        assert!(matches!(ParityCheckMatrix::from_alist(bad_deg), Err(Error::Alist(_))));
        // column 1 says rows 1,2 but the rows put bit 1 in rows 1,3
        let inconsistent = "7 3\n3 4\n2 2 2 3 1 1 1\n4 4 4\n1 2\n1 3\n2 3\n1 2 3\n1\n2\n3\n\
                            1 2 4 5\n2 3 4 6\n1 3 4 7\n";
        assert!(ParityCheckMatrix::from_alist(inconsistent).is_err());
        assert!(ParityCheckMatrix::from_alist("7 3\n").is_err());
        assert!(ParityCheckMatrix::from_alist(&format!("{}1\n", hamming().to_alist())).is_err());
    }

    #[test]
    fn rank_deficient_matrix_is_rejected() {
        let err = ParityCheckMatrix::from_checks(4, vec![vec![0, 1], vec![2, 3], vec![0, 1, 2, 3]])
            .unwrap_err();
        assert!(matches!(err, Error::RankDeficient { rows: 3, rank: 2 }));
    }

    #[test]
    fn structural_validation() {
        assert!(ParityCheckMatrix::from_checks(3, vec![vec![0, 1]]).is_err());
        assert!(ParityCheckMatrix::from_checks(3, vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(ParityCheckMatrix::from_checks(3, vec![vec![0, 3]]).is_err());
        assert!(ParityCheckMatrix::from_checks(3, vec![vec![0, 0, 1, 2]]).is_err());
    }

    #[test]
    fn syndrome_checks() {
        let h = hamming();
        let c = h.encode(&[1, 0, 1, 1]).unwrap();
        assert!(h.syndrome_check(&c).unwrap());
        assert_eq!(h.extract_info(&c), vec![1, 0, 1, 1]);
        for v in 0..7 {
            let mut e = c.clone();
            e[v] ^= 1;
            assert!(!h.syndrome_check(&e).unwrap());
        }
        assert!(h.syndrome_check(&[0; 6]).is_err());
        assert!(h.encode(&[1, 0]).is_err());
    }
}

//! SCMA codebook sets and their text file format.
//!
//! A codebook file is plain text. Lines starting with `#` and blank lines are
//! ignored anywhere. The remaining lines are, in order:
//!
//! ```text
//! K J M                  three positive integers
//! f_11 ... f_1J          K rows of J entries, each 0 or 1 (the indicator matrix)
//! ...
//! re im                  for user 1, codeword 1: K lines, one complex entry each
//! ...                    then codeword 2 .. M of user 1, then user 2, ...
//! ```
//!
//! Every line must carry exactly the expected number of tokens and nothing may
//! follow the last codeword entry.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::indicator::{check_permutation, IndicatorMatrix};
use crate::error::{Error, Result};

/// Magnitude below which a codeword entry counts as a structural zero.
pub const ZERO_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of the per-user average codeword energy from 1.
pub const ENERGY_TOLERANCE: f64 = 1e-6;

const BUILTIN_6X4: &str = include_str!("../../data/scma_6x4.cb");
const BUILTIN_6X15: &str = include_str!("../../data/scma_6x15.cb");

/// Per-user sparse codebooks sharing one factor graph.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookSet {
    indicator: IndicatorMatrix,
    alphabet: usize,
    /// `codewords[j][m]` is the length-K codeword `m` of user `j`.
    codewords: Vec<Vec<Vec<Complex64>>>,
}

impl CodebookSet {
    /// Validates and assembles a codebook set.
    ///
    /// The sparsity of every user's codewords has to match the indicator column
    /// and each user's average codeword energy has to be 1.
    pub fn new(
        indicator: IndicatorMatrix,
        alphabet: usize,
        codewords: Vec<Vec<Vec<Complex64>>>,
    ) -> Result<Self> {
        if alphabet < 2 || !alphabet.is_power_of_two() {
            return Err(Error::InvalidCodebook(format!(
                "alphabet size {alphabet} is not a power of two >= 2"
            )));
        }
        let (k_res, j_users) = (indicator.resources(), indicator.users());
        if codewords.len() != j_users {
            return Err(Error::Dimension {
                what: "codebook users",
                expected: j_users,
                found: codewords.len(),
            });
        }
        for (j, book) in codewords.iter().enumerate() {
            if book.len() != alphabet {
                return Err(Error::Dimension {
                    what: "codewords per user",
                    expected: alphabet,
                    found: book.len(),
                });
            }
            for word in book {
                if word.len() != k_res {
                    return Err(Error::Dimension {
                        what: "codeword length",
                        expected: k_res,
                        found: word.len(),
                    });
                }
                if word.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                    return Err(Error::InvalidCodebook(format!(
                        "user {j} has a non-finite codeword entry"
                    )));
                }
            }
            for k in 0..k_res {
                let observed = book.iter().any(|w| w[k].norm() > ZERO_TOLERANCE);
                let declared = indicator.get(k, j);
                if observed != declared {
                    return Err(Error::SparsityMismatch {
                        user: j,
                        resource: k,
                        declared,
                        observed,
                    });
                }
            }
            let energy =
                book.iter().map(|w| w.iter().map(|x| x.norm_sqr()).sum::<f64>()).sum::<f64>()
                    / alphabet as f64;
            if (energy - 1.0).abs() > ENERGY_TOLERANCE {
                return Err(Error::EnergyNormalization { user: j, energy });
            }
        }
        Ok(Self {
            indicator,
            alphabet,
            codewords,
        })
    }

    /// Parses the text format described in the module documentation.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let mut next = |what: &str, count: usize| -> Result<(usize, Vec<&str>)> {
            let (line, content) = lines.next().ok_or_else(|| Error::Parse {
                line: text.lines().count(),
                msg: format!("unexpected end of file, expected {what}"),
            })?;
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != count {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {count} tokens for {what}, found {}", tokens.len()),
                });
            }
            Ok((line, tokens))
        };

        let (line, header) = next("header `K J M`", 3)?;
        let dims: Vec<usize> = header
            .iter()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line,
                msg: format!("bad header integer: {e}"),
            })?;
        let (k_res, j_users, alphabet) = (dims[0], dims[1], dims[2]);
        if k_res == 0 || j_users == 0 || alphabet == 0 {
            return Err(Error::Parse {
                line,
                msg: "K, J and M must be positive".into(),
            });
        }

        let mut rows = Vec::with_capacity(k_res);
        for _ in 0..k_res {
            let (line, tokens) = next("indicator row", j_users)?;
            let row = tokens
                .iter()
                .map(|t| match *t {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    other => Err(Error::Parse {
                        line,
                        msg: format!("indicator entry `{other}` is not 0 or 1"),
                    }),
                })
                .collect::<Result<Vec<u8>>>()?;
            rows.push(row);
        }
        let indicator = IndicatorMatrix::from_rows(&rows)?;

        let mut codewords = Vec::with_capacity(j_users);
        for _ in 0..j_users {
            let mut book = Vec::with_capacity(alphabet);
            for _ in 0..alphabet {
                let mut word = Vec::with_capacity(k_res);
                for _ in 0..k_res {
                    let (line, tokens) = next("codeword entry `re im`", 2)?;
                    let parse = |t: &str| {
                        t.parse::<f64>().map_err(|e| Error::Parse {
                            line,
                            msg: format!("bad float `{t}`: {e}"),
                        })
                    };
                    word.push(Complex64::new(parse(tokens[0])?, parse(tokens[1])?));
                }
                book.push(word);
            }
            codewords.push(book);
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                msg: "trailing content after the last codeword".into(),
            });
        }
        Self::new(indicator, alphabet, codewords)
    }

    /// Loads a codebook file, or a bundled set when `path` is `builtin:<name>`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        if let Some(name) = path.to_str().and_then(|s| s.strip_prefix("builtin:")) {
            return Self::builtin(name);
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Bundled sets: `scma-6x4` (J=6, K=4) and `scma-6x15` (K=6, J=15).
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "scma-6x4" => Self::parse(BUILTIN_6X4),
            "scma-6x15" => Self::parse(BUILTIN_6X15),
            other => Err(Error::InvalidCodebook(format!("no bundled codebook named `{other}`"))),
        }
    }

    /// Serializes to the text format with round-trip float precision.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let (k_res, j_users) = (self.resources(), self.users());
        writeln!(out, "{k_res} {j_users} {}", self.alphabet).unwrap();
        for row in self.indicator.rows() {
            let row: Vec<String> = row.iter().map(u8::to_string).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        for (j, book) in self.codewords.iter().enumerate() {
            for (m, word) in book.iter().enumerate() {
                writeln!(out, "# user {} codeword {}", j + 1, m).unwrap();
                for x in word {
                    writeln!(out, "{:?} {:?}", x.re, x.im).unwrap();
                }
            }
        }
        out
    }

    pub fn indicator(&self) -> &IndicatorMatrix {
        &self.indicator
    }

    /// K.
    pub fn resources(&self) -> usize {
        self.indicator.resources()
    }

    /// J.
    pub fn users(&self) -> usize {
        self.indicator.users()
    }

    /// M, codewords per user.
    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.alphabet.trailing_zeros() as usize
    }

    pub fn codeword(&self, user: usize, index: usize) -> &[Complex64] {
        &self.codewords[user][index]
    }

    /// Mean over resources of `E|sum_j x_jk|^2` for independent uniform symbols.
    pub fn mean_superposed_energy(&self) -> f64 {
        self.superposed_energy_per_resource().iter().sum::<f64>() / self.resources() as f64
    }

    /// Per-resource `E|sum_j x_jk|^2`, used as interference power seen by the common stream.
    pub fn superposed_energy_per_resource(&self) -> Vec<f64> {
        let m = self.alphabet as f64;
        (0..self.resources())
            .map(|k| {
                let mut power = 0.0;
                let mut mean = Complex64::new(0.0, 0.0);
                for j in 0..self.users() {
                    let mu: Complex64 =
                        self.codewords[j].iter().map(|w| w[k]).sum::<Complex64>() / m;
                    let second: f64 =
                        self.codewords[j].iter().map(|w| w[k].norm_sqr()).sum::<f64>() / m;
                    power += second - mu.norm_sqr();
                    mean += mu;
                }
                power + mean.norm_sqr()
            })
            .collect()
    }

    /// Relabels users: user `i` of the result is user `order[i]` of `self`.
    pub fn permute_users(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.users())?;
        let indicator = self.indicator.permute_users(order)?;
        let codewords = order.iter().map(|&j| self.codewords[j].clone()).collect();
        Self::new(indicator, self.alphabet, codewords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bundled_6x4_matches_factor_graph() {
        let cb = CodebookSet::builtin("scma-6x4").unwrap();
        assert_eq!((cb.resources(), cb.users(), cb.alphabet()), (4, 6, 4));
        let expected = vec![
            vec![1, 0, 1, 0, 1, 0],
            vec![0, 1, 1, 0, 0, 1],
            vec![1, 0, 0, 1, 0, 1],
            vec![0, 1, 0, 1, 1, 0],
        ];
        assert_eq!(cb.indicator().rows(), expected);
        for j in 0..6 {
            assert_eq!(cb.indicator().user_degree(j), 2);
        }
        for k in 0..4 {
            assert_eq!(cb.indicator().resource_degree(k), 3);
        }
    }

    #[test]
    fn bundled_6x15_matches_factor_graph() {
        let cb = CodebookSet::builtin("scma-6x15").unwrap();
        assert_eq!((cb.resources(), cb.users(), cb.alphabet()), (6, 15, 4));
        for j in 0..15 {
            assert_eq!(cb.indicator().user_degree(j), 2);
        }
        for k in 0..6 {
            assert_eq!(cb.indicator().resource_degree(k), 5);
        }
    }

    #[test]
    fn bundled_sets_have_unit_energy_to_high_precision() {
        for name in ["scma-6x4", "scma-6x15"] {
            let cb = CodebookSet::builtin(name).unwrap();
            for j in 0..cb.users() {
                let e: f64 = (0..cb.alphabet())
                    .map(|m| cb.codeword(j, m).iter().map(|x| x.norm_sqr()).sum::<f64>())
                    .sum::<f64>()
                    / cb.alphabet() as f64;
                assert!((e - 1.0).abs() < 1e-9, "{name} user {j}: {e}");
            }
        }
    }

    #[test]
    fn text_round_trip_is_exact() {
        let cb = CodebookSet::builtin("scma-6x4").unwrap();
        assert_eq!(CodebookSet::parse(&cb.to_text()).unwrap(), cb);
    }

    #[test]
    fn forbidden_row_entry_is_a_sparsity_mismatch() {
        let cb = CodebookSet::builtin("scma-6x4").unwrap();
        // user 3 (index 2) occupies resources 0 and 1; poke resource 2
        let mut words: Vec<Vec<Vec<Complex64>>> = (0..6)
            .map(|j| (0..4).map(|m| cb.codeword(j, m).to_vec()).collect())
            .collect();
        words[2][1][2] = c(0.1, 0.0);
        let err = CodebookSet::new(cb.indicator().clone(), 4, words).unwrap_err();
        assert!(matches!(
            err,
            Error::SparsityMismatch { user: 2, resource: 2, declared: false, observed: true }
        ));
    }

    #[test]
    fn energy_violation_names_the_user() {
        let f = IndicatorMatrix::from_rows(&[vec![1, 1]]).unwrap();
        let good = vec![vec![c(1.0, 0.0)], vec![c(-1.0, 0.0)]];
        let bad = vec![vec![c(2.0, 0.0)], vec![c(-1.0, 0.0)]];
        let err = CodebookSet::new(f, 2, vec![good, bad]).unwrap_err();
        assert!(matches!(err, Error::EnergyNormalization { user: 1, .. }));
    }

    #[test]
    fn parser_rejects_trailing_garbage_and_short_files() {
        let text = "1 1 2\n1\n1 0\n-1 0\n";
        assert!(CodebookSet::parse(text).is_ok());
        assert!(matches!(
            CodebookSet::parse(&format!("{text}0 0\n")),
            Err(Error::Parse { line: 5, .. })
        ));
        assert!(CodebookSet::parse("1 1 2\n1\n1 0\n").is_err());
        assert!(CodebookSet::parse("1 1 2\n1\n1 0 7\n-1 0\n").is_err());
        assert!(CodebookSet::parse("1 1 3\n1\n1 0\n-1 0\n0 1\n").is_err());
        assert!(CodebookSet::parse("# header follows\n\n1 1 2\n1\n1 0\n# c\n-1 0\n").is_ok());
    }

    #[test]
    fn unknown_builtin_is_an_error() {
        assert!(CodebookSet::load("builtin:nope").is_err());
        assert!(matches!(
            CodebookSet::load("/nonexistent/file.cb"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn superposed_energy_of_zero_mean_books_is_degree_weighted() {
        let cb = CodebookSet::builtin("scma-6x4").unwrap();
        // zero-mean codebooks: mean over k of sum_j E|x_jk|^2 = J / K
        assert!((cb.mean_superposed_energy() - 1.5).abs() < 1e-9);
        let per: f64 = cb.superposed_energy_per_resource().iter().sum::<f64>() / 4.0;
        assert!((per - cb.mean_superposed_energy()).abs() < 1e-12);
    }
}

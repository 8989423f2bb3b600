//! Seed files.
//!
//! ```text
//! # comments run to the end of the line
//! seed <N> <M>
//! cluster <name>...          (optional, default x1..xN)
//! frozen <name>...           (optional, default f1..fM)
//! divisors <d_1> ... <d_N>
//! matrix
//! <row 1>;
//! ...
//! <row N>
//! strings
//! <cluster name or 1-based index>: <v_0> | <v_1> | ... | <v_d>
//! ```
//!
//! Each `v_r` lists the `M` frozen exponents of `p_{kr}`. Omitted string
//! lines mean the all-ones string; the canonical writer omits exactly
//! those. The cluster of a seed read from a file is the initial cluster.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::laurent::{Monomial, Role, VariableTable};
use crate::matrix::{parse_matrix_lines, DivisorVector, MatrixError};
use crate::seed::{CoefficientStrings, GeneralizedSeed, SeedError};

#[derive(Debug, Error)]
pub enum SeedFileError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid seed: {0}")]
    Validation(#[from] SeedError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> SeedFileError {
    SeedFileError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn ints(line: usize, offset: usize, text: &str) -> Result<Vec<i64>, SeedFileError> {
    let mut out = Vec::new();
    let mut col = offset;
    for piece in text.split_inclusive(char::is_whitespace) {
        let tok = piece.trim();
        if !tok.is_empty() {
            out.push(
                tok.parse()
                    .map_err(|_| perr(line, col + 1, format!("expected integer, found `{tok}`")))?,
            );
        }
        col += piece.len();
    }
    Ok(out)
}

#[derive(PartialEq)]
enum Section {
    Header,
    Matrix,
    Strings,
}

pub fn parse_seed(text: &str) -> Result<GeneralizedSeed, SeedFileError> {
    let mut shape: Option<(usize, usize)> = None;
    let mut cluster_names: Option<Vec<String>> = None;
    let mut frozen_names: Option<Vec<String>> = None;
    let mut divisors: Option<(usize, Vec<i64>)> = None;
    let mut matrix_lines: Vec<(usize, &str)> = Vec::new();
    let mut string_lines: Vec<(usize, &str)> = Vec::new();
    let mut section = Section::Header;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let (word, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest_col = body.find(rest).unwrap_or(0);
        match word {
            "seed" if section == Section::Header && shape.is_none() => {
                let v = ints(lineno, rest_col, rest)?;
                match v.as_slice() {
                    [n, m] if *n >= 0 && *m >= 0 => shape = Some((*n as usize, *m as usize)),
                    _ => return Err(perr(lineno, rest_col + 1, "expected `seed <N> <M>`")),
                }
            }
            "cluster" if section == Section::Header => {
                cluster_names = Some(rest.split_whitespace().map(String::from).collect());
            }
            "frozen" if section == Section::Header => {
                frozen_names = Some(rest.split_whitespace().map(String::from).collect());
            }
            "divisors" if section == Section::Header => {
                divisors = Some((lineno, ints(lineno, rest_col, rest)?));
            }
            "matrix" if section == Section::Header && rest.is_empty() => section = Section::Matrix,
            "strings" if section != Section::Strings && rest.is_empty() => {
                section = Section::Strings
            }
            _ => match section {
                Section::Matrix => matrix_lines.push((lineno, body)),
                Section::Strings => string_lines.push((lineno, body)),
                Section::Header => {
                    return Err(perr(lineno, 1, format!("unexpected `{word}` in header")))
                }
            },
        }
    }
    let (n, m) = shape.ok_or_else(|| perr(1, 1, "missing `seed <N> <M>` line"))?;
    let cluster_names =
        cluster_names.unwrap_or_else(|| (1..=n).map(|i| format!("x{i}")).collect());
    let frozen_names = frozen_names.unwrap_or_else(|| (1..=m).map(|i| format!("f{i}")).collect());
    if cluster_names.len() != n || frozen_names.len() != m {
        return Err(perr(1, 1, "number of names does not match `seed <N> <M>`"));
    }
    let (div_line, d) = divisors.ok_or_else(|| perr(last_line, 1, "missing `divisors` line"))?;
    if d.len() != n {
        return Err(perr(div_line, 1, format!("expected {n} divisors, found {}", d.len())));
    }
    let d = DivisorVector::new(d).map_err(|e| perr(div_line, 1, e.to_string()))?;
    let mut header = format!("{n} {m}\n");
    if n == 0 {
        header.clear();
        header.push_str("0 ");
        header.push_str(&m.to_string());
    }
    let matrix = parse_matrix_lines(
        std::iter::once((0usize, header.as_str())).chain(matrix_lines.iter().copied()),
    )
    .map_err(|e| match e {
        MatrixError::Parse { line, column, message } => perr(line, column, message),
        other => perr(last_line, 1, other.to_string()),
    })?;
    if matrix.n() != n || matrix.m() != m {
        return Err(perr(last_line, 1, "matrix shape does not match header"));
    }

    let mut table = VariableTable::new();
    for name in &cluster_names {
        table
            .push(name.clone(), Role::Cluster, None)
            .map_err(|e| perr(1, 1, e.to_string()))?;
    }
    for name in &frozen_names {
        table
            .push(name.clone(), Role::Frozen, None)
            .map_err(|e| perr(1, 1, e.to_string()))?;
    }
    let table = table.into_ref();
    let len = table.len();

    let mut strings: Vec<Option<Vec<Monomial>>> = vec![None; n];
    for (lineno, body) in string_lines {
        let (label, rest) = body
            .split_once(':')
            .ok_or_else(|| perr(lineno, 1, "expected `<label>: v_0 | ... | v_d`"))?;
        let label = label.trim();
        let k = cluster_names
            .iter()
            .position(|c| c == label)
            .or_else(|| label.parse::<usize>().ok().filter(|&k| (1..=n).contains(&k)).map(|k| k - 1))
            .ok_or_else(|| perr(lineno, 1, format!("unknown cluster label `{label}`")))?;
        if strings[k].is_some() {
            return Err(perr(lineno, 1, format!("duplicate string for `{label}`")));
        }
        let mut col = label.len() + 1;
        let mut entries = Vec::new();
        for part in rest.split('|') {
            let v = ints(lineno, col, part)?;
            if v.len() != m {
                return Err(perr(lineno, col + 1, format!("expected {m} frozen exponents")));
            }
            let mut e = vec![0; len];
            e[n..].copy_from_slice(&v);
            entries.push(Monomial::from_exponents(e));
            col += part.len() + 1;
        }
        if entries.len() != d.get(k) as usize + 1 {
            return Err(perr(
                lineno,
                1,
                format!("string `{label}` needs {} entries", d.get(k) + 1),
            ));
        }
        strings[k] = Some(entries);
    }
    let strings = strings
        .into_iter()
        .enumerate()
        .map(|(k, s)| s.unwrap_or_else(|| vec![Monomial::one(len); d.get(k) as usize + 1]))
        .collect();
    let strings = CoefficientStrings::new(strings)?;
    Ok(GeneralizedSeed::new(table, matrix, d, strings)?)
}

/// Canonical text of a seed's matrix, divisors and strings, using the
/// names of its table.
pub fn write_seed(seed: &GeneralizedSeed) -> String {
    let (n, m) = (seed.rank(), seed.frozen_count());
    let table = seed.table();
    let mut s = format!("seed {n} {m}\n");
    let names = |range: std::ops::Range<usize>| {
        range.map(|i| table.name(i).to_string()).collect::<Vec<_>>().join(" ")
    };
    if n > 0 {
        writeln!(s, "cluster {}", names(0..n)).expect("string write");
    }
    if m > 0 {
        writeln!(s, "frozen {}", names(n..n + m)).expect("string write");
    }
    let d: Vec<String> = seed.divisors().as_slice().iter().map(i64::to_string).collect();
    writeln!(s, "divisors {}", d.join(" ")).expect("string write");
    s.push_str("matrix\n");
    let mtext = seed.matrix().to_text();
    s.push_str(mtext.split_once('\n').map_or("", |(_, rows)| rows));
    s.push_str("strings\n");
    for k in 0..n {
        let string = seed.strings().string(k);
        if string.iter().all(Monomial::is_one) {
            continue;
        }
        let parts: Vec<String> = string
            .iter()
            .map(|p| {
                p.exponents()[n..n + m]
                    .iter()
                    .map(i64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        writeln!(s, "{}: {}", table.name(k), parts.join(" | ")).expect("string write");
    }
    s
}

pub fn read_seed(path: impl AsRef<Path>) -> Result<GeneralizedSeed, SeedFileError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SeedFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_seed(&text)
}

pub fn write_seed_file(seed: &GeneralizedSeed, path: impl AsRef<Path>) -> Result<(), SeedFileError> {
    let path = path.as_ref();
    std::fs::write(path, write_seed(seed)).map_err(|source| SeedFileError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_round_trip() {
        for name in fixtures::NAMES {
            let text = fixtures::text(name).unwrap();
            assert_eq!(write_seed(&parse_seed(text).unwrap()), text, "{name}");
        }
    }

    #[test]
    fn fix_a_data() {
        let s = fixtures::fix_a();
        assert_eq!(s.matrix().rows(), vec![vec![0, 8, -3, 5], vec![-12, 0, -2, 7]]);
        assert_eq!(s.divisors().as_slice(), &[2, 3]);
    }

    #[test]
    fn classical_seed_without_strings() {
        let s = parse_seed("seed 2 0\ndivisors 1 1\nmatrix\n0 1;\n-1 0\nstrings\n").unwrap();
        assert_eq!(s.table().name(1), "x2");
        assert!(s.strings().string(0).iter().all(Monomial::is_one));
        assert_eq!(s.exchange_polynomial(0).unwrap().to_string(), "x2 + 1");
    }

    #[test]
    fn malformed_divisors() {
        let err = parse_seed("seed 1 0\ndivisors two\nmatrix\n0\n").unwrap_err();
        match err {
            SeedFileError::Parse { line, column, .. } => assert_eq!((line, column), (2, 10)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn bad_string_endpoints() {
        let err = parse_seed("seed 1 1\ndivisors 1\nmatrix\n0 1\nstrings\nx1: 1 | 0\n").unwrap_err();
        assert!(matches!(err, SeedFileError::Validation(_)));
    }
}

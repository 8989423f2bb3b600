//! Extended exchange matrices, divisor vectors and their mutation rules.
//!
//! Indices are zero-based throughout the library. Text formats and the
//! command line use one-based indices.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("mutation index {k} out of range for {n} mutable rows")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("principal part is not skew-symmetrizable (entries ({i},{j}) and ({j},{i}))")]
    NotSkewSymmetrizable { i: usize, j: usize },
    #[error("divisor d_{row} = {d} is invalid for row {row}")]
    InvalidDivisors { row: usize, d: i64 },
    #[error("expected {expected} divisors, found {found}")]
    DivisorCount { expected: usize, found: usize },
    #[error("entry ({i},{j}) overflows a 64-bit integer when mutating at {k}")]
    Overflow { i: usize, j: usize, k: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

/// An `N x (N+M)` integer matrix: `N` mutable rows, `M` frozen columns.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedExchangeMatrix {
    n: usize,
    m: usize,
    entries: Vec<i64>,
}

impl ExtendedExchangeMatrix {
    pub fn new(n: usize, m: usize, entries: Vec<i64>) -> Result<Self, MatrixError> {
        if entries.len() != n * (n + m) {
            return Err(MatrixError::Shape(format!(
                "{} entries for a {n}x{} matrix",
                entries.len(),
                n + m
            )));
        }
        Ok(Self { n, m, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if width < n || rows.iter().any(|r| r.len() != width) {
            return Err(MatrixError::Shape("ragged or too narrow rows".into()));
        }
        Self::new(n, width - n, rows.concat())
    }

    pub fn zero(n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            entries: vec![0; n * (n + m)],
        }
    }

    /// Number of mutable rows.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of frozen columns.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n + self.m
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        let c = self.cols();
        self.entries[i * c + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        let c = self.cols();
        &self.entries[i * c..(i + 1) * c]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn principal(&self, i: usize, j: usize) -> i64 {
        debug_assert!(j < self.n);
        self.get(i, j)
    }

    /// Entry of the slack part: row `i`, frozen column `l`.
    pub fn slack(&self, i: usize, l: usize) -> i64 {
        self.get(i, self.n + l)
    }

    fn check_index(&self, k: usize) -> Result<(), MatrixError> {
        if k < self.n {
            Ok(())
        } else {
            Err(MatrixError::IndexOutOfRange { k, n: self.n })
        }
    }

    /// Matrix mutation in direction `k`.
    pub fn mutate(&self, k: usize) -> Result<Self, MatrixError> {
        self.check_index(k)?;
        self.mutate_weighted(k, |_, _| 1)
    }

    /// Mutation rule where the correction for entry `(i, j)` is scaled by
    /// `weight(i, j)`.
    pub(crate) fn mutate_weighted(
        &self,
        k: usize,
        weight: impl Fn(usize, usize) -> i64,
    ) -> Result<Self, MatrixError> {
        let mut out = self.clone();
        let c = self.cols();
        for i in 0..self.n {
            let bik = self.get(i, k);
            for j in 0..c {
                let v = if i == k || j == k {
                    self.get(i, j).checked_neg()
                } else {
                    let bkj = self.get(k, j);
                    let pos = |x: i64| x.max(0);
                    let delta = pos(bik)
                        .checked_mul(bkj)
                        .and_then(|a| bik.checked_mul(pos(bkj.checked_neg()?)).and_then(|b| a.checked_add(b)));
                    delta
                        .and_then(|d| weight(i, j).checked_mul(d))
                        .and_then(|d| self.get(i, j).checked_add(d))
                };
                out.entries[i * c + j] = v.ok_or(MatrixError::Overflow { i, j, k })?;
            }
        }
        Ok(out)
    }

    /// Left-to-right composition of mutations.
    pub fn mutate_sequence(&self, s: &[usize]) -> Result<Self, MatrixError> {
        s.iter().try_fold(self.clone(), |b, &k| b.mutate(k))
    }

    /// Multiplies column `j` by `factor`.
    pub fn scale_column(&self, j: usize, factor: i64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.set(i, j, self.get(i, j) * factor);
        }
        out
    }

    /// Appends `extra` zero frozen columns.
    pub fn with_extra_frozen(&self, extra: usize) -> Self {
        let mut rows = self.rows();
        for r in &mut rows {
            r.extend(std::iter::repeat_n(0, extra));
        }
        let mut out = Self::from_rows(&rows).unwrap_or_else(|_| Self::zero(0, self.m + extra));
        out.m = self.m + extra;
        out
    }

    /// Canonical text form: `N M` header, then rows separated by `;`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.m);
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(i64::to_string).collect();
            s.push_str(&row.join(" "));
            s.push_str(if i + 1 < self.n { ";\n" } else { "\n" });
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, MatrixError> {
        parse_matrix_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }

    /// Minimal positive integer `D` with `D * Principal` skew-symmetric.
    pub fn diagonalizer(&self) -> Result<Vec<i64>, MatrixError> {
        let n = self.n;
        for i in 0..n {
            if self.get(i, i) != 0 {
                return Err(MatrixError::NotSkewSymmetrizable { i, j: i });
            }
            for j in 0..n {
                let (a, b) = (self.get(i, j), self.get(j, i));
                if (a == 0) != (b == 0) || a.signum() * b.signum() > 0 {
                    return Err(MatrixError::NotSkewSymmetrizable { i, j });
                }
            }
        }
        // Values are fractions num/den, fixed one component at a time.
        let mut val: Vec<Option<(i128, i128)>> = vec![None; n];
        let mut out = vec![0i64; n];
        for root in 0..n {
            if val[root].is_some() {
                continue;
            }
            val[root] = Some((1, 1));
            let mut component = vec![root];
            let mut stack = vec![root];
            while let Some(i) = stack.pop() {
                let (pn, pd) = val[i].expect("visited");
                #[allow(clippy::needless_range_loop)]
                for j in 0..n {
                    let (bij, bji) = (self.get(i, j) as i128, self.get(j, i) as i128);
                    if bij == 0 {
                        continue;
                    }
                    // d_j = -d_i * B_ij / B_ji
                    let (mut qn, mut qd) = (-pn * bij, pd * bji);
                    if qd < 0 {
                        qn = -qn;
                        qd = -qd;
                    }
                    let g = qn.gcd(&qd);
                    let (qn, qd) = (qn / g, qd / g);
                    match val[j] {
                        None => {
                            val[j] = Some((qn, qd));
                            component.push(j);
                            stack.push(j);
                        }
                        Some((vn, vd)) => {
                            if vn * qd != qn * vd {
                                return Err(MatrixError::NotSkewSymmetrizable { i, j });
                            }
                        }
                    }
                }
            }
            let den_lcm = component
                .iter()
                .map(|&i| val[i].expect("visited").1)
                .fold(1i128, |a, b| a.lcm(&b));
            let scaled: Vec<i128> = component
                .iter()
                .map(|&i| {
                    let (vn, vd) = val[i].expect("visited");
                    vn * (den_lcm / vd)
                })
                .collect();
            let g = scaled.iter().fold(0i128, |a, b| a.gcd(b));
            for (&i, v) in component.iter().zip(scaled) {
                out[i] = (v / g) as i64;
            }
        }
        Ok(out)
    }
}

pub(crate) fn parse_matrix_lines<'a>(
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> Result<ExtendedExchangeMatrix, MatrixError> {
    let mut tokens: Vec<(usize, usize, &str)> = Vec::new();
    for (lineno, line) in lines {
        let body = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for piece in body.split_inclusive(|c: char| c.is_whitespace() || c == ';') {
            let trimmed = piece.trim_end_matches(|c: char| c.is_whitespace() || c == ';');
            if !trimmed.is_empty() {
                tokens.push((lineno, col + 1, trimmed));
            }
            if piece.ends_with(';') {
                tokens.push((lineno, col + piece.len(), ";"));
            }
            col += piece.len();
        }
    }
    let perr = |(line, column, _): (usize, usize, &str), message: String| MatrixError::Parse {
        line,
        column,
        message,
    };
    let int = |t: (usize, usize, &str)| -> Result<i64, MatrixError> {
        t.2.parse::<i64>()
            .map_err(|_| perr(t, format!("expected integer, found `{}`", t.2)))
    };
    let mut it = tokens.into_iter();
    let end = MatrixError::Parse {
        line: 0,
        column: 0,
        message: "missing `N M` header".into(),
    };
    let n = usize::try_from(int(it.next().ok_or(end.clone())?)?).map_err(|_| end.clone())?;
    let m = usize::try_from(int(it.next().ok_or(end.clone())?)?).map_err(|_| end.clone())?;
    let mut rows: Vec<Vec<i64>> = vec![Vec::new()];
    let mut last = (0, 0, "");
    for t in it {
        last = t;
        if t.2 == ";" {
            rows.push(Vec::new());
        } else {
            rows.last_mut().expect("nonempty").push(int(t)?);
        }
    }
    if rows.last().is_some_and(Vec::is_empty) && (rows.len() > n || n == 0) {
        rows.pop();
    }
    if rows.len() != n || rows.iter().any(|r| r.len() != n + m) {
        return Err(perr(
            last,
            format!("expected {n} rows of {} integers", n + m),
        ));
    }
    ExtendedExchangeMatrix::new(n, m, rows.concat())
}

impl fmt::Display for ExtendedExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Positive integers `d_i`, one per mutable row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorVector {
    d: Vec<i64>,
}

impl DivisorVector {
    pub fn new(d: Vec<i64>) -> Result<Self, MatrixError> {
        if let Some((row, &v)) = d.iter().enumerate().find(|(_, &v)| v < 1) {
            return Err(MatrixError::InvalidDivisors { row, d: v });
        }
        Ok(Self { d })
    }

    pub fn ones(n: usize) -> Self {
        Self { d: vec![1; n] }
    }

    pub fn get(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// `D = d_1 * ... * d_N`.
    pub fn total_multiplicity(&self) -> i64 {
        self.d.iter().product()
    }

    /// Pseudo-rank `d_1 + ... + d_N`.
    pub fn pseudo_rank(&self) -> usize {
        self.d.iter().sum::<i64>() as usize
    }

    pub fn lcm(&self) -> i64 {
        self.d.iter().fold(1, |a, b| a.lcm(b))
    }

    /// Checks that `d_i` divides every principal entry of row `i`.
    pub fn validate(&self, b: &ExtendedExchangeMatrix) -> Result<(), MatrixError> {
        if self.d.len() != b.n() {
            return Err(MatrixError::DivisorCount {
                expected: b.n(),
                found: self.d.len(),
            });
        }
        for i in 0..b.n() {
            if (0..b.n()).any(|j| b.get(i, j) % self.d[i] != 0) {
                return Err(MatrixError::InvalidDivisors { row: i, d: self.d[i] });
            }
        }
        Ok(())
    }
}

/// `B̂`: principal rows of `B` divided by the divisors, slack unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModifiedExchangeMatrix(ExtendedExchangeMatrix);

pub fn modify(
    b: &ExtendedExchangeMatrix,
    d: &DivisorVector,
) -> Result<ModifiedExchangeMatrix, MatrixError> {
    d.validate(b)?;
    let mut out = b.clone();
    for i in 0..b.n() {
        for j in 0..b.n() {
            out.set(i, j, b.get(i, j) / d.get(i));
        }
    }
    Ok(ModifiedExchangeMatrix(out))
}

impl ModifiedExchangeMatrix {
    /// Wraps a matrix already known to be a modified matrix.
    pub fn from_matrix(m: ExtendedExchangeMatrix) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &ExtendedExchangeMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.0.get(i, j)
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn m(&self) -> usize {
        self.0.m()
    }

    /// Recovers `B` by multiplying principal rows back by the divisors.
    pub fn unmodify(&self, d: &DivisorVector) -> ExtendedExchangeMatrix {
        let mut out = self.0.clone();
        for i in 0..out.n() {
            for j in 0..out.n() {
                out.set(i, j, self.0.get(i, j) * d.get(i));
            }
        }
        out
    }

    /// Mutation of `B̂` directly: mutable columns are corrected with weight
    /// `d_k`, frozen columns with weight `d_i`.
    pub fn mutate(&self, d: &DivisorVector, k: usize) -> Result<Self, MatrixError> {
        self.0.check_index(k)?;
        let n = self.0.n();
        self.0
            .mutate_weighted(k, |i, j| if j < n { d.get(k) } else { d.get(i) })
            .map(Self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fix_a() -> (ExtendedExchangeMatrix, DivisorVector) {
        (
            ExtendedExchangeMatrix::from_rows(&[vec![0, 8, -3, 5], vec![-12, 0, -2, 7]]).unwrap(),
            DivisorVector::new(vec![2, 3]).unwrap(),
        )
    }

    #[test]
    fn diagonalizer_examples() {
        let b = ExtendedExchangeMatrix::from_rows(&[vec![0, 3], vec![-2, 0]]).unwrap();
        assert_eq!(b.diagonalizer().unwrap(), vec![2, 3]);
        let s = ExtendedExchangeMatrix::from_rows(&[vec![0, 1, -1], vec![-1, 0, 2], vec![1, -2, 0]])
            .unwrap();
        assert_eq!(s.diagonalizer().unwrap(), vec![1, 1, 1]);
        let bad = ExtendedExchangeMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(bad.diagonalizer(), Err(MatrixError::NotSkewSymmetrizable { .. })));
        let (b, _) = fix_a();
        assert_eq!(b.diagonalizer().unwrap(), vec![3, 2]);
    }

    #[test]
    fn inconsistent_cycle_is_rejected() {
        let b = ExtendedExchangeMatrix::from_rows(&[
            vec![0, 1, -1],
            vec![-1, 0, 1],
            vec![2, -1, 0],
        ])
        .unwrap();
        assert!(b.diagonalizer().is_err());
    }

    #[test]
    fn modify_and_invalid_divisors() {
        let (b, d) = fix_a();
        let bh = modify(&b, &d).unwrap();
        assert_eq!(bh.matrix().rows(), vec![vec![0, 4, -3, 5], vec![-4, 0, -2, 7]]);
        assert_eq!(bh.unmodify(&d), b);
        assert_eq!(modify(&b, &DivisorVector::ones(2)).unwrap().matrix(), &b);
        let b7 = ExtendedExchangeMatrix::from_rows(&[vec![0, 7, 0, 0], vec![-12, 0, 0, 0]]).unwrap();
        assert!(matches!(modify(&b7, &d), Err(MatrixError::InvalidDivisors { row: 0, .. })));
    }

    #[test]
    fn mutation_bounds() {
        let (b, _) = fix_a();
        assert_eq!(b.mutate(2), Err(MatrixError::IndexOutOfRange { k: 2, n: 2 }));
        assert_eq!(b.mutate_sequence(&[]).unwrap(), b);
        assert_eq!(b.mutate_sequence(&[0, 0]).unwrap(), b);
    }

    #[test]
    fn text_round_trip() {
        let (b, _) = fix_a();
        let text = b.to_text();
        assert_eq!(text, "2 2\n0 8 -3 5;\n-12 0 -2 7\n");
        assert_eq!(ExtendedExchangeMatrix::from_text(&text).unwrap(), b);
        assert_eq!(
            ExtendedExchangeMatrix::from_text("2 2 # header\n0 8 -3 5; -12 0 -2 7;").unwrap(),
            b
        );
        assert!(matches!(
            ExtendedExchangeMatrix::from_text("2 2\n0 8 -3 5;\n-12 0 x 7\n"),
            Err(MatrixError::Parse { line: 3, column: 7, .. })
        ));
        let empty = ExtendedExchangeMatrix::zero(0, 0);
        assert_eq!(ExtendedExchangeMatrix::from_text(&empty.to_text()).unwrap(), empty);
    }
}

//! The unfolded exchange matrix of a generalized seed, group mutations, and
//! the block conditions they preserve.
//!
//! Columns are ordered `𝒟¹, …, 𝒟ᴺ, F, T¹, S¹, …, Tᴺ, Sᴺ`; rows follow the
//! groups `𝒟¹, …, 𝒟ᴺ`. Group `i` has `d_i` members.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::adjoin::AdjoinMode;
use crate::matrix::{DivisorVector, ExtendedExchangeMatrix, MatrixError};
use crate::quiver::{FoldingPartition, QuiverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnfoldError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("group index {0} out of range")]
    GroupIndex(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("Hadamard condition {condition} fails on block ({i},{j}): expected {expected}, found {found}")]
    Hadamard {
        condition: u8,
        i: usize,
        j: usize,
        expected: i64,
        found: i64,
    },
    #[error("double-constant structure fails on block ({i},{j}): {reason}")]
    Structure { i: usize, j: usize, reason: String },
    #[error("unfolding condition {condition} fails on block ({i},{j})")]
    Unfolding { condition: u8, i: usize, j: usize },
    #[error("block ({i},{j}) is not sign-coherent")]
    SignCoherence { i: usize, j: usize },
}

/// Positions of the groups of a folded matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLayout {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    frozen: usize,
    scale: i64,
}

/// The kind of a column group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnGroup {
    Mutable(usize),
    Frozen(usize),
    T(usize),
    S(usize),
}

impl GroupLayout {
    pub fn new(d: &DivisorVector, frozen: usize, scale: i64) -> Self {
        let sizes: Vec<usize> = d.as_slice().iter().map(|&x| x as usize).collect();
        let offsets = sizes
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect();
        Self {
            sizes,
            offsets,
            frozen,
            scale,
        }
    }

    pub fn group_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    /// `𝒟 = d_1 + … + d_N`.
    pub fn pseudo_rank(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn frozen_count(&self) -> usize {
        self.frozen
    }

    /// The factor `D` (or the lcm) used in the slack blocks.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Rows, and principal columns, of group `i`.
    pub fn group(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i] + self.sizes[i]
    }

    /// The group containing row `r`, and the position of `r` within it.
    pub fn locate(&self, r: usize) -> (usize, usize) {
        let i = self.offsets.partition_point(|&o| o <= r) - 1;
        (i, r - self.offsets[i])
    }

    pub fn frozen_column(&self, l: usize) -> usize {
        self.pseudo_rank() + l
    }

    pub fn t_columns(&self, i: usize) -> Range<usize> {
        let start = self.pseudo_rank() + self.frozen + 2 * self.offsets[i];
        start..start + self.sizes[i]
    }

    pub fn s_columns(&self, i: usize) -> Range<usize> {
        let t = self.t_columns(i);
        t.end..t.end + self.sizes[i]
    }

    pub fn columns(&self, g: ColumnGroup) -> Range<usize> {
        match g {
            ColumnGroup::Mutable(i) => self.group(i),
            ColumnGroup::Frozen(l) => self.frozen_column(l)..self.frozen_column(l) + 1,
            ColumnGroup::T(i) => self.t_columns(i),
            ColumnGroup::S(i) => self.s_columns(i),
        }
    }

    /// All column groups in column order.
    pub fn column_groups(&self) -> Vec<ColumnGroup> {
        let n = self.group_count();
        (0..n)
            .map(ColumnGroup::Mutable)
            .chain((0..self.frozen).map(ColumnGroup::Frozen))
            .chain((0..n).flat_map(|i| [ColumnGroup::T(i), ColumnGroup::S(i)]))
            .collect()
    }

    /// Total number of columns, `3𝒟 + M`.
    pub fn column_count(&self) -> usize {
        3 * self.pseudo_rank() + self.frozen
    }
}

/// The unfolded matrix `𝓑` with its group structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedMatrix {
    matrix: ExtendedExchangeMatrix,
    layout: GroupLayout,
}

/// Builds `𝓑` from `(B, d)`; the slack blocks are scaled by the total
/// multiplicity or by the lcm of the divisors, according to `mode`.
pub fn build(
    b: &ExtendedExchangeMatrix,
    d: &DivisorVector,
    mode: AdjoinMode,
) -> Result<FoldedMatrix, UnfoldError> {
    d.validate(b)?;
    let scale = match mode {
        AdjoinMode::Total => d.total_multiplicity(),
        AdjoinMode::Lcm => d.lcm(),
    };
    let layout = GroupLayout::new(d, b.m(), scale);
    let rows = layout.pseudo_rank();
    let mut m = ExtendedExchangeMatrix::zero(rows, layout.column_count() - rows);
    for r in 0..rows {
        let (i, a) = layout.locate(r);
        let di = d.get(i);
        for j in 0..b.n() {
            for c in layout.group(j) {
                m.set(r, c, b.get(i, j) / di);
            }
        }
        for l in 0..b.m() {
            m.set(r, layout.frozen_column(l), scale / di * b.slack(i, l));
        }
        m.set(r, layout.t_columns(i).start + a, 1);
        m.set(r, layout.s_columns(i).start + a, -1);
    }
    Ok(FoldedMatrix { matrix: m, layout })
}

impl FoldedMatrix {
    pub fn from_parts(matrix: ExtendedExchangeMatrix, layout: GroupLayout) -> Result<Self, UnfoldError> {
        if matrix.n() != layout.pseudo_rank() || matrix.cols() != layout.column_count() {
            return Err(UnfoldError::Shape(format!(
                "{}x{} matrix for layout with {} rows and {} columns",
                matrix.n(),
                matrix.cols(),
                layout.pseudo_rank(),
                layout.column_count()
            )));
        }
        Ok(Self { matrix, layout })
    }

    pub fn matrix(&self) -> &ExtendedExchangeMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &GroupLayout {
        &self.layout
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.matrix.get(r, c)
    }

    /// Entries of the block with rows of group `i` and columns of `g`.
    pub fn block(&self, i: usize, g: ColumnGroup) -> Vec<Vec<i64>> {
        let cols = self.layout.columns(g);
        self.layout
            .group(i)
            .map(|r| cols.clone().map(|c| self.matrix.get(r, c)).collect())
            .collect()
    }

    /// Mutates every index of group `k`, one after another.
    pub fn group_mutate(&self, k: usize) -> Result<Self, UnfoldError> {
        if k >= self.layout.group_count() {
            return Err(UnfoldError::GroupIndex(k));
        }
        let matrix = self
            .layout
            .group(k)
            .try_fold(self.matrix.clone(), |acc, c| acc.mutate(c))?;
        let out = Self {
            matrix,
            layout: self.layout.clone(),
        };
        if cfg!(debug_assertions) {
            if let Ok(blockwise) = self.group_mutate_blockwise(k) {
                debug_assert_eq!(blockwise, out, "block formula disagrees with sequential mutation");
            }
        }
        Ok(out)
    }

    pub fn group_mutate_sequence(&self, s: &[usize]) -> Result<Self, UnfoldError> {
        s.iter().try_fold(self.clone(), |acc, &k| acc.group_mutate(k))
    }

    /// Group mutation by the block rule: entries of `K` blocks change sign,
    /// and block `(Y, Z)` gains
    /// `(sgn(𝓑^{Y,K}) + sgn(𝓑^{K,Z})) 𝓑^{Y,K} 𝓑^{K,Z} / 2`.
    /// Fails when a block it needs is not sign-coherent.
    pub fn group_mutate_blockwise(&self, k: usize) -> Result<Self, UnfoldError> {
        if k >= self.layout.group_count() {
            return Err(UnfoldError::GroupIndex(k));
        }
        let mut out = self.matrix.clone();
        let kg = ColumnGroup::Mutable(k);
        for y in 0..self.layout.group_count() {
            for z in self.layout.column_groups() {
                let rows = self.layout.group(y);
                let cols = self.layout.columns(z);
                if y == k || z == kg {
                    for r in rows {
                        for c in cols.clone() {
                            out.set(r, c, -self.matrix.get(r, c));
                        }
                    }
                    continue;
                }
                let yk = self.block(y, kg);
                let kz = self.block(k, z);
                let s1 = block_sign(&yk).ok_or(UnfoldError::SignCoherence { i: y, j: k })?;
                let s2 = block_sign(&kz).ok_or(UnfoldError::SignCoherence { i: k, j: y })?;
                for (a, r) in rows.enumerate() {
                    for (b, c) in cols.clone().enumerate() {
                        let prod: i128 = (0..yk[a].len()).map(|l| i128::from(yk[a][l]) * i128::from(kz[l][b])).sum();
                        let v = i128::from(self.matrix.get(r, c)) + i128::from(s1 + s2) * prod / 2;
                        let v = i64::try_from(v).map_err(|_| MatrixError::Overflow { i: r, j: c, k })?;
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(Self {
            matrix: out,
            layout: self.layout.clone(),
        })
    }

    /// The partition of all columns into the mutable groups and singleton
    /// frozen columns.
    pub fn folding_partition(&self) -> FoldingPartition {
        let l = &self.layout;
        let mut classes: Vec<Vec<usize>> = (0..l.group_count()).map(|i| l.group(i).collect()).collect();
        classes.extend((l.pseudo_rank()..l.column_count()).map(|c| vec![c]));
        FoldingPartition::new(classes, l.column_count()).expect("layout covers all columns")
    }

    /// The folding conditions on the matrix: no entries inside a mutable
    /// group, before and after one group mutation of each group.
    pub fn folding_check(&self) -> Result<(), UnfoldError> {
        self.intra_group_zero()?;
        for k in 0..self.layout.group_count() {
            self.group_mutate(k)?.intra_group_zero()?;
        }
        Ok(())
    }

    fn intra_group_zero(&self) -> Result<(), UnfoldError> {
        for i in 0..self.layout.group_count() {
            let g = self.layout.group(i);
            for r in g.clone() {
                for c in g.clone() {
                    if self.matrix.get(r, c) != 0 {
                        return Err(UnfoldError::Quiver(QuiverError::FoldingViolation {
                            class: i,
                            edge: (r, c),
                        }));
                    }
                }
            }
        }
        Ok(())
    }
}

fn block_sign(block: &[Vec<i64>]) -> Option<i64> {
    let mut sign = 0;
    for &v in block.iter().flatten() {
        let s = v.signum();
        if s != 0 {
            if sign != 0 && sign != s {
                return None;
            }
            sign = s;
        }
    }
    Some(sign)
}

fn constant(block: &[Vec<i64>]) -> Option<i64> {
    let first = *block.first()?.first()?;
    block.iter().flatten().all(|&v| v == first).then_some(first)
}

impl fmt::Display for FoldedMatrix {
    /// Group metadata as a comment line, then the matrix text.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.layout;
        let groups: Vec<String> = (0..l.group_count())
            .map(|i| {
                let g = l.group(i);
                let t = l.t_columns(i);
                let s = l.s_columns(i);
                format!(
                    "D{}={}..{} T{}={}..{} S{}={}..{}",
                    i + 1,
                    g.start + 1,
                    g.end,
                    i + 1,
                    t.start + 1,
                    t.end,
                    i + 1,
                    s.start + 1,
                    s.end
                )
            })
            .collect();
        let fcols = if l.frozen > 0 {
            format!(" F={}..{}", l.frozen_column(0) + 1, l.frozen_column(l.frozen - 1) + 1)
        } else {
            String::new()
        };
        writeln!(f, "# groups: {}{fcols} scale={}", groups.join(" "), l.scale)?;
        f.write_str(&self.matrix.to_text())
    }
}

/// Checks both Hadamard conditions of `folded` against `b`.
pub fn hadamard_check(
    folded: &FoldedMatrix,
    b: &ExtendedExchangeMatrix,
    d: &DivisorVector,
) -> Result<(), UnfoldError> {
    let l = folded.layout();
    if b.n() != l.group_count() || b.m() != l.frozen_count() || d.len() != b.n() {
        return Err(UnfoldError::Shape("matrix does not match the folded layout".into()));
    }
    for i in 0..b.n() {
        let di = d.get(i);
        for j in 0..b.n() {
            let expected = b.get(i, j) / di;
            if b.get(i, j) % di != 0 {
                return Err(UnfoldError::Hadamard { condition: 1, i, j, expected, found: b.get(i, j) });
            }
            for row in folded.block(i, ColumnGroup::Mutable(j)) {
                if let Some(&found) = row.iter().find(|&&v| v != expected) {
                    return Err(UnfoldError::Hadamard { condition: 1, i, j, expected, found });
                }
            }
        }
        for j in 0..b.m() {
            let expected = l.scale() / di * b.slack(i, j);
            for row in folded.block(i, ColumnGroup::Frozen(j)) {
                if row[0] != expected {
                    return Err(UnfoldError::Hadamard { condition: 2, i, j, expected, found: row[0] });
                }
            }
        }
    }
    Ok(())
}

/// Constants of one block pair `(¹I^{ij}, ²I^{ij})`:
/// `¹I = c𝟙 (+ α Id on the diagonal)` and `¹I + ²I = a𝟙`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockWitness {
    pub a: i64,
    pub c: i64,
    /// `Some(±1)` on diagonal blocks.
    pub alpha: Option<i64>,
}

/// Witnesses of the double-constant structure for every block pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleConstantWitness {
    blocks: Vec<Vec<BlockWitness>>,
}

impl DoubleConstantWitness {
    pub fn get(&self, i: usize, j: usize) -> BlockWitness {
        self.blocks[i][j]
    }

    pub fn blocks(&self) -> &[Vec<BlockWitness>] {
        &self.blocks
    }
}

/// Extracts the double-constant witness. For a diagonal block of size 1
/// the split of its entry into `c + α` is not determined; `α = +1` is
/// reported.
pub fn double_constant_check(folded: &FoldedMatrix) -> Result<DoubleConstantWitness, UnfoldError> {
    let n = folded.layout().group_count();
    let mut blocks = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let one = folded.block(i, ColumnGroup::T(j));
            let two = folded.block(i, ColumnGroup::S(j));
            let fail = |reason: &str| UnfoldError::Structure {
                i,
                j,
                reason: reason.to_string(),
            };
            let sum: Vec<Vec<i64>> = one
                .iter()
                .zip(&two)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect();
            let a = constant(&sum).ok_or_else(|| fail("first plus second component is not constant"))?;
            let (c, alpha) = if i != j {
                (constant(&one).ok_or_else(|| fail("first component is not constant"))?, None)
            } else if one.len() == 1 {
                (one[0][0] - 1, Some(1))
            } else {
                let c = one[0][1];
                let alpha = one[0][0] - c;
                if alpha.abs() != 1 {
                    return Err(fail("diagonal offset is not ±1"));
                }
                for (r, vals) in one.iter().enumerate() {
                    for (s, &v) in vals.iter().enumerate() {
                        let want = c + if r == s { alpha } else { 0 };
                        if v != want {
                            return Err(fail("first component is not constant plus ±identity"));
                        }
                    }
                }
                (c, Some(alpha))
            };
            row.push(BlockWitness { a, c, alpha });
        }
        blocks.push(row);
    }
    Ok(DoubleConstantWitness { blocks })
}

/// Conditions (1) and (2) of an unfolding on the principal blocks: column
/// sums of block `(i,j)` equal `B_ij`, and a positive `B_ij` forces a
/// nonnegative block (a negative one, a nonpositive block).
pub fn unfolding_conditions_check(
    folded: &FoldedMatrix,
    b: &ExtendedExchangeMatrix,
) -> Result<(), UnfoldError> {
    let n = folded.layout().group_count();
    if b.n() != n {
        return Err(UnfoldError::Shape("matrix does not match the folded layout".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let block = folded.block(i, ColumnGroup::Mutable(j));
            let width = block.first().map_or(0, Vec::len);
            for c in 0..width {
                let sum: i64 = block.iter().map(|r| r[c]).sum();
                if sum != b.get(i, j) {
                    return Err(UnfoldError::Unfolding { condition: 1, i, j });
                }
            }
            let sign = b.get(i, j).signum();
            if block.iter().flatten().any(|&v| v.signum() * sign < 0) {
                return Err(UnfoldError::Unfolding { condition: 2, i, j });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::modify;
    use crate::quiver::{check_folding, NodeWeightedQuiver};

    fn fix_a() -> (ExtendedExchangeMatrix, DivisorVector) {
        (
            ExtendedExchangeMatrix::from_rows(&[vec![0, 8, -3, 5], vec![-12, 0, -2, 7]]).unwrap(),
            DivisorVector::new(vec![2, 3]).unwrap(),
        )
    }

    #[test]
    fn fix_c_build() {
        let b = ExtendedExchangeMatrix::from_rows(&[vec![0, 2]]).unwrap();
        let d = DivisorVector::new(vec![2]).unwrap();
        let f = build(&b, &d, AdjoinMode::Total).unwrap();
        assert_eq!(f.matrix().rows(), vec![vec![0, 0, 2, 1, 0, -1, 0], vec![0, 0, 2, 0, 1, 0, -1]]);
    }

    #[test]
    fn classical_build_is_degenerate() {
        let b = ExtendedExchangeMatrix::from_rows(&[vec![0, 1, 2], vec![-1, 0, -3]]).unwrap();
        let d = DivisorVector::ones(2);
        let f = build(&b, &d, AdjoinMode::Total).unwrap();
        assert_eq!(f.matrix().rows(), vec![vec![0, 1, 2, 1, -1, 0, 0], vec![-1, 0, -3, 0, 0, 1, -1]]);
    }

    #[test]
    fn fix_a_group_mutations() {
        let (b, d) = fix_a();
        let f = build(&b, &d, AdjoinMode::Total).unwrap();
        let f1 = f.group_mutate(0).unwrap();
        assert_eq!(f1.get(2, 5), -76);
        assert_eq!(f1.block(0, ColumnGroup::T(0)), vec![vec![-1, 0], vec![0, -1]]);
        let f2 = f1.group_mutate(1).unwrap();
        assert_eq!((f2.get(0, 5), f2.get(0, 9), f2.get(0, 10)), (-903, -47, -48));
        let b2 = b.mutate_sequence(&[0, 1]).unwrap();
        assert_eq!(b2.get(0, 2), -301);
        hadamard_check(&f2, &b2, &d).unwrap();
        unfolding_conditions_check(&f2, &b2).unwrap();
        let w = double_constant_check(&f2).unwrap();
        assert_eq!(w.get(0, 0), BlockWitness { a: -48, c: 0, alpha: Some(-1) });
        assert_eq!(f2.group_mutate(1).unwrap(), f1);
    }

    #[test]
    fn initial_witness_is_trivial() {
        let (b, d) = fix_a();
        let w = double_constant_check(&build(&b, &d, AdjoinMode::Total).unwrap()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = w.get(i, j);
                assert_eq!((e.a, e.c), (0, 0));
                assert_eq!(e.alpha, (i == j).then_some(1));
            }
        }
    }

    #[test]
    fn folding_of_fix_a_is_valid() {
        let (b, d) = fix_a();
        let f = build(&b, &d, AdjoinMode::Total).unwrap();
        f.folding_check().unwrap();
        let ones = DivisorVector::ones(f.layout().pseudo_rank());
        let q = NodeWeightedQuiver::from_matrix(&modify(f.matrix(), &ones).unwrap(), &ones).unwrap();
        check_folding(&q, &f.folding_partition()).unwrap();
    }

    #[test]
    fn broken_block_is_reported() {
        let (b, d) = fix_a();
        let f = build(&b, &d, AdjoinMode::Total).unwrap();
        let mut m = f.matrix().clone();
        m.set(0, 2, 5);
        let bad = FoldedMatrix::from_parts(m, f.layout().clone()).unwrap();
        assert!(matches!(
            hadamard_check(&bad, &b, &d),
            Err(UnfoldError::Hadamard { condition: 1, i: 0, j: 1, .. })
        ));
        assert!(matches!(
            unfolding_conditions_check(&bad, &b),
            Err(UnfoldError::Unfolding { condition: 1, .. })
        ));
    }

    #[test]
    fn lcm_scaling() {
        let b = ExtendedExchangeMatrix::from_rows(&[vec![0, 2, 1], vec![-2, 0, 1]]).unwrap();
        let d = DivisorVector::new(vec![2, 2]).unwrap();
        let f = build(&b, &d, AdjoinMode::Lcm).unwrap();
        assert_eq!(f.layout().scale(), 2);
        assert_eq!(f.get(0, 4), 1);
        hadamard_check(&f.group_mutate(1).unwrap(), &b.mutate(1).unwrap(), &d).unwrap();
    }
}

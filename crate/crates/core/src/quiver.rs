//! Node-weighted quivers and foldings.
//!
//! Arrows are a signed antisymmetric matrix over all vertices: entry
//! `(i, j) = c > 0` means `c` arrows `i -> j`. Mutable vertices come first.

use std::fmt::Write as _;

use thiserror::Error;

use crate::matrix::{DivisorVector, ExtendedExchangeMatrix, ModifiedExchangeMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("principal part is not skew-symmetric at ({i},{j})")]
    NotSkewSymmetric { i: usize, j: usize },
    #[error("vertex {0} is frozen and cannot be mutated")]
    FrozenVertexMutation(usize),
    #[error("folding violated in class {class}: arrow between {} and {}", .edge.0, .edge.1)]
    FoldingViolation { class: usize, edge: (usize, usize) },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeWeightedQuiver {
    names: Vec<String>,
    mutable: usize,
    arrows: Vec<i64>,
    weights: Vec<i64>,
}

impl NodeWeightedQuiver {
    /// Quiver of a modified matrix whose principal part is skew-symmetric.
    /// Vertices are named `1`, `2`, ... in column order.
    pub fn from_matrix(
        bh: &ModifiedExchangeMatrix,
        d: &DivisorVector,
    ) -> Result<Self, QuiverError> {
        let names = (1..=bh.n() + bh.m()).map(|i| i.to_string()).collect();
        Self::from_matrix_named(bh, d, names)
    }

    pub fn from_matrix_named(
        bh: &ModifiedExchangeMatrix,
        d: &DivisorVector,
        names: Vec<String>,
    ) -> Result<Self, QuiverError> {
        let (n, m) = (bh.n(), bh.m());
        let v = n + m;
        if names.len() != v || d.len() != n {
            return Err(QuiverError::InvalidPartition(
                "vertex names or weights do not match the matrix".into(),
            ));
        }
        let mut arrows = vec![0; v * v];
        for i in 0..n {
            for j in 0..v {
                if j < n && bh.get(i, j) != -bh.get(j, i) {
                    return Err(QuiverError::NotSkewSymmetric { i, j });
                }
                arrows[i * v + j] = bh.get(i, j);
                arrows[j * v + i] = -bh.get(i, j);
            }
        }
        Ok(Self {
            names,
            mutable: n,
            arrows,
            weights: d.as_slice().to_vec(),
        })
    }

    pub fn to_matrix(&self) -> ModifiedExchangeMatrix {
        let v = self.vertex_count();
        let entries = (0..self.mutable)
            .flat_map(|i| (0..v).map(move |j| (i, j)))
            .map(|(i, j)| self.arrow(i, j))
            .collect();
        ModifiedExchangeMatrix::from_matrix(
            ExtendedExchangeMatrix::new(self.mutable, v - self.mutable, entries)
                .expect("consistent shape"),
        )
    }

    pub fn divisors(&self) -> DivisorVector {
        DivisorVector::new(self.weights.clone()).expect("positive weights")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn mutable_count(&self) -> usize {
        self.mutable
    }

    pub fn is_mutable(&self, i: usize) -> bool {
        i < self.mutable
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    /// Signed arrow count from `i` to `j`.
    pub fn arrow(&self, i: usize, j: usize) -> i64 {
        self.arrows[i * self.vertex_count() + j]
    }

    /// Mutation at `k` by the arrow rules. Paths `i -> k -> j` add `d_k`
    /// arrows between mutable endpoints and the weight of the mutable
    /// endpoint when the other is frozen; arrows at `k` reverse and
    /// opposite arrows cancel through the signed representation.
    pub fn weighted_mutation(&self, k: usize) -> Result<Self, QuiverError> {
        if !self.is_mutable(k) {
            return Err(QuiverError::FrozenVertexMutation(k));
        }
        let v = self.vertex_count();
        let mut out = self.clone();
        for i in (0..v).filter(|&i| i != k) {
            let into_k = self.arrow(i, k);
            if into_k <= 0 {
                continue;
            }
            for j in (0..v).filter(|&j| j != k && j != i) {
                let out_of_k = self.arrow(k, j);
                if out_of_k <= 0 {
                    continue;
                }
                let w = match (self.is_mutable(i), self.is_mutable(j)) {
                    (true, true) => self.weights[k],
                    (true, false) => self.weights[i],
                    (false, true) => self.weights[j],
                    (false, false) => 0,
                };
                let add = into_k * out_of_k * w;
                out.arrows[i * v + j] += add;
                out.arrows[j * v + i] -= add;
            }
        }
        for j in 0..v {
            out.arrows[k * v + j] = -self.arrow(k, j);
            out.arrows[j * v + k] = -self.arrow(j, k);
        }
        Ok(out)
    }

    /// Text form: `vertex <name> mutable <weight>` / `vertex <name> frozen`
    /// declarations, then `i -> j : count` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, name) in self.names.iter().enumerate() {
            if self.is_mutable(i) {
                writeln!(s, "vertex {name} mutable {}", self.weights[i]).expect("string write");
            } else {
                writeln!(s, "vertex {name} frozen").expect("string write");
            }
        }
        let v = self.vertex_count();
        for i in 0..v {
            for j in 0..v {
                let c = self.arrow(i, j);
                if c > 0 {
                    writeln!(s, "{} -> {} : {c}", self.names[i], self.names[j])
                        .expect("string write");
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, QuiverError> {
        let mut names: Vec<String> = Vec::new();
        let mut weights = Vec::new();
        let mut frozen_seen = false;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| QuiverError::Parse {
                line: lineno + 1,
                message: message.to_string(),
            };
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["vertex", name, "mutable", w] => {
                    if frozen_seen {
                        return Err(err("mutable vertices must precede frozen ones"));
                    }
                    let w: i64 = w.parse().map_err(|_| err("bad weight"))?;
                    if w < 1 {
                        return Err(err("weights must be positive"));
                    }
                    names.push((*name).to_string());
                    weights.push(w);
                }
                ["vertex", name, "frozen"] => {
                    frozen_seen = true;
                    names.push((*name).to_string());
                }
                [from, "->", to, ":", count] => {
                    let c: i64 = count.parse().map_err(|_| err("bad arrow count"))?;
                    edges.push((lineno + 1, from.to_string(), to.to_string(), c));
                }
                _ => return Err(err("expected a vertex declaration or `i -> j : count`")),
            }
        }
        let v = names.len();
        let mut arrows = vec![0i64; v * v];
        let index = |line: usize, name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| QuiverError::Parse {
                    line,
                    message: format!("unknown vertex `{name}`"),
                })
        };
        for (line, from, to, c) in edges {
            let (i, j) = (index(line, &from)?, index(line, &to)?);
            if i == j {
                return Err(QuiverError::Parse {
                    line,
                    message: "loops are not allowed".into(),
                });
            }
            arrows[i * v + j] += c;
            arrows[j * v + i] -= c;
        }
        Ok(Self {
            mutable: weights.len(),
            names,
            arrows,
            weights,
        })
    }
}

/// A partition of the vertex set into classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldingPartition {
    classes: Vec<Vec<usize>>,
}

impl FoldingPartition {
    pub fn new(classes: Vec<Vec<usize>>, vertex_count: usize) -> Result<Self, QuiverError> {
        let mut seen = vec![false; vertex_count];
        for &v in classes.iter().flatten() {
            if v >= vertex_count || seen[v] {
                return Err(QuiverError::InvalidPartition(format!(
                    "vertex {v} is out of range or repeated"
                )));
            }
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(QuiverError::InvalidPartition(format!("vertex {v} is not covered")));
        }
        Ok(Self { classes })
    }

    pub fn singletons(vertex_count: usize) -> Self {
        Self {
            classes: (0..vertex_count).map(|v| vec![v]).collect(),
        }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }
}

fn intra_class_arrows(q: &NodeWeightedQuiver, p: &FoldingPartition) -> Result<(), QuiverError> {
    for (class, members) in p.classes.iter().enumerate() {
        for (a, &u) in members.iter().enumerate() {
            for &v in &members[a + 1..] {
                if q.arrow(u, v) != 0 {
                    return Err(QuiverError::FoldingViolation { class, edge: (u, v) });
                }
            }
        }
    }
    Ok(())
}

fn mutate_class(q: &NodeWeightedQuiver, members: &[usize]) -> Result<NodeWeightedQuiver, QuiverError> {
    members
        .iter()
        .try_fold(q.clone(), |acc, &v| acc.weighted_mutation(v))
}

/// Checks that no class contains an arrow, before and after one group
/// mutation of each class of mutable vertices.
pub fn check_folding(q: &NodeWeightedQuiver, p: &FoldingPartition) -> Result<(), QuiverError> {
    intra_class_arrows(q, p)?;
    for members in &p.classes {
        if members.iter().all(|&v| q.is_mutable(v)) && !members.is_empty() {
            intra_class_arrows(&mutate_class(q, members)?, p)?;
        }
    }
    Ok(())
}

/// Mutates every vertex of class `j`. The class must be arrow-free; the
/// result is checked for arrow-free classes again.
pub fn group_mutation_quiver(
    q: &NodeWeightedQuiver,
    p: &FoldingPartition,
    j: usize,
) -> Result<NodeWeightedQuiver, QuiverError> {
    let members = p
        .classes
        .get(j)
        .ok_or_else(|| QuiverError::InvalidPartition(format!("no class {j}")))?;
    intra_class_arrows(q, p)?;
    let out = mutate_class(q, members)?;
    if cfg!(debug_assertions) && members.len() > 1 {
        let reversed: Vec<usize> = members.iter().rev().copied().collect();
        debug_assert_eq!(mutate_class(q, &reversed)?, out, "group mutation depends on order");
    }
    intra_class_arrows(&out, p)?;
    Ok(out)
}

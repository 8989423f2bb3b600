use std::cmp::Ordering;

use super::{LaurentError, VariableTable};

/// A Laurent monomial: one signed exponent per table symbol.
///
/// `Ord` is the canonical term order. Higher total degree sorts first;
/// ties are broken lexicographically in table order, the larger exponent
/// first. The order is compatible with multiplication, so leading terms
/// multiply.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[i64]>,
}

impl Monomial {
    pub fn one(len: usize) -> Self {
        Self {
            exps: vec![0; len].into_boxed_slice(),
        }
    }

    pub fn var(len: usize, i: usize, e: i64) -> Self {
        let mut exps = vec![0; len];
        exps[i] = e;
        Self {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn from_exponents(exps: Vec<i64>) -> Self {
        Self {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> i64 {
        self.exps[i]
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (i, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Self {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Self {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn inv(&self) -> Monomial {
        Self {
            exps: self.exps.iter().map(|e| -e).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Monomial {
        Self {
            exps: self.exps.iter().map(|e| e * n).collect(),
        }
    }

    /// Exponent of symbol `i` replaced by `e`.
    pub fn with_exponent(&self, i: usize, e: i64) -> Monomial {
        let mut exps = self.exps.to_vec();
        exps[i] = e;
        Monomial::from_exponents(exps)
    }

    /// Restriction to the symbols selected by `keep`, other exponents zeroed.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Monomial {
        Self {
            exps: self
                .exps
                .iter()
                .enumerate()
                .map(|(i, &e)| if keep(i) { e } else { 0 })
                .collect(),
        }
    }

    fn check_frozen(&self, table: &VariableTable) -> Result<(), LaurentError> {
        if self.len() != table.len() {
            return Err(LaurentError::LengthMismatch {
                expected: table.len(),
                found: self.len(),
            });
        }
        match self.support().find(|&(i, _)| table.role(i).is_cluster()) {
            Some((i, _)) => Err(LaurentError::NonFrozenSupport(table.name(i).to_string())),
            None => Ok(()),
        }
    }

    /// Tropical sum: componentwise maximum of exponents.
    pub fn tropical_add(
        &self,
        other: &Monomial,
        table: &VariableTable,
    ) -> Result<Monomial, LaurentError> {
        self.check_frozen(table)?;
        other.check_frozen(table)?;
        Ok(Self {
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        })
    }

    /// Tropical product: ordinary monomial product.
    pub fn tropical_mul(
        &self,
        other: &Monomial,
        table: &VariableTable,
    ) -> Result<Monomial, LaurentError> {
        self.check_frozen(table)?;
        other.check_frozen(table)?;
        Ok(self.mul(other))
    }

    pub fn display<'a>(&'a self, table: &'a VariableTable) -> impl std::fmt::Display + 'a {
        MonomialDisplay { m: self, table }
    }
}

struct MonomialDisplay<'a> {
    m: &'a Monomial,
    table: &'a VariableTable,
}

impl std::fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.m.is_one() {
            return f.write_str("1");
        }
        super::text::write_factors(f, self.m, self.table)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

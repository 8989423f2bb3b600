use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::table::same_table;
use super::{LaurentError, Monomial, TableRef};

/// Sparse Laurent polynomial with integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Debug, Clone)]
pub struct LaurentPolynomial {
    table: TableRef,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for LaurentPolynomial {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for LaurentPolynomial {}

impl LaurentPolynomial {
    pub fn zero(table: &TableRef) -> Self {
        Self {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &TableRef) -> Self {
        Self::constant(table, BigInt::one())
    }

    pub fn constant(table: &TableRef, c: impl Into<BigInt>) -> Self {
        Self::term(table, Monomial::one(table.len()), c)
    }

    pub fn var(table: &TableRef, i: usize) -> Self {
        Self::term(table, Monomial::var(table.len(), i, 1), 1)
    }

    pub fn monomial(table: &TableRef, m: Monomial) -> Self {
        Self::term(table, m, 1)
    }

    pub fn term(table: &TableRef, m: Monomial, c: impl Into<BigInt>) -> Self {
        assert_eq!(m.len(), table.len(), "monomial length differs from table size");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self {
            table: table.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(
        table: &TableRef,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Result<Self, LaurentError> {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            if m.len() != table.len() {
                return Err(LaurentError::LengthMismatch {
                    expected: table.len(),
                    found: m.len(),
                });
            }
            *acc.entry(m).or_default() += c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self {
            table: table.clone(),
            terms: acc,
        })
    }

    pub fn table(&self) -> &TableRef {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next()
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<(&Monomial, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// The monomial `m` if `self == m` (coefficient one).
    pub fn as_monomial(&self) -> Option<&Monomial> {
        self.as_term().filter(|(_, c)| c.is_one()).map(|(m, _)| m)
    }

    fn check(&self, other: &Self) -> Result<(), LaurentError> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(LaurentError::TableMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_scaled_shifted(other, &BigInt::one(), None);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_scaled_shifted(other, &-BigInt::one(), None);
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.table));
        }
        if let Some((m, c)) = other.as_term() {
            return Ok(self.mul_term(m, c));
        }
        if let Some((m, c)) = self.as_term() {
            return Ok(other.mul_term(m, c));
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity(self.terms.len().max(other.terms.len()));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        Ok(Self {
            table: self.table.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// Product with the single term `c·m`.
    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        Self {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        self.mul_term(m, &BigInt::one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.mul_term(&Monomial::one(self.table.len()), c)
    }

    /// `self += c · m · other`, with `m = 1` when `None`.
    fn add_scaled_shifted(&mut self, other: &Self, c: &BigInt, m: Option<&Monomial>) {
        for (k, v) in &other.terms {
            let key = match m {
                Some(m) => k.mul(m),
                None => k.clone(),
            };
            let add = v * c;
            match self.terms.entry(key) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(add);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += add;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
    }

    /// Nonnegative power by repeated squaring; negative powers are allowed
    /// for single terms with unit coefficient.
    pub fn pow(&self, n: i64) -> Result<Self, LaurentError> {
        if n < 0 {
            let (m, c) = self.as_term().ok_or(LaurentError::NonMonomialInverse)?;
            if !(c.is_one() || (-c).is_one()) {
                return Err(LaurentError::NonMonomialInverse);
            }
            let sign = if c.is_negative() && n % 2 != 0 { -1 } else { 1 };
            return Ok(Self::term(&self.table, m.pow(n), sign));
        }
        if let Some((m, c)) = self.as_term() {
            return Ok(Self::term(&self.table, m.pow(n), num_traits::pow(c.clone(), n as usize)));
        }
        let mut base = self.clone();
        let mut acc = Self::one(&self.table);
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact quotient `n / d`.
    ///
    /// Candidate quotient terms are confined to the box spanned by the
    /// coordinatewise exponent ranges of numerator and divisor; leaving the
    /// box, a non-integral coefficient, or a nonzero remainder means the
    /// division is not exact.
    pub fn exact_div(&self, d: &Self) -> Result<Self, LaurentError> {
        self.check(d)?;
        if d.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.table));
        }
        if let Some((m, c)) = d.as_term() {
            let inv = m.inv();
            let mut terms = BTreeMap::new();
            for (k, v) in &self.terms {
                let (q, r) = v.div_rem(c);
                if !r.is_zero() {
                    return Err(LaurentError::InexactDivision);
                }
                terms.insert(k.mul(&inv), q);
            }
            return Ok(Self {
                table: self.table.clone(),
                terms,
            });
        }
        let (nlo, nhi) = self.exponent_ranges();
        let (dlo, dhi) = d.exponent_ranges();
        let lo: Vec<i64> = nlo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = nhi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(LaurentError::InexactDivision);
        }
        let (dm, dc) = d.leading_term().expect("nonzero divisor");
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading_term() {
            let (rm, rc) = (rm.clone(), rc.clone());
            let qm = rm.div(&dm);
            let in_box = qm
                .exponents()
                .iter()
                .zip(lo.iter().zip(&hi))
                .all(|(e, (l, h))| l <= e && e <= h);
            if !in_box {
                return Err(LaurentError::InexactDivision);
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return Err(LaurentError::InexactDivision);
            }
            rem.add_scaled_shifted(d, &-&qc, Some(&qm));
            quot.insert(qm, qc);
        }
        Ok(Self {
            table: self.table.clone(),
            terms: quot,
        })
    }

    /// Coordinatewise minimum and maximum exponents over the support.
    pub fn exponent_ranges(&self) -> (Vec<i64>, Vec<i64>) {
        let n = self.table.len();
        let mut lo = vec![i64::MAX; n];
        let mut hi = vec![i64::MIN; n];
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                lo[i] = lo[i].min(e);
                hi[i] = hi[i].max(e);
            }
        }
        (lo, hi)
    }

    /// Substitutes symbol `v` by the monomial `m`.
    pub fn substitute(&self, v: &str, m: &Monomial) -> Result<Self, LaurentError> {
        let i = self.table.lookup(v)?;
        if m.len() != self.table.len() {
            return Err(LaurentError::LengthMismatch {
                expected: self.table.len(),
                found: m.len(),
            });
        }
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (k, c) in &self.terms {
            let e = k.exponent(i);
            let key = k.with_exponent(i, 0).mul(&m.pow(e));
            *acc.entry(key).or_default() += c;
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Self {
            table: self.table.clone(),
            terms: acc,
        })
    }

    /// Sum of the absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::text::write_poly(f, self)
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&LaurentPolynomial> for &LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $method(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
                self.$try(rhs)
                    .expect("operands must share a variable table")
            }
        }
        impl $trait<LaurentPolynomial> for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $method(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&-BigInt::one())
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

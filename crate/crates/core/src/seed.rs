//! Generalized seeds of geometric type and their mutation.

use num_bigint::BigInt;
use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPolynomial, Monomial, RingMap, Role, TableRef};
use crate::matrix::{modify, DivisorVector, ExtendedExchangeMatrix, MatrixError, ModifiedExchangeMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("string {k} must start and end with 1")]
    IllegalString { k: usize },
    #[error("string {k} has {found} entries, expected {expected}")]
    StringLength { k: usize, expected: usize, found: usize },
    #[error("string {k} involves cluster variable `{name}`")]
    StringSupport { k: usize, name: String },
    #[error("variable table does not match the seed: {0}")]
    TableLayout(String),
    #[error("index {index} out of range ({what})")]
    IndexOutOfRange { what: &'static str, index: usize },
    #[error("root formula fails at k={k}, r={r}")]
    RootFormula { k: usize, r: usize },
}

/// One string `(p_{k0}, ..., p_{k d_k})` of Laurent monomials per mutable
/// index, each starting and ending with 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientStrings {
    strings: Vec<Vec<Monomial>>,
}

impl CoefficientStrings {
    pub fn new(strings: Vec<Vec<Monomial>>) -> Result<Self, SeedError> {
        for (k, s) in strings.iter().enumerate() {
            if s.len() < 2 || !s[0].is_one() || !s[s.len() - 1].is_one() {
                return Err(SeedError::IllegalString { k });
            }
        }
        Ok(Self { strings })
    }

    /// Strings `(1, 1, ..., 1)` of the given lengths minus one.
    pub fn trivial(d: &DivisorVector, len: usize) -> Self {
        Self {
            strings: d
                .as_slice()
                .iter()
                .map(|&dk| vec![Monomial::one(len); dk as usize + 1])
                .collect(),
        }
    }

    pub fn get(&self, k: usize, r: usize) -> &Monomial {
        &self.strings[k][r]
    }

    pub fn string(&self, k: usize) -> &[Monomial] {
        &self.strings[k]
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn is_legal(&self) -> bool {
        self.strings
            .iter()
            .all(|s| s.len() >= 2 && s[0].is_one() && s[s.len() - 1].is_one())
    }

    /// The string mutation rule: string `k` is reversed.
    pub fn reverse(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.strings[k].reverse();
        out
    }

    pub fn map(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        Self {
            strings: self.strings.iter().map(|s| s.iter().map(&f).collect()).collect(),
        }
    }

    pub fn from_fn(d: &DivisorVector, f: impl Fn(usize, usize) -> Monomial) -> Self {
        Self {
            strings: (0..d.len())
                .map(|k| (0..=d.get(k) as usize).map(|r| f(k, r)).collect())
                .collect(),
        }
    }
}

/// Cluster and stable monomials of direction `k`, over the seed's table.
/// The cluster monomials use the table's cluster symbols as formal
/// stand-ins for the current cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeContext {
    pub k: usize,
    pub d: usize,
    pub u_gt: Monomial,
    pub u_lt: Monomial,
    /// `v_gt[r]` is `v_{k>}^{[r]}` for `r = 0..=d`.
    pub v_gt: Vec<Monomial>,
    pub v_lt: Vec<Monomial>,
}

/// A generalized seed `(x, B, P)`. The table lists the `N` initial cluster
/// symbols, then the `M` frozen symbols (matrix columns), then any number of
/// coefficient symbols that are not matrix columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedSeed {
    table: TableRef,
    cluster: Vec<LaurentPolynomial>,
    matrix: ExtendedExchangeMatrix,
    modified: ModifiedExchangeMatrix,
    divisors: DivisorVector,
    strings: CoefficientStrings,
    history: Vec<usize>,
}

impl GeneralizedSeed {
    /// The initial seed: cluster variables are the cluster symbols.
    pub fn new(
        table: TableRef,
        matrix: ExtendedExchangeMatrix,
        divisors: DivisorVector,
        strings: CoefficientStrings,
    ) -> Result<Self, SeedError> {
        let cluster = (0..matrix.n())
            .map(|i| LaurentPolynomial::var(&table, i))
            .collect();
        Self::with_cluster(table, cluster, matrix, divisors, strings, Vec::new())
    }

    pub fn with_cluster(
        table: TableRef,
        cluster: Vec<LaurentPolynomial>,
        matrix: ExtendedExchangeMatrix,
        divisors: DivisorVector,
        strings: CoefficientStrings,
        history: Vec<usize>,
    ) -> Result<Self, SeedError> {
        let (n, m) = (matrix.n(), matrix.m());
        if table.len() < n + m {
            return Err(SeedError::TableLayout(format!(
                "{} symbols for {n} cluster and {m} frozen variables",
                table.len()
            )));
        }
        for (i, s) in table.symbols().iter().enumerate() {
            let ok = if i < n {
                s.role == Role::Cluster
            } else {
                s.role != Role::Cluster
            };
            if !ok {
                return Err(SeedError::TableLayout(format!(
                    "symbol `{}` has role {} at position {i}",
                    s.name, s.role
                )));
            }
        }
        if cluster.len() != n || cluster.iter().any(|c| c.is_zero() || c.table() != &table) {
            return Err(SeedError::TableLayout("cluster does not match the table".into()));
        }
        matrix.diagonalizer()?;
        let modified = modify(&matrix, &divisors)?;
        if strings.len() != n {
            return Err(SeedError::StringLength {
                k: strings.len(),
                expected: n,
                found: strings.len(),
            });
        }
        for k in 0..n {
            let expected = divisors.get(k) as usize + 1;
            let s = strings.string(k);
            if s.len() != expected {
                return Err(SeedError::StringLength { k, expected, found: s.len() });
            }
            for p in s {
                if p.len() != table.len() {
                    return Err(SeedError::TableLayout("string monomial length".into()));
                }
                if let Some((i, _)) = p.support().find(|&(i, _)| i < n) {
                    return Err(SeedError::StringSupport {
                        k,
                        name: table.name(i).to_string(),
                    });
                }
            }
        }
        if !strings.is_legal() {
            let k = (0..n)
                .find(|&k| {
                    let s = strings.string(k);
                    !s[0].is_one() || !s[s.len() - 1].is_one()
                })
                .unwrap_or(0);
            return Err(SeedError::IllegalString { k });
        }
        Ok(Self {
            table,
            cluster,
            matrix,
            modified,
            divisors,
            strings,
            history,
        })
    }

    pub fn table(&self) -> &TableRef {
        &self.table
    }

    pub fn rank(&self) -> usize {
        self.matrix.n()
    }

    pub fn frozen_count(&self) -> usize {
        self.matrix.m()
    }

    pub fn cluster(&self) -> &[LaurentPolynomial] {
        &self.cluster
    }

    pub fn matrix(&self) -> &ExtendedExchangeMatrix {
        &self.matrix
    }

    pub fn modified(&self) -> &ModifiedExchangeMatrix {
        &self.modified
    }

    pub fn divisors(&self) -> &DivisorVector {
        &self.divisors
    }

    pub fn strings(&self) -> &CoefficientStrings {
        &self.strings
    }

    /// Reduced mutation sequence from the initial seed (adjacent repeats
    /// cancel, since each mutation is an involution).
    pub fn history(&self) -> &[usize] {
        &self.history
    }

    /// Table index of frozen variable `j`.
    pub fn frozen_symbol(&self, j: usize) -> usize {
        self.rank() + j
    }

    fn check_k(&self, k: usize) -> Result<(), SeedError> {
        if k < self.rank() {
            Ok(())
        } else {
            Err(SeedError::IndexOutOfRange { what: "mutable index", index: k })
        }
    }

    fn bhat(&self, k: usize, j: usize) -> i64 {
        self.modified.get(k, j)
    }

    /// `f_j^{[r]} = f_j^{floor(r |B̂_kj| / d_k)}` for frozen index `j`.
    pub fn frozen_box(&self, j: usize, r: usize, k: usize) -> Result<Monomial, SeedError> {
        self.check_k(k)?;
        if j >= self.frozen_count() {
            return Err(SeedError::IndexOutOfRange { what: "frozen index", index: j });
        }
        let dk = self.divisors.get(k);
        if r as i64 > dk {
            return Err(SeedError::IndexOutOfRange { what: "string position", index: r });
        }
        let b = self.bhat(k, self.rank() + j).abs();
        Ok(Monomial::var(
            self.table.len(),
            self.frozen_symbol(j),
            (r as i64 * b).div_euclid(dk),
        ))
    }

    pub fn exchange_context(&self, k: usize) -> Result<ExchangeContext, SeedError> {
        self.check_k(k)?;
        let (n, len) = (self.rank(), self.table.len());
        let dk = self.divisors.get(k);
        let mut u_gt = vec![0; len];
        let mut u_lt = vec![0; len];
        for i in 0..n {
            let b = self.bhat(k, i);
            if b > 0 {
                u_gt[i] = b;
            } else {
                u_lt[i] = -b;
            }
        }
        let stable = |r: i64, positive: bool| {
            let mut e = vec![0; len];
            for j in 0..self.frozen_count() {
                let b = self.bhat(k, n + j);
                if (b > 0) == positive && b != 0 {
                    e[n + j] = (r * b.abs()).div_euclid(dk);
                }
            }
            Monomial::from_exponents(e)
        };
        Ok(ExchangeContext {
            k,
            d: dk as usize,
            u_gt: Monomial::from_exponents(u_gt),
            u_lt: Monomial::from_exponents(u_lt),
            v_gt: (0..=dk).map(|r| stable(r, true)).collect(),
            v_lt: (0..=dk).map(|r| stable(r, false)).collect(),
        })
    }

    /// `θ_k` with the current cluster written as the formal cluster symbols.
    pub fn exchange_polynomial_formal(&self, k: usize) -> Result<LaurentPolynomial, SeedError> {
        let ctx = self.exchange_context(k)?;
        let d = ctx.d;
        let terms = (0..=d).map(|r| {
            let m = self
                .strings
                .get(k, r)
                .mul(&ctx.u_gt.pow(r as i64))
                .mul(&ctx.v_gt[r])
                .mul(&ctx.u_lt.pow((d - r) as i64))
                .mul(&ctx.v_lt[d - r]);
            (m, BigInt::from(1))
        });
        Ok(LaurentPolynomial::from_terms(&self.table, terms)?)
    }

    /// Substitutes the current cluster for the formal cluster symbols.
    pub fn evaluate(&self, formal: &LaurentPolynomial) -> Result<LaurentPolynomial, SeedError> {
        let mut map = RingMap::by_name(&self.table, &self.table)?;
        for (i, x) in self.cluster.iter().enumerate() {
            map.set(i, x.clone())?;
        }
        Ok(map.apply(formal)?)
    }

    /// `θ_k` as a Laurent polynomial in the initial data.
    pub fn exchange_polynomial(&self, k: usize) -> Result<LaurentPolynomial, SeedError> {
        self.evaluate(&self.exchange_polynomial_formal(k)?)
    }

    /// Seed mutation in direction `k`.
    pub fn mutate(&self, k: usize) -> Result<Self, SeedError> {
        let theta = self.exchange_polynomial(k)?;
        let mut cluster = self.cluster.clone();
        cluster[k] = theta.exact_div(&self.cluster[k])?;
        let matrix = self.matrix.mutate(k)?;
        let modified = self.modified.mutate(&self.divisors, k)?;
        debug_assert_eq!(modified, modify(&matrix, &self.divisors)?);
        let mut history = self.history.clone();
        if history.last() == Some(&k) {
            history.pop();
        } else {
            history.push(k);
        }
        Ok(Self {
            table: self.table.clone(),
            cluster,
            matrix,
            modified,
            divisors: self.divisors.clone(),
            strings: self.strings.reverse(k),
            history,
        })
    }

    /// The initial seed carrying the matrix and strings of `mutate(k)`:
    /// only the exchange data moves, the cluster stays formal.
    pub fn mutate_data(&self, k: usize) -> Result<Self, SeedError> {
        self.check_k(k)?;
        Self::new(
            self.table.clone(),
            self.matrix.mutate(k)?,
            self.divisors.clone(),
            self.strings.reverse(k),
        )
    }

    pub fn mutate_sequence(&self, s: &[usize]) -> Result<Self, SeedError> {
        s.iter().try_fold(self.clone(), |t, &k| t.mutate(k))
    }

    /// `ⁿ(f_j)_k^r = f_j^{n floor(r B̂_kj / d_k) - floor(n r B̂_kj / d_k)}`,
    /// with the signed entry of `B̂`.
    pub fn special_monomial(
        &self,
        n: i64,
        j: usize,
        k: usize,
        r: usize,
    ) -> Result<Monomial, SeedError> {
        self.frozen_box(j, r, k)?;
        let dk = self.divisors.get(k);
        let rb = r as i64 * self.bhat(k, self.rank() + j);
        let e = n * rb.div_euclid(dk) - (n * rb).div_euclid(dk);
        Ok(Monomial::var(self.table.len(), self.frozen_symbol(j), e))
    }

    /// `q_{kr} = v_>^r v_<^{d-r} / (v_>^{[r]} v_<^{[d-r]})^d`.
    pub fn q_monomial(&self, k: usize, r: usize) -> Result<Monomial, SeedError> {
        let ctx = self.exchange_context(k)?;
        if r > ctx.d {
            return Err(SeedError::IndexOutOfRange { what: "string position", index: r });
        }
        let d = ctx.d;
        let num = ctx.v_gt[d].pow(r as i64).mul(&ctx.v_lt[d].pow((d - r) as i64));
        let den = ctx.v_gt[r].mul(&ctx.v_lt[d - r]).pow(d as i64);
        let q = num.div(&den);
        debug_assert_eq!(q, self.q_from_special_monomials(k, r)?);
        Ok(q)
    }

    /// `q_{kr}` as the inverse product of the special monomials with `n = d_k`.
    pub fn q_from_special_monomials(&self, k: usize, r: usize) -> Result<Monomial, SeedError> {
        let dk = self.divisors.get(k);
        (0..self.frozen_count()).try_fold(Monomial::one(self.table.len()), |acc, j| {
            Ok(acc.div(&self.special_monomial(dk, j, k, r)?))
        })
    }

    /// `p̂_{kr} = p_{kr}^{d_k} / q_{kr}`.
    pub fn p_hat(&self, k: usize, r: usize) -> Result<Monomial, SeedError> {
        let dk = self.divisors.get(k);
        Ok(self.strings.get(k, r).pow(dk).div(&self.q_monomial(k, r)?))
    }

    /// Rebuilds `θ_k` from `p̂`: each `p̂_{kr} v_>^r v_<^{d-r}` must be a
    /// perfect `d_k`-th power whose root, times the cluster monomials,
    /// recovers the corresponding term of the exchange polynomial.
    pub fn root_formula_check(&self, k: usize) -> Result<(), SeedError> {
        let ctx = self.exchange_context(k)?;
        let d = ctx.d;
        let mut terms = Vec::with_capacity(d + 1);
        for r in 0..=d {
            let lhs = self
                .p_hat(k, r)?
                .mul(&ctx.v_gt[d].pow(r as i64))
                .mul(&ctx.v_lt[d].pow((d - r) as i64));
            if lhs.exponents().iter().any(|e| e % d as i64 != 0) {
                return Err(SeedError::RootFormula { k, r });
            }
            let root = Monomial::from_exponents(
                lhs.exponents().iter().map(|e| e / d as i64).collect(),
            );
            let direct = self.strings.get(k, r).mul(&ctx.v_gt[r]).mul(&ctx.v_lt[d - r]);
            if root != direct {
                return Err(SeedError::RootFormula { k, r });
            }
            let term = root
                .mul(&ctx.u_gt.pow(r as i64))
                .mul(&ctx.u_lt.pow((d - r) as i64));
            terms.push((term, BigInt::from(1)));
        }
        let rebuilt = LaurentPolynomial::from_terms(&self.table, terms)?;
        if rebuilt != self.exchange_polynomial_formal(k)? {
            return Err(SeedError::RootFormula { k, r: d });
        }
        Ok(())
    }

    /// The homogeneous variable of direction `k`: `u_> v_>^{[1]} / (u_< v_<^{[1]})`
    /// when the stable parts carry no floors, `u_> / u_<` otherwise.
    pub fn tau_variable(&self, k: usize) -> Result<Monomial, SeedError> {
        let ctx = self.exchange_context(k)?;
        if self.is_floor_free(k)? {
            Ok(ctx.u_gt.mul(&ctx.v_gt[1]).div(&ctx.u_lt.mul(&ctx.v_lt[1])))
        } else {
            Ok(ctx.u_gt.div(&ctx.u_lt))
        }
    }

    /// Whether `v^{[r]} = (v^{[1]})^r` on both sides for every `r`.
    pub fn is_floor_free(&self, k: usize) -> Result<bool, SeedError> {
        let ctx = self.exchange_context(k)?;
        Ok((0..=ctx.d).all(|r| {
            ctx.v_gt[r] == ctx.v_gt[1].pow(r as i64) && ctx.v_lt[r] == ctx.v_lt[1].pow(r as i64)
        }))
    }

    /// Replaces the strings, keeping everything else.
    pub fn with_strings(&self, table: TableRef, strings: CoefficientStrings) -> Result<Self, SeedError> {
        let map = RingMap::by_name(&self.table, &table)?;
        let cluster = self
            .cluster
            .iter()
            .map(|c| map.apply(c))
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_cluster(
            table,
            cluster,
            self.matrix.clone(),
            self.divisors.clone(),
            strings,
            self.history.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix_a, fix_b, fix_c};

    fn poly(seed: &GeneralizedSeed, text: &str) -> LaurentPolynomial {
        LaurentPolynomial::parse(text, seed.table()).unwrap()
    }

    fn mono(seed: &GeneralizedSeed, text: &str) -> Monomial {
        Monomial::parse(text, seed.table()).unwrap()
    }

    #[test]
    fn fix_b_exchange_polynomials() {
        let s = fix_b();
        assert_eq!(
            s.exchange_polynomial(0).unwrap(),
            poly(&s, "a^4 + p1x*a^2*y + p2x*a*y^2*b + y^3*b^2")
        );
        assert_eq!(s.exchange_polynomial(1).unwrap(), poly(&s, "b^3*x^2 + p1y*b*x + 1"));
    }

    #[test]
    fn frozen_box_values() {
        let s = fix_b();
        assert_eq!(s.frozen_box(0, 2, 0).unwrap(), mono(&s, "a^2"));
        assert!(s.frozen_box(0, 0, 0).unwrap().is_one());
        assert_eq!(s.frozen_box(0, 3, 0).unwrap(), mono(&s, "a^4"));
        assert!(s.frozen_box(9, 1, 0).is_err());
    }

    #[test]
    fn q_values() {
        let s = fix_b();
        assert_eq!(s.q_monomial(0, 2).unwrap(), mono(&s, "a*b"));
        for (k, d) in [(0usize, 3usize), (1, 2)] {
            assert!(s.q_monomial(k, 0).unwrap().is_one());
            assert!(s.q_monomial(k, d).unwrap().is_one());
        }
        let c = fix_c();
        assert!(c.q_monomial(0, 1).unwrap().is_one());
    }

    #[test]
    fn special_monomials_use_signed_entries() {
        let s = fix_b();
        assert_eq!(s.special_monomial(6, 0, 0, 1).unwrap(), mono(&s, "a^-4"));
        assert_eq!(s.special_monomial(6, 0, 0, 2).unwrap(), mono(&s, "a^-2"));
        assert_eq!(s.special_monomial(6, 1, 0, 1).unwrap(), mono(&s, "b^-4"));
        assert!(s.special_monomial(6, 0, 0, 3).unwrap().is_one());
        for r in 0..=3 {
            let base = s.special_monomial(3, 0, 0, r).unwrap();
            assert_eq!(base.pow(4), s.special_monomial(12, 0, 0, r).unwrap());
        }
    }

    #[test]
    fn fix_c_mutation() {
        let c = fix_c();
        let m = c.mutate(0).unwrap();
        assert_eq!(m.cluster()[0], poly(&c, "(1 + f^-1 + f^2)/x"));
        assert_eq!(m.strings(), c.strings());
        assert_eq!(m.mutate(0).unwrap(), c);
    }

    #[test]
    fn involution_on_fixtures() {
        for s in [fix_a(), fix_b(), fix_c()] {
            for k in 0..s.rank() {
                let back = s.mutate(k).unwrap().mutate(k).unwrap();
                assert_eq!(back, s);
            }
        }
    }

    #[test]
    fn root_formula_on_fixtures() {
        for s in [fix_a(), fix_b(), fix_c()] {
            for k in 0..s.rank() {
                s.root_formula_check(k).unwrap();
                s.mutate(k).unwrap().root_formula_check(k).unwrap();
            }
        }
    }

    #[test]
    fn tau_unadjoined() {
        let s = fix_b();
        assert_eq!(s.tau_variable(0).unwrap(), mono(&s, "y"));
        assert_eq!(s.tau_variable(1).unwrap(), mono(&s, "x^-1"));
    }

    #[test]
    fn out_of_range() {
        assert!(fix_a().mutate(2).is_err());
    }
}

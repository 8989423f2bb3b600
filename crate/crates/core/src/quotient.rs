//! The folded seed attached to a generalized seed, normal forms modulo the
//! relations among its auxiliary variables, and the embedding of the
//! adjoined seed into that quotient.
//!
//! Group `k` of the folded seed owns cluster symbols `{x}_1 … {x}_{d_k}`,
//! auxiliary symbols `t_{x}_a` and `s_{x}_a`, and placeholders `rho_{x}_r`
//! for `0 < r < d_k`, where `{x}` is the name of the `k`-th cluster symbol.
//! The quotient is by `ρ_{k,r} = Σ_{|J|=r} ∏_{a∈J} t_{k,a} ∏_{a∉J} s_{k,a}`;
//! at `r = 0` and `r = d_k` these give `∏ s = ∏ t = 1`, which the normal
//! form uses to eliminate the last `s` and `t` of every group.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::adjoin::{tau_tilde, AdjoinError, AdjoinMode, AdjoinedSeed};
use crate::laurent::{
    LaurentError, LaurentPolynomial, Monomial, RingMap, Role, TableRef, VariableTable,
};
use crate::matrix::DivisorVector;
use crate::seed::{CoefficientStrings, GeneralizedSeed, SeedError};
use crate::unfold::{build, FoldedMatrix, GroupLayout, UnfoldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Unfold(#[from] UnfoldError),
    #[error(transparent)]
    Adjoin(#[from] AdjoinError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("group index {0} out of range")]
    GroupIndex(usize),
    #[error("member {member} of group {k}: {what} is `{found}`, group value `{expected}`")]
    GroupCoherence {
        k: usize,
        member: usize,
        what: &'static str,
        expected: String,
        found: String,
    },
    #[error("product formula fails for group {k}: nonzero residual `{residual}`")]
    ProductFormula { k: usize, residual: String },
    #[error("embedding condition ({condition}) fails for k={k} after {position} mutations: {detail}")]
    Embedding {
        condition: &'static str,
        k: usize,
        position: usize,
        detail: String,
    },
    #[error("frozen variable {j}: composite gives `{found}`, expected `{expected}`")]
    Subquotient { j: usize, expected: String, found: String },
    #[error("cluster variables are not tracked by this folded seed")]
    ClusterNotTracked,
    #[error("folded seed matrix differs from the group-mutated unfolding after {0:?}")]
    Correspondence(Vec<usize>),
}

fn placeholder_name(table: &VariableTable, k: usize, r: usize) -> String {
    format!("rho_{}_{}", table.name(k), r)
}

/// A seed of the folded cluster algebra: ordinary mutation rules (all
/// divisors 1) on the unfolded matrix, mutated one group at a time.
#[derive(Debug, Clone)]
pub struct FoldedSeed {
    seed: GeneralizedSeed,
    folded: FoldedMatrix,
    sequence: Vec<usize>,
    rho: Vec<Vec<Option<usize>>>,
    track_cluster: bool,
}

/// The initial folded seed of `gca`. Frozen symbols take the names of the
/// roots adjoined by [`tau_tilde`] with the same `mode`.
pub fn folded_initial_seed(gca: &GeneralizedSeed, mode: AdjoinMode) -> Result<FoldedSeed, QuotientError> {
    let folded = build(gca.matrix(), gca.divisors(), mode)?;
    let roots = tau_tilde(gca, mode)?;
    let (n, m) = (gca.rank(), gca.frozen_count());
    let names = gca.table();
    let d = gca.divisors();
    let mut table = VariableTable::new();
    for k in 0..n {
        for a in 1..=d.get(k) {
            table.push(format!("{}_{a}", names.name(k)), Role::Cluster, Some(k))?;
        }
    }
    for j in 0..m {
        let root = roots.seed().table().name(roots.seed().frozen_symbol(j));
        table.push(root, Role::Frozen, None)?;
    }
    for k in 0..n {
        for (prefix, role) in [("t", Role::TAux), ("s", Role::SAux)] {
            for a in 1..=d.get(k) {
                table.push(format!("{prefix}_{}_{a}", names.name(k)), role, Some(k))?;
            }
        }
    }
    let mut rho = Vec::with_capacity(n);
    for k in 0..n {
        let dk = d.get(k) as usize;
        let mut row = vec![None; dk + 1];
        for (r, slot) in row.iter_mut().enumerate().take(dk).skip(1) {
            *slot = Some(table.push(placeholder_name(names, k, r), Role::Coefficient, Some(k))?);
        }
        rho.push(row);
    }
    let table = table.into_ref();
    let ones = DivisorVector::ones(folded.layout().pseudo_rank());
    let strings = CoefficientStrings::trivial(&ones, table.len());
    let seed = GeneralizedSeed::new(table, folded.matrix().clone(), ones, strings)?;
    Ok(FoldedSeed {
        seed,
        folded,
        sequence: Vec::new(),
        rho,
        track_cluster: true,
    })
}

impl FoldedSeed {
    pub fn seed(&self) -> &GeneralizedSeed {
        &self.seed
    }

    pub fn table(&self) -> &TableRef {
        self.seed.table()
    }

    pub fn folded(&self) -> &FoldedMatrix {
        &self.folded
    }

    pub fn layout(&self) -> &GroupLayout {
        self.folded.layout()
    }

    /// The group mutations applied so far, without cancellation.
    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// Whether group `k` has been mutated an odd number of times.
    pub fn is_reversed(&self, k: usize) -> bool {
        self.sequence.iter().filter(|&&g| g == k).count() % 2 == 1
    }

    /// Table index of the placeholder `ρ_{k,r}`, for `0 < r < d_k`.
    pub fn rho_symbol(&self, k: usize, r: usize) -> Option<usize> {
        self.rho.get(k)?.get(r).copied().flatten()
    }

    /// Stops computing cluster variables under mutation; matrices,
    /// exchange polynomials in the formal cluster symbols and group
    /// monomials stay available.
    pub fn without_cluster(mut self) -> Self {
        self.track_cluster = false;
        self
    }

    pub fn tracks_cluster(&self) -> bool {
        self.track_cluster
    }

    pub fn group_mutate(&self, k: usize) -> Result<Self, QuotientError> {
        if k >= self.layout().group_count() {
            return Err(QuotientError::GroupIndex(k));
        }
        let folded = self.folded.group_mutate(k)?;
        let seed = if self.track_cluster {
            self.layout()
                .group(k)
                .try_fold(self.seed.clone(), |s, a| s.mutate(a))?
        } else {
            GeneralizedSeed::with_cluster(
                self.table().clone(),
                self.seed.cluster().to_vec(),
                folded.matrix().clone(),
                self.seed.divisors().clone(),
                self.seed.strings().clone(),
                Vec::new(),
            )?
        };
        let mut sequence = self.sequence.clone();
        sequence.push(k);
        if seed.matrix() != folded.matrix() {
            return Err(QuotientError::Correspondence(sequence));
        }
        Ok(Self {
            seed,
            folded,
            sequence,
            rho: self.rho.clone(),
            track_cluster: self.track_cluster,
        })
    }

    pub fn group_mutate_sequence(&self, s: &[usize]) -> Result<Self, QuotientError> {
        s.iter().try_fold(self.clone(), |acc, &k| acc.group_mutate(k))
    }

    /// `∏_{a∈𝒟ᵏ} Y_a` for the current cluster.
    pub fn group_product(&self, k: usize) -> Result<LaurentPolynomial, QuotientError> {
        if k >= self.layout().group_count() {
            return Err(QuotientError::GroupIndex(k));
        }
        if !self.track_cluster {
            return Err(QuotientError::ClusterNotTracked);
        }
        let cluster = self.seed.cluster();
        self.layout()
            .group(k)
            .try_fold(LaurentPolynomial::one(self.table()), |acc, a| {
                Ok(acc.try_mul(&cluster[a])?)
            })
    }

    /// The group monomials of group `k`, read off the block constants and
    /// checked against every member of the group.
    pub fn group_monomials(&self, k: usize) -> Result<GroupMonomials, QuotientError> {
        let l = self.layout();
        if k >= l.group_count() {
            return Err(QuotientError::GroupIndex(k));
        }
        let len = self.table().len();
        let row = l.group(k).start;
        let mut u = (vec![0; len], vec![0; len]);
        for j in 0..l.group_count() {
            let c = self.folded.get(row, l.group(j).start);
            for b in l.group(j) {
                if c > 0 {
                    u.0[b] = c;
                } else {
                    u.1[b] = -c;
                }
            }
        }
        let mut v = (vec![0; len], vec![0; len]);
        for f in 0..l.frozen_count() {
            let col = l.frozen_column(f);
            let c = self.folded.get(row, col);
            if c > 0 {
                v.0[col] = c;
            } else {
                v.1[col] = -c;
            }
        }
        let g = GroupMonomials {
            table: self.table().clone(),
            u_gt: Monomial::from_exponents(u.0),
            u_lt: Monomial::from_exponents(u.1),
            v_gt: Monomial::from_exponents(v.0),
            v_lt: Monomial::from_exponents(v.1),
        };
        let frozen = l.frozen_column(0)..l.frozen_column(0) + l.frozen_count();
        for a in l.group(k) {
            let ctx = self.seed.exchange_context(a)?;
            let checks = [
                ("U>", &g.u_gt, ctx.u_gt.clone()),
                ("U<", &g.u_lt, ctx.u_lt.clone()),
                ("V>", &g.v_gt, ctx.v_gt[1].restrict(|i| frozen.contains(&i))),
                ("V<", &g.v_lt, ctx.v_lt[1].restrict(|i| frozen.contains(&i))),
            ];
            for (what, expected, found) in checks {
                if *expected != found {
                    return Err(QuotientError::GroupCoherence {
                        k,
                        member: a,
                        what,
                        expected: expected.display(self.table()).to_string(),
                        found: found.display(self.table()).to_string(),
                    });
                }
            }
        }
        Ok(g)
    }
}

/// `U_{k>}, U_{k<}, V_{k>}, V_{k<}` of one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupMonomials {
    table: TableRef,
    pub u_gt: Monomial,
    pub u_lt: Monomial,
    pub v_gt: Monomial,
    pub v_lt: Monomial,
}

impl fmt::Display for GroupMonomials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "U> = {}, U< = {}, V> = {}, V< = {}",
            self.u_gt.display(&self.table),
            self.u_lt.display(&self.table),
            self.v_gt.display(&self.table),
            self.v_lt.display(&self.table)
        )
    }
}

/// Normal forms in the quotient of the folded table by the ρ relations.
#[derive(Debug, Clone)]
pub struct QuotientContext {
    table: TableRef,
    layout: GroupLayout,
    elimination: RingMap,
    map: RingMap,
}

impl QuotientContext {
    pub fn new(fs: &FoldedSeed) -> Result<Self, QuotientError> {
        let table = fs.table().clone();
        let layout = fs.layout().clone();
        let mut elimination = RingMap::by_name(&table, &table)?;
        for k in 0..layout.group_count() {
            for cols in [layout.t_columns(k), layout.s_columns(k)] {
                let last = cols.end - 1;
                let mut e = vec![0; table.len()];
                e[cols.start..last].fill(-1);
                elimination.set_monomial(last, Monomial::from_exponents(e))?;
            }
        }
        let mut ctx = Self {
            table,
            map: elimination.clone(),
            elimination,
            layout,
        };
        for k in 0..ctx.layout.group_count() {
            for r in 1..ctx.layout.size(k) {
                if let Some(i) = fs.rho_symbol(k, r) {
                    let image = ctx.symmetric_sum(k, r)?;
                    ctx.map.set(i, image)?;
                }
            }
        }
        Ok(ctx)
    }

    pub fn table(&self) -> &TableRef {
        &self.table
    }

    /// Normal form of `Σ_{|J|=r} ∏_{a∈J} t_{k,a} ∏_{a∉J} s_{k,a}`.
    pub fn symmetric_sum(&self, k: usize, r: usize) -> Result<LaurentPolynomial, QuotientError> {
        let t = self.layout.t_columns(k);
        let s = self.layout.s_columns(k);
        let terms = subsets(self.layout.size(k), r).map(|j| {
            let mut e = vec![0; self.table.len()];
            for (a, selected) in j.into_iter().enumerate() {
                let c = if selected { t.start + a } else { s.start + a };
                e[c] = 1;
            }
            (Monomial::from_exponents(e), BigInt::from(1))
        });
        let sum = LaurentPolynomial::from_terms(&self.table, terms)?;
        Ok(self.elimination.apply(&sum)?)
    }

    pub fn normal_form(&self, p: &LaurentPolynomial) -> Result<LaurentPolynomial, QuotientError> {
        Ok(self.map.apply(p)?)
    }
}

/// Indicator vectors of the `r`-element subsets of a `d`-element set.
fn subsets(d: usize, r: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..1 << d)
        .filter(move |m| m.count_ones() as usize == r)
        .map(move |m| (0..d).map(|a| m >> a & 1 == 1).collect())
}

/// Checks that the normal form of `∏_{a∈𝒟ᵏ} θ_a` is
/// `Σ_r ρ_{k,r} (U_> V_>)^r (U_< V_<)^{d_k-r}`, with the string of group
/// `k` reversed when the group has been mutated an odd number of times.
pub fn product_formula_check(
    fs: &FoldedSeed,
    ctx: &QuotientContext,
    k: usize,
) -> Result<(), QuotientError> {
    let g = fs.group_monomials(k)?;
    let d = fs.layout().size(k);
    let lhs = fs
        .layout()
        .group(k)
        .try_fold(LaurentPolynomial::one(fs.table()), |acc, a| {
            Ok::<_, QuotientError>(acc.try_mul(&fs.seed().exchange_polynomial_formal(a)?)?)
        })?;
    let hi = g.u_gt.mul(&g.v_gt);
    let lo = g.u_lt.mul(&g.v_lt);
    let mut rhs = LaurentPolynomial::zero(fs.table());
    for r in 0..=d {
        let index = if fs.is_reversed(k) { d - r } else { r };
        let term = ctx
            .symmetric_sum(k, index)?
            .mul_monomial(&hi.pow(r as i64).mul(&lo.pow((d - r) as i64)));
        rhs = rhs.try_add(&term)?;
    }
    let residual = ctx.normal_form(&lhs)?.try_sub(&ctx.normal_form(&rhs)?)?;
    if residual.is_zero() {
        Ok(())
    } else {
        Err(QuotientError::ProductFormula {
            k,
            residual: residual.to_string(),
        })
    }
}

/// The adjoined seed with formal strings, its folded counterpart, and the
/// map `Φ` between them, mutated in step.
#[derive(Debug, Clone)]
pub struct Embedding {
    actual: AdjoinedSeed,
    generic: GeneralizedSeed,
    specialize: RingMap,
    folded: FoldedSeed,
    context: QuotientContext,
    phi: RingMap,
    position: usize,
}

impl Embedding {
    pub fn new(gca: &GeneralizedSeed, mode: AdjoinMode) -> Result<Self, QuotientError> {
        let actual = tau_tilde(gca, mode)?;
        let adjoined = actual.seed();
        let mut table = VariableTable::new();
        for s in adjoined.table().symbols() {
            table.push(s.name.clone(), s.role, s.group)?;
        }
        let d = adjoined.divisors();
        let mut placeholders = Vec::with_capacity(adjoined.rank());
        for k in 0..adjoined.rank() {
            let dk = d.get(k) as usize;
            let mut row = vec![None; dk + 1];
            for (r, slot) in row.iter_mut().enumerate().take(dk).skip(1) {
                *slot = Some(table.push(
                    placeholder_name(adjoined.table(), k, r),
                    Role::Coefficient,
                    Some(k),
                )?);
            }
            placeholders.push(row);
        }
        let table = table.into_ref();
        let strings = CoefficientStrings::from_fn(d, |k, r| match placeholders[k][r] {
            Some(i) => Monomial::var(table.len(), i, 1),
            None => Monomial::one(table.len()),
        });
        let generic = adjoined.with_strings(table.clone(), strings)?;

        let mut specialize = RingMap::by_name_partial(&table, adjoined.table());
        for (k, row) in placeholders.iter().enumerate() {
            for (r, slot) in row.iter().enumerate() {
                if let Some(i) = slot {
                    specialize.set_monomial(*i, adjoined.strings().get(k, r).clone())?;
                }
            }
        }

        let folded = folded_initial_seed(gca, mode)?;
        let context = QuotientContext::new(&folded)?;
        let ftable = folded.table();
        let mut phi = RingMap::by_name_partial(&table, ftable);
        for k in 0..gca.rank() {
            let mut e = vec![0; ftable.len()];
            for a in folded.layout().group(k) {
                e[a] = 1;
            }
            phi.set_monomial(k, Monomial::from_exponents(e))?;
        }
        Ok(Self {
            actual,
            generic,
            specialize,
            folded,
            context,
            phi,
            position: 0,
        })
    }

    pub fn actual(&self) -> &AdjoinedSeed {
        &self.actual
    }

    /// The adjoined seed with every interior string entry a placeholder.
    pub fn generic(&self) -> &GeneralizedSeed {
        &self.generic
    }

    pub fn folded(&self) -> &FoldedSeed {
        &self.folded
    }

    pub fn context(&self) -> &QuotientContext {
        &self.context
    }

    pub fn phi(&self) -> &RingMap {
        &self.phi
    }

    pub fn mutate(&self, k: usize) -> Result<Self, QuotientError> {
        Ok(Self {
            actual: self.actual.mutate(k)?,
            generic: self.generic.mutate(k)?,
            specialize: self.specialize.clone(),
            folded: self.folded.group_mutate(k)?,
            context: self.context.clone(),
            phi: self.phi.clone(),
            position: self.position + 1,
        })
    }

    /// Normal form of `Φ(p)` for `p` over the generic table.
    pub fn image(&self, p: &LaurentPolynomial) -> Result<LaurentPolynomial, QuotientError> {
        self.context.normal_form(&self.phi.apply(p)?)
    }

    /// Checks conditions (i) to (iv) for every `k`, and that the generic
    /// cluster specializes to the cluster of the adjoined seed.
    pub fn check(&self) -> Result<(), QuotientError> {
        let fail = |condition, k, detail: String| QuotientError::Embedding {
            condition,
            k,
            position: self.position,
            detail,
        };
        let ft = self.folded.table();
        for k in 0..self.generic.rank() {
            let c = self.generic.exchange_context(k)?;
            let g = self.folded.group_monomials(k)?;
            for (side, u, target) in [(">", &c.u_gt, &g.u_gt), ("<", &c.u_lt, &g.u_lt)] {
                let image = self.phi.apply_monomial(u)?;
                if image != *target {
                    return Err(fail(
                        "i",
                        k,
                        format!("U{side}: {} vs {}", image.display(ft), target.display(ft)),
                    ));
                }
            }
            for (side, v, target) in [(">", &c.v_gt[1], &g.v_gt), ("<", &c.v_lt[1], &g.v_lt)] {
                let image = self.phi.apply_monomial(v)?;
                if image != *target {
                    return Err(fail(
                        "ii",
                        k,
                        format!("V{side}: {} vs {}", image.display(ft), target.display(ft)),
                    ));
                }
            }
            let x = self.image(&self.generic.cluster()[k])?;
            let y = self.context.normal_form(&self.folded.group_product(k)?)?;
            if x != y {
                return Err(fail("iii", k, format!("{x} vs {y}")));
            }
            for r in 0..=c.d {
                let p = LaurentPolynomial::monomial(
                    self.generic.table(),
                    self.generic.strings().get(k, r).clone(),
                );
                let lhs = self.image(&p)?;
                let rhs = self.context.normal_form(&self.ratio_sum(k, r, &g)?)?;
                if lhs != rhs {
                    return Err(fail("iv", k, format!("r={r}: {lhs} vs {rhs}")));
                }
            }
            let special = self.specialize.apply(&self.generic.cluster()[k])?;
            if special != self.actual.seed().cluster()[k] {
                return Err(fail("specialization", k, "generic cluster does not specialize".into()));
            }
        }
        Ok(())
    }

    /// `Σ_{|J|=r} ∏_{a∈J} v_{a>}/V_> ∏_{a∉J} v_{a<}/V_<` over group `k`.
    fn ratio_sum(&self, k: usize, r: usize, g: &GroupMonomials) -> Result<LaurentPolynomial, QuotientError> {
        let members: Vec<usize> = self.folded.layout().group(k).collect();
        let mut ratios = Vec::with_capacity(members.len());
        for &a in &members {
            let ctx = self.folded.seed().exchange_context(a)?;
            ratios.push((ctx.v_gt[1].div(&g.v_gt), ctx.v_lt[1].div(&g.v_lt)));
        }
        let len = self.folded.table().len();
        let terms = subsets(members.len(), r).map(|j| {
            let m = j.iter().zip(&ratios).fold(Monomial::one(len), |acc, (&sel, (hi, lo))| {
                acc.mul(if sel { hi } else { lo })
            });
            (m, BigInt::from(1))
        });
        Ok(LaurentPolynomial::from_terms(self.folded.table(), terms)?)
    }
}

/// Mutates the adjoined seed along `s` and the folded seed along the same
/// group sequence, checking the embedding conditions after every prefix.
pub fn embedding_check(gca: &GeneralizedSeed, s: &[usize], mode: AdjoinMode) -> Result<(), QuotientError> {
    let mut e = Embedding::new(gca, mode)?;
    e.check()?;
    for &k in s {
        e = e.mutate(k)?;
        e.check()?;
    }
    Ok(())
}

/// Checks that `Φ` after the root embedding sends every frozen `f_j` to
/// `F_j^D` (the exponent chosen by `mode`), and that the initial cluster
/// lands on the group products.
pub fn subquotient_check(gca: &GeneralizedSeed, mode: AdjoinMode) -> Result<(), QuotientError> {
    let e = Embedding::new(gca, mode)?;
    let lift = RingMap::by_name(e.actual.seed().table(), e.generic.table())?;
    let n = mode.exponent(gca);
    let ft = e.folded.table();
    for j in 0..gca.frozen_count() {
        let root = e.actual.phi().image(gca.frozen_symbol(j));
        let found = e.image(&lift.apply(&root)?)?;
        let column = e.folded.layout().frozen_column(j);
        let expected = LaurentPolynomial::monomial(ft, Monomial::var(ft.len(), column, n));
        if found != expected {
            return Err(QuotientError::Subquotient {
                j,
                expected: expected.to_string(),
                found: found.to_string(),
            });
        }
    }
    e.check()
}

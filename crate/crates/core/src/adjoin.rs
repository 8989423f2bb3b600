//! Adjoining roots of frozen variables, the floor-free seeds they produce,
//! and the generalized coefficients of those seeds.

use std::fmt;

use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPolynomial, Monomial, RingMap, VariableTable};
use crate::seed::{CoefficientStrings, GeneralizedSeed, SeedError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdjoinError {
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error("frozen index {0} out of range")]
    FrozenIndex(usize),
    #[error("root exponent must be positive, got {0}")]
    Exponent(i64),
    #[error("exchange polynomial {k} is not homogeneous: term r={r} is `{term}`")]
    Homogeneity { k: usize, r: usize, term: String },
    #[error("d_{k} does not divide the exponents of q_{k},{r} after adjoining")]
    NotDivisible { k: usize, r: usize },
    #[error("generalized coefficient ({k},{r}): extracted `{extracted}`, formula gives `{formula}`")]
    Rho {
        k: usize,
        r: usize,
        extracted: String,
        formula: String,
    },
    #[error("transport condition ({condition}) fails for k={k} after {position} mutations: {detail}")]
    Transport {
        condition: &'static str,
        k: usize,
        position: usize,
        detail: String,
    },
}

/// Which exponent `tau_tilde` uses for every frozen variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdjoinMode {
    /// The total multiplicity `D = d_1 ... d_N`.
    #[default]
    Total,
    /// `lcm(d_1, ..., d_N)`.
    Lcm,
}

impl AdjoinMode {
    pub fn exponent(self, seed: &GeneralizedSeed) -> i64 {
        match self {
            AdjoinMode::Total => seed.divisors().total_multiplicity(),
            AdjoinMode::Lcm => seed.divisors().lcm(),
        }
    }
}

impl std::str::FromStr for AdjoinMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "total" => Ok(AdjoinMode::Total),
            "lcm" => Ok(AdjoinMode::Lcm),
            other => Err(format!("unknown adjoin mode `{other}` (expected total or lcm)")),
        }
    }
}

impl fmt::Display for AdjoinMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdjoinMode::Total => "total",
            AdjoinMode::Lcm => "lcm",
        })
    }
}

/// A seed with roots of some frozen variables adjoined, kept in step with
/// the seed it came from.
#[derive(Debug, Clone)]
pub struct AdjoinedSeed {
    base: GeneralizedSeed,
    seed: GeneralizedSeed,
    steps: Vec<(usize, i64)>,
    phi: RingMap,
}

impl AdjoinedSeed {
    /// The trivial adjoining: no roots, identity embedding.
    pub fn identity(base: &GeneralizedSeed) -> Self {
        let phi = RingMap::by_name(base.table(), base.table()).expect("same table");
        Self {
            base: base.clone(),
            seed: base.clone(),
            steps: Vec::new(),
            phi,
        }
    }

    pub fn base(&self) -> &GeneralizedSeed {
        &self.base
    }

    pub fn seed(&self) -> &GeneralizedSeed {
        &self.seed
    }

    /// The `(j, n)` pairs applied so far, in order.
    pub fn steps(&self) -> &[(usize, i64)] {
        &self.steps
    }

    /// The embedding from the base table into the adjoined table.
    pub fn phi(&self) -> &RingMap {
        &self.phi
    }

    /// Product of the exponents adjoined to frozen variable `j`.
    pub fn exponent(&self, j: usize) -> i64 {
        self.steps.iter().filter(|s| s.0 == j).map(|s| s.1).product()
    }

    /// Adjoins an `n`-th root of frozen variable `j` of the current seed.
    pub fn adjoin(&self, j: usize, n: i64) -> Result<Self, AdjoinError> {
        let (seed, step) = adjoin_step(&self.seed, j, n)?;
        let mut phi = RingMap::by_name_partial(self.base.table(), seed.table());
        for i in 0..self.base.table().len() {
            phi.set(i, step.apply(&self.phi.image(i))?)?;
        }
        let mut steps = self.steps.clone();
        steps.push((j, n));
        Ok(Self {
            base: self.base.clone(),
            seed,
            steps,
            phi,
        })
    }

    pub fn mutate(&self, k: usize) -> Result<Self, AdjoinError> {
        Ok(Self {
            base: self.base.mutate(k)?,
            seed: self.seed.mutate(k)?,
            steps: self.steps.clone(),
            phi: self.phi.clone(),
        })
    }

    pub fn mutate_sequence(&self, s: &[usize]) -> Result<Self, AdjoinError> {
        s.iter().try_fold(self.clone(), |t, &k| t.mutate(k))
    }

    /// `φ(x)` for a Laurent polynomial over the base table.
    pub fn embed(&self, p: &LaurentPolynomial) -> Result<LaurentPolynomial, AdjoinError> {
        Ok(self.phi.apply(p)?)
    }

    /// The generalized coefficients extracted from the homogeneous form of
    /// every exchange polynomial, cross-checked against
    /// `ρ_{kr} = p_{kr}^n q_{kr}^{-n/d_k}` computed on the base seed.
    pub fn rho(&self) -> Result<GeneralizedCoefficientTable, AdjoinError> {
        let table = rho_by_extraction(&self.seed)?;
        for k in 0..self.seed.rank() {
            for r in 0..=self.seed.divisors().get(k) as usize {
                let formula = self.rho_formula(k, r)?;
                let extracted = table.get(k, r);
                if &formula != extracted {
                    let t = self.seed.table();
                    return Err(AdjoinError::Rho {
                        k,
                        r,
                        extracted: extracted.display(t).to_string(),
                        formula: formula.display(t).to_string(),
                    });
                }
            }
        }
        Ok(table)
    }

    /// `φ(p_{kr}) · φ(q_{kr})^{-1/d_k}` on the base seed.
    pub fn rho_formula(&self, k: usize, r: usize) -> Result<Monomial, AdjoinError> {
        let dk = self.base.divisors().get(k);
        let p = self.phi.apply_monomial(self.base.strings().get(k, r))?;
        let q = self.phi.apply_monomial(&self.base.q_monomial(k, r)?)?;
        if q.exponents().iter().any(|e| e % dk != 0) {
            return Err(AdjoinError::NotDivisible { k, r });
        }
        let root = Monomial::from_exponents(q.exponents().iter().map(|e| -e / dk).collect());
        Ok(p.mul(&root))
    }
}

/// Adjoins an `n`-th root of frozen variable `j`: `B̄` scales column `j`
/// by `n` and `p̄_{kr} = φ(p_{kr}) · ⁿ(f_j)_k^r`.
pub fn adjoin_root(seed: &GeneralizedSeed, j: usize, n: i64) -> Result<AdjoinedSeed, AdjoinError> {
    AdjoinedSeed::identity(seed).adjoin(j, n)
}

/// Adjoins the same root of every frozen variable, with the exponent chosen
/// by `mode`.
pub fn tau_tilde(seed: &GeneralizedSeed, mode: AdjoinMode) -> Result<AdjoinedSeed, AdjoinError> {
    let n = mode.exponent(seed);
    (0..seed.frozen_count()).try_fold(AdjoinedSeed::identity(seed), |acc, j| acc.adjoin(j, n))
}

fn root_name(table: &VariableTable, old: &str) -> String {
    let mut chars = old.chars();
    let upper: String = chars
        .next()
        .map(|c| c.to_uppercase().chain(chars).collect())
        .unwrap_or_default();
    table.fresh_name(&upper)
}

fn adjoin_step(
    seed: &GeneralizedSeed,
    j: usize,
    n: i64,
) -> Result<(GeneralizedSeed, RingMap), AdjoinError> {
    if j >= seed.frozen_count() {
        return Err(AdjoinError::FrozenIndex(j));
    }
    if n < 1 {
        return Err(AdjoinError::Exponent(n));
    }
    let old = seed.table();
    if n == 1 {
        return Ok((seed.clone(), RingMap::by_name(old, old)?));
    }
    let pos = seed.frozen_symbol(j);
    let root = root_name(old, old.name(pos));
    let mut table = VariableTable::new();
    for (i, s) in old.symbols().iter().enumerate() {
        let name = if i == pos { root.clone() } else { s.name.clone() };
        table.push(name, s.role, s.group)?;
    }
    let table = table.into_ref();
    let mut phi = RingMap::by_name_partial(old, &table);
    phi.set_monomial(pos, Monomial::var(table.len(), pos, n))?;

    let cluster = seed
        .cluster()
        .iter()
        .map(|c| phi.apply(c))
        .collect::<Result<Vec<_>, _>>()?;
    let matrix = seed.matrix().scale_column(pos, n);
    let d = seed.divisors();
    let mut strings = Vec::with_capacity(seed.rank());
    for k in 0..seed.rank() {
        let mut s = Vec::with_capacity(d.get(k) as usize + 1);
        for r in 0..=d.get(k) as usize {
            let special = seed.special_monomial(n, j, k, r)?;
            let correction = Monomial::var(table.len(), pos, special.exponent(pos));
            s.push(phi.apply_monomial(seed.strings().get(k, r))?.mul(&correction));
        }
        strings.push(s);
    }
    let adjoined = GeneralizedSeed::with_cluster(
        table,
        cluster,
        matrix,
        d.clone(),
        CoefficientStrings::new(strings)?,
        seed.history().to_vec(),
    )?;
    Ok((adjoined, phi))
}

/// Checks that every term of `θ_k` is `p_{kr} (u_> v_>^{[1]})^r (u_< v_<^{[1]})^{d_k-r}`.
pub fn homogeneity_check(seed: &GeneralizedSeed, k: usize) -> Result<(), AdjoinError> {
    let ctx = seed.exchange_context(k)?;
    let d = ctx.d;
    let hi = ctx.u_gt.mul(&ctx.v_gt[1]);
    let lo = ctx.u_lt.mul(&ctx.v_lt[1]);
    for r in 0..=d {
        let p = seed.strings().get(k, r);
        let term = p
            .mul(&ctx.u_gt.pow(r as i64))
            .mul(&ctx.v_gt[r])
            .mul(&ctx.u_lt.pow((d - r) as i64))
            .mul(&ctx.v_lt[d - r]);
        let homogeneous = p.mul(&hi.pow(r as i64)).mul(&lo.pow((d - r) as i64));
        if term != homogeneous {
            return Err(AdjoinError::Homogeneity {
                k,
                r,
                term: term.display(seed.table()).to_string(),
            });
        }
    }
    Ok(())
}

/// `ρ_{kr}`: the coefficient of `τ_k^r` in `θ_k / (u_< v_<^{[1]})^{d_k}`.
pub fn rho_by_extraction(seed: &GeneralizedSeed) -> Result<GeneralizedCoefficientTable, AdjoinError> {
    let mut values = Vec::with_capacity(seed.rank());
    for k in 0..seed.rank() {
        homogeneity_check(seed, k)?;
        let ctx = seed.exchange_context(k)?;
        let d = ctx.d;
        let tau = seed.tau_variable(k)?;
        let lo = ctx.u_lt.mul(&ctx.v_lt[1]);
        let mut row = Vec::with_capacity(d + 1);
        for r in 0..=d {
            let term = seed
                .strings()
                .get(k, r)
                .mul(&ctx.u_gt.pow(r as i64))
                .mul(&ctx.v_gt[r])
                .mul(&ctx.u_lt.pow((d - r) as i64))
                .mul(&ctx.v_lt[d - r]);
            row.push(term.div(&lo.pow(d as i64)).div(&tau.pow(r as i64)));
        }
        values.push(row);
    }
    Ok(GeneralizedCoefficientTable {
        table: seed.table().clone(),
        values,
    })
}

/// The generalized coefficients `ρ_{kr}` of a floor-free seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedCoefficientTable {
    table: crate::laurent::TableRef,
    values: Vec<Vec<Monomial>>,
}

impl GeneralizedCoefficientTable {
    pub fn table(&self) -> &crate::laurent::TableRef {
        &self.table
    }

    pub fn get(&self, k: usize, r: usize) -> &Monomial {
        &self.values[k][r]
    }

    pub fn string(&self, k: usize) -> &[Monomial] {
        &self.values[k]
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }
}

impl fmt::Display for GeneralizedCoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, row) in self.values.iter().enumerate() {
            let parts: Vec<String> = row.iter().map(|m| m.display(&self.table).to_string()).collect();
            writeln!(f, "{}: {}", self.table.name(k), parts.join(" | "))?;
        }
        Ok(())
    }
}

/// Mutates the base and adjoined seeds along `s` and checks, at every
/// prefix and for every `k` and `r`, that `φ` carries cluster monomials,
/// coefficient-times-stable monomials and cluster variables of the base
/// seed to those of the adjoined seed.
pub fn transport_check(adjoined: &AdjoinedSeed, s: &[usize]) -> Result<(), AdjoinError> {
    let mut current = adjoined.clone();
    transport_conditions(&current, 0)?;
    for (i, &k) in s.iter().enumerate() {
        current = current.mutate(k)?;
        transport_conditions(&current, i + 1)?;
    }
    Ok(())
}

fn transport_conditions(a: &AdjoinedSeed, position: usize) -> Result<(), AdjoinError> {
    let (base, seed, phi) = (&a.base, &a.seed, &a.phi);
    let fail = |condition, k, detail: String| AdjoinError::Transport {
        condition,
        k,
        position,
        detail,
    };
    for k in 0..base.rank() {
        let c = base.exchange_context(k)?;
        let cb = seed.exchange_context(k)?;
        let d = c.d;
        for r in 0..=d {
            let (rr, rest) = (r as i64, (d - r) as i64);
            let u = phi.apply_monomial(&c.u_gt.pow(rr).mul(&c.u_lt.pow(rest)))?;
            let ub = cb.u_gt.pow(rr).mul(&cb.u_lt.pow(rest));
            if u != ub {
                return Err(fail("i", k, format!("r={r}")));
            }
            let v = phi.apply_monomial(
                &base.strings().get(k, r).mul(&c.v_gt[r]).mul(&c.v_lt[d - r]),
            )?;
            let vb = seed.strings().get(k, r).mul(&cb.v_gt[r]).mul(&cb.v_lt[d - r]);
            if v != vb {
                return Err(fail(
                    "ii",
                    k,
                    format!(
                        "r={r}: {} vs {}",
                        v.display(seed.table()),
                        vb.display(seed.table())
                    ),
                ));
            }
        }
        if phi.apply(&base.cluster()[k])? != seed.cluster()[k] {
            return Err(fail("iii", k, "cluster variables differ".into()));
        }
    }
    Ok(())
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
    fn single_root_of_a() {
        let b = fix_b();
        let a = adjoin_root(&b, 0, 6).unwrap();
        let s = a.seed();
        assert_eq!(s.table().name(2), "A");
        assert_eq!(s.matrix().row(0), &[0, 3, -24, 2, 0, 0, 0]);
        assert_eq!(s.strings().get(0, 1), &mono(s, "p1x*A^-4"));
        assert_eq!(s.strings().get(0, 2), &mono(s, "p2x*A^-2"));
        transport_check(&a, &[0]).unwrap();
    }

    #[test]
    fn n_one_is_identity() {
        let b = fix_b();
        assert_eq!(adjoin_root(&b, 1, 1).unwrap().seed(), &b);
        assert_eq!(tau_tilde(&fix_c(), AdjoinMode::Lcm).unwrap().seed().table().name(1), "F");
    }

    #[test]
    fn fully_adjoined_fix_b() {
        let a = tau_tilde(&fix_b(), AdjoinMode::Total).unwrap();
        let s = a.seed();
        assert_eq!(s.matrix().row(0), &[0, 3, -24, 12, 0, 0, 0]);
        assert_eq!(s.matrix().row(1), &[-2, 0, 0, -18, 0, 0, 0]);
        assert_eq!(
            s.exchange_polynomial(0).unwrap(),
            poly(s, "A^24 + P1x^6*A^12*y + P2x^6*A^6*y^2*B^6 + y^3*B^12")
        );
        assert_eq!(s.exchange_polynomial(1).unwrap(), poly(s, "B^18*x^2 + P1y^6*B^6*x + 1"));
        assert_eq!(s.tau_variable(0).unwrap(), mono(s, "B^4*y*A^-8"));
        assert_eq!(s.tau_variable(1).unwrap(), mono(s, "x^-1*B^-9"));
        for k in 0..2 {
            homogeneity_check(s, k).unwrap();
            let theta = a.base().exchange_polynomial(k).unwrap();
            assert_eq!(a.embed(&theta).unwrap(), s.exchange_polynomial(k).unwrap());
        }
        a.rho().unwrap();
    }

    #[test]
    fn fix_c_adjoined() {
        let a = tau_tilde(&fix_c(), AdjoinMode::Total).unwrap();
        let s = a.seed();
        assert_eq!(s.matrix().row(0), &[0, 4]);
        let rho = a.rho().unwrap();
        assert_eq!(rho.get(0, 1), &mono(s, "F^-4"));
        assert!(rho.get(0, 0).is_one() && rho.get(0, 2).is_one());
        let c = fix_c();
        let theta = c.exchange_polynomial(0).unwrap();
        assert_eq!(a.embed(&theta).unwrap(), poly(s, "1 + F^-2 + F^4"));
    }

    #[test]
    fn transport_on_fixtures() {
        for (seed, n, depth) in [(fix_a(), 6, 2), (fix_b(), 6, 3), (fix_c(), 2, 4)] {
            for j in 0..seed.frozen_count() {
                let a = adjoin_root(&seed, j, n).unwrap();
                for k in 0..seed.rank() {
                    let s: Vec<usize> = (0..depth).map(|i| (k + i) % seed.rank()).collect();
                    transport_check(&a, &s).unwrap();
                }
            }
        }
    }

    #[test]
    fn homogeneity_fails_before_adjoining() {
        assert!(matches!(
            homogeneity_check(&fix_b(), 0),
            Err(AdjoinError::Homogeneity { k: 0, .. })
        ));
    }

    #[test]
    fn repeated_roots_compose() {
        let a = fix_a();
        let twice = adjoin_root(&a, 1, 2).unwrap().adjoin(1, 3).unwrap();
        let once = adjoin_root(&a, 1, 6).unwrap();
        assert_eq!(twice.seed().matrix(), once.seed().matrix());
        for k in 0..a.rank() {
            assert_eq!(twice.seed().strings().string(k), once.seed().strings().string(k));
        }
        assert_eq!(twice.exponent(1), 6);
    }

    #[test]
    fn rho_after_mutation() {
        for seed in [fix_a(), fix_b(), fix_c()] {
            for mode in [AdjoinMode::Total, AdjoinMode::Lcm] {
                let a = tau_tilde(&seed, mode).unwrap();
                for k in 0..seed.rank() {
                    let m = a.mutate(k).unwrap();
                    m.rho().unwrap();
                    for l in 0..seed.rank() {
                        homogeneity_check(m.seed(), l).unwrap();
                    }
                }
            }
        }
    }
}

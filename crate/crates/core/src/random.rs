//! Reproducible random generalized seeds.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::laurent::{Monomial, Role, VariableTable};
use crate::matrix::{DivisorVector, ExtendedExchangeMatrix};
use crate::seed::{CoefficientStrings, GeneralizedSeed};

/// Size limits for [`random_seed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomBounds {
    pub max_rank: usize,
    pub max_frozen: usize,
    pub max_divisor: i64,
    /// Bound on `|B_ij|` over all entries.
    pub max_entry: i64,
    /// Bound on `|B_ij B_ji|` for mutable pairs.
    pub max_pair_product: i64,
    /// Bound on the sum of `|B_ij B_ji|` over all mutable pairs.
    pub max_total_pair_product: i64,
    /// Bound on the absolute exponents inside coefficient strings.
    pub max_string_exponent: i64,
}

impl Default for RandomBounds {
    fn default() -> Self {
        Self {
            max_rank: 3,
            max_frozen: 2,
            max_divisor: 3,
            max_entry: 4,
            max_pair_product: 4,
            max_total_pair_product: 4,
            max_string_exponent: 1,
        }
    }
}

/// A deterministic generator for case `index` of a suite seeded by `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws a seed within `bounds`. The principal part is `diag(d) C W` for
/// a skew-symmetric `C` and positive diagonal `W`, so it is always
/// skew-symmetrizable and every divisor divides its row.
pub fn random_seed(rng: &mut impl Rng, bounds: &RandomBounds) -> GeneralizedSeed {
    let n = rng.gen_range(1..=bounds.max_rank.max(1));
    let m = rng.gen_range(0..=bounds.max_frozen);
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=bounds.max_divisor.max(1))).collect();
    let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
    let mut b = ExtendedExchangeMatrix::zero(n, m);
    loop {
        let mut total = 0;
        for i in 0..n {
            for j in i + 1..n {
                let fits = |c: i64| {
                    let bij = d[i] * c * w[j];
                    let bji = -d[j] * c * w[i];
                    bij.abs() <= bounds.max_entry
                        && bji.abs() <= bounds.max_entry
                        && (bij * bji).abs() <= bounds.max_pair_product
                };
                let choices: Vec<i64> = (-2..=2).filter(|&c| fits(c)).collect();
                let c = choices[rng.gen_range(0..choices.len())];
                b.set(i, j, d[i] * c * w[j]);
                b.set(j, i, -d[j] * c * w[i]);
                total += (b.get(i, j) * b.get(j, i)).abs();
            }
        }
        if total <= bounds.max_total_pair_product {
            break;
        }
    }
    for i in 0..n {
        for l in 0..m {
            b.set(i, n + l, rng.gen_range(-bounds.max_entry..=bounds.max_entry));
        }
    }
    let mut table = VariableTable::new();
    for i in 0..n {
        table.push(format!("x{}", i + 1), Role::Cluster, None).expect("fresh name");
    }
    for l in 0..m {
        table.push(format!("f{}", l + 1), Role::Frozen, None).expect("fresh name");
    }
    let table = table.into_ref();
    let divisors = DivisorVector::new(d).expect("positive divisors");
    let e = bounds.max_string_exponent;
    let strings = (0..n)
        .map(|k| {
            (0..=divisors.get(k) as usize)
                .map(|r| {
                    let mut exps = vec![0; table.len()];
                    if r != 0 && r != divisors.get(k) as usize {
                        for x in &mut exps[n..] {
                            *x = rng.gen_range(-e..=e);
                        }
                    }
                    Monomial::from_exponents(exps)
                })
                .collect()
        })
        .collect();
    let strings = CoefficientStrings::new(strings).expect("endpoints are 1");
    GeneralizedSeed::new(table, b, divisors, strings).expect("generated seed is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_bounds_and_is_reproducible() {
        let bounds = RandomBounds::default();
        for i in 0..300 {
            let s = random_seed(&mut case_rng(7, i), &bounds);
            assert_eq!(s, random_seed(&mut case_rng(7, i), &bounds));
            let b = s.matrix();
            assert!(b.n() <= 3 && b.m() <= 2);
            for r in 0..b.n() {
                for c in 0..b.cols() {
                    assert!(b.get(r, c).abs() <= 4);
                    if c < b.n() {
                        assert!((b.get(r, c) * b.get(c, r)).abs() <= 4);
                    }
                }
            }
            let mut total = 0;
            for r in 0..b.n() {
                for c in r + 1..b.n() {
                    total += (b.get(r, c) * b.get(c, r)).abs();
                }
            }
            assert!(total <= 4);
        }
    }
}

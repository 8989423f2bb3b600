//! Verification suites: each target checks one family of identities at
//! every prefix of a mutation sequence.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::adjoin::{homogeneity_check, tau_tilde, AdjoinMode};
use crate::quotient::{embedding_check, folded_initial_seed, product_formula_check, subquotient_check, QuotientContext};
use crate::random::{case_rng, random_seed, RandomBounds};
use crate::seed::GeneralizedSeed;
use crate::unfold::{build, double_constant_check, hadamard_check, unfolding_conditions_check};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Hadamard,
    DoubleConstant,
    Laurent,
    ProductFormula,
    Embedding,
    Subquotient,
    Involution,
    RootFormula,
}

impl Target {
    pub const ALL: [Target; 8] = [
        Target::Hadamard,
        Target::DoubleConstant,
        Target::Laurent,
        Target::ProductFormula,
        Target::Embedding,
        Target::Subquotient,
        Target::Involution,
        Target::RootFormula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Hadamard => "hadamard",
            Target::DoubleConstant => "double-constant",
            Target::Laurent => "laurent",
            Target::ProductFormula => "product-formula",
            Target::Embedding => "embedding",
            Target::Subquotient => "subquotient",
            Target::Involution => "involution",
            Target::RootFormula => "root-formula",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Target::ALL.iter().map(|t| t.name()).collect();
                format!("unknown target `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Which sequences a suite walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sequences {
    /// Every word of the given length over the mutable indices.
    Exhaustive,
    /// This many random words of the given length.
    Random(usize),
}

impl FromStr for Sequences {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "exhaustive" {
            return Ok(Sequences::Exhaustive);
        }
        s.strip_prefix("random:")
            .and_then(|n| n.parse().ok())
            .map(Sequences::Random)
            .ok_or_else(|| format!("unknown sequence set `{s}` (expected exhaustive or random:N)"))
    }
}

impl fmt::Display for Sequences {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequences::Exhaustive => f.write_str("exhaustive"),
            Sequences::Random(n) => write!(f, "random:{n}"),
        }
    }
}

/// All words of length `depth` over `0..n`.
pub fn exhaustive_sequences(n: usize, depth: usize) -> Vec<Vec<usize>> {
    (0..depth).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (0..n).map(move |k| {
                    let mut v = w.clone();
                    v.push(k);
                    v
                })
            })
            .collect()
    })
}

/// A random word of length `depth` over `0..n` with no letter repeated
/// twice in a row (when `n > 1`).
pub fn random_sequence(rng: &mut impl Rng, n: usize, depth: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(depth);
    while out.len() < depth {
        let k = rng.gen_range(0..n);
        if n == 1 || out.last() != Some(&k) {
            out.push(k);
        }
    }
    out
}

/// Runs `target` on `seed` along `s`, returning a description of the first
/// failure.
pub fn check_case(target: Target, seed: &GeneralizedSeed, s: &[usize], mode: AdjoinMode) -> Result<(), String> {
    let err = |e: &dyn fmt::Display| e.to_string();
    match target {
        Target::Laurent => {
            let mut t = seed.clone();
            for (i, &k) in s.iter().enumerate() {
                t = t.mutate(k).map_err(|e| format!("step {}: {e}", i + 1))?;
            }
            Ok(())
        }
        Target::Involution => {
            let mut t = seed.clone();
            for i in 0..=s.len() {
                if !t.strings().is_legal() {
                    return Err(format!("illegal string after {i} mutations"));
                }
                for k in 0..t.rank() {
                    let back = t.mutate(k).and_then(|u| u.mutate(k)).map_err(|e| err(&e))?;
                    if back != t {
                        return Err(format!("mutating twice at {} after {i} mutations changes the seed", k + 1));
                    }
                }
                if i < s.len() {
                    t = t.mutate(s[i]).map_err(|e| err(&e))?;
                }
            }
            Ok(())
        }
        Target::Hadamard | Target::DoubleConstant => {
            let d = seed.divisors();
            let mut b = seed.matrix().clone();
            let mut f = build(&b, d, mode).map_err(|e| err(&e))?;
            for i in 0..=s.len() {
                let at = |e: &dyn fmt::Display| format!("after {i} group mutations: {e}");
                if target == Target::Hadamard {
                    hadamard_check(&f, &b, d).map_err(|e| at(&e))?;
                    unfolding_conditions_check(&f, &b).map_err(|e| at(&e))?;
                } else {
                    double_constant_check(&f).map_err(|e| at(&e))?;
                    f.folding_check().map_err(|e| at(&e))?;
                }
                if i < s.len() {
                    b = b.mutate(s[i]).map_err(|e| err(&e))?;
                    f = f.group_mutate(s[i]).map_err(|e| err(&e))?;
                }
            }
            Ok(())
        }
        Target::ProductFormula => {
            let mut fs = folded_initial_seed(seed, mode).map_err(|e| err(&e))?.without_cluster();
            let ctx = QuotientContext::new(&fs).map_err(|e| err(&e))?;
            for i in 0..=s.len() {
                for k in 0..seed.rank() {
                    product_formula_check(&fs, &ctx, k)
                        .map_err(|e| format!("after {i} group mutations: {e}"))?;
                }
                if i < s.len() {
                    fs = fs.group_mutate(s[i]).map_err(|e| err(&e))?;
                }
            }
            Ok(())
        }
        Target::Embedding => embedding_check(seed, s, mode).map_err(|e| err(&e)),
        Target::Subquotient => subquotient_check(seed, mode).map_err(|e| err(&e)),
        Target::RootFormula => {
            let mut data = seed.clone();
            let mut adjoined = tau_tilde(&data, mode).map_err(|e| err(&e))?;
            for i in 0..=s.len() {
                let at = |e: &dyn fmt::Display| format!("after {i} mutations: {e}");
                for k in 0..seed.rank() {
                    data.root_formula_check(k).map_err(|e| at(&e))?;
                    adjoined.seed().root_formula_check(k).map_err(|e| at(&e))?;
                    homogeneity_check(adjoined.seed(), k).map_err(|e| at(&e))?;
                }
                adjoined.rho().map_err(|e| at(&e))?;
                if i < s.len() {
                    let moved = adjoined.seed().mutate_data(s[i]).map_err(|e| err(&e))?;
                    data = data.mutate_data(s[i]).map_err(|e| err(&e))?;
                    adjoined = tau_tilde(&data, mode).map_err(|e| err(&e))?;
                    let fresh = adjoined.seed();
                    if moved.matrix() != fresh.matrix() || moved.strings() != fresh.strings() {
                        return Err(format!(
                            "after {} mutations: adjoining does not commute with mutating the exchange data",
                            i + 1
                        ));
                    }
                }
            }
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Mismatch,
}

/// One verified case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub target: &'static str,
    pub seed: String,
    /// One-based mutation indices.
    pub sequence: Vec<usize>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq: Vec<String> = self.sequence.iter().map(usize::to_string).collect();
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Mismatch => "MISMATCH",
        };
        write!(f, "{status}\t{}\t{}\t[{}]", self.target, self.seed, seq.join(","))?;
        if let Some(d) = &self.detail {
            write!(f, "\t{d}")?;
        }
        Ok(())
    }
}

fn report(target: Target, label: String, seed: &GeneralizedSeed, s: &[usize], mode: AdjoinMode) -> CaseReport {
    let start = Instant::now();
    let result = check_case(target, seed, s, mode);
    CaseReport {
        target: target.name(),
        seed: label,
        sequence: s.iter().map(|k| k + 1).collect(),
        status: if result.is_ok() { Status::Pass } else { Status::Mismatch },
        detail: result.err(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Suite parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub target: Target,
    pub depth: usize,
    pub sequences: Sequences,
    pub rng_seed: u64,
    pub mode: AdjoinMode,
}

/// Runs a suite on one seed, in parallel over sequences. Reports come back
/// in sequence order.
pub fn run_on_seed(seed: &GeneralizedSeed, label: &str, cfg: &SuiteConfig) -> Vec<CaseReport> {
    let n = seed.rank();
    let words = match (cfg.target, cfg.sequences) {
        (Target::Subquotient, _) => vec![Vec::new()],
        (_, Sequences::Exhaustive) => exhaustive_sequences(n, cfg.depth),
        (_, Sequences::Random(count)) => (0..count as u64)
            .map(|i| random_sequence(&mut case_rng(cfg.rng_seed, i), n, cfg.depth))
            .collect(),
    };
    words
        .par_iter()
        .map(|s| report(cfg.target, label.to_string(), seed, s, cfg.mode))
        .collect()
}

/// Runs a suite on `count` random seeds, one random sequence each.
pub fn run_random(count: usize, bounds: &RandomBounds, cfg: &SuiteConfig) -> Vec<CaseReport> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(cfg.rng_seed, i);
            let seed = random_seed(&mut rng, bounds);
            let s = random_sequence(&mut rng, seed.rank(), cfg.depth);
            report(cfg.target, format!("random#{i}"), &seed, &s, cfg.mode)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix_b, fix_c};

    #[test]
    fn sequence_sets() {
        assert_eq!(exhaustive_sequences(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(exhaustive_sequences(1, 3), vec![vec![0, 0, 0]]);
        let s = random_sequence(&mut case_rng(1, 0), 3, 20);
        assert!(s.windows(2).all(|w| w[0] != w[1]));
        assert_eq!("random:5".parse::<Sequences>().unwrap(), Sequences::Random(5));
        assert!("random".parse::<Sequences>().is_err());
        assert_eq!("product-formula".parse::<Target>().unwrap(), Target::ProductFormula);
    }

    #[test]
    fn every_target_passes_on_small_fixtures() {
        for target in Target::ALL {
            for (label, seed, depth) in [("FIX-C", fix_c(), 3), ("FIX-B", fix_b(), 2)] {
                let cfg = SuiteConfig {
                    target,
                    depth,
                    sequences: Sequences::Random(2),
                    rng_seed: 3,
                    mode: AdjoinMode::Total,
                };
                for r in run_on_seed(&seed, label, &cfg) {
                    assert!(r.passed(), "{r}");
                }
            }
        }
    }
}

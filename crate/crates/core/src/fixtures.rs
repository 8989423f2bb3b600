//! The bundled fixture seeds.
//!
//! * `FIX-A`: rank 2, `d = (2, 3)`, two frozen variables.
//! * `FIX-B`: rank 2, `d = (3, 2)`, frozen `a, b` plus the string
//!   coefficients `p1x, p2x, p1y` as frozen variables with zero columns.
//! * `FIX-C`: rank 1, `d = (2)`, one frozen variable `f`, `p_1 = f^-2`.

use crate::io::parse_seed;
use crate::seed::GeneralizedSeed;

pub const FIX_A: &str = include_str!("../fixtures/fix_a.seed");
pub const FIX_B: &str = include_str!("../fixtures/fix_b.seed");
pub const FIX_C: &str = include_str!("../fixtures/fix_c.seed");

pub const NAMES: [&str; 3] = ["FIX-A", "FIX-B", "FIX-C"];

pub fn text(name: &str) -> Option<&'static str> {
    match name.to_ascii_uppercase().as_str() {
        "FIX-A" => Some(FIX_A),
        "FIX-B" => Some(FIX_B),
        "FIX-C" => Some(FIX_C),
        _ => None,
    }
}

pub fn fixture(name: &str) -> Option<GeneralizedSeed> {
    text(name).map(|t| parse_seed(t).expect("bundled fixtures are valid"))
}

pub fn fix_a() -> GeneralizedSeed {
    parse_seed(FIX_A).expect("bundled fixture")
}

pub fn fix_b() -> GeneralizedSeed {
    parse_seed(FIX_B).expect("bundled fixture")
}

pub fn fix_c() -> GeneralizedSeed {
    parse_seed(FIX_C).expect("bundled fixture")
}

pub fn all() -> Vec<(&'static str, GeneralizedSeed)> {
    NAMES.iter().map(|&n| (n, fixture(n).expect("known name"))).collect()
}

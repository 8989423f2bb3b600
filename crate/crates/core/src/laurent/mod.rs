//! Exact sparse Laurent polynomials over a named variable table, with the
//! tropical semifield of Laurent monomials.
//!
//! Coefficients are arbitrary-precision integers. Exponents are signed, so
//! every monomial is invertible. Terms are kept in the canonical graded
//! lexicographic order, which also fixes the canonical text form:
//!
//! ```text
//! poly   := "0" | term ((" + " | " - ") term)*
//! term   := ["-"] (coeff | [coeff "*"] factor ("*" factor)*)
//! factor := name ["^" ["-"] digits]
//! ```
//!
//! Factors appear in table order and an exponent of 1 is omitted. The
//! parser accepts a wider expression language (parentheses, `/` by exact
//! divisors, powers of sums) so that hand-written expected values need not
//! be in canonical form.

mod map;
mod monomial;
mod poly;
mod table;
mod text;

pub use map::RingMap;
pub use monomial::Monomial;
pub use poly::LaurentPolynomial;
pub use table::{Role, Symbol, TableRef, VariableTable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("operands live over different variable tables")]
    TableMismatch,
    #[error("division is not exact")]
    InexactDivision,
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("monomial has nonzero exponent on non-frozen symbol `{0}`")]
    NonFrozenSupport(String),
    #[error("negative power of a polynomial that is not a monomial")]
    NonMonomialInverse,
    #[error("exponent vector has length {found}, table has {expected} symbols")]
    LengthMismatch { expected: usize, found: usize },
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
}

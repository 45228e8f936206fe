use thiserror::Error;

use crate::laurent::LaurentInt;

/// Errors raised by the library. Non-exact division doubles as a
/// consistency alarm in the cuspidal recursion, so it carries the
/// remainder as a witness.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unsupported type: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("division of Laurent polynomials left remainder {remainder}")]
    NonExactDivision { remainder: LaurentInt },

    #[error("root of height {height} exceeds verified order bound {bound}; rebuild the order with a larger bound")]
    HeightBound { height: i64, bound: i64 },

    #[error("convex order tie between non-proportional roots {0} and {1}; choose different weights")]
    GenericityTie(String, String),

    #[error("operation requires a symmetric Cartan matrix, got type {0}")]
    NonSymmetric(String),

    #[error("imaginary multiplicity {0} >= 2: irreducible imaginary characters beyond the minuscule ones are not provided (see imaginary tensor spaces)")]
    ImaginaryScope(usize),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("cache rejected: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

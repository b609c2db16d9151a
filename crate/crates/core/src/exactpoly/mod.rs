//! Exact polynomial arithmetic over Z, Z/p and Z/p^m.
//!
//! Coefficients are arbitrary precision throughout and nothing here touches
//! floating point. Values are immutable after construction and normalized
//! eagerly, so structural equality is ring equality.

mod factor;
pub(crate) mod gf;
mod int_poly;
mod mod_poly;
mod parse;
mod resultant;
mod sturm;

use num_bigint::BigInt;
use thiserror::Error;

pub use factor::{
    cz_factor, ddf, derived_seed, factor_modp, gcd_modp, irreducible_modp, is_irreducible_modp,
    squarefree_decomposition,
};
pub use int_poly::IntPoly;
pub use mod_poly::ModPoly;
pub use parse::{parse_poly, ParsePolyError};
pub use resultant::{discriminant, resultant, valuation};
pub use sturm::sturm_real_roots;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(BigInt, BigInt),
    #[error("division by a non-monic polynomial modulo composite {0}")]
    NonMonicDivisor(BigInt),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("modulus {0} is not prime")]
    CompositeModulus(BigInt),
    #[error("modulus {0} is too large for finite-field routines")]
    ModulusTooLarge(BigInt),
    #[error("invalid modulus {0}")]
    InvalidModulus(BigInt),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("zero or constant polynomial where a non-constant one is required")]
    ZeroPolynomial,
    #[error(transparent)]
    Parse(#[from] ParsePolyError),
}

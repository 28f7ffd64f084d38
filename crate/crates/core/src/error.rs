use thiserror::Error;

use crate::kernel::Nat;

pub type Result<T> = std::result::Result<T, Error>;

/// Precondition failures. Every operation in the crate is total on its
/// documented domain and reports anything outside it through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least {min}, got {got}")]
    ModulusTooSmall { min: u64, got: Nat },

    #[error("{what} must be at least {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: u64,
        got: Nat,
    },

    #[error("{0} is not prime")]
    NotPrime(Nat),

    #[error("{0} is not an odd prime")]
    NotOddPrime(Nat),

    #[error("{0} is not composite")]
    NotComposite(Nat),

    #[error("modulus {0} is even")]
    EvenModulus(Nat),

    #[error(
        "gcd({base}, {modulus}) = {gcd} is not 1, so no power of the base is 1 modulo the modulus"
    )]
    NotCoprime { base: Nat, modulus: Nat, gcd: Nat },

    #[error("{prime} divides the base {base}")]
    BaseDivisible { prime: Nat, base: Nat },

    #[error("residue {residue} is not below the modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },

    #[error("empty residue set")]
    EmptyResidues,

    #[error("{0} does not fit in 64 bits")]
    TooLarge(Nat),

    /// Two independent computations of the same fact disagreed.
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
}

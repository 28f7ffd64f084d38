//! Fermat's 1640 toolkit for Mersenne numbers.
//!
//! The crate is layered bottom-up:
//!
//! * [`kernel`]: arbitrary-precision primitives (`modpow`, `isqrt`, `gcd`, digit counts).
//! * [`primes`]: sieve of Eratosthenes, trial-division primality, primes in residue classes.
//! * [`mersenne`]: `M_n = 2^n - 1`, multiplicative orders and the divisibility facts built on them.
//! * [`forms`]: candidate-divisor classes for `M_q` (`2jq + 1`, the `±1 mod 8` refinement,
//!   Sophie Germain divisors).
//! * [`factor`]: the Mersenne factorization pipeline with a replayable trace.
//! * [`perfect`]: aliquot sums, Euclid's perfect numbers, and the 20-digit challenge scan.
//! * [`replay`]: reproductions of the historical computations with embedded expected values.

pub mod error;
pub mod factor;
pub mod forms;
pub mod kernel;
pub mod mersenne;
pub mod perfect;
pub mod primes;
pub mod replay;

pub use error::{Error, Result};
pub use factor::{
    factor_mersenne, factor_nat, verify, ClassChoice, FactorConfig, FactorStatus, FactorTrace,
    Factorization, MersenneFactorizer, MersenneFactors, TraceStep,
};
pub use forms::{
    euler_refined_class, generalized_class, qr2, sophie_germain_divisor, third_proposition_class,
    CandidateClass,
};
pub use kernel::{digit_count, gcd, isqrt, modpow, Nat};
pub use mersenne::{
    divisibility_conjecture_check, exponent_progression, first_proposition_witness, flt_check,
    mersenne, order, second_proposition_check, FirstPropositionWitness, MersenneNumber,
    OrderRecord,
};
pub use perfect::{
    aliquot_sum, enumerate_even_perfect, euclid_perfect, frenicle_scan, is_perfect,
    ChallengeReport, ExponentVerdict, PerfectRecord, Verdict,
};
pub use primes::{is_prime, primes_in_classes, sieve, PrimeTable};
pub use replay::{
    replay, replay_m23_to_m36, replay_m31, replay_m37, replay_table1, ReplayItem, ReplayReport,
};

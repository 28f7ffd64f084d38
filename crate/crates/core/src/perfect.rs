//! Aliquot sums, Euclid's even perfect numbers, and the scan for a perfect
//! number with a required number of digits.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{factor_nat, FactorConfig, FactorStatus, MersenneFactorizer};
use crate::kernel::{digit_count, Nat};
use crate::primes::is_prime_u64;
use crate::replay::as_decimal;

/// `(2^n - 1) * 2^(n-1)` for a prime `2^n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerfectRecord {
    pub exponent: u64,
    #[serde(serialize_with = "as_decimal")]
    pub mersenne_prime: Nat,
    #[serde(serialize_with = "as_decimal")]
    pub perfect_number: Nat,
    pub digits: u64,
}

impl PerfectRecord {
    fn from_mersenne_prime(exponent: u64, mersenne_prime: Nat) -> Self {
        let perfect_number = &mersenne_prime << (exponent - 1);
        let digits = digit_count(&perfect_number).expect("perfect numbers are positive");
        PerfectRecord {
            exponent,
            mersenne_prime,
            perfect_number,
            digits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    MersennePrime,
    /// Composite `M_p` with prime `p`; `witness` is its smallest prime factor.
    Imposter {
        #[serde(serialize_with = "as_decimal")]
        witness: Nat,
    },
    /// The candidate budget ran out before any factor was found.
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentVerdict {
    pub exponent: u64,
    pub verdict: Verdict,
    /// Digits of the perfect number, present when `M_exponent` is prime.
    pub perfect_digits: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChallengeReport {
    pub min_digits: u64,
    pub max_exponent: u64,
    pub exponents_examined: Vec<ExponentVerdict>,
    /// First perfect number with at least `min_digits` digits.
    pub outcome: Option<PerfectRecord>,
}

impl ChallengeReport {
    pub fn verdict_for(&self, exponent: u64) -> Option<&ExponentVerdict> {
        self.exponents_examined
            .iter()
            .find(|v| v.exponent == exponent)
    }
}

impl fmt::Display for ChallengeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "perfect number with at least {} digits, exponents up to {}",
            self.min_digits, self.max_exponent
        )?;
        for v in &self.exponents_examined {
            match &v.verdict {
                Verdict::MersennePrime => writeln!(
                    f,
                    "  M_{:<4} prime     2^{}·M_{} has {} digits",
                    v.exponent,
                    v.exponent - 1,
                    v.exponent,
                    v.perfect_digits.unwrap_or_default()
                )?,
                Verdict::Imposter { witness } => {
                    writeln!(f, "  M_{:<4} composite divisible by {witness}", v.exponent)?
                }
                Verdict::Unresolved => writeln!(f, "  M_{:<4} unresolved", v.exponent)?,
            }
        }
        match &self.outcome {
            Some(r) => write!(
                f,
                "found: 2^{}·M_{} = {} ({} digits)",
                r.exponent - 1,
                r.exponent,
                r.perfect_number,
                r.digits
            ),
            None => write!(f, "found: none"),
        }
    }
}

/// Sum of the proper divisors of `n`, from `sigma(n) = prod (p^(e+1) - 1)/(p - 1)`.
pub fn aliquot_sum(n: &Nat) -> Result<Nat> {
    if n.is_zero() {
        return Err(Error::TooSmall {
            what: "aliquot_sum input",
            min: 1,
            got: n.clone(),
        });
    }
    if n.is_one() {
        return Ok(Nat::zero());
    }
    let f = factor_nat(n)?;
    let sigma = f.factors().iter().fold(Nat::one(), |acc, (p, e)| {
        acc * ((p.pow(e + 1) - 1u32) / (p - 1u32))
    });
    Ok(sigma - n)
}

pub fn is_perfect(n: &Nat) -> bool {
    match aliquot_sum(n) {
        Ok(s) => s == *n,
        Err(_) => false,
    }
}

fn euclid_with(lab: &MersenneFactorizer, n: u64) -> Result<Option<PerfectRecord>> {
    let out = lab.factor(n)?;
    Ok(out
        .factorization
        .is_prime_value()
        .then(|| PerfectRecord::from_mersenne_prime(n, out.factorization.value().clone())))
}

/// The perfect number built from `M_n`, if `M_n` is prime.
pub fn euclid_perfect(n: u64) -> Result<Option<PerfectRecord>> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "Euclid exponent",
            min: 2,
            got: Nat::from(n),
        });
    }
    euclid_with(&MersenneFactorizer::default(), n)
}

/// Even perfect numbers `<= limit`, in increasing order.
pub fn enumerate_even_perfect(limit: &Nat) -> Vec<Nat> {
    let lab = MersenneFactorizer::default();
    let mut out = Vec::new();
    for n in 2u64.. {
        let smallest_possible = ((Nat::one() << n) - 1u32) << (n - 1);
        if smallest_possible > *limit {
            break;
        }
        if let Some(r) = euclid_with(&lab, n).expect("exponent is at least 2") {
            out.push(r.perfect_number);
        }
    }
    out
}

/// Walks the prime exponents up to `max_exponent`, classifying each `M_p`,
/// and reports the first perfect number with at least `min_digits` digits.
pub fn frenicle_scan(min_digits: u64, max_exponent: u64, budget: Option<u64>) -> ChallengeReport {
    let lab = MersenneFactorizer::new(FactorConfig {
        budget,
        ..FactorConfig::default()
    });
    let mut exponents_examined = Vec::new();
    let mut outcome = None;
    for p in (2..=max_exponent).filter(|&p| is_prime_u64(p)) {
        let out = lab.factor(p).expect("exponent is at least 2");
        let f = &out.factorization;
        let (verdict, perfect_digits) = if f.is_prime_value() {
            let record = PerfectRecord::from_mersenne_prime(p, f.value().clone());
            let digits = record.digits;
            if outcome.is_none() && digits >= min_digits {
                outcome = Some(record);
            }
            (Verdict::MersennePrime, Some(digits))
        } else if let Some(w) = f.smallest_prime() {
            (Verdict::Imposter { witness: w.clone() }, None)
        } else {
            debug_assert_eq!(f.status(), FactorStatus::Partial);
            (Verdict::Unresolved, None)
        };
        exponents_examined.push(ExponentVerdict {
            exponent: p,
            verdict,
            perfect_digits,
        });
    }
    ChallengeReport {
        min_digits,
        max_exponent,
        exponents_examined,
        outcome,
    }
}

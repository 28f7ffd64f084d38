//! Mersenne numbers, multiplicative order, and the divisibility facts that
//! follow from it.

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{gcd, modpow, mulmod, Nat};
use crate::primes::{is_prime, is_prime_u64};

/// `M_n = 2^n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MersenneNumber {
    exponent: u64,
    value: Nat,
}

impl MersenneNumber {
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn value(&self) -> &Nat {
        &self.value
    }

    pub fn into_value(self) -> Nat {
        self.value
    }
}

pub fn mersenne(n: u64) -> Result<MersenneNumber> {
    if n == 0 {
        return Err(Error::TooSmall {
            what: "Mersenne exponent",
            min: 1,
            got: Nat::zero(),
        });
    }
    Ok(MersenneNumber {
        exponent: n,
        value: mersenne_value(n),
    })
}

pub(crate) fn mersenne_value(n: u64) -> Nat {
    (Nat::one() << n) - 1u32
}

/// The least `order >= 1` with `modulus | base^order - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderRecord {
    #[serde(serialize_with = "crate::replay::as_decimal")]
    pub base: Nat,
    #[serde(serialize_with = "crate::replay::as_decimal")]
    pub modulus: Nat,
    pub order: u64,
}

/// Multiplicative order of `base` modulo `modulus`, found by repeated
/// multiplication `r <- r * base mod modulus` starting from `r = base`.
///
/// The modulus need not be prime; it only has to be coprime to the base.
pub fn order(base: &Nat, modulus: &Nat) -> Result<OrderRecord> {
    if *base < Nat::from(2u32) {
        return Err(Error::TooSmall {
            what: "base",
            min: 2,
            got: base.clone(),
        });
    }
    if *modulus < Nat::from(3u32) {
        return Err(Error::ModulusTooSmall {
            min: 3,
            got: modulus.clone(),
        });
    }
    let g = gcd(base, modulus);
    if !g.is_one() {
        return Err(Error::NotCoprime {
            base: base.clone(),
            modulus: modulus.clone(),
            gcd: g,
        });
    }
    let order = match (base % modulus).to_u64().zip(modulus.to_u64()) {
        Some((b, m)) => order_u64(b, m),
        None => {
            let b = base % modulus;
            let mut r = b.clone();
            let mut k = 1u64;
            while !r.is_one() {
                r = r * &b % modulus;
                k += 1;
            }
            k
        }
    };
    Ok(OrderRecord {
        base: base.clone(),
        modulus: modulus.clone(),
        order,
    })
}

/// Word-sized order loop. Caller guarantees `gcd(base, m) = 1` and `m >= 2`.
pub(crate) fn order_u64(base: u64, m: u64) -> u64 {
    let b = base % m;
    let mut r = b;
    let mut k = 1u64;
    if m < 1 << 32 {
        while r != 1 {
            r = r * b % m;
            k += 1;
        }
    } else {
        while r != 1 {
            r = mulmod(r, b, m);
            k += 1;
        }
    }
    k
}

/// `p | a^(p-1) - 1` for a prime `p` not dividing `a`.
pub fn flt_check(p: &Nat, a: &Nat) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    if (a % p).is_zero() {
        return Err(Error::BaseDivisible {
            prime: p.clone(),
            base: a.clone(),
        });
    }
    Ok(modpow(a, &(p - 1u32), p)?.is_one())
}

/// The order `k` of 2 modulo the odd prime `p`, and whether `k | p - 1`.
pub fn divisibility_conjecture_check(p: u64) -> Result<(u64, bool)> {
    if p.is_multiple_of(2) || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(Nat::from(p)));
    }
    let k = order_u64(2, p);
    Ok((k, (p - 1).is_multiple_of(k)))
}

/// Every `n <= limit` with `m | 2^n - 1`, by testing each `n` directly.
pub fn exponent_progression(m: u64, limit: u64) -> Result<Vec<u64>> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenModulus(Nat::from(m)));
    }
    if m < 3 {
        return Err(Error::ModulusTooSmall {
            min: 3,
            got: Nat::from(m),
        });
    }
    let mut hits = Vec::new();
    let mut power = 1u64;
    for n in 1..=limit {
        power = mulmod(power, 2, m);
        if power == 1 {
            hits.push(n);
        }
    }
    Ok(hits)
}

/// `2p | M_p - 1` for an odd prime `p`.
///
/// The equivalent form `p | M_(p-1)` is evaluated independently, along with
/// `M_p - 1 = 2 M_(p-1)`; any disagreement is reported as an error.
pub fn second_proposition_check(p: u64) -> Result<bool> {
    if p.is_multiple_of(2) || !is_prime_u64(p) {
        return Err(Error::NotOddPrime(Nat::from(p)));
    }
    let mp_minus_one = mersenne_value(p) - 1u32;
    let previous = mersenne_value(p - 1);
    if mp_minus_one != &previous << 1u32 {
        return Err(Error::Inconsistent(format!(
            "M_{p} - 1 differs from 2 M_{}",
            p - 1
        )));
    }
    let direct = (&mp_minus_one % (2 * p)).is_zero();
    let shifted = (&previous % p).is_zero();
    if direct != shifted {
        return Err(Error::Inconsistent(format!(
            "2p | M_p - 1 is {direct} but p | M_(p-1) is {shifted} for p = {p}"
        )));
    }
    Ok(direct)
}

/// A factor `M_d` of `M_n` exhibiting that `M_n` is composite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstPropositionWitness {
    /// Smallest prime divisor of `n`.
    pub divisor: u64,
    /// `M_divisor`.
    pub factor: Nat,
    /// `1 + 2^d + 2^(2d) + ... + 2^(n-d)`, with `factor * cofactor = M_n`.
    pub cofactor: Nat,
}

pub fn first_proposition_witness(n: u64) -> Result<FirstPropositionWitness> {
    if n < 4 || is_prime_u64(n) {
        return Err(Error::NotComposite(Nat::from(n)));
    }
    let d = (2..n)
        .find(|d| n.is_multiple_of(*d))
        .expect("a composite has a divisor below itself");
    let factor = mersenne_value(d);
    let cofactor = (0..n / d).fold(Nat::zero(), |acc, i| acc + (Nat::one() << (i * d)));
    let total = mersenne_value(n);
    if &factor * &cofactor != total || factor <= Nat::one() || factor >= total {
        return Err(Error::Inconsistent(format!(
            "M_{d} does not properly divide M_{n}"
        )));
    }
    Ok(FirstPropositionWitness {
        divisor: d,
        factor,
        cofactor,
    })
}

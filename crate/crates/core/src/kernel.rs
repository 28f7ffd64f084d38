//! Natural-number primitives shared by every other module.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer.
pub type Nat = BigUint;

/// `base^exponent mod modulus` by left-to-right square and multiply.
///
/// Moduli that fit in 64 bits take a word-sized path with 128-bit products.
pub fn modpow(base: &Nat, exponent: &Nat, modulus: &Nat) -> Result<Nat> {
    if *modulus < Nat::from(2u32) {
        return Err(Error::ModulusTooSmall {
            min: 2,
            got: modulus.clone(),
        });
    }
    if let Some(m) = modulus.to_u64() {
        let b = (base % m).to_u64().expect("reduced below a u64 modulus");
        let mut acc = 1u64;
        for i in (0..exponent.bits()).rev() {
            acc = mulmod(acc, acc, m);
            if exponent.bit(i) {
                acc = mulmod(acc, b, m);
            }
        }
        return Ok(Nat::from(acc % m));
    }
    let b = base % modulus;
    let mut acc = Nat::one();
    for i in (0..exponent.bits()).rev() {
        acc = &acc * &acc % modulus;
        if exponent.bit(i) {
            acc = acc * &b % modulus;
        }
    }
    Ok(acc)
}

/// Word-sized `modpow`; `modulus` must be nonzero.
pub fn modpow_u64(base: u64, mut exponent: u64, modulus: u64) -> u64 {
    let mut b = base % modulus;
    let mut acc = 1 % modulus;
    while exponent > 0 {
        if exponent & 1 == 1 {
            acc = mulmod(acc, b, modulus);
        }
        b = mulmod(b, b, modulus);
        exponent >>= 1;
    }
    acc
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `floor(sqrt(n))`, integer Newton iteration.
pub fn isqrt(n: &Nat) -> Nat {
    if n.is_zero() {
        return Nat::zero();
    }
    // Start above the root: 2^ceil(bits/2) > sqrt(n).
    let mut x = Nat::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

pub fn isqrt_u64(n: u64) -> u64 {
    isqrt(&Nat::from(n))
        .to_u64()
        .expect("root of a u64 fits in u64")
}

/// Greatest common divisor, with `gcd(0, 0) = 0`.
pub fn gcd(a: &Nat, b: &Nat) -> Nat {
    a.gcd(b)
}

/// Number of decimal digits of `n >= 1`.
pub fn digit_count(n: &Nat) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::TooSmall {
            what: "digit_count input",
            min: 1,
            got: n.clone(),
        });
    }
    Ok(n.to_str_radix(10).len() as u64)
}

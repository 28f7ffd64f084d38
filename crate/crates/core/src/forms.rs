//! Residue classes that every prime divisor of a Mersenne number must lie in.
//!
//! For an odd prime `q`, a prime dividing `M_q` has order exactly `q` modulo
//! 2, so it is `1 mod 2q`. Since `2 = (2^((q+1)/2))^2` modulo such a prime,
//! 2 is also a quadratic residue there, which forces `±1 mod 8`; the two
//! conditions together give two classes modulo `8q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{modpow_u64, Nat};
use crate::primes::is_prime_u64;

/// A modulus and a set of residues constraining the prime divisors of `M_q`,
/// where `q` is the target exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateClass {
    modulus: u64,
    residues: Vec<u64>,
    target_exponent: u64,
}

impl CandidateClass {
    /// Residues are sorted and deduplicated.
    pub fn new(modulus: u64, mut residues: Vec<u64>, target_exponent: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::ModulusTooSmall {
                min: 2,
                got: Nat::from(modulus),
            });
        }
        if residues.is_empty() {
            return Err(Error::EmptyResidues);
        }
        if let Some(&residue) = residues.iter().find(|&&r| r >= modulus) {
            return Err(Error::ResidueOutOfRange { residue, modulus });
        }
        residues.sort_unstable();
        residues.dedup();
        Ok(CandidateClass {
            modulus,
            residues,
            target_exponent,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn target_exponent(&self) -> u64 {
        self.target_exponent
    }

    pub fn contains(&self, n: u64) -> bool {
        self.residues.binary_search(&(n % self.modulus)).is_ok()
    }

    /// Every member greater than 1, in increasing order. Members are not
    /// filtered for primality.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        (0u64..)
            .map_while(move |block| block.checked_mul(self.modulus))
            .flat_map(move |base| {
                self.residues
                    .iter()
                    .filter_map(move |&r| base.checked_add(r))
            })
            .filter(|&c| c > 1)
    }

    /// Prime members in increasing order, unbounded.
    pub fn prime_members(&self) -> impl Iterator<Item = u64> + '_ {
        self.members().filter(|&c| is_prime_u64(c))
    }
}

impl std::fmt::Display for CandidateClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rs: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "{{{}}} mod {}", rs.join(", "), self.modulus)
    }
}

fn require_odd_prime(q: u64) -> Result<()> {
    if q % 2 == 1 && is_prime_u64(q) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(Nat::from(q)))
    }
}

/// Primes dividing `M_q` are `1 mod 2q`.
pub fn third_proposition_class(q: u64) -> Result<CandidateClass> {
    require_odd_prime(q)?;
    CandidateClass::new(2 * q, vec![1], q)
}

/// Primes dividing `M_q` but no `M_d` for a proper divisor `d` of `q` are
/// `1 mod 2q` for odd `q` and `1 mod q` for even `q`.
///
/// The hypothesis on the divisors of `q` is the caller's to establish.
pub fn generalized_class(q: u64) -> Result<CandidateClass> {
    if q < 2 {
        return Err(Error::TooSmall {
            what: "exponent",
            min: 2,
            got: Nat::from(q),
        });
    }
    let modulus = if q % 2 == 1 { 2 * q } else { q };
    CandidateClass::new(modulus, vec![1], q)
}

/// Whether 2 is a quadratic residue modulo the odd prime `q`.
///
/// Decided by Euler's criterion and cross-checked against `q mod 8 ∈ {1, 7}`.
pub fn qr2(q: u64) -> Result<bool> {
    require_odd_prime(q)?;
    let euler = modpow_u64(2, (q - 1) / 2, q) == 1;
    let by_class = matches!(q % 8, 1 | 7);
    if euler != by_class {
        return Err(Error::Inconsistent(format!(
            "Euler's criterion says {euler} for 2 mod {q}, but {q} mod 8 = {}",
            q % 8
        )));
    }
    Ok(euler)
}

/// The two classes modulo `8q` that are `1 mod 2q` and `±1 mod 8`.
pub fn euler_refined_class(q: u64) -> Result<CandidateClass> {
    require_odd_prime(q)?;
    refined_class_for_odd_exponent(q)
}

/// Same scan as [`euler_refined_class`] for any odd `n >= 3`: every prime
/// divisor of `M_n` with `n` odd sees 2 as a square.
pub(crate) fn refined_class_for_odd_exponent(n: u64) -> Result<CandidateClass> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Inconsistent(format!(
            "refined classes need an odd exponent >= 3, got {n}"
        )));
    }
    let modulus = 8 * n;
    let residues: Vec<u64> = (1..modulus)
        .filter(|r| r % (2 * n) == 1 && matches!(r % 8, 1 | 7))
        .collect();
    CandidateClass::new(modulus, residues, n)
}

/// For a prime `p ≡ 3 mod 4` with `q = 2p + 1` also prime, returns `q`,
/// which then divides `M_p`.
pub fn sophie_germain_divisor(p: u64) -> Result<Option<u64>> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(Nat::from(p)));
    }
    if p % 4 != 3 {
        return Ok(None);
    }
    let q = 2 * p + 1;
    if !is_prime_u64(q) {
        return Ok(None);
    }
    if modpow_u64(2, p, q) != 1 {
        return Err(Error::Inconsistent(format!("{q} does not divide M_{p}")));
    }
    Ok(Some(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mersenne::mersenne;
    use num_traits::Zero;

    #[test]
    fn third_proposition_examples() {
        let c = third_proposition_class(37).unwrap();
        assert_eq!((c.modulus(), c.residues()), (74, &[1u64][..]));
        assert_eq!(c.target_exponent(), 37);
        let first: Vec<u64> = c.prime_members().take(2).collect();
        assert_eq!(first, vec![149, 223]);

        assert_eq!(third_proposition_class(3).unwrap().modulus(), 6);
        let c23 = third_proposition_class(23).unwrap();
        assert_eq!(c23.modulus(), 46);
        assert!(c23.contains(47));
    }

    #[test]
    fn third_proposition_rejects_non_odd_primes() {
        for q in [0, 1, 2, 9, 25] {
            assert!(matches!(
                third_proposition_class(q),
                Err(Error::NotOddPrime(_))
            ));
        }
    }

    #[test]
    fn generalized_examples() {
        let c = generalized_class(25).unwrap();
        assert_eq!((c.modulus(), c.residues()), (50, &[1u64][..]));
        assert!(c.contains(601) && c.contains(1801));
        assert_eq!(generalized_class(2).unwrap().modulus(), 2);
        let c11 = generalized_class(11).unwrap();
        assert_eq!(c11.modulus(), 22);
        assert!(c11.contains(23) && c11.contains(89));
        assert_eq!(generalized_class(12).unwrap().modulus(), 12);
        assert!(generalized_class(1).is_err());
        assert!(generalized_class(0).is_err());
    }

    #[test]
    fn qr2_examples() {
        assert!(qr2(7).unwrap());
        assert!(!qr2(3).unwrap());
        assert!(qr2(17).unwrap());
        assert!(qr2(2).is_err());
        assert!(qr2(15).is_err());
    }

    #[test]
    fn qr2_matches_squares_and_mod8() {
        for q in (3..10_000u64).step_by(2).filter(|&q| is_prime_u64(q)) {
            let expected = matches!(q % 8, 1 | 7);
            assert_eq!(qr2(q).unwrap(), expected, "q = {q}");
            if q < 2000 {
                let is_square = (1..q).any(|x| x * x % q == 2);
                assert_eq!(is_square, expected, "q = {q}");
            }
        }
    }

    #[test]
    fn euler_refined_examples() {
        let c = euler_refined_class(31).unwrap();
        assert_eq!((c.modulus(), c.residues()), (248, &[1u64, 63][..]));
        let c3 = euler_refined_class(3).unwrap();
        assert_eq!((c3.modulus(), c3.residues()), (24, &[1u64, 7][..]));
        let c37 = euler_refined_class(37).unwrap();
        assert_eq!((c37.modulus(), c37.residues()), (296, &[1u64, 223][..]));
        assert!(euler_refined_class(2).is_err());
        assert!(euler_refined_class(21).is_err());
    }

    #[test]
    fn euler_refined_always_two_residues_including_one() {
        for q in (3..1000u64).filter(|&q| is_prime_u64(q)) {
            let c = euler_refined_class(q).unwrap();
            assert_eq!(c.residues().len(), 2, "q = {q}");
            assert_eq!(c.residues()[0], 1);
            for &r in c.residues() {
                assert_eq!(r % (2 * q), 1);
                assert!(matches!(r % 8, 1 | 7));
            }
        }
    }

    #[test]
    fn members_are_increasing() {
        let c = euler_refined_class(31).unwrap();
        let m: Vec<u64> = c.members().take(6).collect();
        assert_eq!(m, vec![63, 249, 311, 497, 559, 745]);
    }

    #[test]
    fn sophie_germain_examples() {
        assert_eq!(sophie_germain_divisor(3).unwrap(), Some(7));
        assert_eq!(sophie_germain_divisor(11).unwrap(), Some(23));
        assert_eq!(sophie_germain_divisor(23).unwrap(), Some(47));
        assert_eq!(sophie_germain_divisor(13).unwrap(), None);
        assert_eq!(sophie_germain_divisor(83).unwrap(), Some(167));
        assert_eq!(sophie_germain_divisor(131).unwrap(), Some(263));
        assert_eq!(sophie_germain_divisor(29).unwrap(), None);
        // 7 ≡ 3 mod 4 but 15 is composite
        assert_eq!(sophie_germain_divisor(7).unwrap(), None);
        assert!(matches!(
            sophie_germain_divisor(21),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn sophie_germain_divides_by_full_division() {
        for p in (2..=200u64).filter(|&p| is_prime_u64(p)) {
            if let Some(q) = sophie_germain_divisor(p).unwrap() {
                let m = mersenne(p).unwrap();
                assert!((m.value() % q).is_zero(), "{q} should divide M_{p}");
            }
        }
    }
}

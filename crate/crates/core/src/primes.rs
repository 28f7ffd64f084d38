//! Sieve of Eratosthenes and deterministic trial-division primality.

use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::forms::CandidateClass;
use crate::kernel::{isqrt, Nat};

/// All primes up to `limit`, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Number of primes strictly below `x`; `x` may not exceed `limit + 1`.
    pub fn count_below(&self, x: u64) -> usize {
        assert!(
            x <= self.limit + 1,
            "table only covers primes up to {}",
            self.limit
        );
        self.primes.partition_point(|&p| p < x)
    }

    /// Membership test for `n <= limit`.
    pub fn contains(&self, n: u64) -> bool {
        assert!(
            n <= self.limit,
            "table only covers primes up to {}",
            self.limit
        );
        self.primes.binary_search(&n).is_ok()
    }
}

/// Primes `<= limit` by the sieve of Eratosthenes.
pub fn sieve(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::TooSmall {
            what: "sieve limit",
            min: 2,
            got: Nat::from(limit),
        });
    }
    let n = usize::try_from(limit).map_err(|_| Error::TooLarge(Nat::from(limit)))?;
    let mut composite = vec![false; n + 1];
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
        i += 1;
    }
    let primes = (2..=n)
        .filter(|&k| !composite[k])
        .map(|k| k as u64)
        .collect();
    Ok(PrimeTable { limit, primes })
}

const INITIAL_CACHE_LIMIT: u64 = 1 << 16;

fn cache() -> &'static RwLock<Arc<PrimeTable>> {
    static CACHE: OnceLock<RwLock<Arc<PrimeTable>>> = OnceLock::new();
    CACHE.get_or_init(|| {
        RwLock::new(Arc::new(
            sieve(INITIAL_CACHE_LIMIT).expect("initial limit is above 2"),
        ))
    })
}

/// Shared table covering at least every prime `<= bound`.
///
/// The process-wide table doubles its limit until it covers `bound`; callers
/// holding an older `Arc` keep a valid, smaller table.
pub fn primes_up_to(bound: u64) -> Arc<PrimeTable> {
    {
        let table = cache().read().unwrap_or_else(|e| e.into_inner());
        if table.limit >= bound {
            return Arc::clone(&table);
        }
    }
    let mut table = cache().write().unwrap_or_else(|e| e.into_inner());
    if table.limit < bound {
        let mut limit = table.limit;
        while limit < bound {
            limit = limit.saturating_mul(2);
        }
        *table = Arc::new(sieve(limit).expect("limit is above 2"));
    }
    Arc::clone(&table)
}

/// Primality by trial division with every prime `<= isqrt(n)`.
pub fn is_prime(n: &Nat) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => {
            let root = isqrt(n)
                .to_u64()
                .expect("trial division beyond 2^128 is out of reach");
            !has_divisor_up_to(root, |p| (n % p).is_zero())
        }
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let root = crate::kernel::isqrt_u64(n);
    !has_divisor_up_to(root, |p| n.is_multiple_of(p))
}

/// Trial division by the primes `<= root`, growing the shared table only as
/// far as the scan actually gets.
fn has_divisor_up_to(root: u64, divides: impl Fn(u64) -> bool) -> bool {
    let mut from = 0u64;
    loop {
        let table = primes_up_to(from.max(2));
        let upto = table.limit().min(root);
        let start = table.primes().partition_point(|&p| p < from);
        if table.primes()[start..]
            .iter()
            .take_while(|&&p| p <= upto)
            .any(|&p| divides(p))
        {
            return true;
        }
        if upto >= root {
            return false;
        }
        from = upto + 1;
    }
}

/// Primes `p <= limit` with `p mod classes.modulus()` among the class residues.
pub fn primes_in_classes(limit: u64, classes: &CandidateClass) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let table = primes_up_to(limit);
    table
        .primes()
        .iter()
        .copied()
        .take_while(|&p| p <= limit)
        .filter(|&p| classes.contains(p))
        .collect()
}

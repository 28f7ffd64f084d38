//! Factoring `M_n` the way Fermat could: pull in the primes of every `M_d`
//! with `d | n`, then trial-divide what is left only by primes in the
//! residue classes that primitive divisors of `M_n` must occupy.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{generalized_class, refined_class_for_odd_exponent, CandidateClass};
use crate::kernel::{isqrt, Nat};
use crate::mersenne::mersenne_value;
use crate::primes::{is_prime, primes_up_to};
use crate::replay::as_decimal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorStatus {
    Complete,
    Partial,
}

/// `value = prod(p^e) * cofactor`, where the cofactor is 1 exactly when the
/// factorization is complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: Nat,
    factors: Vec<(Nat, u32)>,
    status: FactorStatus,
    cofactor: Nat,
}

impl Factorization {
    /// Assembles a factorization without checking it; see [`verify`].
    pub fn from_parts(
        value: Nat,
        factors: Vec<(Nat, u32)>,
        status: FactorStatus,
        cofactor: Nat,
    ) -> Self {
        Factorization {
            value,
            factors,
            status,
            cofactor,
        }
    }

    fn assemble(value: Nat, found: BTreeMap<Nat, u32>, cofactor: Nat) -> Self {
        let status = if cofactor.is_one() {
            FactorStatus::Complete
        } else {
            FactorStatus::Partial
        };
        Factorization {
            value,
            factors: found.into_iter().collect(),
            status,
            cofactor,
        }
    }

    pub fn value(&self) -> &Nat {
        &self.value
    }

    /// `(prime, multiplicity)` pairs in increasing prime order.
    pub fn factors(&self) -> &[(Nat, u32)] {
        &self.factors
    }

    pub fn status(&self) -> FactorStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == FactorStatus::Complete
    }

    /// The part of `value` left unfactored; 1 when complete.
    pub fn cofactor(&self) -> &Nat {
        &self.cofactor
    }

    /// True when the value itself is the only prime factor.
    pub fn is_prime_value(&self) -> bool {
        self.is_complete() && self.factors.len() == 1 && self.factors[0] == (self.value.clone(), 1)
    }

    pub fn smallest_prime(&self) -> Option<&Nat> {
        self.factors.first().map(|(p, _)| p)
    }

    /// Primes repeated by multiplicity, ascending.
    pub fn prime_multiset(&self) -> Vec<Nat> {
        self.factors
            .iter()
            .flat_map(|(p, e)| std::iter::repeat_n(p.clone(), *e as usize))
            .collect()
    }
}

/// Ascending `p^e` terms joined by `·`, exponent 1 elided; a partial result
/// ends with the unresolved cofactor in brackets.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        if !self.cofactor.is_one() {
            terms.push(format!("[{}]", self.cofactor));
        }
        f.write_str(&terms.join("·"))
    }
}

/// One decision made by the Mersenne pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum TraceStep {
    /// `prime` divides `M_d` for a proper divisor `d` of the exponent and was
    /// divided out `multiplicity` times.
    #[serde(rename = "propagated-from-M_d")]
    Propagated {
        d: u64,
        #[serde(serialize_with = "as_decimal")]
        prime: Nat,
        multiplicity: u32,
    },
    /// A prime candidate from the residue classes that did not divide.
    CandidateMiss { candidate: u64 },
    /// A prime candidate that divided, `multiplicity` times.
    CandidateHit { candidate: u64, multiplicity: u32 },
    /// No candidate up to `scan_bound = isqrt(prime)` divided, so the
    /// remaining cofactor is prime.
    CandidateExhaustedPrime {
        #[serde(serialize_with = "as_decimal")]
        prime: Nat,
        scan_bound: u64,
    },
    /// The scan stopped at the candidate budget with `cofactor` unresolved.
    BudgetExhausted {
        budget: u64,
        #[serde(serialize_with = "as_decimal")]
        cofactor: Nat,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FactorTrace {
    pub steps: Vec<TraceStep>,
}

impl FactorTrace {
    /// Prime candidates tried, in order, with whether each divided.
    pub fn candidates(&self) -> impl Iterator<Item = (u64, bool)> + '_ {
        self.steps.iter().filter_map(|s| match s {
            TraceStep::CandidateMiss { candidate } => Some((*candidate, false)),
            TraceStep::CandidateHit { candidate, .. } => Some((*candidate, true)),
            _ => None,
        })
    }

    /// Re-performs the recorded divisions against `value`.
    ///
    /// Fails if a recorded division does not go through or a recorded miss
    /// actually divides.
    pub fn replay(&self, value: &Nat) -> Result<Factorization> {
        let mut cofactor = value.clone();
        let mut found = BTreeMap::new();
        let mut strip = |cofactor: &mut Nat, p: &Nat, e: u32| -> Result<()> {
            for _ in 0..e {
                if !(&*cofactor % p).is_zero() {
                    return Err(Error::Inconsistent(format!(
                        "trace divides by {p} but it does not divide {cofactor}"
                    )));
                }
                *cofactor /= p;
            }
            *found.entry(p.clone()).or_insert(0) += e;
            Ok(())
        };
        for step in &self.steps {
            match step {
                TraceStep::Propagated {
                    prime,
                    multiplicity,
                    ..
                } => strip(&mut cofactor, prime, *multiplicity)?,
                TraceStep::CandidateHit {
                    candidate,
                    multiplicity,
                } => strip(&mut cofactor, &Nat::from(*candidate), *multiplicity)?,
                TraceStep::CandidateMiss { candidate } => {
                    if (&cofactor % *candidate).is_zero() {
                        return Err(Error::Inconsistent(format!(
                            "trace records {candidate} as a miss but it divides"
                        )));
                    }
                }
                TraceStep::CandidateExhaustedPrime { prime, .. } => strip(&mut cofactor, prime, 1)?,
                TraceStep::BudgetExhausted { .. } => {}
            }
        }
        Ok(Factorization::assemble(value.clone(), found, cofactor))
    }
}

/// Complete factorization by trial division with every prime up to the
/// square root of the running cofactor.
pub fn factor_nat(n: &Nat) -> Result<Factorization> {
    if *n < Nat::from(2u32) {
        return Err(Error::TooSmall {
            what: "factor_nat input",
            min: 2,
            got: n.clone(),
        });
    }
    let mut cofactor = n.clone();
    let mut found = BTreeMap::new();
    let mut root = root_u64(&cofactor);
    let mut table = primes_up_to(root.clamp(2, 1 << 16));
    let mut idx = 0;
    loop {
        if idx == table.len() {
            table = primes_up_to(table.limit().saturating_mul(2));
        }
        let p = table.primes()[idx];
        if p > root {
            break;
        }
        if (&cofactor % p).is_zero() {
            let mut e = 0;
            while (&cofactor % p).is_zero() {
                cofactor /= p;
                e += 1;
            }
            found.insert(Nat::from(p), e);
            root = root_u64(&cofactor);
        }
        idx += 1;
    }
    if !cofactor.is_one() {
        *found.entry(cofactor).or_insert(0) += 1;
    }
    Ok(Factorization::assemble(n.clone(), found, Nat::one()))
}

fn root_u64(n: &Nat) -> u64 {
    isqrt(n).to_u64().unwrap_or(u64::MAX)
}

/// Recomputes the product and re-tests every listed prime.
pub fn verify(f: &Factorization) -> bool {
    let increasing = f.factors.windows(2).all(|w| w[0].0 < w[1].0);
    let exponents_ok = f.factors.iter().all(|(_, e)| *e >= 1);
    let product = f
        .factors
        .iter()
        .fold(f.cofactor.clone(), |acc, (p, e)| acc * p.pow(*e));
    let status_ok = match f.status {
        FactorStatus::Complete => f.cofactor.is_one(),
        FactorStatus::Partial => f.cofactor > Nat::one(),
    };
    increasing
        && exponents_ok
        && status_ok
        && product == f.value
        && f.factors.iter().all(|(p, _)| is_prime(p))
}

/// Which classes constrain primitive divisors of `M_n` for odd `n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassChoice {
    /// `1 mod 2n` intersected with `±1 mod 8`: two classes mod `8n`.
    #[default]
    Refined,
    /// `1 mod 2n` only.
    Unrefined,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct FactorConfig {
    /// Largest candidate value to try; `None` scans up to the square root of
    /// the running cofactor.
    pub budget: Option<u64>,
    pub classes: ClassChoice,
}

/// Factorization of `M_exponent` together with the steps that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MersenneFactors {
    pub exponent: u64,
    pub factorization: Factorization,
    pub trace: FactorTrace,
}

type Slot = Arc<OnceLock<Result<Arc<MersenneFactors>>>>;

/// Mersenne factorization pipeline with a per-exponent memo.
///
/// Each exponent is computed at most once per factorizer; concurrent callers
/// asking for the same exponent wait for the first one.
#[derive(Debug, Default)]
pub struct MersenneFactorizer {
    config: FactorConfig,
    memo: Mutex<HashMap<u64, Slot>>,
}

impl MersenneFactorizer {
    pub fn new(config: FactorConfig) -> Self {
        MersenneFactorizer {
            config,
            memo: Mutex::default(),
        }
    }

    pub fn config(&self) -> FactorConfig {
        self.config
    }

    /// Candidate classes used for the primitive part of `M_n`.
    pub fn class_for(&self, n: u64) -> Result<CandidateClass> {
        if n % 2 == 1 && n >= 3 && self.config.classes == ClassChoice::Refined {
            refined_class_for_odd_exponent(n)
        } else {
            generalized_class(n)
        }
    }

    pub fn factor(&self, n: u64) -> Result<Arc<MersenneFactors>> {
        if n < 2 {
            return Err(Error::TooSmall {
                what: "Mersenne exponent",
                min: 2,
                got: Nat::from(n),
            });
        }
        let cell = {
            let mut memo = self.memo.lock().unwrap_or_else(|e| e.into_inner());
            Arc::clone(memo.entry(n).or_default())
        };
        // Sub-exponents are strictly smaller, so this never re-enters `cell`.
        cell.get_or_init(|| self.compute(n).map(Arc::new)).clone()
    }

    fn compute(&self, n: u64) -> Result<MersenneFactors> {
        let value = mersenne_value(n);
        let mut cofactor = value.clone();
        let mut found: BTreeMap<Nat, u32> = BTreeMap::new();
        let mut steps = Vec::new();

        for d in (2..n).filter(|d| n.is_multiple_of(*d)) {
            let sub = self.factor(d)?;
            for (p, _) in sub.factorization.factors() {
                let mut e = 0;
                while (&cofactor % p).is_zero() {
                    cofactor /= p;
                    e += 1;
                }
                if e > 0 {
                    found.insert(p.clone(), e);
                    steps.push(TraceStep::Propagated {
                        d,
                        prime: p.clone(),
                        multiplicity: e,
                    });
                }
            }
        }

        if !cofactor.is_one() {
            let class = self.class_for(n)?;
            let mut root = root_u64(&cofactor);
            for c in class.prime_members() {
                if c > root {
                    steps.push(TraceStep::CandidateExhaustedPrime {
                        prime: cofactor.clone(),
                        scan_bound: root,
                    });
                    found.insert(std::mem::replace(&mut cofactor, Nat::one()), 1);
                    break;
                }
                if let Some(budget) = self.config.budget.filter(|&b| c > b) {
                    steps.push(TraceStep::BudgetExhausted {
                        budget,
                        cofactor: cofactor.clone(),
                    });
                    break;
                }
                if (&cofactor % c).is_zero() {
                    let mut e = 0;
                    while (&cofactor % c).is_zero() {
                        cofactor /= c;
                        e += 1;
                    }
                    found.insert(Nat::from(c), e);
                    steps.push(TraceStep::CandidateHit {
                        candidate: c,
                        multiplicity: e,
                    });
                    if cofactor.is_one() {
                        break;
                    }
                    root = root_u64(&cofactor);
                } else {
                    steps.push(TraceStep::CandidateMiss { candidate: c });
                }
            }
        }

        Ok(MersenneFactors {
            exponent: n,
            factorization: Factorization::assemble(value, found, cofactor),
            trace: FactorTrace { steps },
        })
    }
}

/// Factors `M_n` with the refined classes and an optional candidate budget.
pub fn factor_mersenne(n: u64, budget: Option<u64>) -> Result<(Factorization, FactorTrace)> {
    let lab = MersenneFactorizer::new(FactorConfig {
        budget,
        classes: ClassChoice::Refined,
    });
    let out = lab.factor(n)?;
    Ok((out.factorization.clone(), out.trace.clone()))
}

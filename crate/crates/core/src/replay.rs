//! Reproductions of the historical computations, diffed against values
//! written down in 1640 and 1772.
//!
//! Expected values below are literal fixtures. They are never derived from
//! the library, so a regression in the pipeline shows up as a failing item.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::factor::{ClassChoice, FactorConfig, Factorization, MersenneFactorizer, TraceStep};
use crate::forms::{euler_refined_class, third_proposition_class};
use crate::kernel::{digit_count, isqrt, modpow_u64, Nat};
use crate::mersenne::mersenne_value;
use crate::primes::{is_prime, primes_in_classes, sieve};

pub(crate) fn as_decimal<S: Serializer>(n: &Nat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&n.to_str_radix(10))
}

/// `{value, factors: [{p, e}], status, cofactor}`, every number a decimal string.
impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            p: String,
            e: String,
        }
        let factors: Vec<Term> = self
            .factors()
            .iter()
            .map(|(p, e)| Term {
                p: p.to_string(),
                e: e.to_string(),
            })
            .collect();
        let mut st = s.serialize_struct("Factorization", 4)?;
        st.serialize_field("value", &self.value().to_string())?;
        st.serialize_field("factors", &factors)?;
        st.serialize_field("status", &self.status())?;
        st.serialize_field("cofactor", &self.cofactor().to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayItem {
    pub label: String,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub scenario: String,
    pub items: Vec<ReplayItem>,
    pub overall: bool,
}

impl ReplayReport {
    pub fn new(scenario: impl Into<String>) -> Self {
        ReplayReport {
            scenario: scenario.into(),
            items: Vec::new(),
            overall: true,
        }
    }

    pub fn check(&mut self, label: impl Into<String>, computed: impl ToString, expected: &str) {
        let computed = computed.to_string();
        let pass = computed == expected;
        self.overall &= pass;
        self.items.push(ReplayItem {
            label: label.into(),
            computed,
            expected: expected.to_string(),
            pass,
        });
    }

    /// Copy of this report with item `index` compared against `expected`
    /// instead.
    pub fn with_expected(&self, index: usize, expected: &str) -> ReplayReport {
        let mut out = ReplayReport::new(self.scenario.clone());
        for (i, item) in self.items.iter().enumerate() {
            let e = if i == index { expected } else { &item.expected };
            out.check(item.label.clone(), &item.computed, e);
        }
        out
    }

    pub fn passed(&self) -> usize {
        self.items.iter().filter(|i| i.pass).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for ReplayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "replay {}", self.scenario)?;
        for item in &self.items {
            if item.pass {
                writeln!(f, "  PASS  {}: {}", item.label, item.computed)?;
            } else {
                writeln!(
                    f,
                    "  FAIL  {}: computed {}, expected {}",
                    item.label, item.computed, item.expected
                )?;
            }
        }
        write!(
            f,
            "overall: {} ({}/{})",
            if self.overall { "PASS" } else { "FAIL" },
            self.passed(),
            self.items.len()
        )
    }
}

/// `M_n = value = p^e·...`, or `value (prime)`.
pub fn render_mersenne(f: &Factorization) -> String {
    if f.is_prime_value() {
        format!("{} (prime)", f.value())
    } else {
        format!("{} = {}", f.value(), f)
    }
}

/// Prime factorizations of `M_2` through `M_22`.
pub const TABLE1: &[(u64, &str)] = &[
    (2, "3 (prime)"),
    (3, "7 (prime)"),
    (4, "15 = 3·5"),
    (5, "31 (prime)"),
    (6, "63 = 3^2·7"),
    (7, "127 (prime)"),
    (8, "255 = 3·5·17"),
    (9, "511 = 7·73"),
    (10, "1023 = 3·11·31"),
    (11, "2047 = 23·89"),
    (12, "4095 = 3^2·5·7·13"),
    (13, "8191 (prime)"),
    (14, "16383 = 3·43·127"),
    (15, "32767 = 7·31·151"),
    (16, "65535 = 3·5·17·257"),
    (17, "131071 (prime)"),
    (18, "262143 = 3^3·7·19·73"),
    (19, "524287 (prime)"),
    (20, "1048575 = 3·5^2·11·31·41"),
    (21, "2097151 = 7^2·127·337"),
    (22, "4194303 = 3·23·89·683"),
];

/// `M_23` through `M_36`: the worked examples, the exercise answers, and
/// Euler's `M_31`.
pub const M23_TO_M36: &[(u64, &str)] = &[
    (23, "8388607 = 47·178481"),
    (24, "16777215 = 3^2·5·7·13·17·241"),
    (25, "33554431 = 31·601·1801"),
    (26, "67108863 = 3·2731·8191"),
    (27, "134217727 = 7·73·262657"),
    (28, "268435455 = 3·5·29·43·113·127"),
    (29, "536870911 = 233·1103·2089"),
    (30, "1073741823 = 3^2·7·11·31·151·331"),
    (31, "2147483647 (prime)"),
    (32, "4294967295 = 3·5·17·257·65537"),
    (33, "8589934591 = 7·23·89·599479"),
    (34, "17179869183 = 3·43691·131071"),
    (35, "34359738367 = 31·71·127·122921"),
    (36, "68719476735 = 3^3·5·7·13·19·37·73·109"),
];

/// Factors each listed exponent and compares against `expected`.
pub fn replay_factorizations(scenario: &str, expected: &[(u64, &str)]) -> ReplayReport {
    let lab = MersenneFactorizer::default();
    let mut report = ReplayReport::new(scenario);
    for &(n, want) in expected {
        let computed = match lab.factor(n) {
            Ok(out) => render_mersenne(&out.factorization),
            Err(e) => format!("error: {e}"),
        };
        report.check(format!("M_{n}"), computed, want);
    }
    report
}

pub fn replay_table1() -> ReplayReport {
    replay_factorizations("table1", TABLE1)
}

pub fn replay_m23_to_m36() -> ReplayReport {
    replay_factorizations("m23-m36", M23_TO_M36)
}

/// Fermat's June 1640 answer: candidates `74j + 1`, first 149, then 223.
pub fn replay_m37() -> ReplayReport {
    let mut report = ReplayReport::new("m37");
    let lab = MersenneFactorizer::new(FactorConfig {
        budget: None,
        classes: ClassChoice::Unrefined,
    });
    let class = third_proposition_class(37).expect("37 is an odd prime");
    report.check("candidate class", &class, "{1} mod 74");

    let out = lab.factor(37).expect("37 >= 2");
    report.check("M_37", out.factorization.value(), "137438953471");

    let tried: Vec<String> = out
        .trace
        .candidates()
        .take(2)
        .map(|(c, hit)| format!("{c} {}", if hit { "hit" } else { "miss" }))
        .collect();
    report.check(
        "first candidates tried",
        tried.join(", "),
        "149 miss, 223 hit",
    );
    report.check(
        "first divisor found",
        out.trace
            .steps
            .iter()
            .find_map(|s| match s {
                TraceStep::CandidateHit { candidate, .. } => Some(candidate.to_string()),
                _ => None,
            })
            .unwrap_or_else(|| "none".into()),
        "223",
    );
    report.check("factorization", &out.factorization, "223·616318177");

    let status = |n: u64| {
        if is_prime(&Nat::from(n)) {
            "prime"
        } else {
            "composite"
        }
    };
    report.check("223", status(223), "prime");
    report.check("cofactor 616318177", status(616318177), "prime");

    let would_be = mersenne_value(37) << 36u32;
    report.check("2^36·M_37", &would_be, "9444732965670570950656");
    report.check(
        "digits of 2^36·M_37",
        digit_count(&would_be).expect("positive"),
        "22",
    );
    report
}

/// Euler's 1772 check of `M_31`: only primes `248n + 1` or `248n + 63` up to
/// 46339 can divide it, and none do.
pub fn replay_m31() -> ReplayReport {
    let mut report = ReplayReport::new("m31");
    let m31 = mersenne_value(31);
    let class = euler_refined_class(31).expect("31 is an odd prime");
    report.check("refined classes", &class, "{1, 63} mod 248");

    let root = isqrt(&m31);
    report.check("isqrt(M_31)", &root, "46340");

    let table = sieve(46339).expect("limit above 2");
    report.check("primes below 46339", table.count_below(46339), "4792");

    let candidates = primes_in_classes(46339, &class);
    let strict = candidates.iter().filter(|&&p| p < 46339).count();
    report.check("candidate primes <= 46339", candidates.len(), "84");
    report.check("candidate primes < 46339", strict, "84");
    report.check(
        "first candidate",
        candidates.first().map_or("none".into(), u64::to_string),
        "311",
    );

    let hits: Vec<u64> = candidates
        .iter()
        .copied()
        .filter(|&q| modpow_u64(2, 31, q) == 1)
        .collect();
    report.check("divisor hits", hits.len(), "0");

    let cross_check = [candidates.first(), candidates.last()]
        .into_iter()
        .flatten()
        .all(|&q| (&m31 % q).is_zero() == (modpow_u64(2, 31, q) == 1));
    report.check(
        "direct division agrees on first and last candidate",
        if cross_check { "agrees" } else { "disagrees" },
        "agrees",
    );

    let covers_root = root.to_u64().is_some_and(|r| r <= 46339 + 1);
    let verdict = if hits.is_empty() && covers_root {
        "prime"
    } else {
        "not shown prime"
    };
    report.check("M_31", verdict, "prime");

    let perfect = &m31 << 30u32;
    report.check("2^30·M_31", &perfect, "2305843008139952128");
    report.check(
        "digits of 2^30·M_31",
        digit_count(&perfect).expect("positive"),
        "19",
    );
    report
}

pub const SCENARIOS: &[&str] = &["table1", "m23-m36", "m37", "m31"];

pub fn replay(scenario: &str) -> Option<ReplayReport> {
    Some(match scenario {
        "table1" => replay_table1(),
        "m23-m36" => replay_m23_to_m36(),
        "m37" => replay_m37(),
        "m31" => replay_m31(),
        _ => return None,
    })
}

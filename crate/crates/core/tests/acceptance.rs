//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion misses its exact expectation or its time bound.
//!
//! Run with `cargo test -p mersenne-lab --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use mersenne_lab::factor::{ClassChoice, FactorConfig, MersenneFactorizer};
use mersenne_lab::perfect::Verdict;
use mersenne_lab::replay::{replay_m23_to_m36, replay_m31, replay_m37, replay_table1};
use mersenne_lab::{
    divisibility_conjecture_check, enumerate_even_perfect, euclid_perfect, exponent_progression,
    factor_mersenne, factor_nat, flt_check, frenicle_scan, is_prime, mersenne, order, sieve,
    sophie_germain_divisor, Nat, ReplayReport,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(report: &ReplayReport, items: usize) -> Result<(), String> {
    ensure(report.items.len() == items, || {
        format!("{} items, expected {items}", report.items.len())
    })?;
    if let Some(bad) = report.items.iter().find(|i| !i.pass) {
        return Err(format!(
            "{}: computed {}, expected {}",
            bad.label, bad.computed, bad.expected
        ));
    }
    ensure(report.overall, || "overall flag is false".into())
}

fn table1() -> Outcome {
    let report = replay_table1();
    all_pass(&report, 21)?;
    let item = |label: &str| {
        report
            .items
            .iter()
            .find(|i| i.label == label)
            .map(|i| i.computed.clone())
    };
    ensure(
        item("M_12").as_deref() == Some("4095 = 3^2·5·7·13"),
        || "M_12".into(),
    )?;
    ensure(
        item("M_21").as_deref() == Some("2097151 = 7^2·127·337"),
        || "M_21".into(),
    )?;
    Ok("21/21 factorizations match".into())
}

fn m23_to_m36() -> Outcome {
    let report = replay_m23_to_m36();
    all_pass(&report, 14)?;
    let computed = |label: &str| {
        report
            .items
            .iter()
            .find(|i| i.label == label)
            .map(|i| i.computed.clone())
    };
    ensure(
        computed("M_29").as_deref() == Some("536870911 = 233·1103·2089"),
        || "M_29".into(),
    )?;
    ensure(
        computed("M_31").as_deref() == Some("2147483647 (prime)"),
        || "M_31".into(),
    )?;
    Ok("14/14 factorizations match, M_31 prime".into())
}

fn m37() -> Outcome {
    let report = replay_m37();
    all_pass(&report, report.items.len())?;

    let lab = MersenneFactorizer::new(FactorConfig {
        budget: None,
        classes: ClassChoice::Unrefined,
    });
    let out = lab.factor(37).map_err(|e| e.to_string())?;
    let tried: Vec<(u64, bool)> = out.trace.candidates().take(2).collect();
    ensure(tried == [(149, false), (223, true)], || {
        format!("trace {tried:?}")
    })?;
    let f = &out.factorization;
    let primes: Vec<Nat> = f.prime_multiset();
    ensure(
        primes == [Nat::from(223u32), Nat::from(616318177u32)],
        || format!("factors {f}"),
    )?;
    ensure(primes.iter().all(is_prime), || {
        "a factor is not prime".into()
    })?;
    let would_be = mersenne(37).unwrap().into_value() << 36u32;
    ensure(would_be.to_string().len() == 22, || "digit count".into())?;
    Ok("trace [149 miss, 223 hit], 223·616318177, 22 digits".into())
}

fn m31() -> Outcome {
    let report = replay_m31();
    all_pass(&report, report.items.len())?;
    let expected = [
        ("refined classes", "{1, 63} mod 248"),
        ("primes below 46339", "4792"),
        ("candidate primes <= 46339", "84"),
        ("first candidate", "311"),
        ("divisor hits", "0"),
        ("M_31", "prime"),
        ("2^30·M_31", "2305843008139952128"),
        ("digits of 2^30·M_31", "19"),
    ];
    for (label, want) in expected {
        let got = report.items.iter().find(|i| i.label == label);
        ensure(got.is_some_and(|i| i.computed == want), || {
            format!("{label}: {got:?}")
        })?;
    }
    Ok("{1,63} mod 248, 4792 primes, 84 candidates from 311, 0 hits, 19 digits".into())
}

fn flt_sweep() -> Outcome {
    let table = sieve(10_000).unwrap();
    let mut pairs = 0usize;
    let mut counterexamples = Vec::new();
    for &p in table.primes() {
        for a in (2..=50u64).filter(|a| a % p != 0) {
            pairs += 1;
            if !flt_check(&Nat::from(p), &Nat::from(a)).map_err(|e| e.to_string())? {
                counterexamples.push((p, a));
            }
        }
    }
    ensure(counterexamples.is_empty(), || {
        format!("{counterexamples:?}")
    })?;
    Ok(format!("{pairs} (p, a) pairs, 0 counterexamples"))
}

fn conjecture_sweep() -> Outcome {
    let table = sieve(100_000).unwrap();
    let mut checked = 0usize;
    for &p in table.primes().iter().skip(1) {
        let (k, holds) = divisibility_conjecture_check(p).map_err(|e| e.to_string())?;
        ensure(holds, || {
            format!("order {k} of 2 mod {p} does not divide {}", p - 1)
        })?;
        checked += 1;
    }
    ensure(checked == 9591, || format!("{checked} odd primes"))?;
    Ok(format!("{checked} odd primes, 0 counterexamples"))
}

fn lemma_corollary() -> Outcome {
    let mut composite = 0usize;
    for m in (3..=2001u64).step_by(2) {
        let k = order(&Nat::from(2u32), &Nat::from(m))
            .map_err(|e| e.to_string())?
            .order;
        let direct = exponent_progression(m, 4 * k).map_err(|e| e.to_string())?;
        let multiples: Vec<u64> = (1..=4).map(|j| j * k).collect();
        ensure(direct == multiples, || {
            format!("m = {m}: direct {direct:?}, multiples of {k} {multiples:?}")
        })?;
        if !is_prime(&Nat::from(m)) {
            composite += 1;
        }
    }
    Ok(format!("1000 odd moduli ({composite} composite) match"))
}

fn factorizer_oracle() -> Outcome {
    for n in 2..=40u64 {
        let (fast, _) = factor_mersenne(n, None).map_err(|e| e.to_string())?;
        let slow = factor_nat(mersenne(n).unwrap().value()).map_err(|e| e.to_string())?;
        ensure(fast.is_complete(), || format!("M_{n} incomplete"))?;
        ensure(fast.prime_multiset() == slow.prime_multiset(), || {
            format!("M_{n}: pipeline {fast}, trial division {slow}")
        })?;
    }
    Ok("39 exponents agree with plain trial division".into())
}

/// Sum of proper divisors of every n <= limit, by adding each d to its
/// proper multiples.
fn aliquot_sieve(limit: usize) -> Vec<u32> {
    let mut sums = vec![0u32; limit + 1];
    for d in 1..=limit / 2 {
        for m in (2 * d..=limit).step_by(d) {
            sums[m] += d as u32;
        }
    }
    sums
}

fn perfect_numbers() -> Outcome {
    let limit = 10_000_000usize;
    let sums = aliquot_sieve(limit);
    let sieved: Vec<Nat> = (2..=limit)
        .step_by(2)
        .filter(|&n| sums[n] as usize == n)
        .map(Nat::from)
        .collect();
    let euclid = enumerate_even_perfect(&Nat::from(limit));
    let want: Vec<Nat> = [6u32, 28, 496, 8128].map(Nat::from).to_vec();
    ensure(euclid == want, || format!("Euclid route {euclid:?}"))?;
    ensure(sieved == want, || format!("sigma sieve {sieved:?}"))?;
    let third = euclid_perfect(5).map_err(|e| e.to_string())?;
    ensure(
        third.is_some_and(|r| r.perfect_number == Nat::from(496u32)),
        || "euclid_perfect(5)".into(),
    )?;
    Ok("{6, 28, 496, 8128} by both routes; third is 496".into())
}

fn sophie_germain() -> Outcome {
    let expect: [(u64, Option<u64>); 7] = [
        (3, Some(7)),
        (11, Some(23)),
        (23, Some(47)),
        (83, Some(167)),
        (131, Some(263)),
        (13, None),
        (29, None),
    ];
    for (p, want) in expect {
        let got = sophie_germain_divisor(p).map_err(|e| e.to_string())?;
        ensure(got == want, || {
            format!("p = {p}: {got:?}, expected {want:?}")
        })?;
        if let Some(q) = got {
            let m = mersenne(p).unwrap().into_value();
            ensure((m % q) == Nat::from(0u32), || format!("{q} ∤ M_{p}"))?;
        }
    }
    Ok("7, 23, 47, 167, 263; none for 13 and 29".into())
}

fn frenicle() -> Outcome {
    let report = frenicle_scan(20, 37, None);
    ensure(report.outcome.is_none(), || format!("{:?}", report.outcome))?;
    let primes: Vec<u64> = report
        .exponents_examined
        .iter()
        .map(|v| v.exponent)
        .collect();
    ensure(
        primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37],
        || format!("exponents {primes:?}"),
    )?;
    let v31 = report.verdict_for(31).unwrap();
    ensure(
        v31.verdict == Verdict::MersennePrime && v31.perfect_digits == Some(19),
        || format!("31: {v31:?}"),
    )?;
    let v37 = report.verdict_for(37).unwrap();
    ensure(
        v37.verdict
            == Verdict::Imposter {
                witness: Nat::from(223u32),
            },
        || format!("37: {v37:?}"),
    )?;
    let imposters: BTreeSet<u64> = report
        .exponents_examined
        .iter()
        .filter(|v| matches!(v.verdict, Verdict::Imposter { .. }))
        .map(|v| v.exponent)
        .collect();
    ensure(imposters == BTreeSet::from([11, 23, 29, 37]), || {
        format!("imposters {imposters:?}")
    })?;
    Ok("none found; M_31 gives 19 digits; M_37 divisible by 223".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("1 Table 1 reproduction", Duration::from_secs(1), table1),
        (
            "2 M_23..M_36 reproduction",
            Duration::from_secs(30),
            m23_to_m36,
        ),
        ("3 M_37 reproduction", Duration::from_secs(1), m37),
        ("4 Euler M_31 reproduction", Duration::from_secs(5), m31),
        ("5 FLT sweep", Duration::from_secs(20), flt_sweep),
        (
            "6 divisibility-conjecture sweep",
            Duration::from_secs(30),
            conjecture_sweep,
        ),
        (
            "7 Lemma/Corollary equivalence",
            Duration::from_secs(10),
            lemma_corollary,
        ),
        (
            "8 factorizer oracle equivalence",
            Duration::from_secs(30),
            factorizer_oracle,
        ),
        (
            "9 perfect numbers",
            Duration::from_secs(30),
            perfect_numbers,
        ),
        (
            "10 Sophie Germain criterion",
            Duration::from_secs(1),
            sophie_germain,
        ),
        ("11 Frenicle challenge", Duration::from_secs(30), frenicle),
    ];
    let mut failures = Vec::new();
    for (name, bound, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > bound => {
                Err(format!("{detail}; took {elapsed:.2?}, bound {bound:?}"))
            }
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("PASS  {name}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                println!("FAIL  {name}: {why} ({elapsed:.2?})");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

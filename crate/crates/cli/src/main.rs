//! `mersenne`: factor Mersenne numbers, compute orders, sweep Fermat's
//! theorem, and replay the historical computations.
//!
//! Exit status: 0 on success, 1 when a check or replay item fails, 2 on a
//! usage or domain error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mersenne_lab::factor::{ClassChoice, FactorConfig, MersenneFactorizer, TraceStep};
use mersenne_lab::primes::sieve;
use mersenne_lab::replay::{self, render_mersenne, ReplayReport};
use mersenne_lab::{
    divisibility_conjecture_check, euler_refined_class, flt_check, frenicle_scan,
    generalized_class, isqrt, mersenne, order, primes_in_classes, Error, Nat,
};
use num_bigint::BigUint;
use serde_json::json;

/// `println!` that stops quietly when stdout is closed early (`| head`).
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "mersenne", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor M_n = 2^n - 1 and show how each factor was found.
    Factor {
        n: u64,
        /// Largest candidate divisor to try; defaults to the square root of
        /// the running cofactor.
        #[arg(long)]
        budget: Option<u64>,
        /// Use the two classes mod 8n for odd n (default).
        #[arg(long, conflicts_with = "unrefined")]
        refined: bool,
        /// Use only the class 1 mod 2n for odd n.
        #[arg(long)]
        unrefined: bool,
        #[arg(long)]
        json: bool,
    },
    /// Multiplicative order of a base modulo m.
    Order {
        m: BigUint,
        #[arg(long, default_value = "2")]
        base: BigUint,
    },
    /// Check a^(p-1) ≡ 1 (mod p) and ord_p(2) | p - 1 for every prime p up to a bound.
    VerifyFlt {
        #[arg(long = "max-p")]
        max_p: u64,
        /// Bases to test; defaults to 2..=50.
        #[arg(long, value_delimiter = ',')]
        bases: Vec<u64>,
    },
    /// List the primes that could divide M_q.
    Candidates {
        #[arg(long)]
        q: u64,
        /// Largest candidate to list; defaults to isqrt(M_q).
        #[arg(long)]
        limit: Option<u64>,
        /// Restrict to ±1 mod 8 as well (q must be an odd prime).
        #[arg(long)]
        refined: bool,
    },
    /// Look for a perfect number with at least the given number of digits.
    Perfect {
        #[arg(long = "min-digits", default_value_t = 20)]
        min_digits: u64,
        #[arg(long = "max-exponent", default_value_t = 37)]
        max_exponent: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce a historical computation and diff it against recorded values.
    Replay {
        scenario: Scenario,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    Table1,
    #[value(name = "m23-m36")]
    M23M36,
    M37,
    M31,
    All,
}

enum Failure {
    Check,
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Factor {
            n,
            budget,
            refined: _,
            unrefined,
            json,
        } => factor(n, budget, unrefined, json),
        Command::Order { m, base } => {
            let rec = order(&base, &m)?;
            say!("ord_{}({}) = {}", rec.modulus, rec.base, rec.order);
            Ok(())
        }
        Command::VerifyFlt { max_p, bases } => verify_flt(max_p, bases),
        Command::Candidates { q, limit, refined } => candidates(q, limit, refined),
        Command::Perfect {
            min_digits,
            max_exponent,
            budget,
            json,
        } => {
            if min_digits < 1 || max_exponent < 2 {
                return Err(Error::TooSmall {
                    what: "--min-digits / --max-exponent",
                    min: 1,
                    got: Nat::from(min_digits.min(max_exponent)),
                }
                .into());
            }
            let report = frenicle_scan(min_digits, max_exponent, budget);
            if json {
                say!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("serializable")
                );
            } else {
                say!("{report}");
            }
            Ok(())
        }
        Command::Replay { scenario, json } => replay_cmd(scenario, json),
    }
}

fn factor(n: u64, budget: Option<u64>, unrefined: bool, json: bool) -> Result<(), Failure> {
    let classes = if unrefined {
        ClassChoice::Unrefined
    } else {
        ClassChoice::Refined
    };
    let lab = MersenneFactorizer::new(FactorConfig { budget, classes });
    let out = lab.factor(n)?;
    if json {
        let doc = json!({
            "exponent": n,
            "factorization": out.factorization,
            "trace": out.trace.steps,
        });
        say!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        );
        return Ok(());
    }
    say!("M_{n} = {}", render_mersenne(&out.factorization));
    say!(
        "status: {}",
        if out.factorization.is_complete() {
            "complete"
        } else {
            "partial"
        }
    );
    say!("classes: {}", lab.class_for(n)?);
    for step in &out.trace.steps {
        match step {
            TraceStep::Propagated {
                d,
                prime,
                multiplicity,
            } => say!("  {prime}^{multiplicity} from M_{d}"),
            TraceStep::CandidateMiss { candidate } => say!("  {candidate} miss"),
            TraceStep::CandidateHit {
                candidate,
                multiplicity,
            } => say!("  {candidate} hit (multiplicity {multiplicity})"),
            TraceStep::CandidateExhaustedPrime { prime, scan_bound } => {
                say!("  no candidate up to {scan_bound} divides {prime}: prime")
            }
            TraceStep::BudgetExhausted { budget, cofactor } => {
                say!("  budget {budget} exhausted, {cofactor} unresolved")
            }
        }
    }
    Ok(())
}

fn verify_flt(max_p: u64, bases: Vec<u64>) -> Result<(), Failure> {
    let bases = if bases.is_empty() {
        (2..=50).collect()
    } else {
        bases
    };
    let table = sieve(max_p)?;
    let mut pairs = 0usize;
    let mut flt_bad = 0usize;
    let mut odd = 0usize;
    let mut conj_bad = 0usize;
    for &p in table.primes() {
        for &a in bases.iter().filter(|&&a| a % p != 0) {
            pairs += 1;
            if !flt_check(&Nat::from(p), &Nat::from(a))? {
                flt_bad += 1;
                say!("counterexample: {a}^{} mod {p} != 1", p - 1);
            }
        }
        if p > 2 {
            odd += 1;
            let (k, holds) = divisibility_conjecture_check(p)?;
            if !holds {
                conj_bad += 1;
                say!("counterexample: ord_{p}(2) = {k} does not divide {}", p - 1);
            }
        }
    }
    say!("Fermat: {pairs} (p, a) pairs with p <= {max_p}, {flt_bad} counterexamples");
    say!("order divides p - 1: {odd} odd primes, {conj_bad} counterexamples");
    if flt_bad + conj_bad > 0 {
        Err(Failure::Check)
    } else {
        Ok(())
    }
}

fn candidates(q: u64, limit: Option<u64>, refined: bool) -> Result<(), Failure> {
    let class = if refined {
        euler_refined_class(q)?
    } else {
        generalized_class(q)?
    };
    let limit = match limit {
        Some(l) => l,
        None => {
            let root = isqrt(mersenne(q)?.value());
            u64::try_from(root.clone()).map_err(|_| Error::TooLarge(root))?
        }
    };
    let primes = primes_in_classes(limit, &class);
    say!("classes {class}, primes up to {limit}: {}", primes.len());
    for p in primes {
        say!("{p}");
    }
    Ok(())
}

fn replay_cmd(scenario: Scenario, json: bool) -> Result<(), Failure> {
    let names: &[&str] = match scenario {
        Scenario::Table1 => &["table1"],
        Scenario::M23M36 => &["m23-m36"],
        Scenario::M37 => &["m37"],
        Scenario::M31 => &["m31"],
        Scenario::All => replay::SCENARIOS,
    };
    let reports: Vec<ReplayReport> = names
        .iter()
        .map(|s| replay::replay(s).expect("known scenario"))
        .collect();
    if json {
        let text = match reports.as_slice() {
            [one] => one.to_json(),
            many => serde_json::to_string_pretty(many).expect("serializable"),
        };
        say!("{text}");
    } else {
        let texts: Vec<String> = reports.iter().map(ToString::to_string).collect();
        say!("{}", texts.join("\n\n"));
    }
    if reports.iter().all(|r| r.overall) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

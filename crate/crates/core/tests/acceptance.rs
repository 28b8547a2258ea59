//! Acceptance gate. Prints one `A<n> PASS|FAIL` line per criterion and exits
//! non-zero if any criterion fails or exceeds its time budget.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hodge_core::combinatorics::{factorial_rat, partitions};
use hodge_core::gauss::{int, rat};
use hodge_core::genfun::{elsv_rhs, extract_linear_table, gmv_rhs, one_point_cubic, zero_point_cubic};
use hodge_core::localization::{verify_bilinear, MarkedProblem};
use hodge_core::report::CheckReport;
use hodge_core::suites::{
    bilinear_markings, cubic_recursion_reports, cubic_slice_report, cubic_table, dilaton_zero_point_report,
    elsv_oracle, genus_zero_report, lam_g_report, linear_recursion_reports, run_suite, Suite, SuiteConfig,
};
use hodge_core::{GaussRat, Partition, Rational, Result, Series};
use num_traits::One;

struct Outcome {
    checks: Vec<CheckReport>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checks: Vec::new() }
    }

    fn push(&mut self, r: CheckReport) {
        self.checks.push(r);
    }

    fn value(&mut self, check: &str, label: &str, actual: Rational, expected: Rational) {
        self.push(CheckReport::rationals(check, label, [(label.to_string(), actual, expected)]));
    }

    fn first_failure(&self) -> Option<String> {
        if self.checks.is_empty() {
            return Some("no checks ran".into());
        }
        let bad = self.checks.iter().find(|r| !r.passed() || r.compared == 0)?;
        let detail = match (&bad.first_mismatch, &bad.error) {
            (Some(m), _) => format!("at {}: expected {}, got {}", m.at, m.expected, m.actual),
            (None, Some(e)) => e.clone(),
            (None, None) => "nothing compared".into(),
        };
        Some(format!("{} [{}] {detail}", bad.check, bad.problem))
    }
}

fn partition(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).expect("valid partition")
}

fn valuation(mu: &Partition) -> i64 {
    -(mu.size() as i64) - mu.length() as i64
}

fn a1() -> Result<Outcome> {
    let mut out = Outcome::new();
    for parts in [&[1][..], &[2], &[1, 1], &[3], &[2, 1]] {
        let mu = partition(parts);
        let order = valuation(&mu) + 8;
        let lhs = elsv_rhs(&mu, order)?;
        out.push(CheckReport::series("character-sum", format!("mu={mu}"), &lhs, &elsv_oracle(&mu, order)?, None, Some(order)));
    }
    out.push(CheckReport::series(
        "closed-form",
        "mu=(1)",
        &elsv_rhs(&partition(&[1]), 7)?,
        &Series::monomial(GaussRat::one(), -2),
        None,
        Some(7),
    ));
    let cosh = Series::from_terms(
        (0..6i64).map(|k| (2 * k, GaussRat::real(factorial_rat(2 * k as usize).recip()))),
        None,
    )
    .shift(-4);
    out.push(CheckReport::series("closed-form", "mu=(1,1)", &elsv_rhs(&partition(&[1, 1]), 7)?, &cosh, None, Some(7)));
    Ok(out)
}

fn a2() -> Result<Outcome> {
    let mut out = Outcome::new();
    for a in [int(1), int(2), int(3), rat(1, 2)] {
        let mirror = -&a - Rational::one();
        for mu in (1..=4).flat_map(partitions) {
            let order = valuation(&mu) + 8;
            let lhs = gmv_rhs(&mu, &a, order)?;
            let rhs = gmv_rhs(&mu, &mirror, order)?;
            out.push(CheckReport::series("symmetry", format!("mu={mu} a={a}"), &lhs, &rhs, None, Some(order)));
        }
        for m in 1..=4 {
            let mu = partition(&[m]);
            let order = valuation(&mu) + 8;
            let lhs = one_point_cubic(m, &a, order)?;
            let rhs = gmv_rhs(&mu, &a, order)?;
            out.push(CheckReport::series("one-point", format!("m={m} a={a}"), &lhs, &rhs, None, Some(order)));
        }
    }
    Ok(out)
}

fn a3() -> Result<Outcome> {
    let mut out = Outcome::new();
    let order = 6;
    for d in 1..=3 {
        for nu in bilinear_markings(d) {
            for a in [int(1), int(2), int(3)] {
                let p = MarkedProblem::new(nu.clone(), d, a, order)?;
                let r = verify_bilinear(&p)?;
                // the leading pole sits at u^-2; demand four more coefficients
                let [lo, hi] = r.compared_orders.unwrap_or([0, 0]);
                if lo > -2 || hi < 3 {
                    out.push(CheckReport::failed("bilinear", p.to_string(), &hodge_core::Error::Budget(format!("compared only [{lo}, {hi})"))));
                }
                out.push(r);
            }
        }
    }
    Ok(out)
}

fn a4() -> Result<Outcome> {
    let mut out = Outcome::new();
    let table = extract_linear_table(2, 5)?;
    out.push(lam_g_report(&table));
    out.value("value", "(1|1|0) lambda_1", table.get(1, &[0], 1).cloned().unwrap_or_else(|| int(0)), rat(1, 24));
    out.value("value", "(2|1|2) lambda_2 psi^2", table.get(2, &[2], 2).cloned().unwrap_or_else(|| int(0)), rat(7, 5760));
    Ok(out)
}

fn a5() -> Result<Outcome> {
    let mut out = Outcome::new();
    let cubic = cubic_table(2, 3)?;
    let linear = extract_linear_table(2, 3)?;
    out.push(cubic_slice_report(&cubic, &linear));
    out.push(dilaton_zero_point_report(&cubic)?);
    let (one, zero) = (int(1), int(0));
    let monomial = zero_point_cubic(2, [&one, &one, &zero])? / int(2);
    out.value("value", "zero-point t1^2 t2", monomial, rat(1, 5760));
    out.value("value", "(2|1|2,1,0)", cubic.get(2, &[1], [2, 1, 0]).cloned().unwrap_or_else(|| int(0)), rat(2, 5760));
    Ok(out)
}

fn suite(s: Suite) -> Result<Outcome> {
    let report = run_suite(s, &SuiteConfig::default())?;
    Ok(Outcome { checks: report.checks })
}

fn a8() -> Result<Outcome> {
    let mut out = Outcome::new();
    let linear = extract_linear_table(2, 5)?;
    out.push(genus_zero_report(&linear));
    linear_recursion_reports(&linear).into_iter().for_each(|r| out.push(r));
    cubic_recursion_reports(&cubic_table(2, 3)?).into_iter().for_each(|r| out.push(r));
    Ok(out)
}

type Criterion = (&'static str, &'static str, Duration, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("A1", "ELSV working form vs character sum and closed forms", Duration::from_secs(1), a1),
        ("A2", "GMV mirror symmetry and one-point formula", Duration::from_secs(5), a2),
        ("A3", "bilinear relations d<=3 n<=2", Duration::from_secs(300), a3),
        ("A4", "lambda_g formula on the linear table", Duration::from_secs(30), a4),
        ("A5", "cubic/linear compatibility and dilaton cross-check", Duration::from_secs(120), a5),
        ("A6", "identity suite", Duration::from_secs(10), || suite(Suite::Identities)),
        ("A7", "operator suite", Duration::from_secs(300), || suite(Suite::Fock)),
        ("A8", "genus-zero, string and dilaton oracles", Duration::from_secs(300), a8),
    ];
    let mut failed = 0;
    for (id, desc, budget, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let failure = match result {
            Ok(Ok(outcome)) => outcome.first_failure(),
            Ok(Err(e)) => Some(e.to_string()),
            Err(_) => Some("panicked".into()),
        };
        let over = elapsed > budget;
        let ok = failure.is_none() && !over;
        match failure {
            None if !over => println!("{id} PASS {desc} ({elapsed:.2?})"),
            None => println!("{id} FAIL {desc} ({elapsed:.2?}, budget {budget:?})"),
            Some(f) => println!("{id} FAIL {desc} ({elapsed:.2?}): {f}"),
        }
        failed += usize::from(!ok);
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

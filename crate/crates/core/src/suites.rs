//! Named verification suites, run in parallel and reported in a stable order.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{
    bernoulli, character, dim, f2, f2_from_character, factorial, factorial_rat, ident1_lhs, ident1_rhs,
    partitions, tree_coefficient, tree_exp_coefficient, zeta, Partition,
};
use crate::error::{Error, Result};
use crate::fock::{self, FockVector};
use crate::gauss::{big, int, rat, rpow, GaussRat, Rational};
use crate::genfun::{
    connected_to_disconnected, cy_weights, elsv_prefactor, elsv_rhs, extract_cubic_table, gmv_large_a_limit,
    gmv_rhs, lam_g_value, one_point_cubic, r_series_log, r_series_product, shared_linear_table,
    zero_point_cubic, CubicHodgeTable, HodgeTable, PositionFamily,
};
use crate::localization::{cubic_polynomiality_check, igsum_check, verify_bilinear_with, MarkedProblem, ZOptions};
use crate::report::{CheckReport, Status};
use crate::series::{s_series, Series};

pub const REPORT_SCHEMA: &str = "hodge-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Elsv,
    Gmv,
    Bilinear,
    Fock,
    Identities,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Elsv, Suite::Gmv, Suite::Bilinear, Suite::Fock, Suite::Identities];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Elsv => "elsv",
            Suite::Gmv => "gmv",
            Suite::Bilinear => "bilinear",
            Suite::Fock => "fock",
            Suite::Identities => "identities",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Budgets shared by all suites.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Largest degree `d` (and partition size in the ELSV checks).
    pub d_max: usize,
    pub g_max: usize,
    pub a_values: Vec<Rational>,
    /// Series are compared through `valuation + order_offset` (exclusive).
    pub order_offset: i64,
    /// Energy cutoff for the wedge checks.
    pub cutoff: usize,
    pub seed: u64,
    pub flip_edge_sign: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            d_max: 3,
            g_max: 2,
            a_values: vec![int(1), int(2), int(3)],
            order_offset: 8,
            cutoff: 6,
            seed: 20_240_531,
            flip_edge_sign: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d_max == 0 || self.d_max > 4 {
            return Err(Error::Budget(format!("d_max = {} outside 1..=4", self.d_max)));
        }
        if self.g_max > 2 {
            return Err(Error::Budget(format!("g_max = {} exceeds 2", self.g_max)));
        }
        if !(2..=7).contains(&self.cutoff) {
            return Err(Error::Budget(format!("energy cutoff {} outside 2..=7", self.cutoff)));
        }
        if !(2..=12).contains(&self.order_offset) {
            return Err(Error::Budget(format!("order offset {} outside 2..=12", self.order_offset)));
        }
        if self.a_values.is_empty() {
            return Err(Error::InvalidArgument("need at least one a-value".into()));
        }
        for a in &self.a_values {
            if a.is_zero() || *a == -Rational::one() {
                return Err(Error::InvalidArgument(format!("a = {a} must avoid 0 and -1")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub suite: Suite,
    pub status: Status,
    pub checks_run: usize,
    pub checks_failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<CheckReport>,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn assemble(suite: Suite, mut checks: Vec<CheckReport>) -> Self {
        checks.sort_by(|x, y| (&x.check, &x.problem).cmp(&(&y.check, &y.problem)));
        let failed: Vec<&CheckReport> = checks.iter().filter(|c| !c.passed()).collect();
        SuiteReport {
            schema: REPORT_SCHEMA,
            suite,
            status: if failed.is_empty() { Status::Pass } else { Status::Fail },
            checks_run: checks.len(),
            checks_failed: failed.len(),
            first_failure: failed.first().map(|c| (*c).clone()),
            checks,
        }
    }
}

type Job = Box<dyn Fn() -> CheckReport + Send + Sync>;

fn job<F>(check: &'static str, problem: String, f: F) -> Job
where
    F: Fn() -> Result<CheckReport> + Send + Sync + 'static,
{
    Box::new(move || {
        let mut r = CheckReport::from_result(check, problem.clone(), f());
        r.check = check.into();
        r.problem = problem.clone();
        r
    })
}

fn run_jobs(jobs: Vec<Job>) -> Vec<CheckReport> {
    jobs.par_iter().map(|j| j()).collect()
}

/// Runs one suite (or all of them) at the given budgets.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let jobs = match suite {
        Suite::All => Suite::EACH.into_iter().flat_map(|s| jobs_for(s, cfg)).collect(),
        s => jobs_for(s, cfg),
    };
    Ok(SuiteReport::assemble(suite, run_jobs(jobs)))
}

fn jobs_for(suite: Suite, cfg: &SuiteConfig) -> Vec<Job> {
    match suite {
        Suite::Elsv => elsv_jobs(cfg),
        Suite::Gmv => gmv_jobs(cfg),
        Suite::Bilinear => bilinear_jobs(cfg),
        Suite::Fock => fock_jobs(cfg),
        Suite::Identities => identity_jobs(),
        Suite::All => Vec::new(),
    }
}

/// Partitions of every size in `1..=d`.
fn partitions_up_to(d: usize) -> Vec<Partition> {
    (1..=d).flat_map(partitions).collect()
}

fn series_valuation(mu: &Partition) -> i64 {
    -(mu.size() as i64) - mu.length() as i64
}

// ---------------------------------------------------------------- ELSV

/// `u^{-|μ|-ℓ} Σ_λ (dim λ/|λ|!) e^{u f2(λ)} χ^λ_μ / ∏(μ_i^{μ_i}/μ_i!)`,
/// recomputed from scratch.
pub fn elsv_oracle(mu: &Partition, order: i64) -> Result<Series> {
    let n = mu.size();
    let shift = mu.size() as i64 + mu.length() as i64;
    let mut acc = Series::exact_zero();
    for lambda in partitions(n) {
        let c = big(dim(&lambda) * character(&lambda, mu)?) / factorial_rat(n);
        if c.is_zero() {
            continue;
        }
        let e = Series::exp_linear(&GaussRat::from_int(f2(&lambda)), order + shift);
        acc = &acc + &e.scale_rat(&c);
    }
    Ok(acc.shift(-shift).scale_rat(&elsv_prefactor(mu).recip()))
}

/// The ψ-monomial part of `H°_g(z)` from table entries:
/// `Σ_{ν,j} (-1)^j X(g,ν,j) Σ_{σ} ∏ z_i^{σ(ν)_i + 1}`.
fn table_polynomial(table: &HodgeTable, g: usize, z: &[usize]) -> Result<Rational> {
    let n = z.len();
    if !table.has_block(g, n) {
        return Err(Error::InvalidArgument(format!("table lacks block (g={g}, n={n})")));
    }
    let mut acc = Rational::zero();
    for (k, x) in table.entries().iter().filter(|(k, _)| k.g == g && k.nu.len() == n) {
        let mut perms = Vec::new();
        permutations(&k.nu, &mut Vec::new(), &mut vec![false; n], &mut perms);
        let mono: Rational = perms
            .iter()
            .map(|p| p.iter().zip(z).map(|(&e, &zi)| rpow(&int(zi as i64), e as i64 + 1)).product::<Rational>())
            .sum();
        let sign = if k.j % 2 == 0 { Rational::one() } else { -Rational::one() };
        acc += sign * x * mono;
    }
    Ok(acc)
}

/// Distinct orderings of a multiset.
fn permutations(v: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == v.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..v.len() {
        if used[i] || (i > 0 && v[i] == v[i - 1] && !used[i - 1]) {
            continue;
        }
        used[i] = true;
        cur.push(v[i]);
        permutations(v, cur, used, out);
        cur.pop();
        used[i] = false;
    }
}

/// Connected linear series at `z` rebuilt from a table, exact below
/// `u^{2 g_max}`.
pub fn connected_from_table(table: &HodgeTable, z: &[usize], g_max: usize) -> Result<Series> {
    let n = z.len();
    let mut terms = Vec::new();
    for g in 0..=g_max {
        let v = match (g, n) {
            (0, 1) => rat(1, z[0] as i64),
            (0, 2) => rat((z[0] * z[1]) as i64, (z[0] + z[1]) as i64),
            _ => table_polynomial(table, g, z)?,
        };
        terms.push((2 * g as i64 - 2, GaussRat::real(v)));
    }
    Ok(Series::from_terms(terms, Some(2 * g_max as i64)))
}

/// Disconnected series at `μ` assembled from table-built connected parts.
pub fn disconnected_from_table(table: &HodgeTable, mu: &Partition, g_max: usize) -> Result<Series> {
    let parts = mu.parts();
    let n = parts.len();
    let mut con = PositionFamily::new();
    for mask in 1u32..(1 << n) {
        let z: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| parts[i]).collect();
        con.insert(mask, connected_from_table(table, &z, g_max)?);
    }
    Ok(connected_to_disconnected(&con, n)?.remove(&((1u32 << n) - 1)).expect("full mask present"))
}

fn linear_blocks(g_max: usize, n_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for g in 0..=g_max {
        for n in 1..=n_max {
            if 2 * g + n > 2 {
                out.push((g, n));
            }
        }
    }
    out
}

/// `λ_g` entries of the linear table against the closed formula.
pub fn lam_g_report(table: &HodgeTable) -> CheckReport {
    let pairs = table
        .entries()
        .iter()
        .filter(|(k, _)| k.j == k.g && k.g >= 1)
        .map(|(k, x)| (k.to_string(), x.clone(), lam_g_value(k.g, &k.nu)));
    CheckReport::rationals("lambda-g", "linear table", pairs)
}

/// Genus-0 closed form `(n-3)!/∏ν_i!` on every genus-0 entry.
pub fn genus_zero_report(table: &HodgeTable) -> CheckReport {
    let pairs = table.entries().iter().filter(|(k, _)| k.g == 0).map(|(k, x)| {
        let n = k.nu.len();
        let den: Rational = k.nu.iter().map(|&v| factorial_rat(v)).product();
        (k.to_string(), x.clone(), factorial_rat(n - 3) / den)
    });
    CheckReport::rationals("genus-zero", "linear table", pairs)
}

type Pairs = Vec<(String, Rational, Rational)>;

/// String and dilaton equations on a table given as a lookup
/// `(g, ν, λ-data) -> value`, over all keys whose forgetful image is stored.
fn recursion_pairs<K: Clone>(
    keys: impl Iterator<Item = (usize, Vec<usize>, K, Rational)>,
    lookup: impl Fn(usize, &[usize], &K) -> Option<Rational>,
    show: impl Fn(usize, &[usize], &K) -> String,
) -> (Pairs, Pairs) {
    let (mut string, mut dilaton) = (Vec::new(), Vec::new());
    for (g, nu, lam, x) in keys {
        let n = nu.len();
        if n < 2 || 2 * g + n - 1 <= 2 {
            continue;
        }
        if let Some(pos) = nu.iter().position(|&v| v == 0) {
            let mut rest = nu.clone();
            rest.remove(pos);
            let mut rhs = Some(Rational::zero());
            for i in 0..rest.len() {
                if rest[i] == 0 {
                    continue;
                }
                let mut lowered = rest.clone();
                lowered[i] -= 1;
                rhs = rhs.and_then(|acc| lookup(g, &lowered, &lam).map(|v| acc + v));
            }
            if let Some(r) = rhs {
                string.push((show(g, &nu, &lam), x.clone(), r));
            }
        }
        if let Some(pos) = nu.iter().position(|&v| v == 1) {
            let mut rest = nu.clone();
            rest.remove(pos);
            if let Some(v) = lookup(g, &rest, &lam) {
                dilaton.push((show(g, &nu, &lam), x, int(2 * g as i64 - 2 + n as i64 - 1) * v));
            }
        }
    }
    (string, dilaton)
}

pub fn linear_recursion_reports(table: &HodgeTable) -> Vec<CheckReport> {
    let (s, d) = recursion_pairs(
        table.entries().iter().map(|(k, x)| (k.g, k.nu.clone(), k.j, x.clone())),
        |g, nu, j| table.get(g, nu, *j).cloned(),
        |g, nu, j| format!("{}", crate::genfun::HodgeKey::new(g, nu, *j)),
    );
    vec![
        CheckReport::rationals("string", "linear table", s),
        CheckReport::rationals("dilaton", "linear table", d),
    ]
}

pub fn cubic_recursion_reports(table: &CubicHodgeTable) -> Vec<CheckReport> {
    let (s, d) = recursion_pairs(
        table.entries().iter().map(|(k, x)| (k.g, k.nu.clone(), k.js, x.clone())),
        |g, nu, js| table.get(g, nu, *js).cloned(),
        |g, nu, js| format!("{}", crate::genfun::CubicKey::new(g, nu, *js)),
    );
    vec![
        CheckReport::rationals("string", "cubic table", s),
        CheckReport::rationals("dilaton", "cubic table", d),
    ]
}

/// The `(j₂, j₃) = (0, 0)` slice of the cubic table against the linear one.
pub fn cubic_slice_report(cubic: &CubicHodgeTable, linear: &HodgeTable) -> CheckReport {
    let pairs = cubic.entries().iter().filter(|(k, _)| k.js[1] == 0 && k.js[2] == 0).filter_map(|(k, x)| {
        linear.get(k.g, &k.nu, k.js[0]).map(|y| (k.to_string(), x.clone(), y.clone()))
    });
    CheckReport::rationals("cubic-linear-slice", "g <= 2", pairs)
}

/// `∫_{M̄_{2,1}} ψ λ₂λ₁ = 2 ∫_{M̄_2} λ₂λ₁`, the latter read off the
/// closed 0-point formula as a monomial coefficient.
pub fn dilaton_zero_point_report(cubic: &CubicHodgeTable) -> Result<CheckReport> {
    // The coefficient of t₁²t₂ is recovered from the closed form by finite
    // differences in t₁ and t₂ at t₃ = 0.
    let val = |t1: i64, t2: i64| zero_point_cubic(2, [&int(t1), &int(t2), &int(0)]);
    // p(t1,t2) = c (t1²t2 + t1 t2²) at t3 = 0; p(1,1) = 2c, p(2,1) = 6c.
    let c = val(1, 1)? / int(2);
    let c_check = val(2, 1)? / int(6);
    let x = cubic
        .get(2, &[1], [2, 1, 0])
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("cubic table lacks (2|1|2,1,0)".into()))?;
    Ok(CheckReport::rationals(
        "dilaton-zero-point",
        "g=2",
        vec![
            ("monomial t1^2 t2 (two nodes)".into(), c.clone(), c_check),
            ("(2|1|2,1,0)".into(), x, int(2) * c),
        ],
    ))
}

fn elsv_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let off = cfg.order_offset;
    let g_max = cfg.g_max;
    for mu in partitions_up_to(cfg.d_max) {
        let order = series_valuation(&mu) + off;
        let m = mu.clone();
        jobs.push(job("elsv-character-sum", format!("mu={mu} order={order}"), move || {
            let lhs = elsv_rhs(&m, order)?;
            Ok(CheckReport::series("", "", &lhs, &elsv_oracle(&m, order)?, None, Some(order)))
        }));
        let m = mu.clone();
        jobs.push(job("elsv-from-table", format!("mu={mu} g<={g_max}"), move || {
            let table = shared_linear_table(&linear_blocks(g_max, m.length()))?;
            let lhs = disconnected_from_table(&table, &m, g_max)?;
            let order = lhs.order().expect("table series are truncated");
            Ok(CheckReport::series("", "", &lhs, &elsv_rhs(&m, order)?, None, None))
        }));
    }
    let sinh_over_2 = || {
        let terms = (0..8i64).map(|k| (2 * k + 1, GaussRat::real(factorial_rat(2 * k as usize + 1).recip() / int(2))));
        Series::from_terms(terms, None).shift(-3)
    };
    let cosh = || {
        let terms = (0..8i64).map(|k| (2 * k, GaussRat::real(factorial_rat(2 * k as usize).recip())));
        Series::from_terms(terms, None).shift(-4)
    };
    let closed: [(&[usize], Series); 3] = [
        (&[1], Series::monomial(GaussRat::one(), -2)),
        (&[2], sinh_over_2()),
        (&[1, 1], cosh()),
    ];
    for (parts, expected) in closed {
        let mu = Partition::new(parts.to_vec()).expect("valid partition");
        jobs.push(job("elsv-closed", format!("mu={mu} through u^6"), move || {
            let s = elsv_rhs(&mu, 7)?;
            Ok(CheckReport::series("", "", &s, &expected, None, Some(7)))
        }));
    }
    jobs.push(job("lambda-g", format!("g<={g_max} n<=5"), move || {
        let t = shared_linear_table(&linear_blocks(g_max, 5))?;
        Ok(lam_g_report(&t))
    }));
    jobs.push(job("table-oracles", format!("g<={g_max} n<=5"), move || {
        let t = shared_linear_table(&linear_blocks(g_max, 5))?;
        let mut reports = vec![genus_zero_report(&t)];
        reports.extend(linear_recursion_reports(&t));
        Ok(merge("table-oracles", reports))
    }));
    jobs
}

/// Folds several reports into one; the first failure wins.
fn merge(check: &str, reports: Vec<CheckReport>) -> CheckReport {
    let compared = reports.iter().map(|r| r.compared).sum();
    if let Some(bad) = reports.iter().find(|r| !r.passed()) {
        return CheckReport { compared, ..bad.clone() };
    }
    let problem = reports.iter().map(|r| format!("{} {}", r.check, r.problem)).collect::<Vec<_>>().join("; ");
    CheckReport {
        check: check.into(),
        problem,
        compared_orders: None,
        compared,
        status: Status::Pass,
        first_mismatch: None,
        error: None,
    }
}

// ---------------------------------------------------------------- GMV

fn gmv_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let off = cfg.order_offset;
    let mut avals = cfg.a_values.clone();
    if !avals.contains(&rat(1, 2)) {
        avals.push(rat(1, 2));
    }
    for a in &avals {
        for mu in partitions_up_to(cfg.d_max + 1) {
            let order = series_valuation(&mu) + off;
            let (m, a1) = (mu.clone(), a.clone());
            jobs.push(job("gmv-symmetry", format!("mu={mu} a={a} order={order}"), move || {
                let mirror = -&a1 - Rational::one();
                let lhs = gmv_rhs(&m, &a1, order)?;
                let rhs = gmv_rhs(&m, &mirror, order)?;
                Ok(CheckReport::series("", "", &lhs, &rhs, None, Some(order)))
            }));
        }
        for m in 1..=cfg.d_max + 1 {
            let order = -2 + off;
            let a1 = a.clone();
            jobs.push(job("one-point", format!("m={m} a={a} order={order}"), move || {
                let lhs = one_point_cubic(m, &a1, order)?;
                let rhs = gmv_rhs(&Partition::new(vec![m])?, &a1, order)?;
                Ok(CheckReport::series("", "", &lhs, &rhs, None, Some(order)))
            }));
        }
    }
    for mu in partitions_up_to(cfg.d_max) {
        let order = series_valuation(&mu) + off.min(6);
        let m = mu.clone();
        jobs.push(job("large-a-limit", format!("mu={mu} order={order}"), move || {
            let lim = gmv_large_a_limit(&m, order)?;
            let expected = elsv_rhs(&m, order)?.scale_rat(&elsv_prefactor(&m));
            Ok(CheckReport::series("", "", &lim, &expected, None, Some(order)))
        }));
    }
    let g_max = cfg.g_max;
    jobs.push(job("cubic-table", format!("g<={g_max} n<=3"), move || {
        let cubic = cubic_table(g_max, 3)?;
        let linear = shared_linear_table(&linear_blocks(g_max, 3))?;
        let mut reports = vec![cubic_slice_report(&cubic, &linear)];
        reports.extend(cubic_recursion_reports(&cubic));
        if g_max >= 2 {
            reports.push(dilaton_zero_point_report(&cubic)?);
        }
        Ok(merge("cubic-table", reports))
    }));
    jobs
}

/// Cubic table on the minimal node set `a = 1..(g+1)²`.
pub fn cubic_table(g_max: usize, n_max: usize) -> Result<CubicHodgeTable> {
    let nodes: Vec<Rational> = (1..=((g_max + 1) * (g_max + 1)) as i64).map(int).collect();
    extract_cubic_table(g_max, n_max, &nodes)
}

// ---------------------------------------------------------------- bilinear

/// ψ-exponent vectors with one or two markings and `|ν| <= d - 1`.
pub fn bilinear_markings(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for s in 0..d {
        out.push(vec![s]);
        for x in (0..=s).rev() {
            if x >= s - x {
                out.push(vec![x, s - x]);
            }
        }
    }
    out
}

fn bilinear_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let order = -2 + cfg.order_offset;
    let opts = ZOptions { flip_edge_sign: cfg.flip_edge_sign };
    for d in 1..=cfg.d_max {
        for nu in bilinear_markings(d) {
            for a in &cfg.a_values {
                let nus: Vec<String> = nu.iter().map(|x| x.to_string()).collect();
                let label = format!("d={d} nu=({}) a={a} order={order}", nus.join(","));
                let (n1, a1) = (nu.clone(), a.clone());
                jobs.push(job("bilinear", label.clone(), move || {
                    verify_bilinear_with(&MarkedProblem::new(n1.clone(), d, a1.clone(), order)?, opts)
                }));
                if nu.iter().sum::<usize>() + 1 == d && *a == cfg.a_values[0] {
                    for g in 1..=cfg.g_max {
                        let (n1, a1) = (nu.clone(), a.clone());
                        jobs.push(job("igsum", format!("g={g} {label}"), move || {
                            igsum_check(g, &MarkedProblem::new(n1.clone(), d, a1.clone(), order)?)
                        }));
                    }
                }
            }
        }
    }
    for args in [vec![1], vec![2], vec![1, 1]] {
        for g in 1..=cfg.g_max {
            let z = args.clone();
            jobs.push(job("cubic-polynomiality", format!("z={args:?} g={g}"), move || {
                cubic_polynomiality_check(&z, g)
            }));
        }
    }
    jobs
}

// ---------------------------------------------------------------- fock

/// A vector with small random integer coefficients on every basis vector
/// up to `energy`.
pub fn random_vector(rng: &mut StdRng, energy: usize, cutoff: usize) -> FockVector {
    let mut v = FockVector::zero(cutoff);
    for d in 0..=energy {
        for l in partitions(d) {
            let c: i64 = rng.random_range(-5..=5);
            if c != 0 {
                v.add_term(l, Series::constant(GaussRat::from_int(c)));
            }
        }
    }
    v
}

fn fock_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let off = cfg.order_offset;
    let n = cfg.cutoff;
    let o = off - 2;
    jobs.push(job("canpar", "|λ| <= 5".into(), || fock::verify_canpar(5)));
    let cs = [GaussRat::real(rat(3, 2)), GaussRat::new(int(1), int(1))];
    for c in cs {
        for nn in [-2i64, -1, 1, 2] {
            for m in -2i64..=2 {
                let c1 = c.clone();
                let energy = n.min(4);
                jobs.push(job("commr", format!("n={nn} m={m} c={c} energy<={energy}"), move || {
                    fock::verify_commutator(nn, m, &c1, energy, o)
                }));
            }
        }
    }
    for m in 1..=4usize {
        for a in [int(1), rat(2, 3)] {
            let energy = n.saturating_sub(m).min(3);
            jobs.push(job("conj1", format!("m={m} a={a} energy<={energy}"), move || {
                fock::verify_conj1(m, &a, energy, o)
            }));
        }
    }
    jobs.push(job("SchuG", format!("|λ| <= 4 order={o}"), move || fock::verify_schur(4, o)));
    for a in [int(1), int(2)] {
        for mu in partitions_up_to(4) {
            let order = series_valuation(&mu) + off;
            let (m, a1) = (mu.clone(), a.clone());
            jobs.push(job("GVo2", format!("mu={mu} a={a} order={order}"), move || fock::verify_gvo2(&m, &a1, order)));
        }
        let mut cases: Vec<Vec<usize>> = (1..=3).map(|z| vec![z]).collect();
        for z1 in 1..=2 {
            for z2 in 1..=2 {
                cases.push(vec![z1, z2]);
            }
        }
        for zs in cases {
            let val = -(zs.iter().sum::<usize>() as i64) - zs.len() as i64;
            let order = val + off.min(6);
            let a1 = a.clone();
            jobs.push(job("A-correlator", format!("z={zs:?} a={a} order={order}"), move || {
                fock::verify_a_correlator(&zs, &a1, order)
            }));
        }
        for m in 1..=2usize {
            let a1 = a.clone();
            let cutoff = n.min(4);
            jobs.push(job("bigconj2", format!("m={m} a={a} cutoff={cutoff}"), move || {
                fock::verify_conjugation(m, &a1, o.min(4), cutoff)
            }));
        }
    }
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let energy = n.min(4);
    for k in 0..3 {
        let v = random_vector(&mut rng, energy, energy);
        let x = random_vector(&mut rng, energy, energy);
        let w = if k % 2 == 0 { GaussRat::i() } else { GaussRat::one() };
        let seed = cfg.seed;
        jobs.push(job("adjoint", format!("seed={seed} sample={k} w={w}"), move || {
            fock::verify_adjoint(&v, &x, &w, 4)
        }));
    }
    jobs
}

// ---------------------------------------------------------------- identities

fn identity_jobs() -> Vec<Job> {
    let mut jobs = Vec::new();
    jobs.push(job("ident1", "d <= 8, t in {1/2, 1, 3, d}".into(), || {
        let mut pairs = Vec::new();
        for d in 1..=8usize {
            for t in [rat(1, 2), int(1), int(3), int(d as i64)] {
                for k in 0..=d {
                    pairs.push((format!("d={d} k={k} t={t}"), ident1_lhs(d, k, &t), ident1_rhs(d, k, &t)));
                }
            }
        }
        Ok(CheckReport::rationals("", "", pairs))
    }));
    jobs.push(job("tree-function", "x^12".into(), || {
        let top = 12usize;
        let order = top as i64 + 1;
        let t = Series::from_terms(
            (1..=top).map(|n| Ok((n as i64, GaussRat::real(tree_coefficient(n)?)))).collect::<Result<Vec<_>>>()?,
            Some(order),
        );
        // T = x e^T
        let rhs = t.exp()?.shift(1).truncate(order);
        let mut pairs = Vec::new();
        let feq = CheckReport::series("", "", &t, &rhs, Some(1), Some(order));
        pairs.push(("T = x exp(T)".to_string(), GaussRat::from_int(feq.passed() as i64), GaussRat::one()));
        for s in [rat(1, 2), int(2), int(-3)] {
            let direct = t.scale_rat(&s).exp()?;
            for n in 0..=top {
                pairs.push((
                    format!("[x^{n}] exp({s} T)"),
                    GaussRat::real(tree_exp_coefficient(&s, n)),
                    direct.coeff(n as i64)?,
                ));
            }
        }
        let (p, q) = (rat(1, 3), int(2));
        for n in 0..=8usize {
            let conv: Rational =
                (0..=n).map(|k| tree_exp_coefficient(&p, k) * tree_exp_coefficient(&q, n - k)).sum();
            pairs.push((format!("[x^{n}] exp(pT)exp(qT)"), GaussRat::real(conv), GaussRat::real(tree_exp_coefficient(&(&p + &q), n))));
        }
        Ok(CheckReport::values("", "", pairs))
    }));
    jobs.push(job("lnR-vs-product", "m <= 5, a in {1, 2}, through u^8".into(), || {
        let mut reports = Vec::new();
        for a in [int(1), int(2)] {
            for m in 1..=5usize {
                let prod = r_series_product(m, &a, 9)?;
                let log = r_series_log(&int(m as i64), &a, 9)?;
                reports.push(CheckReport::series("lnR-vs-product", format!("m={m} a={a}"), &log, &prod, Some(0), Some(9)));
            }
        }
        Ok(merge("lnR-vs-product", reports))
    }));
    jobs.push(job("bernoulli", "m <= 20".into(), || {
        let top = 20usize;
        let mut pairs = Vec::new();
        // x/(e^x - 1) from the exponential series
        let e = Series::exp_linear(&GaussRat::one(), top as i64 + 2);
        let quot = (&e - &Series::one()).shift(-1).invert()?;
        for m in 0..=top {
            pairs.push((
                format!("B_{m}"),
                GaussRat::real(bernoulli(m)),
                quot.coeff(m as i64)?.scale(&factorial_rat(m)),
            ));
        }
        // ln S(u) = Σ B_{2k} u^{2k} / (2k (2k)!)
        let order = top as i64 + 1;
        let ln_s = s_series(&GaussRat::one(), order).log()?;
        for k in 1..=top / 2 {
            let c = bernoulli(2 * k) / (int(2 * k as i64) * factorial_rat(2 * k));
            pairs.push((format!("[u^{}] ln S", 2 * k), ln_s.coeff(2 * k as i64)?, GaussRat::real(c)));
        }
        Ok(CheckReport::values("", "", pairs))
    }));
    jobs.push(job("characters", "|λ| <= 8".into(), || {
        let mut pairs = Vec::new();
        for n in 1..=8usize {
            let ps = partitions(n);
            for l in &ps {
                let hooks: Rational = l.hooks().iter().map(|&h| int(h as i64)).product();
                pairs.push((format!("dim {l}"), big(character(l, &Partition::ones(n))?), big(dim(l))));
                pairs.push((format!("hooks {l}"), hooks * big(dim(l)), big(factorial(n))));
                pairs.push((format!("f2 {l}"), int(f2(l)), f2_from_character(l)?));
            }
            if n <= 6 {
                for mu in &ps {
                    for nu in &ps {
                        let s: Rational =
                            ps.iter().map(|l| Ok(big(character(l, mu)? * character(l, nu)?))).sum::<Result<_>>()?;
                        let e = if mu == nu { big(zeta(mu)) } else { Rational::zero() };
                        pairs.push((format!("orth {mu} {nu}"), s, e));
                    }
                }
            }
        }
        Ok(CheckReport::rationals("", "", pairs))
    }));
    jobs.push(job("cy-weights", "a in {1, 2, 3, 1/2}".into(), || {
        let pairs = [int(1), int(2), int(3), rat(1, 2)].into_iter().map(|a| {
            let [t1, t2, t3] = cy_weights(&a);
            (format!("e2 at a={a}"), &t1 * &t2 + &t2 * &t3 + &t1 * &t3, Rational::zero())
        });
        Ok(CheckReport::rationals("", "", pairs))
    }));
    jobs
}

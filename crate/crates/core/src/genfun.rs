//! Generating functions for linear and special cubic Hodge integrals.
//!
//! The disconnected series are evaluated from their character-sum forms
//! ([`elsv_rhs`], [`gmv_rhs`]), turned into connected series by inclusion
//! and exclusion over set partitions of argument positions, and then
//! interpolated in the arguments to recover individual integrals.
//!
//! Conventions:
//!
//! * The n-point series are plain evaluations at `z = μ`; there is no
//!   `1/|Aut μ|` factor on the character side.
//! * Cubic series live in the scaled variable: the `u^{2g-2}` coefficient of
//!   a genus `g` connected cubic series carries an extra `(a(a+1))^{g-1}`.
//! * `QDim(λ)` is the hook product `∏ (2 sinh(u h/2))^{-1}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    bernoulli, character, dim, f2, factorial, factorial_rat, gen_binomial, multinomial,
    partitions, sign_pow, Partition,
};
use crate::error::{Error, Result};
use crate::gauss::{big, fmt_rational, int, parse_rational, rpow, GaussRat, Rational};
use crate::interp::{interpolate_simplex, interpolate_univariate, simplex_points, solve_exact};
use crate::series::{s_series, sin_kernel, varsigma_series, Series};

/// Hook-product q-dimension of a partition.
#[derive(Clone, Debug, PartialEq)]
pub struct QDim {
    pub lambda: Partition,
    pub series: Series,
}

type QDimMemo = RwLock<HashMap<(Partition, i64), Series>>;
static QDIM_MEMO: LazyLock<QDimMemo> = LazyLock::new(Default::default);

/// `∏_{□∈λ} (2 sinh(u h(□)/2))^{-1}` below `order`. The empty partition
/// gives the constant 1.
pub fn qdim_series(lambda: &Partition, order: i64) -> QDim {
    let key = (lambda.clone(), order);
    if let Some(s) = QDIM_MEMO.read().get(&key) {
        return QDim { lambda: lambda.clone(), series: s.clone() };
    }
    let n = lambda.size() as i64;
    let mut prod = Series::one();
    for h in lambda.hooks() {
        prod = &prod * &varsigma_series(&GaussRat::from_int(h as i64), order + n + 1);
    }
    let series = prod.invert().expect("hook product has nonzero leading term");
    QDIM_MEMO.write().insert(key, series.clone());
    QDim { lambda: lambda.clone(), series }
}

fn check_a(a: &Rational) -> Result<()> {
    if a.is_zero() || *a == -Rational::one() {
        return Err(Error::InvalidArgument(format!("parameter a = {a} must avoid 0 and -1")));
    }
    Ok(())
}

/// `∏ μ_i^{μ_i}/μ_i!`.
pub fn elsv_prefactor(mu: &Partition) -> Rational {
    mu.parts()
        .iter()
        .map(|&m| Rational::new(BigInt::from(m).pow(m as u32), factorial(m)))
        .product()
}

/// `∏ binom((a+1)μ_i, μ_i)`.
pub fn gmv_prefactor(mu: &Partition, a: &Rational) -> Rational {
    let a1 = a + Rational::one();
    mu.parts().iter().map(|&m| gen_binomial(&(&a1 * int(m as i64)), m)).product()
}

fn character_sum<F>(n: usize, term: F) -> Result<Series>
where
    F: Fn(&Partition) -> Result<Series> + Sync,
{
    partitions(n)
        .par_iter()
        .map(&term)
        .try_reduce(Series::exact_zero, |a, b| Ok(&a + &b))
}

type ElsvMemo = RwLock<HashMap<(Partition, i64), Series>>;
static ELSV_MEMO: LazyLock<ElsvMemo> = LazyLock::new(Default::default);

/// Disconnected linear series `H•(μ; -1; u)` below `order`:
/// `u^{-|μ|-ℓ} Σ_λ (dim λ/|λ|!) e^{u f2(λ)} χ^λ_μ / ∏(μ_i^{μ_i}/μ_i!)`.
pub fn elsv_rhs(mu: &Partition, order: i64) -> Result<Series> {
    if mu.is_empty() {
        return Err(Error::InvalidArgument("elsv_rhs needs a nonempty partition".into()));
    }
    let key = (mu.clone(), order);
    if let Some(s) = ELSV_MEMO.read().get(&key) {
        return Ok(s.clone());
    }
    let n = mu.size();
    let shift = -((n + mu.length()) as i64);
    let inner_order = order - shift;
    let nf = factorial(n);
    let sum = character_sum(n, |lambda| {
        let c = Rational::new(dim(lambda) * character(lambda, mu)?, nf.clone());
        if c.is_zero() {
            return Ok(Series::exact_zero());
        }
        let e = Series::exp_linear(&GaussRat::from_int(f2(lambda)), inner_order);
        Ok(e.scale_rat(&c))
    })?;
    let out = sum.truncate(inner_order).shift(shift).scale_rat(&elsv_prefactor(mu).recip());
    ELSV_MEMO.write().insert(key, out.clone());
    Ok(out)
}

type GmvMemo = RwLock<HashMap<(Partition, Rational, i64), Series>>;
static GMV_MEMO: LazyLock<GmvMemo> = LazyLock::new(Default::default);

/// Disconnected cubic series in the scaled variable, below `order`:
/// `(au)^{-ℓ} Σ_λ QDim(λ) e^{(a+1/2) u f2(λ)} χ^λ_μ / ∏ binom((a+1)μ_i, μ_i)`.
pub fn gmv_rhs(mu: &Partition, a: &Rational, order: i64) -> Result<Series> {
    check_a(a)?;
    if mu.is_empty() {
        return Err(Error::InvalidArgument("gmv_rhs needs a nonempty partition".into()));
    }
    let key = (mu.clone(), a.clone(), order);
    if let Some(s) = GMV_MEMO.read().get(&key) {
        return Ok(s.clone());
    }
    let n = mu.size() as i64;
    let l = mu.length() as i64;
    let inner_order = order + l;
    let slope = a + Rational::new(1.into(), 2.into());
    let sum = character_sum(mu.size(), |lambda| {
        let chi = character(lambda, mu)?;
        if chi.is_zero() {
            return Ok(Series::exact_zero());
        }
        let q = qdim_series(lambda, inner_order).series;
        let c = GaussRat::real(&slope * int(f2(lambda)));
        let e = Series::exp_linear(&c, inner_order + n);
        Ok((&q * &e).scale_rat(&big(chi)))
    })?;
    let pref = rpow(a, -l) / gmv_prefactor(mu, a);
    let out = sum.truncate(inner_order).shift(-l).scale_rat(&pref);
    GMV_MEMO.write().insert(key, out.clone());
    Ok(out)
}

/// Which disconnected series a connected computation starts from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// `Λ(-1)` insertion, from [`elsv_rhs`].
    Linear,
    /// `Λ(-1)Λ(-1/a)Λ(1/(a+1))`, from [`gmv_rhs`].
    Cubic(Rational),
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Linear => write!(f, "linear"),
            Flavor::Cubic(a) => write!(f, "cubic(a={a})"),
        }
    }
}

/// Disconnected series at a multiset of positive arguments.
pub fn disconnected_series(args: &[usize], flavor: &Flavor, order: i64) -> Result<Series> {
    let mu = Partition::from_multiset(args.to_vec())?;
    match flavor {
        Flavor::Linear => elsv_rhs(&mu, order),
        Flavor::Cubic(a) => gmv_rhs(&mu, a, order),
    }
}

/// Series indexed by nonempty subsets of argument positions (bit masks).
pub type PositionFamily = BTreeMap<u32, Series>;

fn get_mask(values: &PositionFamily, mask: u32) -> Result<&Series> {
    values.get(&mask).ok_or(Error::MissingSubset(mask))
}

/// Connected parts from disconnected ones, by Möbius inversion over set
/// partitions of positions:
/// `H°(S) = H•(S) - Σ_{min S ∈ B ⊊ S} H°(B) H•(S∖B)`.
pub fn disconnected_to_connected(values: &PositionFamily, n: usize) -> Result<PositionFamily> {
    let mut con = PositionFamily::new();
    for mask in 1u32..(1 << n) {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut s = get_mask(values, mask)?.clone();
        let mut sub = rest;
        loop {
            let block = sub | low;
            if block != mask {
                let prod = &con[&block] * get_mask(values, mask ^ block)?;
                s = &s - &prod;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        con.insert(mask, s);
    }
    Ok(con)
}

/// Inverse of [`disconnected_to_connected`]:
/// `H•(S) = Σ_{set partitions P of S} ∏_{B∈P} H°(B)`.
pub fn connected_to_disconnected(values: &PositionFamily, n: usize) -> Result<PositionFamily> {
    let mut dis = PositionFamily::new();
    for mask in 1u32..(1 << n) {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut s = get_mask(values, mask)?.clone();
        let mut sub = rest;
        loop {
            let block = sub | low;
            if block != mask {
                let prod = get_mask(values, block)? * &dis[&(mask ^ block)];
                s = &s + &prod;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        dis.insert(mask, s);
    }
    Ok(dis)
}

type ConnectedMemo = RwLock<HashMap<(Vec<usize>, Flavor, i64), Series>>;
static CONNECTED_MEMO: LazyLock<ConnectedMemo> = LazyLock::new(Default::default);

/// Connected series `H°(z_1..z_n)` at positive integer arguments, below
/// `order`. The disconnected inputs are taken `2n` deeper to absorb the
/// poles of the subtracted products.
pub fn connected_series(args: &[usize], flavor: &Flavor, order: i64) -> Result<Series> {
    if args.is_empty() || args.len() > 16 {
        return Err(Error::InvalidArgument(format!("need 1..=16 arguments, got {}", args.len())));
    }
    let mut sorted = args.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let key = (sorted.clone(), flavor.clone(), order);
    if let Some(s) = CONNECTED_MEMO.read().get(&key) {
        return Ok(s.clone());
    }
    let n = sorted.len();
    let deep = order + 2 * n as i64;
    let mut values = PositionFamily::new();
    for mask in 1u32..(1 << n) {
        let sub: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| sorted[i]).collect();
        values.insert(mask, disconnected_series(&sub, flavor, deep)?);
    }
    let full = disconnected_to_connected(&values, n)?.remove(&((1u32 << n) - 1)).unwrap();
    full.require_order(order)?;
    let out = full.truncate(order);
    out.check_even()?;
    CONNECTED_MEMO.write().insert(key, out.clone());
    Ok(out)
}

/// The two connected genus-expansion flavors used by the tables.
pub fn connected_linear(args: &[usize], order: i64) -> Result<Series> {
    connected_series(args, &Flavor::Linear, order)
}

pub fn connected_cubic(args: &[usize], a: &Rational, order: i64) -> Result<Series> {
    connected_series(args, &Flavor::Cubic(a.clone()), order)
}

/// Largest `(g, n)` blocks the linear table extractor accepts.
pub const LINEAR_G_MAX: usize = 3;
pub const LINEAR_N_MAX: usize = 5;
/// Cubic blocks beyond genus 2 are not determined by the available relations.
pub const CUBIC_G_MAX: usize = 2;
pub const CUBIC_N_MAX: usize = 4;

pub const TABLE_SCHEMA: &str = "hodge-table/1";

fn dimension(g: usize, n: usize) -> Option<usize> {
    (2 * g + n > 2).then(|| 3 * g + n - 3)
}

/// Descending-sorted copy.
fn sorted_desc(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// All descending exponent vectors of length `n` with entries summing to `total`.
fn exponent_multisets(n: usize, total: usize) -> Vec<Vec<usize>> {
    partitions(total)
        .into_iter()
        .filter(|p| p.length() <= n)
        .map(|p| {
            let mut v = p.parts().to_vec();
            v.resize(n, 0);
            v
        })
        .collect()
}

fn fmt_tuple(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_tuple(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad index list {s:?}"))))
        .collect()
}

/// `∫_{M̄_{g,n}} λ_j ∏ ψ_i^{ν_i}` is stored under `(g, ν sorted, j)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HodgeKey {
    pub g: usize,
    pub nu: Vec<usize>,
    pub j: usize,
}

impl HodgeKey {
    pub fn new(g: usize, nu: &[usize], j: usize) -> Self {
        HodgeKey { g, nu: sorted_desc(nu), j }
    }
}

impl fmt::Display for HodgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{}|{})", self.g, fmt_tuple(&self.nu), self.j)
    }
}

impl std::str::FromStr for HodgeKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let f: Vec<&str> = body.split('|').collect();
        let [g, nu, j] = f[..] else {
            return Err(Error::Parse(format!("bad table key {s:?}")));
        };
        let g = g.parse().map_err(|_| Error::Parse(format!("bad genus in {s:?}")))?;
        let j = j.parse().map_err(|_| Error::Parse(format!("bad λ index in {s:?}")))?;
        Ok(HodgeKey::new(g, &parse_tuple(nu)?, j))
    }
}

/// Serialized form shared by both tables: `"(g|nu|j)" -> "p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub schema: String,
    pub kind: String,
    pub blocks: Vec<(usize, usize)>,
    pub entries: BTreeMap<String, String>,
}

/// Linear Hodge integrals `∫ λ_j ψ^ν`, filled block by block in `(g, n)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HodgeTable {
    entries: BTreeMap<HodgeKey, Rational>,
    blocks: BTreeMap<(usize, usize), ()>,
}

impl HodgeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn has_block(&self, g: usize, n: usize) -> bool {
        self.blocks.contains_key(&(g, n))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks.keys().copied()
    }

    pub fn entries(&self) -> &BTreeMap<HodgeKey, Rational> {
        &self.entries
    }

    /// Entry lookup; `ν` in any order. `None` if the block was not computed
    /// or the key violates the dimension constraint.
    pub fn get(&self, g: usize, nu: &[usize], j: usize) -> Option<&Rational> {
        self.entries.get(&HodgeKey::new(g, nu, j))
    }

    /// Computes block `(g, n)` if it is not present yet.
    pub fn ensure_block(&mut self, g: usize, n: usize) -> Result<()> {
        if self.has_block(g, n) {
            return Ok(());
        }
        for (k, v) in linear_block(g, n)? {
            self.entries.insert(k, v);
        }
        self.blocks.insert((g, n), ());
        Ok(())
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            schema: TABLE_SCHEMA.into(),
            kind: "linear".into(),
            blocks: self.blocks().collect(),
            entries: self.entries.iter().map(|(k, v)| (k.to_string(), fmt_rational(v))).collect(),
        }
    }

    pub fn from_json(j: &TableJson) -> Result<Self> {
        if j.schema != TABLE_SCHEMA || j.kind != "linear" {
            return Err(Error::Parse(format!("unexpected table schema {}/{}", j.schema, j.kind)));
        }
        let mut t = HodgeTable::new();
        for (k, v) in &j.entries {
            t.entries.insert(k.parse()?, parse_rational(v)?);
        }
        t.blocks = j.blocks.iter().map(|&b| (b, ())).collect();
        Ok(t)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("g,nu,j,value\n");
        for (k, v) in &self.entries {
            out.push_str(&format!("{},{},{},{}\n", k.g, k.nu.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";"), k.j, fmt_rational(v)));
        }
        out
    }
}

fn check_linear_budget(g: usize, n: usize) -> Result<()> {
    if g > LINEAR_G_MAX || n > LINEAR_N_MAX {
        return Err(Error::Budget(format!(
            "linear table block (g={g}, n={n}) exceeds g <= {LINEAR_G_MAX}, n <= {LINEAR_N_MAX}"
        )));
    }
    Ok(())
}

/// Values of `[u^{2g-2}] F(z) / ∏ z_i` on the simplex nodes `z = 1 + k`,
/// `|k| <= deg`, evaluated once per distinct multiset of arguments.
fn node_values<F>(n: usize, deg: usize, f: F) -> Result<HashMap<Vec<usize>, Rational>>
where
    F: Fn(&[usize]) -> Result<Rational> + Sync,
{
    let nodes = simplex_points(n, deg);
    let mut distinct: Vec<Vec<usize>> =
        nodes.iter().map(|k| sorted_desc(&k.iter().map(|x| x + 1).collect::<Vec<_>>())).collect();
    distinct.sort();
    distinct.dedup();
    let computed: HashMap<Vec<usize>, Rational> = distinct
        .par_iter()
        .map(|z| {
            let prod: Rational = z.iter().map(|&x| int(x as i64)).product();
            Ok((z.clone(), f(z)? / prod))
        })
        .collect::<Result<_>>()?;
    Ok(nodes
        .into_iter()
        .map(|k| {
            let z = sorted_desc(&k.iter().map(|x| x + 1).collect::<Vec<_>>());
            (k, computed[&z].clone())
        })
        .collect())
}

/// Symmetric polynomial interpolation; checks that the result really is
/// symmetric.
fn symmetric_interpolation(
    n: usize,
    deg: usize,
    values: &HashMap<Vec<usize>, Rational>,
) -> Result<BTreeMap<Vec<usize>, Rational>> {
    let poly = interpolate_simplex(n, deg, values)?;
    for (e, c) in &poly {
        let s = sorted_desc(e);
        if poly.get(&s) != Some(c) {
            return Err(Error::Inconsistent(format!("interpolant is not symmetric at {e:?}")));
        }
    }
    Ok(poly)
}

fn linear_block(g: usize, n: usize) -> Result<Vec<(HodgeKey, Rational)>> {
    check_linear_budget(g, n)?;
    let t = dimension(g, n).ok_or_else(|| {
        Error::InvalidArgument(format!("(g={g}, n={n}) is not a stable pair"))
    })?;
    if n == 0 {
        return Err(Error::InvalidArgument("linear tables need n >= 1".into()));
    }
    let e = 2 * g as i64 - 2;
    let values = node_values(n, t, |z| connected_linear(z, e + 1)?.real_coeff(e))?;
    let poly = symmetric_interpolation(n, t, &values)?;
    for (nu, c) in &poly {
        let deg: usize = nu.iter().sum();
        if deg > t || t - deg > g {
            return Err(Error::Inconsistent(format!(
                "genus {g}: coefficient {c} at ψ-exponents {nu:?} lies outside 0 <= j <= g"
            )));
        }
    }
    let mut out = Vec::new();
    for j in 0..=g.min(t) {
        for nu in exponent_multisets(n, t - j) {
            let c = poly.get(&nu).cloned().unwrap_or_else(Rational::zero);
            out.push((HodgeKey { g, nu, j }, sign_pow(j as i64) * c));
        }
    }
    Ok(out)
}

/// Linear table for all stable `(g, n)` with `g <= g_max`, `1 <= n <= n_max`.
pub fn extract_linear_table(g_max: usize, n_max: usize) -> Result<HodgeTable> {
    check_linear_budget(g_max, n_max)?;
    let wanted: Vec<(usize, usize)> = (0..=g_max)
        .flat_map(|g| (1..=n_max).map(move |n| (g, n)))
        .filter(|&(g, n)| dimension(g, n).is_some())
        .collect();
    let shared = shared_linear_table(&wanted)?;
    let mut table = HodgeTable::new();
    for &(g, n) in &wanted {
        table.entries.extend(
            shared.entries.iter().filter(|(k, _)| k.g == g && k.nu.len() == n).map(|(k, v)| (k.clone(), v.clone())),
        );
        table.blocks.insert((g, n), ());
    }
    Ok(table)
}

static SHARED_LINEAR: LazyLock<RwLock<Arc<HodgeTable>>> = LazyLock::new(Default::default);

/// Process-wide linear table covering at least the requested blocks. Missing
/// blocks are computed without holding any lock.
pub fn shared_linear_table(blocks: &[(usize, usize)]) -> Result<Arc<HodgeTable>> {
    let current = SHARED_LINEAR.read().clone();
    let missing: Vec<(usize, usize)> =
        blocks.iter().copied().filter(|&(g, n)| !current.has_block(g, n)).collect();
    if missing.is_empty() {
        return Ok(current);
    }
    let fresh: Vec<Vec<(HodgeKey, Rational)>> =
        missing.par_iter().map(|&(g, n)| linear_block(g, n)).collect::<Result<_>>()?;
    let mut guard = SHARED_LINEAR.write();
    let mut next = (**guard).clone();
    for (&(g, n), block) in missing.iter().zip(fresh) {
        if !next.has_block(g, n) {
            next.entries.extend(block);
            next.blocks.insert((g, n), ());
        }
    }
    let next = Arc::new(next);
    *guard = next.clone();
    Ok(next)
}

/// Merges precomputed blocks (for example from an on-disk cache) into the
/// process-wide table. Blocks already present are kept.
pub fn seed_shared_linear_table(table: &HodgeTable) {
    let mut guard = SHARED_LINEAR.write();
    let mut next = (**guard).clone();
    for (g, n) in table.blocks() {
        if next.has_block(g, n) {
            continue;
        }
        next.entries.extend(
            table.entries.iter().filter(|(k, _)| k.g == g && k.nu.len() == n).map(|(k, v)| (k.clone(), v.clone())),
        );
        next.blocks.insert((g, n), ());
    }
    *guard = Arc::new(next);
}

/// `∫ λ_{j1}λ_{j2}λ_{j3} ∏ψ^ν`, stored under the descending-sorted triple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubicKey {
    pub g: usize,
    pub nu: Vec<usize>,
    pub js: [usize; 3],
}

impl CubicKey {
    pub fn new(g: usize, nu: &[usize], js: [usize; 3]) -> Self {
        let mut js = js;
        js.sort_unstable_by(|a, b| b.cmp(a));
        CubicKey { g, nu: sorted_desc(nu), js }
    }
}

impl fmt::Display for CubicKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{}|{})", self.g, fmt_tuple(&self.nu), fmt_tuple(&self.js))
    }
}

impl std::str::FromStr for CubicKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let f: Vec<&str> = body.split('|').collect();
        let [g, nu, js] = f[..] else {
            return Err(Error::Parse(format!("bad table key {s:?}")));
        };
        let g = g.parse().map_err(|_| Error::Parse(format!("bad genus in {s:?}")))?;
        let js = parse_tuple(js)?;
        let js: [usize; 3] =
            js.try_into().map_err(|_| Error::Parse(format!("need three λ indices in {s:?}")))?;
        Ok(CubicKey::new(g, &parse_tuple(nu)?, js))
    }
}

/// Triple-λ Hodge integrals on the locus `t = (-1, -1/a, 1/(a+1))`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CubicHodgeTable {
    entries: BTreeMap<CubicKey, Rational>,
    blocks: BTreeMap<(usize, usize), ()>,
}

impl CubicHodgeTable {
    pub fn entries(&self) -> &BTreeMap<CubicKey, Rational> {
        &self.entries
    }

    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks.keys().copied()
    }

    /// Lookup with `ν` and the λ indices in any order.
    pub fn get(&self, g: usize, nu: &[usize], js: [usize; 3]) -> Option<&Rational> {
        self.entries.get(&CubicKey::new(g, nu, js))
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            schema: TABLE_SCHEMA.into(),
            kind: "cubic".into(),
            blocks: self.blocks().collect(),
            entries: self.entries.iter().map(|(k, v)| (k.to_string(), fmt_rational(v))).collect(),
        }
    }

    pub fn from_json(j: &TableJson) -> Result<Self> {
        if j.schema != TABLE_SCHEMA || j.kind != "cubic" {
            return Err(Error::Parse(format!("unexpected table schema {}/{}", j.schema, j.kind)));
        }
        let mut t = CubicHodgeTable::default();
        for (k, v) in &j.entries {
            t.entries.insert(k.parse()?, parse_rational(v)?);
        }
        t.blocks = j.blocks.iter().map(|&b| (b, ())).collect();
        Ok(t)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("g,nu,j1,j2,j3,value\n");
        for (k, v) in &self.entries {
            let nu = k.nu.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";");
            let [a, b, c] = k.js;
            out.push_str(&format!("{},{nu},{a},{b},{c},{}\n", k.g, fmt_rational(v)));
        }
        out
    }
}

/// `t = (-1, -1/a, 1/(a+1))`.
pub fn cy_weights(a: &Rational) -> [Rational; 3] {
    [-Rational::one(), -a.recip(), (a + Rational::one()).recip()]
}

/// Descending triples with entries `<= g` and sum `total`.
fn lambda_triples(g: usize, total: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for j1 in (0..=g).rev() {
        for j2 in (0..=j1).rev() {
            if j1 + j2 > total {
                continue;
            }
            let j3 = total - j1 - j2;
            if j3 <= j2 {
                out.push([j1, j2, j3]);
            }
        }
    }
    out
}

fn distinct_permutations(m: [usize; 3]) -> Vec<[usize; 3]> {
    let [x, y, z] = m;
    let mut v = vec![[x, y, z], [x, z, y], [y, x, z], [y, z, x], [z, x, y], [z, y, x]];
    v.sort();
    v.dedup();
    v
}

/// Linear constraints `Σ_{i+j=2k} (-1)^j λ_i λ_j λ_c = 0` with `2k + c = total`,
/// as rows over [`lambda_triples`]`(g, total)`.
fn mumford_rows(g: usize, total: usize, triples: &[[usize; 3]]) -> Vec<Vec<Rational>> {
    let index: HashMap<[usize; 3], usize> =
        triples.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for k in 1..=g {
        if 2 * k > total || total - 2 * k > g {
            continue;
        }
        let c = total - 2 * k;
        let mut row = vec![Rational::zero(); triples.len()];
        for i in 0..=2 * k {
            let j = 2 * k - i;
            if i > g || j > g {
                continue;
            }
            let mut m = [i, j, c];
            m.sort_unstable_by(|a, b| b.cmp(a));
            row[index[&m]] += sign_pow(j as i64);
        }
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    }
    rows
}

fn cubic_block(g: usize, n: usize, a_nodes: &[Rational]) -> Result<Vec<(CubicKey, Rational)>> {
    let t = dimension(g, n)
        .ok_or_else(|| Error::InvalidArgument(format!("(g={g}, n={n}) is not a stable pair")))?;
    let e = 2 * g as i64 - 2;
    // One interpolated polynomial in z per a-node.
    let polys: Vec<BTreeMap<Vec<usize>, Rational>> = a_nodes
        .par_iter()
        .map(|a| {
            let unscale = rpow(&(a * (a + Rational::one())), 1 - g as i64);
            let values =
                node_values(n, t, |z| Ok(connected_cubic(z, a, e + 1)?.real_coeff(e)? * &unscale))?;
            symmetric_interpolation(n, t, &values)
        })
        .collect::<Result<_>>()?;
    let weights: Vec<[Rational; 3]> = a_nodes.iter().map(cy_weights).collect();
    let mut out = Vec::new();
    for deg in 0..=t {
        let total = t - deg;
        let triples = lambda_triples(g, total);
        for nu in exponent_multisets(n, deg) {
            let rhs: Vec<Rational> =
                polys.iter().map(|p| p.get(&nu).cloned().unwrap_or_else(Rational::zero)).collect();
            if triples.is_empty() {
                if let Some(c) = rhs.iter().find(|c| !c.is_zero()) {
                    return Err(Error::Inconsistent(format!(
                        "genus {g}: nonzero coefficient {c} at ψ-exponents {nu:?} needs λ-degree {total} > 3g"
                    )));
                }
                continue;
            }
            let mut rows: Vec<Vec<Rational>> = weights
                .iter()
                .map(|w| {
                    triples
                        .iter()
                        .map(|m| {
                            distinct_permutations(*m)
                                .iter()
                                .map(|p| {
                                    rpow(&w[0], p[0] as i64)
                                        * rpow(&w[1], p[1] as i64)
                                        * rpow(&w[2], p[2] as i64)
                                })
                                .sum()
                        })
                        .collect()
                })
                .collect();
            let mut b = rhs;
            for row in mumford_rows(g, total, &triples) {
                rows.push(row);
                b.push(Rational::zero());
            }
            let x = solve_exact(&rows, &b).map_err(|err| match err {
                Error::Underdetermined(m) => Error::Underdetermined(format!(
                    "genus {g}, ψ-exponents {nu:?}: {m}"
                )),
                Error::Inconsistent(m) => Error::Inconsistent(format!(
                    "genus {g}, ψ-exponents {nu:?}: {m}"
                )),
                other => other,
            })?;
            for (m, v) in triples.iter().zip(x) {
                out.push((CubicKey { g, nu: nu.clone(), js: *m }, v));
            }
        }
    }
    Ok(out)
}

/// Cubic table for stable `(g, n)` with `g <= g_max`, `1 <= n <= n_max`, from
/// connected cubic series at each of `a_nodes`.
pub fn extract_cubic_table(
    g_max: usize,
    n_max: usize,
    a_nodes: &[Rational],
) -> Result<CubicHodgeTable> {
    if g_max > CUBIC_G_MAX {
        return Err(Error::Underdetermined(format!(
            "triple-λ integrals above genus {CUBIC_G_MAX} are not fixed by the cubic series and Mumford's relation"
        )));
    }
    if n_max > CUBIC_N_MAX {
        return Err(Error::Budget(format!("cubic tables support n <= {CUBIC_N_MAX}")));
    }
    for a in a_nodes {
        check_a(a)?;
    }
    let need = (g_max + 1) * (g_max + 1);
    if a_nodes.len() < need {
        return Err(Error::InvalidArgument(format!(
            "need at least {need} a-nodes for genus {g_max}, got {}",
            a_nodes.len()
        )));
    }
    let mut table = CubicHodgeTable::default();
    for g in 0..=g_max {
        for n in 1..=n_max {
            if dimension(g, n).is_none() {
                continue;
            }
            table.entries.extend(cubic_block(g, n, a_nodes)?);
            table.blocks.insert((g, n), ());
        }
    }
    Ok(table)
}

/// Closed-form 0-point special cubic integral at genus `g >= 2`.
pub fn zero_point_cubic(g: usize, t: [&Rational; 3]) -> Result<Rational> {
    if g < 2 {
        return Err(Error::InvalidArgument("zero_point_cubic needs g >= 2".into()));
    }
    let gi = g as i64;
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mono: Rational = perms
        .iter()
        .map(|p| rpow(t[p[0]], gi) * rpow(t[p[1]], gi - 1) * rpow(t[p[2]], gi - 2))
        .sum();
    let prod = rpow(&(t[0] * t[1] * t[2]), gi - 1);
    let poly = mono / int(2) + prod;
    let b = bernoulli(2 * g).abs() / int(2 * gi) * bernoulli(2 * g - 2).abs()
        / int(2 * gi - 2)
        / factorial_rat(2 * g - 2);
    Ok(poly * b)
}

/// `[u^{2g-2}] 1/(2u sin(u/2))`.
pub fn sin_kernel_coeff(g: usize) -> Rational {
    let e = 2 * g as i64 - 2;
    sin_kernel(1, e + 1).and_then(|s| s.real_coeff(e)).expect("in range")
}

/// `∫ λ_g ∏ψ^γ` by the multinomial formula; zero off the dimension constraint.
pub fn lam_g_value(g: usize, gamma: &[usize]) -> Rational {
    let total = 2 * g as i64 - 3 + gamma.len() as i64;
    if gamma.iter().sum::<usize>() as i64 != total {
        return Rational::zero();
    }
    big(multinomial(total, gamma)) * sin_kernel_coeff(g)
}

/// `R(m, a) = ∏_{j=1}^{m} S((am+j-1)u)/S(ju)` for a positive integer `m`.
pub fn r_series_product(m: usize, a: &Rational, order: i64) -> Result<Series> {
    let mr = int(m as i64);
    let mut num = Series::one();
    let mut den = Series::one();
    for j in 1..=m as i64 {
        let c = a * &mr + int(j - 1);
        num = &num * &s_series(&GaussRat::real(c), order);
        den = &den * &s_series(&GaussRat::from_int(j), order);
    }
    Ok(&num * &den.invert()?)
}

/// `R(z, a)` for rational `z` through the Bernoulli double sum for `ln R`.
pub fn r_series_log(z: &Rational, a: &Rational, order: i64) -> Result<Series> {
    let az = a * z;
    let bases = [(&az + z, 1i64), (az.clone(), -1), (z + Rational::one(), -1)];
    let mut terms = Vec::new();
    let mut k = 1usize;
    while (2 * k as i64) < order {
        let p = 2 * k;
        let mut inner = Rational::zero();
        for l in 1..=p + 1 {
            let mut bracket: Rational = bases.iter().map(|(x, s)| int(*s) * rpow(x, l as i64)).sum();
            bracket += Rational::one();
            if bracket.is_zero() {
                continue;
            }
            inner += bernoulli(p + 1 - l) / (factorial_rat(l) * factorial_rat(p + 1 - l)) * bracket;
        }
        let c = bernoulli(p) / int(p as i64) * inner;
        terms.push((p as i64, GaussRat::real(c)));
        k += 1;
    }
    Series::from_terms(terms, Some(order)).exp()
}

/// `R(z, a)`: the finite product at positive integers, the Bernoulli sum
/// otherwise.
pub fn r_series(z: &Rational, a: &Rational, order: i64) -> Result<Series> {
    if z.is_integer() && z.is_positive() {
        let m: usize = z.to_integer().try_into().map_err(|_| {
            Error::InvalidArgument(format!("z = {z} too large for the product form"))
        })?;
        r_series_product(m, a, order)
    } else {
        r_series_log(z, a, order)
    }
}

/// `R(m,a) / ((a+1) u ς(a m u))`, the 1-point cubic series.
pub fn one_point_cubic(m: usize, a: &Rational, order: i64) -> Result<Series> {
    check_a(a)?;
    if m == 0 {
        return Err(Error::InvalidArgument("one_point_cubic needs m >= 1".into()));
    }
    let am = a * int(m as i64);
    let den = varsigma_series(&GaussRat::real(am), order + 3)
        .shift(1)
        .scale_rat(&(a + Rational::one()));
    let r = r_series(&int(m as i64), a, order + 2)?;
    Ok(&r * &den.invert()?)
}

/// The large-`a` limit of the cubic character sum, computed coefficientwise
/// by exact interpolation in `a`. The result should equal
/// `∏(μ_i^{μ_i}/μ_i!) · elsv_rhs(μ)`.
///
/// With `w = a u` fixed, `[w^e]` of `a^{-|μ|} ∏binom · gmv_rhs(μ, a)(w/a)` is
/// `a^{-|μ|-e-ℓ}` times a polynomial of degree `e + |μ| + ℓ` in `a`; its
/// leading coefficient is the limit. One extra node checks the degree.
pub fn gmv_large_a_limit(mu: &Partition, order: i64) -> Result<Series> {
    let n = mu.size() as i64;
    let l = mu.length() as i64;
    let lo = -n - l;
    let max_deg = (order - 1 - lo).max(0) as usize;
    let nodes: Vec<Rational> = (1..=max_deg as i64 + 2).map(int).collect();
    let samples: Vec<Series> = nodes
        .par_iter()
        .map(|a| Ok(gmv_rhs(mu, a, order)?.scale_rat(&(gmv_prefactor(mu, a) * rpow(a, l)))))
        .collect::<Result<_>>()?;
    let mut terms = Vec::new();
    for e in lo..order {
        let deg = (e - lo) as usize;
        let ys: Vec<Rational> =
            samples.iter().take(deg + 2).map(|s| s.real_coeff(e)).collect::<Result<_>>()?;
        let poly = interpolate_univariate(&nodes[..deg + 2], &ys)?;
        if !poly[deg + 1].is_zero() {
            return Err(Error::Inconsistent(format!(
                "coefficient of u^{e} has degree above {deg} in a"
            )));
        }
        terms.push((e, GaussRat::real(poly[deg].clone())));
    }
    Ok(Series::from_terms(terms, Some(order)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::rat;
    use proptest::prelude::*;

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn terms(s: &Series) -> Vec<(i64, Rational)> {
        s.terms().map(|(e, c)| (e, c.re.clone())).collect()
    }

    #[test]
    fn qdim_examples() {
        let q1 = qdim_series(&p(&[1]), 6).series;
        assert_eq!(terms(&q1), vec![(-1, int(1)), (1, rat(-1, 24)), (3, rat(7, 5760)), (5, rat(-31, 967680))]);
        let q2 = qdim_series(&p(&[2]), 3).series;
        assert_eq!(q2.valuation(), Some(-2));
        assert_eq!(q2.coeff(-2).unwrap(), GaussRat::real(rat(1, 2)));
        assert_eq!(qdim_series(&Partition::empty(), 4).series, Series::one());
        for lam in partitions(5) {
            let q = qdim_series(&lam, 0).series;
            let hooks: i64 = lam.hooks().iter().map(|&h| h as i64).product();
            assert_eq!(q.coeff(-5).unwrap(), GaussRat::real(rat(1, hooks)));
        }
    }

    #[test]
    fn elsv_hand_expansions() {
        assert_eq!(terms(&elsv_rhs(&p(&[1]), 8).unwrap()), vec![(-2, int(1))]);
        let s2 = elsv_rhs(&p(&[2]), 4).unwrap();
        assert_eq!(terms(&s2), vec![(-2, rat(1, 2)), (0, rat(1, 12)), (2, rat(1, 240))]);
        let s11 = elsv_rhs(&p(&[1, 1]), 7).unwrap();
        assert_eq!(
            terms(&s11),
            vec![(-4, int(1)), (-2, rat(1, 2)), (0, rat(1, 24)), (2, rat(1, 720)), (4, rat(1, 40320)), (6, rat(1, 3628800))]
        );
    }

    #[test]
    fn gmv_one_point_and_symmetry() {
        let a = int(1);
        let s = gmv_rhs(&p(&[1]), &a, 4).unwrap();
        assert_eq!(terms(&s), vec![(-2, rat(1, 2)), (0, rat(-1, 48)), (2, rat(7, 11520))]);
        for mu in [p(&[2]), p(&[1, 1]), p(&[2, 1])] {
            for a in [int(1), int(2)] {
                let b = -&a - int(1);
                assert_eq!(gmv_rhs(&mu, &a, 4).unwrap(), gmv_rhs(&mu, &b, 4).unwrap());
            }
        }
        assert!(gmv_rhs(&p(&[1]), &int(0), 4).is_err());
        assert!(gmv_rhs(&p(&[1]), &int(-1), 4).is_err());
    }

    #[test]
    fn connected_two_point() {
        let c = connected_linear(&[1, 1], 3).unwrap();
        assert_eq!(terms(&c), vec![(-2, rat(1, 2)), (0, rat(1, 24)), (2, rat(1, 720))]);
    }

    #[test]
    fn two_point_disconnected_example() {
        let mut fam = PositionFamily::new();
        fam.insert(1, elsv_rhs(&p(&[1]), 10).unwrap());
        fam.insert(2, elsv_rhs(&p(&[1]), 10).unwrap());
        fam.insert(3, elsv_rhs(&p(&[1, 1]), 10).unwrap());
        let con = disconnected_to_connected(&fam, 2).unwrap();
        let sum = &con[&3] + &(&con[&1] * &con[&2]);
        assert_eq!(sum, fam[&3].truncate(sum.order().unwrap()));
        fam.remove(&2);
        assert_eq!(disconnected_to_connected(&fam, 2), Err(Error::MissingSubset(2)));
    }

    #[test]
    fn lam_g_examples() {
        assert_eq!(lam_g_value(1, &[0]), rat(1, 24));
        assert_eq!(lam_g_value(2, &[2]), rat(7, 5760));
        assert_eq!(lam_g_value(2, &[1, 2]), rat(7, 1920));
        assert_eq!(lam_g_value(2, &[0, 2]), int(0));
        assert_eq!(lam_g_value(2, &[1]), int(0));
    }

    #[test]
    fn zero_point_examples() {
        let one = int(1);
        assert_eq!(zero_point_cubic(2, [&one, &one, &one]).unwrap(), rat(1, 720));
        assert!(zero_point_cubic(1, [&one, &one, &one]).is_err());
    }

    #[test]
    fn linear_table_low_genus() {
        let t = extract_linear_table(1, 3).unwrap();
        assert_eq!(t.get(0, &[0, 0, 0], 0), Some(&int(1)));
        assert_eq!(t.get(1, &[1], 0), Some(&rat(1, 24)));
        assert_eq!(t.get(1, &[0], 1), Some(&rat(1, 24)));
        assert_eq!(t.get(1, &[1, 0], 1), Some(&rat(1, 24)));
        let json = serde_json::to_string(&t.to_json()).unwrap();
        let back = HodgeTable::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, t);
        assert!(matches!(extract_linear_table(4, 1), Err(Error::Budget(_))));
    }

    #[test]
    fn r_function_routes_agree() {
        for a in [int(2), rat(1, 2)] {
            for m in 1..=3usize {
                let prod = r_series_product(m, &a, 9).unwrap();
                let log = r_series_log(&int(m as i64), &a, 9).unwrap();
                assert_eq!(prod, log);
            }
        }
        let r1 = r_series(&int(1), &int(3), 7).unwrap();
        let direct = &s_series(&GaussRat::from_int(3), 7) * &s_series(&GaussRat::one(), 7).invert().unwrap();
        assert_eq!(r1, direct);
    }

    #[test]
    fn one_point_matches_gmv() {
        for m in 1..=3usize {
            for a in [int(1), int(2), rat(1, 2)] {
                let lhs = one_point_cubic(m, &a, 6).unwrap();
                let rhs = gmv_rhs(&p(&[m]), &a, 6).unwrap();
                assert_eq!(lhs, rhs, "m={m} a={a}");
                let lead = (&a * (&a + int(1)) * int(m as i64)).recip();
                assert_eq!(lhs.coeff(-2).unwrap(), GaussRat::real(lead));
            }
        }
    }

    #[test]
    fn large_a_limit_recovers_elsv() {
        for mu in [p(&[1]), p(&[2]), p(&[1, 1])] {
            let lim = gmv_large_a_limit(&mu, 2).unwrap();
            let elsv = elsv_rhs(&mu, 2).unwrap().scale_rat(&elsv_prefactor(&mu));
            assert_eq!(lim, elsv);
        }
    }

    #[test]
    fn mumford_rows_shape() {
        // genus 1, total 2: λ1² = 0 is the only relation
        let triples = lambda_triples(1, 2);
        assert_eq!(triples, vec![[1, 1, 0]]);
        assert_eq!(mumford_rows(1, 2, &triples), vec![vec![int(-1)]]);
    }

    proptest! {
        #[test]
        fn connected_round_trip(seed in proptest::collection::vec((-5i64..6, 1i64..4), 7)) {
            let mut fam = PositionFamily::new();
            for (mask, (n, d)) in (1u32..8).zip(seed) {
                let s = Series::from_terms(
                    vec![(-2, GaussRat::real(rat(n, d))), (0, GaussRat::real(rat(d, 7)))],
                    Some(6),
                );
                fam.insert(mask, s);
            }
            let con = disconnected_to_connected(&fam, 3).unwrap();
            let back = connected_to_disconnected(&con, 3).unwrap();
            for mask in 1u32..8 {
                let o = back[&mask].order().unwrap();
                prop_assert_eq!(&back[&mask], &fam[&mask].truncate(o));
            }
        }
    }
}

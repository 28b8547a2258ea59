//! Partitions, symmetric-group characters and the small number-theoretic
//! inputs (Bernoulli numbers, tree-function coefficients) used everywhere
//! else.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{big, int, rpow, Rational};

/// An integer partition stored as weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Validates that `parts` is weakly decreasing and strictly positive.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    /// Sorts an arbitrary multiset of positive parts into canonical form.
    pub fn from_multiset(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `(1,1,…,1)` of size `n`.
    pub fn ones(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (0..first)
            .map(|j| self.parts.iter().filter(|&&p| p > j).count())
            .collect();
        Partition { parts }
    }

    /// Hook lengths of all boxes, row by row.
    pub fn hooks(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size());
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                out.push((row - j - 1) + (conj.parts[j] - i - 1) + 1);
            }
        }
        out
    }

    /// Contents `j - i` of all boxes.
    pub fn contents(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.size());
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                out.push(j as i64 - i as i64);
            }
        }
        out
    }

    /// Multiplicity of each distinct part, largest part first.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `|Aut μ| = ∏ m_k!` over part multiplicities.
    pub fn aut_order(&self) -> BigInt {
        self.multiplicities().iter().map(|&(_, m)| factorial(m)).product()
    }

    /// Half-integer particle positions `λ_i - i + 1/2` (as `2·pos`, so odd
    /// integers) for the first `m` rows, `m >= length`.
    pub(crate) fn maya_doubled(&self, m: usize) -> Vec<i64> {
        (0..m)
            .map(|i| {
                let part = self.parts.get(i).copied().unwrap_or(0) as i64;
                2 * (part - i as i64 - 1) + 1
            })
            .collect()
    }

    /// Inverse of [`Partition::maya_doubled`]: positions in any order.
    pub(crate) fn from_maya_doubled(mut positions: Vec<i64>) -> Partition {
        positions.sort_unstable_by(|a, b| b.cmp(a));
        let parts = positions
            .iter()
            .enumerate()
            .map(|(i, &p)| (p - 1) / 2 + i as i64 + 1)
            .filter(|&v| v > 0)
            .map(|v| v as usize)
            .collect();
        Partition { parts }
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"2,1"`, `"(2,1)"` or `""`/`"()"` for the empty partition. The parts
/// must already be weakly decreasing; use [`parse_multiset`] to canonicalize.
impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_parts(s)?)
    }
}

/// Parses a comma-separated list of positive integers in any order and
/// returns the canonical partition, plus whether reordering was needed.
pub fn parse_multiset(s: &str) -> Result<(Partition, bool)> {
    let parts = parse_parts(s)?;
    let sorted = parts.windows(2).all(|w| w[0] >= w[1]);
    Ok((Partition::from_multiset(parts)?, !sorted))
}

fn parse_parts(s: &str) -> Result<Vec<usize>> {
    let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad partition part {t:?} in {s:?}")))
        })
        .collect()
}

/// All partitions of `d` in reverse lexicographic order: `(d)` first,
/// `(1^d)` last.
pub fn partitions(d: usize) -> Vec<Partition> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Binomial coefficient with an integer (possibly negative) upper entry.
pub fn binomial_signed(n: i64, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc *= n - j as i64;
    }
    acc / factorial(k)
}

/// `total! / ∏ k_i!`, or zero when the parts do not sum to `total`.
pub fn multinomial(total: i64, ks: &[usize]) -> BigInt {
    if total < 0 || ks.iter().sum::<usize>() as i64 != total {
        return BigInt::zero();
    }
    let mut acc = factorial(total as usize);
    for &k in ks {
        acc /= factorial(k);
    }
    acc
}

/// Generalized binomial `binom(x, m) = ∏_{j=1}^m (x - j + 1)/j` for rational `x`.
pub fn gen_binomial(x: &Rational, m: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 1..=m {
        acc = acc * (x - int(j as i64 - 1)) / int(j as i64);
    }
    acc
}

type CharMemo = RwLock<HashMap<(Partition, Vec<usize>), BigInt>>;
static CHAR_MEMO: LazyLock<CharMemo> = LazyLock::new(Default::default);

/// Irreducible character `χ^λ_μ` by the Murnaghan–Nakayama rule.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<BigInt> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch { lambda: lambda.size(), mu: mu.size() });
    }
    Ok(mn(lambda, mu.parts()))
}

fn mn(lambda: &Partition, mu: &[usize]) -> BigInt {
    if mu.is_empty() {
        return BigInt::one();
    }
    let key = (lambda.clone(), mu.to_vec());
    if let Some(v) = CHAR_MEMO.read().get(&key) {
        return v.clone();
    }
    let r = mu[0] as i64;
    let m = lambda.length();
    // beta numbers λ_i + m - 1 - i
    let beta: Vec<i64> =
        (0..m).map(|i| lambda.parts[i] as i64 + (m - 1 - i) as i64).collect();
    let mut total = BigInt::zero();
    for &x in &beta {
        let y = x - r;
        if y < 0 || beta.contains(&y) {
            continue;
        }
        let height = beta.iter().filter(|&&z| y < z && z < x).count();
        let mut nb: Vec<i64> = beta.iter().map(|&z| if z == x { y } else { z }).collect();
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<usize> = nb
            .iter()
            .enumerate()
            .map(|(i, &b)| b - (m - 1 - i) as i64)
            .filter(|&v| v > 0)
            .map(|v| v as usize)
            .collect();
        let term = mn(&Partition { parts }, &mu[1..]);
        if height % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    CHAR_MEMO.write().insert(key, total.clone());
    total
}

/// `dim λ = |λ|! / ∏ hooks`.
pub fn dim(lambda: &Partition) -> BigInt {
    let hooks: BigInt = lambda.hooks().iter().map(|&h| BigInt::from(h)).product();
    factorial(lambda.size()) / hooks
}

/// Central character of a transposition, by the content formula.
pub fn f2(lambda: &Partition) -> i64 {
    lambda.contents().iter().sum()
}

/// `binom(|λ|,2) χ^λ_{(2,1,…,1)} / dim λ`, the defining form of `f2`.
pub fn f2_from_character(lambda: &Partition) -> Result<Rational> {
    let n = lambda.size();
    if n < 2 {
        return Ok(Rational::zero());
    }
    let mut mu = vec![2];
    mu.extend(std::iter::repeat_n(1, n - 2));
    let chi = character(lambda, &Partition { parts: mu })?;
    Ok(big(binomial(n, 2) * chi) / big(dim(lambda)))
}

/// `𝔷(μ) = |Aut μ| ∏ μ_i`, the centralizer order of cycle type μ.
pub fn zeta(mu: &Partition) -> BigInt {
    mu.aut_order() * mu.parts.iter().map(|&p| BigInt::from(p)).product::<BigInt>()
}

static BERNOULLI: LazyLock<RwLock<Vec<Rational>>> =
    LazyLock::new(|| RwLock::new(vec![Rational::one()]));

/// Bernoulli numbers with `x/(e^x-1) = Σ B_m x^m/m!`, so `B_1 = -1/2`.
pub fn bernoulli(m: usize) -> Rational {
    if let Some(b) = BERNOULLI.read().get(m) {
        return b.clone();
    }
    let mut table = BERNOULLI.write();
    while table.len() <= m {
        let n = table.len();
        // Σ_{j=0}^{n} binom(n+1, j) B_j = 0
        let s: Rational = (0..n).map(|j| big(binomial(n + 1, j)) * &table[j]).sum();
        table.push(-s / int(n as i64 + 1));
    }
    table[m].clone()
}

/// `[x^n] T(x) = n^{n-1}/n!` for the rooted-tree function.
pub fn tree_coefficient(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidArgument("tree function has no constant term".into()));
    }
    Ok(Rational::new(BigInt::from(n).pow(n as u32 - 1), factorial(n)))
}

/// `[x^n] exp(t T(x)) = t (t+n)^{n-1} / n!`.
pub fn tree_exp_coefficient(t: &Rational, n: usize) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    t * rpow(&(t + int(n as i64)), n as i64 - 1) / big(factorial(n))
}

/// Left side of the tree-function identity: a sum over partitions of `d`.
pub fn ident1_lhs(d: usize, k: usize, t: &Rational) -> Rational {
    partitions(d)
        .iter()
        .map(|mu| {
            let l = mu.length();
            let mut term = rpow(&-t.clone(), l as i64) / big(mu.aut_order()) * big(binomial(l, k));
            for &p in mu.parts() {
                term *= Rational::new(BigInt::from(p).pow(p as u32 - 1), factorial(p));
            }
            term
        })
        .sum()
}

/// Closed form `(-1)^k t^k (k-t)(d-t)^{d-k-1} / (k!(d-k)!)`.
pub fn ident1_rhs(d: usize, k: usize, t: &Rational) -> Rational {
    if k > d {
        return Rational::zero();
    }
    let sign = if k.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let denom = big(factorial(k) * factorial(d - k));
    if k == d {
        // (k - t)(d - t)^{-1} = 1
        return sign * rpow(t, k as i64) / denom;
    }
    let k_r = int(k as i64);
    let d_r = int(d as i64);
    sign * rpow(t, k as i64) * (&k_r - t) * rpow(&(&d_r - t), (d - k - 1) as i64) / denom
}

/// `n!` as a rational.
pub fn factorial_rat(n: usize) -> Rational {
    big(factorial(n))
}

/// `n^e` as a rational, `e` any integer (`n != 0` when `e < 0`).
pub fn int_pow(n: i64, e: i64) -> Rational {
    rpow(&int(n), e)
}

/// `(-1)^k`.
pub fn sign_pow(k: i64) -> Rational {
    if k.is_even() {
        Rational::one()
    } else {
        -Rational::one()
    }
}

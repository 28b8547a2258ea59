//! Bilinear localization sums `Z°_d(ν; u)` and their closed form.
//!
//! `Z°` is assembled directly from connected configurations: a labeled
//! tuple of edge degrees `(m_1, …, m_k)` summing to `d` (weighted `1/k!`),
//! a set partition of markings and edges into zero-vertices (each holding
//! at least one edge), and a set partition of edges into infinity-vertices,
//! such that the vertex/edge incidence graph is connected. Zero-vertices
//! contribute connected linear data at `u -> iau`, infinity-vertices
//! connected cubic series at `u -> iu` in the scaled variable.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    binomial, factorial, factorial_rat, gen_binomial, multinomial, partitions, sign_pow,
    Partition,
};
use crate::error::{Error, Result};
use crate::gauss::{big, int, rpow, GaussRat, Rational};
use crate::genfun::{connected_cubic, lam_g_value, shared_linear_table, sin_kernel_coeff, HodgeTable};
use crate::interp::interpolate_univariate;
use crate::report::CheckReport;
use crate::series::{sin_kernel, Series};

/// A marked localization problem: ψ-exponents `ν`, degree `d`, weight `a`
/// and series cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedProblem {
    pub nu: Vec<usize>,
    pub d: usize,
    pub a: Rational,
    pub order: i64,
}

impl MarkedProblem {
    pub fn new(nu: Vec<usize>, d: usize, a: Rational, order: i64) -> Result<Self> {
        if nu.is_empty() {
            return Err(Error::InvalidArgument("need at least one marking".into()));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        if a.is_zero() || a == -Rational::one() {
            return Err(Error::InvalidArgument(format!("a = {a} must avoid 0 and -1")));
        }
        Ok(MarkedProblem { nu, d, a, order })
    }

    pub fn nu_total(&self) -> usize {
        self.nu.iter().sum()
    }
}

impl fmt::Display for MarkedProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nu: Vec<String> = self.nu.iter().map(|x| x.to_string()).collect();
        write!(f, "d={} nu=({}) a={} order={}", self.d, nu.join(","), self.a, self.order)
    }
}

/// Knobs that alter the sum; only used to check that verification notices
/// a deliberately broken edge factor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ZOptions {
    pub flip_edge_sign: bool,
}

/// `(au)^2 (m^m/m!) binom((a+1)m, m) / m`, the weight of one labeled edge.
pub fn edge_weight(m: usize, a: &Rational, order: i64) -> Series {
    edge_monomial(m, a).truncate(order)
}

fn edge_monomial(m: usize, a: &Rational) -> Series {
    let c = a * a * Rational::new(BigInt::from(m).pow(m as u32), factorial(m))
        * gen_binomial(&((a + Rational::one()) * int(m as i64)), m)
        / int(m as i64);
    Series::monomial(GaussRat::real(c), 2)
}

/// Ordered tuples of positive integers summing to `d`.
pub fn compositions(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=d {
        for mut rest in compositions(d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Set partitions of `0..n` as block labels (restricted growth strings).
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(i + 1, n, if b == max { max + 1 } else { max }, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, 0, &mut Vec::new(), &mut out);
    out
}

fn block_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |m| m + 1)
}

/// One connected gluing configuration.
#[derive(Clone, Debug)]
pub struct GluingConfiguration {
    pub edges: Vec<usize>,
    /// Zero-vertex label of each marking, then of each edge.
    pub zero_blocks: Vec<usize>,
    /// Infinity-vertex label of each edge.
    pub inf_blocks: Vec<usize>,
}

impl GluingConfiguration {
    fn zero_count(&self) -> usize {
        block_count(&self.zero_blocks)
    }

    fn inf_count(&self) -> usize {
        block_count(&self.inf_blocks)
    }
}

fn is_connected(n_marks: usize, k: usize, zero: &[usize], inf: &[usize]) -> bool {
    let nz = block_count(zero);
    let total = nz + block_count(inf);
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in 0..k {
        let a = find(&mut parent, zero[n_marks + e]);
        let b = find(&mut parent, nz + inf[e]);
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (0..total).all(|x| find(&mut parent, x) == root)
}

/// All connected configurations for `n_marks` markings and degree `d`.
pub fn configurations(n_marks: usize, d: usize) -> Vec<GluingConfiguration> {
    let mut out = Vec::new();
    for edges in compositions(d) {
        let k = edges.len();
        let infs = set_partitions(k);
        for zero in set_partitions(n_marks + k) {
            let nz = block_count(&zero);
            let mut has_edge = vec![false; nz];
            for e in 0..k {
                has_edge[zero[n_marks + e]] = true;
            }
            if has_edge.iter().any(|h| !h) {
                continue;
            }
            for inf in &infs {
                if is_connected(n_marks, k, &zero, inf) {
                    out.push(GluingConfiguration {
                        edges: edges.clone(),
                        zero_blocks: zero.clone(),
                        inf_blocks: inf.clone(),
                    });
                }
            }
        }
    }
    out
}

/// Cutoff each vertex factor needs so that the product with `k` edge
/// weights (`u^{2k}`) and `blocks - 1` other factors of valuation `-2` is
/// exact below `order`.
fn factor_order(order: i64, k: usize, blocks: usize) -> i64 {
    order - 2 * k as i64 + 2 * (blocks as i64 - 1)
}

fn max_genus(factor_order: i64) -> usize {
    // 2g - 2 < factor_order
    if factor_order <= -2 {
        0
    } else {
        ((factor_order + 1) / 2) as usize
    }
}

/// `[∏_{i∈M} z_i^{ν_i+1}] H°_g(z_M, m_E; -1)`.
fn vertex_coefficient(table: &HodgeTable, g: usize, nu: &[usize], ms: &[usize]) -> Result<Rational> {
    let n = nu.len() + ms.len();
    if g == 0 && n <= 2 {
        return Ok(match (nu, ms) {
            ([], [m]) => Rational::new(1.into(), (*m).into()),
            ([], [m1, m2]) => Rational::new((m1 * m2).into(), (m1 + m2).into()),
            ([v], [m]) => sign_pow(*v as i64) * rpow(&int(*m as i64), -(*v as i64)),
            _ => Rational::zero(),
        });
    }
    let t = 3 * g + n - 3;
    let nu_sum: usize = nu.iter().sum();
    let mut total = Rational::zero();
    for j in 0..=g {
        if nu_sum + j > t {
            break;
        }
        let rest = t - nu_sum - j;
        for nu_e in weak_compositions(rest, ms.len()) {
            let mut full = nu.to_vec();
            full.extend(&nu_e);
            let x = table.get(g, &full, j).ok_or_else(|| {
                Error::Budget(format!("linear table block (g={g}, n={n}) not available"))
            })?;
            if x.is_zero() {
                continue;
            }
            let w: Rational =
                ms.iter().zip(&nu_e).map(|(&m, &v)| rpow(&int(m as i64), v as i64 + 1)).product();
            total += sign_pow(j as i64) * w * x;
        }
    }
    Ok(total)
}

/// Ordered `len`-tuples of nonnegative integers summing to `total`.
fn weak_compositions(total: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in weak_compositions(total - first, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Zero-vertex factor `Σ_g (-1)^{g-1} a^{2g-2} u^{2g-2} L_g` below `order`.
fn zero_vertex(table: &HodgeTable, nu: &[usize], ms: &[usize], a: &Rational, order: i64) -> Result<Series> {
    let mut terms = Vec::new();
    for g in 0..=max_genus(order) {
        let e = 2 * g as i64 - 2;
        if e >= order {
            break;
        }
        let l = vertex_coefficient(table, g, nu, ms)?;
        if !l.is_zero() {
            terms.push((e, GaussRat::real(sign_pow(g as i64 - 1) * rpow(a, e) * l)));
        }
    }
    Ok(Series::from_terms(terms, Some(order)))
}

/// Linear table blocks a problem will consult.
fn needed_blocks(p: &MarkedProblem) -> Vec<(usize, usize)> {
    let mut set = BTreeSet::new();
    for k in 1..=p.d {
        // at most k+1 vertices in a connected configuration with k edges
        let g_max = max_genus(factor_order(p.order, k, k + 1));
        for g in 0..=g_max {
            for n in 1..=p.nu.len() + k {
                if 2 * g + n > 2 {
                    set.insert((g, n));
                }
            }
        }
    }
    set.into_iter().collect()
}

/// `Z°_d(ν; u)` below `p.order`.
pub fn z_connected(p: &MarkedProblem) -> Result<Series> {
    z_connected_with(p, ZOptions::default())
}

pub fn z_connected_with(p: &MarkedProblem, opts: ZOptions) -> Result<Series> {
    let table = shared_linear_table(&needed_blocks(p))?;
    let n = p.nu.len();
    let configs = configurations(n, p.d);
    let sign = sign_pow(p.d as i64);
    let total = configs
        .par_iter()
        .map(|c| {
            let k = c.edges.len();
            let blocks = c.zero_count() + c.inf_count();
            let fo = factor_order(p.order, k, blocks);
            let mut acc = Series::constant(GaussRat::real(&sign / factorial_rat(k)));
            for &m in &c.edges {
                let mut w = edge_monomial(m, &p.a);
                if opts.flip_edge_sign {
                    w = -w;
                }
                acc = &acc * &w;
            }
            for b in 0..c.zero_count() {
                let nu: Vec<usize> = (0..n).filter(|&i| c.zero_blocks[i] == b).map(|i| p.nu[i]).collect();
                let ms: Vec<usize> =
                    (0..k).filter(|&e| c.zero_blocks[n + e] == b).map(|e| c.edges[e]).collect();
                acc = &acc * &zero_vertex(&table, &nu, &ms, &p.a, fo)?;
            }
            for b in 0..c.inf_count() {
                let ms: Vec<usize> = (0..k).filter(|&e| c.inf_blocks[e] == b).map(|e| c.edges[e]).collect();
                acc = &acc * &connected_cubic(&ms, &p.a, fo)?.conj_i();
            }
            Ok(acc)
        })
        .try_reduce(Series::exact_zero, |x, y| Ok(&x + &y))?;
    total.require_order(p.order)?;
    Ok(total.truncate(p.order))
}

/// Whether `|ν|` sits below, at, or above `d - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Vanishing,
    Closed,
    Beyond,
}

pub fn regime(p: &MarkedProblem) -> Regime {
    let s = p.nu_total();
    match s.cmp(&(p.d - 1)) {
        std::cmp::Ordering::Less => Regime::Vanishing,
        std::cmp::Ordering::Equal => Regime::Closed,
        std::cmp::Ordering::Greater => Regime::Beyond,
    }
}

/// `(-1)^{d+1} d^{n-2} / ∏ν_i! · 1/(2u sin(du/2))` when `|ν| = d-1`, the
/// zero series otherwise.
pub fn i_closed(p: &MarkedProblem) -> Result<(Series, Regime)> {
    let r = regime(p);
    if r != Regime::Closed {
        return Ok((Series::zero(p.order), r));
    }
    let n = p.nu.len() as i64;
    let mut c = sign_pow(p.d as i64 + 1) * rpow(&int(p.d as i64), n - 2);
    for &v in &p.nu {
        c /= factorial_rat(v);
    }
    Ok((sin_kernel(p.d as u64, p.order)?.scale_rat(&c), r))
}

/// Checks `Z° = -(1/a) I_d(ν)` (or `Z° = 0` below the closed regime).
pub fn verify_bilinear(p: &MarkedProblem) -> Result<CheckReport> {
    verify_bilinear_with(p, ZOptions::default())
}

pub fn verify_bilinear_with(p: &MarkedProblem, opts: ZOptions) -> Result<CheckReport> {
    let (closed, r) = i_closed(p)?;
    if r == Regime::Beyond {
        return Err(Error::InvalidArgument(format!(
            "no bilinear relation is asserted for |ν| > d-1 ({p})"
        )));
    }
    let expected = closed.scale_rat(&-p.a.recip());
    let z = z_connected_with(p, opts)?;
    if !z.is_real() {
        return Err(Error::Inconsistent(format!("Z° has an imaginary coefficient ({p})")));
    }
    Ok(CheckReport::series("bilinear", p.to_string(), &z, &expected, Some(-2), Some(p.order)))
}

/// The partition sum over `|μ| = d` of λ_g integrals with `1/(1-μ_i ψ)`
/// insertions, evaluated two ways (term by term from [`lam_g_value`] and by
/// the collapsed closed form) and compared with the closed value of
/// `I_{g,d}(ν)`.
pub fn igsum_check(g: usize, p: &MarkedProblem) -> Result<CheckReport> {
    if regime(p) != Regime::Closed {
        return Err(Error::InvalidArgument(format!("igsum needs |ν| = d-1 ({p})")));
    }
    if g == 0 {
        return Err(Error::InvalidArgument("igsum is checked for g >= 1".into()));
    }
    let n = p.nu.len();
    let d = p.d;
    let kg = sin_kernel_coeff(g);
    let mut direct = Rational::zero();
    let mut collapsed = Rational::zero();
    let mut pairs = Vec::new();
    for mu in partitions(d) {
        let l = mu.length();
        let mut w = sign_pow(l as i64 + 1) / big(mu.aut_order());
        for &m in mu.parts() {
            w *= Rational::new(BigInt::from(m).pow(m as u32 - 1), factorial(m));
        }
        let top = 2 * g + n + l - 3;
        let nu_sum = p.nu_total();
        let mut term = Rational::zero();
        if top >= nu_sum {
            for gamma in weak_compositions(top - nu_sum, l) {
                let mut full = p.nu.clone();
                full.extend(&gamma);
                let coeff: Rational =
                    mu.parts().iter().zip(&gamma).map(|(&m, &e)| rpow(&int(m as i64), e as i64)).product();
                term += coeff * lam_g_value(g, &full);
            }
        }
        let closed_form = rpow(&int(d as i64), 2 * g as i64 - 2 + n as i64 - d as i64 + l as i64)
            * big(multinomial(d as i64 - 1, &p.nu))
            * big(binomial(top, d - 1))
            * &kg;
        pairs.push((format!("mu={mu}"), term.clone(), closed_form.clone()));
        direct += &w * term;
        collapsed += w * closed_form;
    }
    let mut closed = sign_pow(d as i64 + 1) * rpow(&int(d as i64), 2 * g as i64 - 3 + n as i64) * kg;
    for &v in &p.nu {
        closed /= factorial_rat(v);
    }
    pairs.push(("sum (term by term)".into(), direct, closed.clone()));
    pairs.push(("sum (collapsed)".into(), collapsed, closed));
    Ok(CheckReport::rationals("igsum", format!("g={g} {p}"), pairs))
}

/// Checks that `a ↦ [u^{2g-2}] H°(z; cubic)/(a(a+1))^{g-1}` is a polynomial of
/// degree at most `3g` in `s = 1/(a(a+1))`: interpolate on `3g+1` integer
/// nodes and test the interpolant at one more.
pub fn cubic_polynomiality_check(args: &[usize], g: usize) -> Result<CheckReport> {
    let e = 2 * g as i64 - 2;
    let count = 3 * g + 2;
    let mut xs = Vec::with_capacity(count);
    let mut ys = Vec::with_capacity(count);
    for a in 1..=count as i64 {
        let a = int(a);
        let aa = &a * (&a + Rational::one());
        let v = connected_cubic(args, &a, e + 1)?.real_coeff(e)? * rpow(&aa, 1 - g as i64);
        xs.push(aa.recip());
        ys.push(v);
    }
    let poly = interpolate_univariate(&xs[..count - 1], &ys[..count - 1])?;
    let predicted = crate::interp::eval_univariate(&poly, &xs[count - 1]);
    Ok(CheckReport::rationals(
        "cubic-polynomiality",
        format!("z={args:?} g={g}"),
        vec![(format!("held-out a={count}"), ys[count - 1].clone(), predicted)],
    ))
}

/// `Σ_{|μ|=d} f(μ)/𝔷(μ)` against its labeled-tuple form
/// `Σ_k (1/k!) Σ_{(m_1..m_k)} ∏(1/m_j) f(sort(m))`.
pub fn labeled_edge_rewrite(d: usize, f: &HashMap<Partition, Rational>) -> Result<(Rational, Rational)> {
    let mut lhs = Rational::zero();
    for mu in partitions(d) {
        let v = f.get(&mu).ok_or_else(|| Error::InvalidArgument(format!("no value at {mu}")))?;
        lhs += v / big(crate::combinatorics::zeta(&mu));
    }
    let mut rhs = Rational::zero();
    for c in compositions(d) {
        let mu = Partition::from_multiset(c.clone())?;
        let inv: Rational = c.iter().map(|&m| Rational::new(1.into(), m.into())).product();
        rhs += inv * &f[&mu] / factorial_rat(c.len());
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::rat;
    use proptest::prelude::*;

    fn prob(nu: &[usize], d: usize, a: i64, order: i64) -> MarkedProblem {
        MarkedProblem::new(nu.to_vec(), d, int(a), order).unwrap()
    }

    #[test]
    fn edge_weights() {
        let a = int(2);
        let w1 = edge_weight(1, &a, 10);
        assert_eq!(w1, Series::monomial(GaussRat::real(int(4 * 3)), 2).truncate(10));
        let w2 = edge_weight(2, &a, 10);
        assert_eq!(w2, Series::monomial(GaussRat::real(int(4 * 3 * 5)), 2).truncate(10));
    }

    #[test]
    fn configuration_counts() {
        // d = 1, one marking: the marking and the edge share the zero vertex.
        assert_eq!(configurations(1, 1).len(), 1);
        assert_eq!(set_partitions(4).len(), 15);
        assert_eq!(compositions(4).len(), 8);
        for c in configurations(2, 3) {
            let k = c.edges.len();
            assert!(c.zero_count() + c.inf_count() <= k + 1);
        }
    }

    #[test]
    fn closed_form_examples() {
        let (s, r) = i_closed(&prob(&[0], 1, 1, 3)).unwrap();
        assert_eq!(r, Regime::Closed);
        assert_eq!(s, sin_kernel(1, 3).unwrap());
        let (s, _) = i_closed(&prob(&[1, 0], 2, 1, 3)).unwrap();
        assert_eq!(s, -sin_kernel(2, 3).unwrap());
        let (s, r) = i_closed(&prob(&[0], 2, 1, 3)).unwrap();
        assert_eq!(r, Regime::Vanishing);
        assert!(s.is_zero());
    }

    #[test]
    fn degree_one_and_two() {
        for (nu, d, a) in [(vec![0], 1, 1), (vec![0], 1, 3), (vec![0], 2, 2), (vec![1], 2, 1), (vec![1, 0], 2, 2)] {
            let r = verify_bilinear(&prob(&nu, d, a, 2)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let z = z_connected(&prob(&[1], 2, 1, 3)).unwrap();
        let expected = Series::from_terms(
            vec![(-2, GaussRat::real(rat(1, 4))), (0, GaussRat::real(rat(1, 24))), (2, GaussRat::real(rat(7, 1440)))],
            Some(3),
        );
        assert_eq!(z, expected);
    }

    #[test]
    fn flipped_edge_sign_is_caught() {
        let p = prob(&[0], 1, 1, 2);
        let r = verify_bilinear_with(&p, ZOptions { flip_edge_sign: true }).unwrap();
        assert!(!r.passed());
        assert_eq!(r.first_mismatch.unwrap().at, "u^-2");
    }

    #[test]
    fn igsum_examples() {
        for (g, nu, d) in [(1, vec![0], 1), (1, vec![1], 2), (2, vec![0, 1], 2), (2, vec![2], 3)] {
            let r = igsum_check(g, &prob(&nu, d, 1, 0)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn cubic_values_are_polynomial_in_s() {
        assert!(cubic_polynomiality_check(&[1], 1).unwrap().passed());
        assert!(cubic_polynomiality_check(&[2, 1], 1).unwrap().passed());
    }

    proptest! {
        #[test]
        fn labeled_edge_rewriting(d in 1usize..7, vals in proptest::collection::vec((-20i64..20, 1i64..9), 11)) {
            let f: HashMap<Partition, Rational> = partitions(d)
                .into_iter()
                .zip(vals.into_iter().cycle())
                .map(|(mu, (n, q))| (mu, rat(n, q)))
                .collect();
            let (l, r) = labeled_edge_rewrite(d, &f).unwrap();
            prop_assert_eq!(l, r);
        }
    }
}

//! Exact interpolation and linear solves over the rationals.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gauss::{int, rat, Rational};

/// Exponent vectors `k` with `k_i >= 0` and `Σk_i <= deg`, in lexicographic
/// order.
pub fn simplex_points(nvars: usize, deg: usize) -> Vec<Vec<usize>> {
    fn rec(nvars: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == nvars {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(nvars, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, deg, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Monomial coefficients (in `z`) of `binom(z - 1, k)`.
fn shifted_binomial_poly(k: usize) -> Vec<Rational> {
    // ∏_{i=0}^{k-1} (z - 1 - i) / k!
    let mut p = vec![Rational::one()];
    for i in 0..k {
        let c = int(-1 - i as i64);
        let mut next = vec![Rational::zero(); p.len() + 1];
        for (e, x) in p.iter().enumerate() {
            next[e + 1] += x;
            next[e] += x * &c;
        }
        p = next;
    }
    let kf: Rational = (1..=k as i64).map(int).product();
    p.into_iter().map(|x| x / &kf).collect()
}

/// Recovers a polynomial of total degree `<= deg` in `nvars` variables from
/// its values on the nodes `z = 1 + k`, `|k| <= deg`.
///
/// `values` must contain every simplex node (as produced by
/// [`simplex_points`]). Returns nonzero monomial coefficients keyed by
/// exponent vector.
pub fn interpolate_simplex(
    nvars: usize,
    deg: usize,
    values: &HashMap<Vec<usize>, Rational>,
) -> Result<BTreeMap<Vec<usize>, Rational>> {
    let points = simplex_points(nvars, deg);
    let mut diff: HashMap<Vec<usize>, Rational> = HashMap::with_capacity(points.len());
    for p in &points {
        let v = values
            .get(p)
            .ok_or_else(|| Error::InvalidArgument(format!("missing interpolation node {p:?}")))?;
        diff.insert(p.clone(), v.clone());
    }
    // Forward differences along each axis in turn; the simplex is closed
    // under lowering any coordinate, so every line is a prefix 0..=rest.
    for axis in 0..nvars {
        for p in points.iter().filter(|p| p[axis] == 0) {
            let rest = deg - p.iter().sum::<usize>();
            let mut line: Vec<Rational> = (0..=rest)
                .map(|k| {
                    let mut q = p.clone();
                    q[axis] = k;
                    diff[&q].clone()
                })
                .collect();
            for level in 1..line.len() {
                for k in (level..line.len()).rev() {
                    line[k] = &line[k] - &line[k - 1];
                }
            }
            for (k, v) in line.into_iter().enumerate() {
                let mut q = p.clone();
                q[axis] = k;
                diff.insert(q, v);
            }
        }
    }
    let basis: Vec<Vec<Rational>> = (0..=deg).map(shifted_binomial_poly).collect();
    let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for p in &points {
        let c = &diff[p];
        if c.is_zero() {
            continue;
        }
        let mut terms: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), c.clone())];
        for &k in p {
            let mut next = Vec::with_capacity(terms.len() * (k + 1));
            for (e, x) in &terms {
                for (d, b) in basis[k].iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2.push(d);
                    next.push((e2, x * b));
                }
            }
            terms = next;
        }
        for (e, x) in terms {
            *out.entry(e).or_insert_with(Rational::zero) += x;
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Monomial coefficients of the polynomial through `(xs[i], ys[i])`
/// (Newton divided differences).
pub fn interpolate_univariate(xs: &[Rational], ys: &[Rational]) -> Result<Vec<Rational>> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(Error::InvalidArgument("need matching, nonempty node lists".into()));
    }
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let den = &xs[i] - &xs[i - level];
            if den.is_zero() {
                return Err(Error::Singular("repeated interpolation node".into()));
            }
            dd[i] = (&dd[i] - &dd[i - 1]) / den;
        }
    }
    // Horner on the Newton form.
    let mut p = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        let mut next = vec![Rational::zero(); p.len() + 1];
        for (e, c) in p.iter().enumerate() {
            next[e + 1] += c;
            next[e] -= c * &xs[i];
        }
        next[0] += &dd[i];
        p = next;
    }
    Ok(p)
}

pub fn eval_univariate(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Solves `A x = b` exactly. Errors when the system is inconsistent or when
/// the solution is not unique.
pub fn solve_exact(a: &[Vec<Rational>], b: &[Rational]) -> Result<Vec<Rational>> {
    let rows = a.len();
    if rows != b.len() {
        return Err(Error::InvalidArgument("row count mismatch".into()));
    }
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot = m[row].clone();
                for (x, y) in m[r][col..=cols].iter_mut().zip(&pivot[col..=cols]) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return Err(Error::Inconsistent(format!(
            "{rows}x{cols} system has no solution (rank {row})"
        )));
    }
    if row < cols {
        return Err(Error::Underdetermined(format!("rank {row} < {cols} unknowns")));
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Ok(x)
}

/// `1, 2, …, n` as rationals.
pub fn integer_nodes(n: usize) -> Vec<Rational> {
    (1..=n as i64).map(|k| rat(k, 1)).collect()
}

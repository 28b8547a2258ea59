//! Truncated Laurent series in a single variable `u` over [`GaussRat`].
//!
//! A series carries an explicit cutoff: exponents at or above `order` are
//! unknown and never reported. `order == None` marks an exact Laurent
//! polynomial (constants, monomials). Every operation derives the tightest
//! cutoff it can justify from its inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{fmt_rational, int, parse_rational, rat, GaussRat, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    /// Exponent of `coeffs[0]`.
    start: i64,
    /// Dense coefficients; first and last entries are nonzero.
    coeffs: Vec<GaussRat>,
    order: Option<i64>,
}

fn min_order(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl Series {
    fn normalized(mut start: i64, mut coeffs: Vec<GaussRat>, order: Option<i64>) -> Series {
        if let Some(o) = order {
            let keep = (o - start).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            coeffs.drain(..lead);
            start += lead as i64;
        }
        if coeffs.is_empty() {
            start = 0;
        }
        Series { start, coeffs, order }
    }

    /// The zero series known through exponents below `order`.
    pub fn zero(order: i64) -> Series {
        Series { start: 0, coeffs: Vec::new(), order: Some(order) }
    }

    pub fn exact_zero() -> Series {
        Series { start: 0, coeffs: Vec::new(), order: None }
    }

    pub fn one() -> Series {
        Series::constant(GaussRat::one())
    }

    /// An exact constant.
    pub fn constant(c: GaussRat) -> Series {
        Series::monomial(c, 0)
    }

    /// The exact monomial `c u^e`.
    pub fn monomial(c: GaussRat, e: i64) -> Series {
        Series::normalized(e, vec![c], None)
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed. Terms at or above `order` are dropped.
    pub fn from_terms<I>(terms: I, order: Option<i64>) -> Series
    where
        I: IntoIterator<Item = (i64, GaussRat)>,
    {
        let terms: Vec<(i64, GaussRat)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Series { start: 0, coeffs: Vec::new(), order };
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![GaussRat::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += &c;
        }
        Series::normalized(lo, coeffs, order)
    }

    /// `Σ_{k≥0} c^k u^k / k!` through exponents below `order`.
    pub fn exp_linear(c: &GaussRat, order: i64) -> Series {
        if c.is_zero() {
            return Series::one();
        }
        let n = order.max(0) as usize;
        let mut coeffs = Vec::with_capacity(n);
        let mut term = GaussRat::one();
        for k in 0..n {
            coeffs.push(term.clone());
            term = (&term * c).scale(&rat(1, k as i64 + 1));
        }
        Series::normalized(0, coeffs, Some(order))
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.start)
        }
    }

    /// Cutoff: coefficients at exponents `>= order` are unknown.
    pub fn order(&self) -> Option<i64> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lower bound for the exponent of the first nonzero term, counting the
    /// unknown tail. `None` for the exact zero series.
    fn lower_bound(&self) -> Option<i64> {
        self.valuation().or(self.order)
    }

    /// Coefficient of `u^e`. Exponents at or above the cutoff are reported as
    /// an error rather than silently as zero.
    pub fn coeff(&self, e: i64) -> Result<GaussRat> {
        if let Some(o) = self.order {
            if e >= o {
                return Err(Error::Precision { needed: e + 1, have: o });
            }
        }
        Ok(self.coeff_or_zero(e))
    }

    pub(crate) fn coeff_or_zero(&self, e: i64) -> GaussRat {
        let idx = e - self.start;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            GaussRat::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Real part of the coefficient of `u^e`, requiring it to be real.
    pub fn real_coeff(&self, e: i64) -> Result<Rational> {
        let c = self.coeff(e)?;
        if !c.is_real() {
            return Err(Error::Inconsistent(format!("coefficient of u^{e} is not real: {c}")));
        }
        Ok(c.re)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussRat)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Lowers the cutoff to `order` (never raises it).
    pub fn truncate(&self, order: i64) -> Series {
        let o = min_order(self.order, Some(order));
        Series::normalized(self.start, self.coeffs.clone(), o)
    }

    /// Requires the cutoff to be at least `order`.
    pub fn require_order(&self, order: i64) -> Result<()> {
        match self.order {
            Some(o) if o < order => Err(Error::Precision { needed: order, have: o }),
            _ => Ok(()),
        }
    }

    /// Multiplication by `u^n`.
    pub fn shift(&self, n: i64) -> Series {
        Series {
            start: if self.coeffs.is_empty() { 0 } else { self.start + n },
            coeffs: self.coeffs.clone(),
            order: self.order.map(|o| o + n),
        }
    }

    pub fn scale(&self, c: &GaussRat) -> Series {
        if c.is_zero() {
            return Series { start: 0, coeffs: Vec::new(), order: self.order };
        }
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Series { start: self.start, coeffs, order: self.order }
    }

    pub fn scale_rat(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series { start: 0, coeffs: Vec::new(), order: self.order };
        }
        let coeffs = self.coeffs.iter().map(|x| x.scale(c)).collect();
        Series { start: self.start, coeffs, order: self.order }
    }

    /// Substitution `u -> i u`: the `u^k` coefficient picks up `i^k`.
    pub fn conj_i(&self) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * &GaussRat::i_pow(self.start + k as i64))
            .collect();
        Series::normalized(self.start, coeffs, self.order)
    }

    /// Substitution `u -> c u` for a nonzero scalar `c`.
    pub fn rescale(&self, c: &GaussRat) -> Result<Series> {
        if c.is_zero() {
            return Err(Error::InvalidArgument("rescale by zero".into()));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut p = c.pow(self.start)?;
        for x in &self.coeffs {
            coeffs.push(x * &p);
            p = &p * c;
        }
        Ok(Series::normalized(self.start, coeffs, self.order))
    }

    /// Multiplicative inverse. The relative precision is preserved, so a
    /// series of valuation `v` known below `o` inverts to one known below
    /// `o - 2v`.
    pub fn invert(&self) -> Result<Series> {
        let v = self.valuation().ok_or(Error::ZeroInverse)?;
        let order = match self.order {
            Some(o) => o,
            None if self.coeffs.len() == 1 => {
                return Ok(Series::monomial(self.coeffs[0].inv()?, -v));
            }
            None => {
                return Err(Error::Domain(
                    "inverting an exact multi-term series needs a cutoff; truncate first".into(),
                ))
            }
        };
        let rel = (order - v) as usize;
        let c0_inv = self.coeffs[0].inv()?;
        let mut out: Vec<GaussRat> = Vec::with_capacity(rel);
        for n in 0..rel {
            let mut s = if n == 0 { GaussRat::one() } else { GaussRat::zero() };
            for k in 1..=n.min(self.coeffs.len() - 1) {
                s -= &(&self.coeffs[k] * &out[n - k]);
            }
            out.push(&s * &c0_inv);
        }
        Ok(Series::normalized(-v, out, Some(order - 2 * v)))
    }

    /// Logarithm of a series with constant term exactly 1.
    pub fn log(&self) -> Result<Series> {
        if self.valuation() != Some(0) || !self.coeffs[0].is_one() {
            return Err(Error::Domain("log needs a series of the form 1 + O(u)".into()));
        }
        let order = self
            .order
            .ok_or_else(|| Error::Domain("log of an exact series needs a cutoff".into()))?;
        if order <= 0 {
            return Ok(Series::zero(order));
        }
        let n = order as usize;
        let s = |k: usize| self.coeffs.get(k).cloned().unwrap_or_else(GaussRat::zero);
        // n l_n = n s_n - Σ_{k=1}^{n-1} k l_k s_{n-k}
        let mut l = vec![GaussRat::zero(); n];
        for m in 1..n {
            let mut acc = s(m).scale(&int(m as i64));
            for (k, lk) in l.iter().enumerate().take(m).skip(1) {
                acc -= &(lk * &s(m - k)).scale(&int(k as i64));
            }
            l[m] = acc.scale(&rat(1, m as i64));
        }
        Ok(Series::normalized(0, l, Some(order)))
    }

    /// Exponential of a series with positive valuation.
    pub fn exp(&self) -> Result<Series> {
        if self.is_zero() && self.is_exact() {
            return Ok(Series::one());
        }
        if self.valuation().is_some_and(|v| v < 1) {
            return Err(Error::Domain("exp needs a series with positive valuation".into()));
        }
        let order = self
            .order
            .ok_or_else(|| Error::Domain("exp of an exact series needs a cutoff".into()))?;
        if order <= 0 {
            return Ok(Series::zero(order));
        }
        let n = order as usize;
        let w = |k: usize| self.coeff_or_zero(k as i64);
        // n e_n = Σ_{k=1}^n k w_k e_{n-k}
        let mut e = vec![GaussRat::zero(); n];
        e[0] = GaussRat::one();
        for m in 1..n {
            let mut acc = GaussRat::zero();
            for k in 1..=m {
                let wk = w(k);
                if !wk.is_zero() {
                    acc += &(&wk * &e[m - k]).scale(&int(k as i64));
                }
            }
            e[m] = acc.scale(&rat(1, m as i64));
        }
        Ok(Series::normalized(0, e, Some(order)))
    }

    /// `self^k` for `k >= 0` (negative powers go through [`Series::invert`]).
    pub fn pow(&self, k: i64) -> Result<Series> {
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        let mut acc = Series::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        Ok(acc)
    }

    /// True when every known coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    /// Errors on the first odd exponent with a nonzero coefficient.
    pub fn check_even(&self) -> Result<()> {
        match self.terms().find(|(e, _)| e % 2 != 0) {
            Some((e, _)) => Err(Error::Parity { exponent: e }),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            valuation: self.valuation(),
            order: self.order,
            coefficients: self
                .terms()
                .map(|(e, c)| (e, fmt_rational(&c.re), fmt_rational(&c.im)))
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Series> {
        let mut terms = Vec::with_capacity(j.coefficients.len());
        for (e, re, im) in &j.coefficients {
            terms.push((*e, GaussRat::new(parse_rational(re)?, parse_rational(im)?)));
        }
        let s = Series::from_terms(terms, j.order);
        if s.valuation() != j.valuation {
            return Err(Error::Parse(format!(
                "valuation field {:?} disagrees with coefficients ({:?})",
                j.valuation,
                s.valuation()
            )));
        }
        Ok(s)
    }
}

/// JSON wire form: `{valuation, order, coefficients: [[exp, re, im], ...]}`
/// with rationals as `"p/q"` strings. `order: null` marks an exact series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub valuation: Option<i64>,
    pub order: Option<i64>,
    pub coefficients: Vec<(i64, String, String)>,
}

impl Serialize for Series {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Series {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        Series::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        let order = min_order(self.order, o.order);
        if self.coeffs.is_empty() {
            return Series::normalized(o.start, o.coeffs.clone(), order);
        }
        if o.coeffs.is_empty() {
            return Series::normalized(self.start, self.coeffs.clone(), order);
        }
        let lo = self.start.min(o.start);
        let mut hi = (self.start + self.coeffs.len() as i64).max(o.start + o.coeffs.len() as i64);
        if let Some(ord) = order {
            hi = hi.min(ord);
        }
        if hi <= lo {
            return Series { start: 0, coeffs: Vec::new(), order };
        }
        let mut coeffs = vec![GaussRat::zero(); (hi - lo) as usize];
        for (src, base) in [(&self.coeffs, self.start), (&o.coeffs, o.start)] {
            for (i, c) in src.iter().enumerate() {
                let e = base + i as i64;
                if e < hi {
                    coeffs[(e - lo) as usize] += c;
                }
            }
        }
        Series::normalized(lo, coeffs, order)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, o: Series) -> Series {
        &self + &o
    }
}

impl<'a> Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        self + &(-o)
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, o: Series) -> Series {
        &self - &o
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

impl<'a> Mul<&'a Series> for &'a Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        // a·b known below min(v_a + o_b, o_a + v_b)
        let order = match (self.lower_bound(), o.lower_bound()) {
            (None, _) | (_, None) => return Series::exact_zero(),
            (Some(va), Some(vb)) => {
                let x = o.order.map(|ob| va + ob);
                let y = self.order.map(|oa| oa + vb);
                min_order(x, y)
            }
        };
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Series { start: 0, coeffs: Vec::new(), order };
        }
        let start = self.start + o.start;
        let mut len = self.coeffs.len() + o.coeffs.len() - 1;
        if let Some(ord) = order {
            len = len.min((ord - start).max(0) as usize);
        }
        let mut coeffs = vec![GaussRat::zero(); len];
        let all_real = self.is_real() && o.is_real();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if all_real {
                    coeffs[i + j].re += &a.re * &b.re;
                } else {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        Series::normalized(start, coeffs, order)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, o: Series) -> Series {
        &self * &o
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coef = if c.is_real() { format!("{c}") } else { format!("({c})") };
            match e {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}*u")?,
                _ => write!(f, "{coef}*u^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(o) = self.order {
            write!(f, " + O(u^{o})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `ς(c u) = e^{cu/2} - e^{-cu/2}` below `order`.
pub fn varsigma_series(c: &GaussRat, order: i64) -> Series {
    if c.is_zero() {
        return Series::exact_zero();
    }
    let half = c.scale(&rat(1, 2));
    &Series::exp_linear(&half, order) - &Series::exp_linear(&-&half, order)
}

/// `S(c u) = sinh(cu/2)/(cu/2)`, equal to 1 at `c = 0`.
pub fn s_series(c: &GaussRat, order: i64) -> Series {
    if c.is_zero() {
        return Series::one();
    }
    let inv_c = c.inv().expect("nonzero");
    varsigma_series(c, order + 1).shift(-1).scale(&inv_c)
}

/// Laurent series of `1/(2u sin(du/2))`, with `sin` built from complex
/// exponentials. The result is real with valuation `-2`.
pub fn sin_kernel(d: u64, order: i64) -> Result<Series> {
    if d == 0 {
        return Err(Error::InvalidArgument("sin kernel needs d >= 1".into()));
    }
    // 2 sin(x) = (e^{ix} - e^{-ix}) / i
    let c = GaussRat::new(Rational::zero(), rat(d as i64, 2));
    let two_sin = (&Series::exp_linear(&c, order + 3) - &Series::exp_linear(&-&c, order + 3))
        .scale(&-GaussRat::i());
    let out = two_sin.shift(1).invert()?;
    debug_assert!(out.is_real());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::int;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> GaussRat {
        GaussRat::real(rat(n, d))
    }

    fn real_terms(s: &Series) -> Vec<(i64, Rational)> {
        s.terms().map(|(e, c)| (e, c.re.clone())).collect()
    }

    #[test]
    fn exp_linear_basics() {
        assert_eq!(Series::exp_linear(&GaussRat::zero(), 5), Series::one());
        let e = Series::exp_linear(&r(1, 1), 5);
        assert_eq!(
            real_terms(&e),
            vec![(0, int(1)), (1, int(1)), (2, rat(1, 2)), (3, rat(1, 6)), (4, rat(1, 24))]
        );
        assert_eq!(e.order(), Some(5));
    }

    #[test]
    fn varsigma_expansion() {
        let s = varsigma_series(&r(1, 1), 7);
        assert_eq!(real_terms(&s), vec![(1, int(1)), (3, rat(1, 24)), (5, rat(1, 1920))]);
    }

    #[test]
    fn geometric_series_inverse() {
        let s = Series::from_terms(vec![(0, r(1, 1)), (1, r(-1, 1))], Some(6));
        let inv = s.invert().unwrap();
        assert_eq!(real_terms(&inv), (0..6).map(|k| (k, int(1))).collect::<Vec<_>>());
        assert_eq!(inv.order(), Some(6));
        assert_eq!(Series::zero(3).invert(), Err(Error::ZeroInverse));
        let exact = Series::from_terms(vec![(0, r(1, 1)), (1, r(-1, 1))], None);
        assert!(exact.invert().is_err());
    }

    #[test]
    fn log_of_s() {
        let s = s_series(&GaussRat::one(), 7);
        assert_eq!(
            real_terms(&s),
            vec![(0, int(1)), (2, rat(1, 24)), (4, rat(1, 1920)), (6, rat(1, 322560))]
        );
        let l = s.log().unwrap();
        // B_2/(2·2!) u² + B_4/(4·4!) u⁴
        assert_eq!(real_terms(&l), vec![(2, rat(1, 24)), (4, rat(-1, 2880)), (6, rat(1, 181440))]);
        assert!(Series::exp_linear(&r(1, 1), 4).scale(&r(2, 1)).log().is_err());
    }

    #[test]
    fn s_and_varsigma_relation() {
        for c in [r(0, 1), r(3, 2), r(-2, 1), GaussRat::new(int(1), int(2))] {
            let lhs = varsigma_series(&c, 9);
            let rhs = s_series(&c, 9).shift(1).scale(&c);
            let cut = lhs.truncate(9);
            assert_eq!(cut, rhs.truncate(9));
        }
        assert_eq!(s_series(&GaussRat::zero(), 5), Series::one());
    }

    #[test]
    fn sin_kernel_d1_d2() {
        let k1 = sin_kernel(1, 5).unwrap();
        assert_eq!(real_terms(&k1), vec![(-2, int(1)), (0, rat(1, 24)), (2, rat(7, 5760)), (4, rat(31, 967680))]);
        assert!(k1.is_real());
        let k2 = sin_kernel(2, 1).unwrap();
        assert_eq!(real_terms(&k2), vec![(-2, rat(1, 2)), (0, rat(1, 12))]);
        // k2 = u^{-2}/2 (1 + u²/6 + …)
        assert_eq!(k2.valuation(), Some(-2));
    }

    #[test]
    fn conj_i_twice_is_negation_of_u() {
        let s = Series::from_terms(
            vec![(-2, r(1, 3)), (1, GaussRat::new(int(2), int(5))), (3, r(-7, 2))],
            Some(6),
        );
        assert_eq!(s.conj_i().conj_i(), s.rescale(&r(-1, 1)).unwrap());
    }

    #[test]
    fn product_order_is_pessimistic() {
        let a = Series::from_terms(vec![(-2, r(1, 1))], Some(4));
        let b = Series::from_terms(vec![(-2, r(1, 1)), (0, r(1, 2))], Some(4));
        let p = &a * &b;
        assert_eq!(p.order(), Some(2));
        assert_eq!(p.coeff(-4).unwrap(), r(1, 1));
        assert!(p.coeff(2).is_err());
        let exact = Series::monomial(r(3, 1), 2);
        assert_eq!((&exact * &a).order(), Some(6));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let s = Series::from_terms(
            vec![(-2, r(1, 1)), (0, r(1, 24)), (3, GaussRat::new(rat(-7, 5760), rat(1, 3)))],
            Some(6),
        );
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"{"valuation":-2,"order":6,"coefficients":[[-2,"1/1","0/1"],[0,"1/24","0/1"],[3,"-7/5760","1/3"]]}"#
        );
        let back: Series = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        let bad = r#"{"valuation":0,"order":6,"coefficients":[[1,"1/1","0/1"]]}"#;
        assert!(serde_json::from_str::<Series>(bad).is_err());
    }

    fn arb_series() -> impl Strategy<Value = Series> {
        (
            -3i64..2,
            proptest::collection::vec((-9i64..10, 1i64..5, -3i64..4), 1..6),
            4i64..9,
        )
            .prop_map(|(start, cs, order)| {
                let terms = cs
                    .into_iter()
                    .enumerate()
                    .map(|(i, (n, d, im))| (start + i as i64, GaussRat::new(rat(n, d), int(im))));
                Series::from_terms(terms, Some(order))
            })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            let l = &(&a * &b) * &c;
            let r = &a * &(&b * &c);
            let o = l.order().unwrap().min(r.order().unwrap());
            prop_assert_eq!(l.truncate(o), r.truncate(o));
            let l = &a * &(&b + &c);
            let r = &(&a * &b) + &(&a * &c);
            let o = l.order().unwrap().min(r.order().unwrap());
            prop_assert_eq!(l.truncate(o), r.truncate(o));
            prop_assert_eq!(&(&a + &b) - &b, a.truncate(a.order().unwrap().min(b.order().unwrap())));
        }

        #[test]
        fn inverse_is_inverse(a in arb_series()) {
            if let Ok(inv) = a.invert() {
                let p = &a * &inv;
                let o = p.order().unwrap();
                prop_assert_eq!(p, Series::one().truncate(o));
            }
        }

        #[test]
        fn exp_log_round_trip(cs in proptest::collection::vec((-9i64..10, 1i64..5), 1..6), order in 3i64..9) {
            let w = Series::from_terms(
                cs.iter().enumerate().map(|(i, &(n, d))| (i as i64 + 1, r(n, d))),
                Some(order),
            );
            let e = w.exp().unwrap();
            prop_assert_eq!(e.log().unwrap(), w.clone());
            let one_plus = &Series::one() + &w;
            prop_assert_eq!(one_plus.log().unwrap().exp().unwrap(), one_plus);
        }

        #[test]
        fn conj_i_involution(a in arb_series()) {
            prop_assert_eq!(a.conj_i().conj_i(), a.rescale(&r(-1, 1)).unwrap());
        }
    }
}

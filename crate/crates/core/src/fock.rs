//! The charge-zero infinite wedge, truncated by energy.
//!
//! Basis vectors `v_λ` are keyed by partitions; `|λ|` is the energy. A
//! [`FockVector`] keeps every component with `|λ| <= cutoff` and records
//! the lowest energy at which a component may be wrong because something
//! above the cutoff was dropped and later brought back down.
//!
//! Operators act on the Maya diagram `{λ_i - i + 1/2}`. `E_r(cu)` moves one
//! particle from `k` to `k - r` with weight `e^{cu(k - r/2)}` and the
//! fermionic sign; `α_n = E_n(0)`. Everything is a Laurent series in `u`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::combinatorics::{character, f2, gen_binomial, partitions, zeta, Partition};
use crate::error::{Error, Result};
use crate::gauss::{big, int, GaussRat, Rational};
use crate::genfun::{gmv_rhs, one_point_cubic, qdim_series, r_series};
use crate::report::{CheckReport, Mismatch, Status};
use crate::series::{varsigma_series, Series};

/// A finite combination of basis vectors with series coefficients.
#[derive(Clone, PartialEq)]
pub struct FockVector {
    terms: BTreeMap<Partition, Series>,
    cutoff: usize,
    /// Components with energy `>=` this may be inexact.
    inexact_from: Option<usize>,
}

impl FockVector {
    pub fn zero(cutoff: usize) -> Self {
        FockVector { terms: BTreeMap::new(), cutoff, inexact_from: None }
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::basis(Partition::empty(), cutoff).expect("vacuum fits any cutoff")
    }

    pub fn basis(lambda: Partition, cutoff: usize) -> Result<Self> {
        if lambda.size() > cutoff {
            return Err(Error::Budget(format!("|{lambda}| exceeds the energy cutoff {cutoff}")));
        }
        let mut v = Self::zero(cutoff);
        v.terms.insert(lambda, Series::one());
        Ok(v)
    }

    /// `|μ⟩ = ∏ α_{-μ_i} v_∅`.
    pub fn power_sum(mu: &Partition, cutoff: usize) -> Result<Self> {
        let mut v = Self::vacuum(cutoff);
        for &m in mu.parts() {
            v = alpha(-(m as i64))?.apply(&v)?;
        }
        Ok(v)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Series)> {
        self.terms.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_energy(&self) -> usize {
        self.terms.keys().map(Partition::size).max().unwrap_or(0)
    }

    /// Lowest energy whose components are not guaranteed exact, if any.
    pub fn inexact_from(&self) -> Option<usize> {
        self.inexact_from
    }

    fn exact_at(&self, energy: usize) -> bool {
        self.inexact_from.is_none_or(|e| energy < e)
    }

    fn mark_inexact(&mut self, energy: usize) {
        self.inexact_from = Some(self.inexact_from.map_or(energy, |e| e.min(energy)));
    }

    /// Adds `c·v_λ`, dropping it (and recording the loss) above the cutoff.
    pub fn add_term(&mut self, lambda: Partition, c: Series) {
        if lambda.size() > self.cutoff {
            self.mark_inexact(self.cutoff + 1);
            return;
        }
        match self.terms.get_mut(&lambda) {
            Some(x) => *x = &*x + &c,
            None => {
                self.terms.insert(lambda, c);
            }
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&mut self, other: &FockVector, c: &Series) {
        for (l, x) in &other.terms {
            self.add_term(l.clone(), c * x);
        }
        if let Some(e) = other.inexact_from {
            self.mark_inexact(e);
        }
    }

    pub fn scale(&self, c: &Series) -> FockVector {
        let mut out = FockVector::zero(self.cutoff);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &Series::constant(-GaussRat::one()));
        out
    }

    /// Coefficient of `v_λ`; errors when truncation may have touched it.
    pub fn coeff(&self, lambda: &Partition) -> Result<Series> {
        if !self.exact_at(lambda.size()) {
            return Err(Error::Budget(format!(
                "component {lambda} lies above the exact range of an energy-{} truncation",
                self.cutoff
            )));
        }
        Ok(self.terms.get(lambda).cloned().unwrap_or_else(Series::exact_zero))
    }

    pub fn vacuum_coeff(&self) -> Result<Series> {
        self.coeff(&Partition::empty())
    }

    /// The bilinear pairing `(v_λ, v_μ) = δ_{λμ}`.
    ///
    /// An energy contributes only if both sides are known there, or one side
    /// is known to vanish there.
    pub fn pair(&self, other: &FockVector) -> Result<Series> {
        let top = self.cutoff.max(other.cutoff) + 1;
        for e in 0..=top {
            let known_zero = |v: &FockVector| v.exact_at(e) && !v.terms.keys().any(|l| l.size() == e);
            let ok = (self.exact_at(e) && other.exact_at(e)) || known_zero(self) || known_zero(other);
            if !ok {
                return Err(Error::Budget(format!("pairing needs energy {e}, which was truncated")));
            }
        }
        let mut acc = Series::exact_zero();
        for (l, x) in &self.terms {
            if let Some(y) = other.terms.get(l) {
                acc = &acc + &(x * y);
            }
        }
        Ok(acc)
    }
}

impl fmt::Debug for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (l, x) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{x}] v_{l}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(e) = self.inexact_from {
            write!(f, " (inexact from energy {e})")?;
        }
        Ok(())
    }
}

/// A linear operator on the truncated wedge.
pub trait WedgeOperator: Sync {
    /// Image of a single basis vector inside a space with the given cutoff.
    fn apply_basis(&self, lambda: &Partition, cutoff: usize) -> Result<FockVector>;

    /// Most negative energy change on vectors of energy at most `max_energy`.
    fn min_shift(&self, max_energy: usize) -> i64;

    fn apply(&self, v: &FockVector) -> Result<FockVector> {
        let images: Vec<(FockVector, &Series)> = v
            .terms
            .par_iter()
            .map(|(l, c)| Ok((self.apply_basis(l, v.cutoff)?, c)))
            .collect::<Result<_>>()?;
        let mut out = FockVector::zero(v.cutoff);
        for (img, c) in &images {
            out.add_scaled(img, c);
        }
        // Inexact inputs at energy e can reach e + min_shift.
        if let Some(e) = v.inexact_from {
            let reach = e as i64 + self.min_shift(v.max_energy().max(e));
            out.mark_inexact(reach.max(0) as usize);
        }
        Ok(out)
    }
}

/// `E_r(c·u)`, or `α_r` when `c = 0`.
#[derive(Clone, Debug)]
pub struct EOperator {
    r: i64,
    c: GaussRat,
    order: i64,
}

impl EOperator {
    pub fn new(r: i64, c: GaussRat, order: i64) -> Result<Self> {
        if r == 0 && c.is_zero() {
            return Err(Error::InvalidArgument("E_0(0) has a pole in its regularization".into()));
        }
        Ok(EOperator { r, c, order })
    }

    fn weight(&self, doubled_pos: i64) -> Series {
        // c·(k - r/2) with k = doubled_pos/2
        let x = self.c.scale(&Rational::new((doubled_pos - self.r).into(), 2.into()));
        Series::exp_linear(&x, self.order)
    }
}

impl WedgeOperator for EOperator {
    fn apply_basis(&self, lambda: &Partition, cutoff: usize) -> Result<FockVector> {
        let mut out = FockVector::zero(cutoff);
        if self.r == 0 {
            let mut eig = varsigma_series(&self.c, self.order + 2).invert()?;
            for (i, &p) in lambda.parts().iter().enumerate() {
                let i = i as i64 + 1;
                let shifted = self.c.scale(&Rational::new((2 * (p as i64 - i) + 1).into(), 2.into()));
                let base = self.c.scale(&Rational::new((1 - 2 * i).into(), 2.into()));
                eig = &eig + &(&Series::exp_linear(&shifted, self.order) - &Series::exp_linear(&base, self.order));
            }
            out.add_term(lambda.clone(), eig);
            return Ok(out);
        }
        let m = lambda.length() + self.r.unsigned_abs() as usize + 1;
        let occupied = lambda.maya_doubled(m);
        let floor = *occupied.last().expect("window is nonempty");
        for (idx, &k) in occupied.iter().enumerate() {
            let t = k - 2 * self.r;
            if t < floor || occupied.contains(&t) {
                continue;
            }
            let (lo, hi) = if t < k { (t, k) } else { (k, t) };
            let between = occupied.iter().filter(|&&p| lo < p && p < hi).count();
            let mut moved = occupied.clone();
            moved[idx] = t;
            let mut w = self.weight(k);
            if between % 2 == 1 {
                w = -w;
            }
            out.add_term(Partition::from_maya_doubled(moved), w);
        }
        Ok(out)
    }

    fn min_shift(&self, _max_energy: usize) -> i64 {
        -self.r.max(0)
    }
}

/// The bosonic mode `α_n = E_n(0)`.
pub fn alpha(n: i64) -> Result<EOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("α_0 is not a mode of the charge-zero sector".into()));
    }
    EOperator::new(n, GaussRat::zero(), 0)
}

/// Operators diagonal in the partition basis.
#[derive(Clone, Debug)]
pub enum Diagonal {
    /// `H v_λ = |λ| v_λ`.
    Energy,
    /// `F₂ v_λ = f2(λ) v_λ`.
    F2,
    /// `e^{c·u·F₂}`, to the given order.
    ExpF2 { c: GaussRat, order: i64 },
}

impl WedgeOperator for Diagonal {
    fn apply_basis(&self, lambda: &Partition, cutoff: usize) -> Result<FockVector> {
        let x = match self {
            Diagonal::Energy => Series::constant(GaussRat::from_int(lambda.size() as i64)),
            Diagonal::F2 => Series::constant(GaussRat::from_int(f2(lambda))),
            Diagonal::ExpF2 { c, order } => {
                Series::exp_linear(&c.scale(&int(f2(lambda))), *order)
            }
        };
        let mut out = FockVector::zero(cutoff);
        out.add_term(lambda.clone(), x);
        Ok(out)
    }

    fn min_shift(&self, _max_energy: usize) -> i64 {
        0
    }
}

/// `Γ_±(w·u) = exp(Σ_{n>0} c_n α_{±n})` with `c_n = 1/(n(1 - e^{i w n u}))`,
/// or the inverse (all `c_n` negated).
#[derive(Clone, Debug)]
pub struct Gamma {
    w: GaussRat,
    order: i64,
    plus: bool,
    inverse: bool,
}

impl Gamma {
    pub fn plus(w: GaussRat, order: i64) -> Self {
        Gamma { w, order, plus: true, inverse: false }
    }

    pub fn minus(w: GaussRat, order: i64) -> Self {
        Gamma { w, order, plus: false, inverse: false }
    }

    pub fn inverse(mut self) -> Self {
        self.inverse = !self.inverse;
        self
    }

    fn coefficient(&self, n: usize) -> Result<Series> {
        let nn = n as i64;
        let x = &(GaussRat::i() * self.w.clone()) * &GaussRat::from_int(nn);
        let den = &Series::one() - &Series::exp_linear(&x, self.order + 2);
        let sign = if self.inverse { -1 } else { 1 };
        Ok(den.invert()?.scale_rat(&Rational::new(sign.into(), nn.into())))
    }
}

impl WedgeOperator for Gamma {
    fn apply_basis(&self, lambda: &Partition, cutoff: usize) -> Result<FockVector> {
        let mut v = FockVector::basis(lambda.clone(), cutoff)?;
        // Lowering modes beyond |λ| and raising modes beyond the cutoff act
        // as zero; the exponential series stops once a term vanishes.
        let top = if self.plus { lambda.size() } else { cutoff - lambda.size() };
        for n in 1..=top {
            let c = self.coefficient(n)?;
            let mode = alpha(if self.plus { n as i64 } else { -(n as i64) })?;
            let mut acc = v.clone();
            let mut term = v;
            for k in 1.. {
                term = mode.apply(&term)?.scale(&c.scale_rat(&Rational::new(1.into(), k.into())));
                acc.add_scaled(&term, &Series::one());
                if term.is_empty() {
                    break;
                }
            }
            v = acc;
        }
        if !self.plus {
            v.mark_inexact(cutoff + 1);
        }
        Ok(v)
    }

    fn min_shift(&self, max_energy: usize) -> i64 {
        if self.plus {
            -(max_energy as i64)
        } else {
            0
        }
    }
}

/// `(e^{xu/2} - e^{(-x/2-(s-1))u}) / (1 - e^{-su})`.
fn ratio_factor(x: &Rational, s: i64, order: i64) -> Result<Series> {
    let half = x / int(2);
    let num = &Series::exp_linear(&GaussRat::real(half.clone()), order + 2)
        - &Series::exp_linear(&GaussRat::real(-half - int(s - 1)), order + 2);
    let den = &Series::one() - &Series::exp_linear(&GaussRat::from_int(-s), order + 2);
    Ok(&num * &den.invert()?)
}

/// The operator `A(z; a)`.
#[derive(Clone, Debug)]
pub struct AOperator {
    z: usize,
    a: Rational,
    order: i64,
}

impl AOperator {
    pub fn new(z: usize, a: Rational, order: i64) -> Result<Self> {
        if z == 0 {
            return Err(Error::InvalidArgument("A(z; a) needs z >= 1".into()));
        }
        if a.is_zero() || a == -Rational::one() {
            return Err(Error::InvalidArgument(format!("A(z; a) is undefined at a = {a}")));
        }
        Ok(AOperator { z, a, order })
    }

    /// `c_l(z, a)` for `l >= -z`.
    pub fn coefficient(&self, l: i64) -> Result<Series> {
        let z = self.z as i64;
        let x = &self.a * int(z);
        let mut c = Series::one();
        if l >= 0 {
            for j in 1..=l {
                c = &c * &ratio_factor(&x, z + j, self.order)?;
            }
        } else {
            for j in l + 1..=0 {
                c = &c * &ratio_factor(&x, z + j, self.order)?.invert()?;
            }
        }
        Ok(c)
    }

    fn prefactor(&self) -> Result<Series> {
        let r = r_series(&int(self.z as i64), &self.a, self.order + 1)?;
        Ok(r.shift(-1).scale_rat(&(Rational::one() / (&self.a + Rational::one()))))
    }
}

impl WedgeOperator for AOperator {
    fn apply_basis(&self, lambda: &Partition, cutoff: usize) -> Result<FockVector> {
        let s = GaussRat::real(&self.a * int(self.z as i64));
        let mut out = FockVector::zero(cutoff);
        for l in -(self.z as i64)..=lambda.size() as i64 {
            let img = EOperator::new(l, s.clone(), self.order)?
                .apply(&FockVector::basis(lambda.clone(), cutoff)?)?;
            out.add_scaled(&img, &self.coefficient(l)?);
        }
        Ok(out.scale(&self.prefactor()?))
    }

    fn min_shift(&self, max_energy: usize) -> i64 {
        -(max_energy as i64)
    }
}

/// Compares two vectors componentwise on every exponent both sides know,
/// capped at `upto`.
pub fn vector_report(
    check: &str,
    problem: &str,
    actual: &FockVector,
    expected: &FockVector,
    upto: Option<i64>,
) -> CheckReport {
    let mut keys: Vec<&Partition> = actual.terms.keys().chain(expected.terms.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut compared = 0;
    for l in keys {
        let pair = actual.coeff(l).and_then(|x| Ok((x, expected.coeff(l)?)));
        let (x, y) = match pair {
            Ok(p) => p,
            Err(e) => return CheckReport::failed(check, problem, &e),
        };
        let r = CheckReport::series(check, problem, &x, &y, None, upto);
        compared += r.compared;
        if let Some(m) = r.first_mismatch {
            return CheckReport {
                compared,
                status: Status::Fail,
                first_mismatch: Some(Mismatch { at: format!("v_{l} {}", m.at), ..m }),
                ..r
            };
        }
    }
    CheckReport {
        check: check.into(),
        problem: problem.into(),
        compared_orders: None,
        compared,
        status: Status::Pass,
        first_mismatch: None,
        error: None,
    }
}

fn merge(check: &str, problem: &str, reports: Vec<CheckReport>) -> CheckReport {
    let compared = reports.iter().map(|r| r.compared).sum();
    if let Some(bad) = reports.into_iter().find(|r| !r.passed()) {
        return CheckReport { compared, ..bad };
    }
    CheckReport {
        check: check.into(),
        problem: problem.into(),
        compared_orders: None,
        compared,
        status: Status::Pass,
        first_mismatch: None,
        error: None,
    }
}

fn basis_up_to(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(partitions).collect()
}

/// `(∏α_{-μ_i} v_∅, ∏α_{-λ_i} v_∅) = 𝔷(μ) δ_{μλ}` for all sizes up to `max_size`.
pub fn verify_canpar(max_size: usize) -> Result<CheckReport> {
    let mut pairs = Vec::new();
    for d in 0..=max_size {
        let ps = partitions(d);
        let vecs: Vec<FockVector> =
            ps.iter().map(|p| FockVector::power_sum(p, max_size)).collect::<Result<_>>()?;
        for (i, mu) in ps.iter().enumerate() {
            for (j, lambda) in ps.iter().enumerate() {
                let s = vecs[i].pair(&vecs[j])?;
                let expected = if i == j { big(zeta(mu)) } else { Rational::zero() };
                if s.terms().any(|(e, _)| e != 0) {
                    pairs.push((format!("<<{mu}|{lambda}>> u-dependence"), GaussRat::one(), GaussRat::zero()));
                }
                pairs.push((format!("<<{mu}|{lambda}>>"), s.coeff_or_zero(0), GaussRat::real(expected)));
            }
        }
    }
    Ok(CheckReport::values("canpar", format!("|λ| <= {max_size}"), pairs))
}

/// `[α_n, E_m(cu)] = ς(ncu) E_{m+n}(cu)` on every basis vector of energy at
/// most `energy`.
pub fn verify_commutator(n: i64, m: i64, c: &GaussRat, energy: usize, order: i64) -> Result<CheckReport> {
    let cutoff = energy + (n.unsigned_abs() + m.unsigned_abs()) as usize;
    let mode = alpha(n)?;
    let em = EOperator::new(m, c.clone(), order)?;
    let enm = EOperator::new(m + n, c.clone(), order)?;
    let sig = varsigma_series(&(c * &GaussRat::from_int(n)), order);
    let problem = format!("n={n} m={m} c={c}");
    let reports = basis_up_to(energy)
        .par_iter()
        .map(|l| {
            let v = FockVector::basis(l.clone(), cutoff)?;
            let lhs = mode.apply(&em.apply(&v)?)?.sub(&em.apply(&mode.apply(&v)?)?);
            let rhs = enm.apply(&v)?.scale(&sig);
            Ok(vector_report("commr", &problem, &lhs, &rhs, None))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge("commr", &problem, reports))
}

/// `e^{auF₂} α_{-m} e^{-auF₂} = E_{-m}(aum)` on every basis vector of
/// energy at most `energy`.
pub fn verify_conj1(m: usize, a: &Rational, energy: usize, order: i64) -> Result<CheckReport> {
    let cutoff = energy + m;
    let mi = m as i64;
    let ga = GaussRat::real(a.clone());
    let fwd = Diagonal::ExpF2 { c: ga.clone(), order };
    let back = Diagonal::ExpF2 { c: -ga.clone(), order };
    let mode = alpha(-mi)?;
    let e = EOperator::new(-mi, ga.scale(&int(mi)), order)?;
    let problem = format!("m={m} a={a}");
    let reports = basis_up_to(energy)
        .par_iter()
        .map(|l| {
            let v = FockVector::basis(l.clone(), cutoff)?;
            let lhs = fwd.apply(&mode.apply(&back.apply(&v)?)?)?;
            let rhs = e.apply(&v)?;
            Ok(vector_report("conj1", &problem, &lhs, &rhs, None))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge("conj1", &problem, reports))
}

/// `Σ_μ χ^λ_μ p_μ / 𝔷(μ)` with `p_n ↦ 1/(1 - e^{i w n u})`.
pub fn principal_specialization(lambda: &Partition, w: &GaussRat, order: i64) -> Result<Series> {
    let d = lambda.size();
    let ell = d as i64;
    let p: Vec<Series> = (1..=d as i64)
        .map(|n| {
            let x = &(GaussRat::i() * w.clone()) * &GaussRat::from_int(n);
            (&Series::one() - &Series::exp_linear(&x, order + ell + 1)).invert()
        })
        .collect::<Result<_>>()?;
    let mut acc = Series::exact_zero();
    for mu in partitions(d) {
        let chi = character(lambda, &mu)?;
        if chi.is_zero() {
            continue;
        }
        let mut term = Series::constant(GaussRat::real(big(chi) / big(zeta(&mu))));
        for &m in mu.parts() {
            term = &term * &p[m - 1];
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Vacuum matrix elements of `Γ_+(u)` against principal specializations,
/// and the q-dimension identity through `Γ_+(iu)`, for `|λ| <= max_size`.
pub fn verify_schur(max_size: usize, order: i64) -> Result<CheckReport> {
    let problem = format!("|λ| <= {max_size} order={order}");
    let reports = basis_up_to(max_size)
        .par_iter()
        .map(|l| {
            let inner = order + 2 * l.size() as i64 + 2;
            let v = FockVector::basis(l.clone(), max_size)?;
            let mut out = Vec::new();
            for w in [GaussRat::one(), GaussRat::i()] {
                let lhs = Gamma::plus(w.clone(), inner).apply(&v)?.vacuum_coeff()?;
                let rhs = principal_specialization(l, &w, inner)?;
                out.push(CheckReport::series("SchuG", format!("λ={l} w={w}"), &lhs, &rhs, None, Some(order)));
                if w == GaussRat::i() {
                    let x = -(int(f2(l)) + int(l.size() as i64)) / int(2);
                    let q = &Series::exp_linear(&GaussRat::real(x), inner) * &lhs;
                    let qd = qdim_series(l, order).series;
                    out.push(CheckReport::series("qdim", format!("λ={l}"), &q, &qd, None, Some(order)));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge("SchuG", &problem, reports.into_iter().flatten().collect()))
}

/// `e^{-u|μ|/2}(au)^{-ℓ}(Γ_+(iu) e^{auF₂}|μ⟩, v_∅) = ∏binom((a+1)μ_i, μ_i)·gmv_rhs(μ, a)`.
pub fn verify_gvo2(mu: &Partition, a: &Rational, order: i64) -> Result<CheckReport> {
    let n = mu.size() as i64;
    let ell = mu.length() as i64;
    let inner = order + ell + 2 * n + 2;
    let v = FockVector::power_sum(mu, mu.size())?;
    let v = Diagonal::ExpF2 { c: GaussRat::real(a.clone()), order: inner }.apply(&v)?;
    let m = Gamma::plus(GaussRat::i(), inner).apply(&v)?.vacuum_coeff()?;
    let damp = Series::exp_linear(&GaussRat::real(int(-n) / int(2)), inner);
    let scale = Rational::one() / crate::gauss::rpow(a, ell);
    let lhs = (&damp * &m).shift(-ell).scale_rat(&scale);
    let binoms: Rational = mu
        .parts()
        .iter()
        .map(|&m| gen_binomial(&((a + Rational::one()) * int(m as i64)), m))
        .product();
    let rhs = gmv_rhs(mu, a, order)?.scale_rat(&binoms);
    Ok(CheckReport::series("GVo2", format!("mu={mu} a={a}"), &lhs, &rhs, None, Some(order)))
}

/// `Γ_+(iu) E_{-m}(aum) Γ_+(iu)^{-1} = Σ_k (∏_{j<=k} ratio_j) E_{-m+k}(aum)`
/// on every basis vector of energy at most `cutoff - m`.
pub fn verify_conjugation(m: usize, a: &Rational, order: i64, cutoff: usize) -> Result<CheckReport> {
    if m == 0 || m > cutoff {
        return Err(Error::InvalidArgument(format!("need 1 <= m <= cutoff, got m={m}")));
    }
    let mi = m as i64;
    let x = a * int(mi);
    let inner = order + 2 * cutoff as i64 + 2;
    let g = Gamma::plus(GaussRat::i(), inner);
    let ginv = g.clone().inverse();
    let e = EOperator::new(-mi, GaussRat::real(x.clone()), inner)?;
    let problem = format!("m={m} a={a} cutoff={cutoff}");
    let reports = basis_up_to(cutoff - m)
        .par_iter()
        .map(|l| {
            let v = FockVector::basis(l.clone(), cutoff)?;
            let lhs = g.apply(&e.apply(&ginv.apply(&v)?)?)?;
            let mut rhs = FockVector::zero(cutoff);
            let mut coef = Series::one();
            for k in 0..=mi + l.size() as i64 {
                if k > 0 {
                    coef = &coef * &ratio_factor(&x, k, inner)?;
                }
                let ek = EOperator::new(-mi + k, GaussRat::real(x.clone()), inner)?;
                rhs.add_scaled(&ek.apply(&v)?, &coef);
            }
            Ok(vector_report("bigconj2", &problem, &lhs, &rhs, Some(order)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(merge("bigconj2", &problem, reports))
}

/// `⟨A(z_1;a)⋯A(z_k;a)⟩`, to the given order.
pub fn a_correlator(zs: &[usize], a: &Rational, order: i64) -> Result<Series> {
    let cutoff = zs.iter().sum();
    let inner = order + 2 * zs.len() as i64;
    let mut v = FockVector::vacuum(cutoff);
    for &z in zs.iter().rev() {
        v = AOperator::new(z, a.clone(), inner)?.apply(&v)?;
    }
    let c = v.vacuum_coeff()?;
    c.require_order(order)?;
    Ok(c.truncate(order))
}

/// The vacuum expectation of `A(z_1;a)⋯A(z_k;a)` against the disconnected
/// cubic character sum, and for one point also against the closed form.
pub fn verify_a_correlator(zs: &[usize], a: &Rational, order: i64) -> Result<CheckReport> {
    let lhs = a_correlator(zs, a, order)?;
    let mut sorted = zs.to_vec();
    sorted.sort_unstable_by(|x, y| y.cmp(x));
    let mu = Partition::new(sorted)?;
    let problem = format!("z={mu} a={a}");
    let rhs = gmv_rhs(&mu, a, order)?;
    let mut reports = vec![CheckReport::series("A-correlator", &problem, &lhs, &rhs, None, Some(order))];
    if let [z] = zs {
        let closed = one_point_cubic(*z, a, order)?;
        reports.push(CheckReport::series("A-one-point", &problem, &lhs, &closed, None, Some(order)));
    }
    Ok(merge("A-correlator", &problem, reports))
}

/// `(Γ_+(w) v, x) = (v, Γ_-(w) x)`.
pub fn verify_adjoint(v: &FockVector, x: &FockVector, w: &GaussRat, order: i64) -> Result<CheckReport> {
    let inner = order + 2 * v.cutoff().max(x.cutoff()) as i64 + 2;
    let lhs = Gamma::plus(w.clone(), inner).apply(v)?.pair(x)?;
    let rhs = v.pair(&Gamma::minus(w.clone(), inner).apply(x)?)?;
    Ok(CheckReport::series("adjoint", format!("w={w}"), &lhs, &rhs, None, Some(order)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::rat;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn sum(terms: &[(&[usize], i64)], cutoff: usize) -> FockVector {
        let mut v = FockVector::zero(cutoff);
        for (l, c) in terms {
            v.add_term(p(l), Series::constant(GaussRat::from_int(*c)));
        }
        v
    }

    #[test]
    fn alpha_pieri() {
        let a = alpha(-1).unwrap();
        let v1 = a.apply(&FockVector::vacuum(4)).unwrap();
        assert_eq!(v1, sum(&[(&[1], 1)], 4));
        assert_eq!(a.apply(&v1).unwrap(), sum(&[(&[2], 1), (&[1, 1], 1)], 4));
        // α_{-2} v_∅ = v_(2) - v_(1,1)
        let v2 = alpha(-2).unwrap().apply(&FockVector::vacuum(4)).unwrap();
        assert_eq!(v2, sum(&[(&[2], 1), (&[1, 1], -1)], 4));
        assert!(alpha(0).is_err());
        assert!(alpha(1).unwrap().apply(&FockVector::vacuum(4)).unwrap().is_empty());
    }

    #[test]
    fn canpar_small() {
        let r = verify_canpar(5).unwrap();
        assert!(r.passed() && r.compared > 0, "{r:?}");
        let v = FockVector::power_sum(&p(&[1, 1]), 2).unwrap();
        assert_eq!(v.pair(&v).unwrap(), Series::constant(GaussRat::from_int(2)));
        let w = FockVector::power_sum(&p(&[2]), 2).unwrap();
        assert!(v.pair(&w).unwrap().is_zero());
    }

    #[test]
    fn diagonal_operators() {
        let v = sum(&[(&[2], 1), (&[1, 1], 1)], 2);
        assert_eq!(Diagonal::F2.apply(&v).unwrap(), sum(&[(&[2], 1), (&[1, 1], -1)], 2));
        assert_eq!(Diagonal::Energy.apply(&v).unwrap(), sum(&[(&[2], 2), (&[1, 1], 2)], 2));
        assert!(Diagonal::Energy.apply(&FockVector::vacuum(2)).unwrap().terms().all(|(_, c)| c.is_zero()));
    }

    #[test]
    fn e_operator_examples() {
        let c = GaussRat::real(rat(3, 2));
        let o = 6;
        let e0 = EOperator::new(0, c.clone(), o).unwrap().apply(&FockVector::vacuum(2)).unwrap();
        let expected = varsigma_series(&c, o + 2).invert().unwrap();
        assert_eq!(e0.vacuum_coeff().unwrap(), expected);
        assert!(EOperator::new(0, GaussRat::zero(), o).is_err());

        // [α_1, E_{-1}(cu)] v_∅ = v_∅
        let v = FockVector::vacuum(3);
        let a1 = alpha(1).unwrap();
        let em = EOperator::new(-1, c.clone(), o).unwrap();
        let comm = a1.apply(&em.apply(&v).unwrap()).unwrap().sub(&em.apply(&a1.apply(&v).unwrap()).unwrap());
        let x = comm.vacuum_coeff().unwrap();
        assert!(CheckReport::series("t", "p", &x, &Series::one(), Some(0), Some(o)).passed());

        // E_{-1}(a u) v_∅ = v_(1)
        let e = EOperator::new(-1, GaussRat::from_int(2), o).unwrap().apply(&v).unwrap();
        assert!(CheckReport::series("t", "p", &e.coeff(&p(&[1])).unwrap(), &Series::one(), Some(0), Some(o)).passed());
    }

    #[test]
    fn commutators_and_conj1() {
        for c in [GaussRat::real(rat(3, 2)), GaussRat::new(rat(1, 1), rat(1, 1))] {
            for n in [-2, -1, 1, 2] {
                for m in -2..=2 {
                    let r = verify_commutator(n, m, &c, 4, 5).unwrap();
                    assert!(r.passed() && r.compared > 0, "{r:?}");
                }
            }
        }
        for m in 1..=4 {
            let r = verify_conj1(m, &rat(2, 3), 3, 5).unwrap();
            assert!(r.passed() && r.compared > 0, "{r:?}");
        }
    }

    #[test]
    fn gamma_matrix_elements() {
        let o = 5;
        let g = Gamma::plus(GaussRat::one(), o + 4);
        assert_eq!(g.apply(&FockVector::vacuum(2)).unwrap().vacuum_coeff().unwrap(), Series::one());
        let one_minus = |n: i64| {
            (&Series::one() - &Series::exp_linear(&GaussRat::new(Rational::zero(), int(n)), o + 6))
                .invert()
                .unwrap()
        };
        let v1 = g.apply(&FockVector::basis(p(&[1]), 2).unwrap()).unwrap().vacuum_coeff().unwrap();
        assert_eq!(v1.truncate(o), one_minus(1).truncate(o));
        let v2 = g.apply(&FockVector::basis(p(&[2]), 2).unwrap()).unwrap().vacuum_coeff().unwrap();
        assert_eq!(v2.truncate(o), (&one_minus(1) * &one_minus(2)).truncate(o));
        let r = verify_schur(4, 4).unwrap();
        assert!(r.passed() && r.compared > 0, "{r:?}");
    }

    #[test]
    fn gamma_minus_is_lossy_but_tracked() {
        let v = Gamma::minus(GaussRat::i(), 4).apply(&FockVector::vacuum(2)).unwrap();
        assert_eq!(v.inexact_from(), Some(3));
        assert!(v.coeff(&p(&[2])).is_ok());
        // Lowering back down from a truncated vector is not exact anywhere.
        let back = Gamma::plus(GaussRat::i(), 4).apply(&v).unwrap();
        assert!(back.vacuum_coeff().is_err());
    }

    #[test]
    fn adjointness() {
        let v = sum(&[(&[], 1), (&[1], 2), (&[2, 1], -3), (&[1, 1, 1], 1)], 3);
        let x = sum(&[(&[2], 5), (&[3], 1), (&[1], -1)], 3);
        for w in [GaussRat::one(), GaussRat::i()] {
            let r = verify_adjoint(&v, &x, &w, 4).unwrap();
            assert!(r.passed() && r.compared > 0, "{r:?}");
        }
    }

    #[test]
    fn gvo2_examples() {
        for (mu, a, o) in [(&[1][..], 1, 4), (&[2], 2, 7), (&[1, 1], 1, 4)] {
            let r = verify_gvo2(&p(mu), &int(a), o).unwrap();
            assert!(r.passed() && r.compared > 0, "{r:?}");
        }
    }

    #[test]
    fn conjugation() {
        for (m, a) in [(1, 1), (2, 1), (1, 2)] {
            let r = verify_conjugation(m, &int(a), 4, 3).unwrap();
            assert!(r.passed() && r.compared > 0, "{r:?}");
        }
    }

    #[test]
    fn a_operator_one_and_two_points() {
        let a = int(1);
        let lhs = a_correlator(&[1], &a, 4).unwrap();
        // 1/(a(a+1)u·2sinh(u/2)) at a = 1
        let expected = varsigma_series(&GaussRat::one(), 7).shift(1).scale_rat(&int(2)).invert().unwrap();
        assert_eq!(lhs, expected.truncate(4));
        for zs in [&[2][..], &[3], &[1, 1], &[2, 1]] {
            let r = verify_a_correlator(zs, &int(2), 3).unwrap();
            assert!(r.passed() && r.compared > 0, "{r:?}");
        }
        assert!(AOperator::new(0, int(1), 3).is_err());
        assert!(AOperator::new(1, int(-1), 3).is_err());
    }
}

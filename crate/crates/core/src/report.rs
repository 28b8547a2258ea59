//! Serializable verification reports.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::gauss::{GaussRat, Rational};
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Where the comparison failed, e.g. `"u^2"` or a table key.
    pub at: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of one exact comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub problem: String,
    /// Half-open exponent range `[lo, hi)` compared, for series checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compared_orders: Option<[i64; 2]>,
    pub compared: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Coefficientwise comparison of two series on every exponent both know,
    /// optionally capped at `upto` (exclusive). The range starts at the lower
    /// of `from` and the two valuations, so a pair of zero series still
    /// compares `[from, upto)`.
    pub fn series(
        check: impl Into<String>,
        problem: impl Into<String>,
        actual: &Series,
        expected: &Series,
        from: Option<i64>,
        upto: Option<i64>,
    ) -> Self {
        let known = [actual.order(), expected.order(), upto].into_iter().flatten().min();
        let top = |s: &Series| s.terms().last().map(|(e, _)| e + 1);
        let hi = known.unwrap_or_else(|| top(actual).max(top(expected)).unwrap_or(0));
        let lo = [actual.valuation(), expected.valuation(), from]
            .into_iter()
            .flatten()
            .min()
            .unwrap_or(hi)
            .min(hi);
        let mut first_mismatch = None;
        for e in lo..hi {
            let (x, y) = (actual.coeff_or_zero(e), expected.coeff_or_zero(e));
            if x != y {
                first_mismatch =
                    Some(Mismatch { at: format!("u^{e}"), expected: y.to_string(), actual: x.to_string() });
                break;
            }
        }
        CheckReport {
            check: check.into(),
            problem: problem.into(),
            compared_orders: Some([lo, hi]),
            compared: (hi - lo) as usize,
            status: if first_mismatch.is_none() { Status::Pass } else { Status::Fail },
            first_mismatch,
            error: None,
        }
    }

    /// Comparison of labeled exact values, `(label, actual, expected)`.
    pub fn values<I>(check: impl Into<String>, problem: impl Into<String>, pairs: I) -> Self
    where
        I: IntoIterator<Item = (String, GaussRat, GaussRat)>,
    {
        let mut compared = 0;
        let mut first_mismatch = None;
        for (at, x, y) in pairs {
            compared += 1;
            if x != y && first_mismatch.is_none() {
                first_mismatch = Some(Mismatch { at, expected: y.to_string(), actual: x.to_string() });
            }
        }
        CheckReport {
            check: check.into(),
            problem: problem.into(),
            compared_orders: None,
            compared,
            status: if first_mismatch.is_none() { Status::Pass } else { Status::Fail },
            first_mismatch,
            error: None,
        }
    }

    /// Rational specialization of [`CheckReport::values`].
    pub fn rationals<I>(check: impl Into<String>, problem: impl Into<String>, pairs: I) -> Self
    where
        I: IntoIterator<Item = (String, Rational, Rational)>,
    {
        Self::values(
            check,
            problem,
            pairs.into_iter().map(|(k, x, y)| (k, GaussRat::real(x), GaussRat::real(y))),
        )
    }

    /// A check that could not be carried out.
    pub fn failed(check: impl Into<String>, problem: impl Into<String>, err: &Error) -> Self {
        CheckReport {
            check: check.into(),
            problem: problem.into(),
            compared_orders: None,
            compared: 0,
            status: Status::Fail,
            first_mismatch: None,
            error: Some(err.to_string()),
        }
    }

    /// Unwraps a fallible check into a report.
    pub fn from_result(
        check: impl Into<String>,
        problem: impl Into<String>,
        r: crate::error::Result<CheckReport>,
    ) -> Self {
        match r {
            Ok(rep) => rep,
            Err(e) => Self::failed(check, problem, &e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::rat;

    #[test]
    fn first_mismatch_is_lowest_exponent() {
        let a = Series::from_terms(vec![(-2, GaussRat::real(rat(1, 2))), (2, GaussRat::real(rat(1, 3)))], Some(5));
        let b = Series::from_terms(vec![(-2, GaussRat::real(rat(1, 2))), (2, GaussRat::real(rat(1, 4)))], Some(4));
        let r = CheckReport::series("t", "p", &a, &b, None, None);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.compared_orders, Some([-2, 4]));
        assert_eq!(r.first_mismatch.unwrap().at, "u^2");
        let r = CheckReport::series("t", "p", &a, &b, None, Some(2));
        assert!(r.passed());
        let z = Series::zero(4);
        let r = CheckReport::series("t", "p", &z, &z, Some(-2), None);
        assert_eq!((r.compared_orders, r.compared), (Some([-2, 4]), 6));
    }
}

//! Exact computation of linear and special cubic Hodge integrals.
//!
//! The crate evaluates the ELSV and Gopakumar–Mariño–Vafa character sums as
//! truncated Laurent series in `u` over exact Gaussian rationals, extracts
//! individual Hodge integrals from them, and checks the identities that tie
//! the two families together: the bilinear localization relations, the
//! λ_g formula, the tree-function and Bernoulli identities, and the
//! infinite-wedge operator formulas.
//!
//! Nothing here uses floating point. Every comparison is an exact equality of
//! rationals up to an explicitly tracked series cutoff.
//!
//! Module map:
//!
//! * [`combinatorics`]: partitions, characters, central characters,
//!   Bernoulli numbers, tree function.
//! * [`gauss`] and [`series`]: the coefficient field and the Laurent series
//!   carrier.
//! * [`genfun`]: q-dimensions, ELSV/GMV right-hand sides, connected parts,
//!   Hodge tables, closed forms.
//! * [`localization`]: the bilinear sums `Z°_d(ν;u)` and their closed form.
//! * [`fock`]: the charge-zero infinite wedge, `α_n`, `E_r(s)`, `Γ_±`,
//!   `A(z;a)`.
//! * [`interp`]: exact multivariate interpolation and linear solves.
//! * [`report`]: serializable verification reports.

pub mod combinatorics;
pub mod error;
pub mod fock;
pub mod gauss;
pub mod genfun;
pub mod interp;
pub mod localization;
pub mod report;
pub mod series;
pub mod suites;

pub use combinatorics::Partition;
pub use error::{Error, Result};
pub use gauss::{GaussRat, Rational};
pub use series::Series;

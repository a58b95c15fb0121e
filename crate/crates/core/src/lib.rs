//! Exact evaluation and auditing of degree-based topological indices for
//! parametric silicon-carbide sheets described by degree-pair edge partitions.
//!
//! Coefficients are kept in `Q(sqrt 2, sqrt 3, ...)` through [`radical::Radical`],
//! closed forms are bilinear in the sheet parameters `p` and `q`, and the
//! [`audit`] module compares stated closed forms against re-derived ones.

pub mod audit;
pub mod cli;
pub mod dsl;
pub mod families;
pub mod forms;
pub mod graph;
pub mod indices;
pub mod radical;
pub mod theorems;

use num_rational::{BigRational, Rational64};

/// Exact radical number over arbitrary-precision rationals.
pub type RadicalNumber = radical::Radical<BigRational>;
/// Radical number over machine-word rationals, for small hand-written values.
pub type Radical64 = radical::Radical<Rational64>;
/// `A·pq + B·p + C·q + D` with [`RadicalNumber`] coefficients.
pub type BilinearForm = forms::Bilinear<BigRational>;
/// Region-wise [`BilinearForm`].
pub type PiecewiseForm = forms::Piecewise<BigRational>;

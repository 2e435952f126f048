//! Coefficients `A_{n,k}(s)` of the polynomials
//! `P_n(x) = (x / n^s) * sum_{k<n} P_k(x)`, `P_0 = 1`, which interpolate
//! between shifted binomial coefficients (`s = 0`) and unsigned Stirling
//! numbers of the first kind over `n!` (`s = 1`).
//!
//! The row `{A_{n,k}(s)}_k` is the law of a sum of independent Bernoulli
//! variables, so the crate computes it as a Poisson-binomial distribution and
//! checks normal approximations, local limits and mode locations against it.

pub mod coeff;
pub mod error;
pub mod grid;
pub mod limits;
pub mod moments;
pub mod modes;
pub mod normal;
pub mod param;
pub mod sum;

pub use coeff::{ExactRow, ExactRowKind, LogValue, ProbabilityRow};
pub use error::{Error, Result};
pub use grid::Execution;
pub use limits::{ApproxReport, CltReport, LltReport};
pub use moments::MomentSummary;
pub use modes::{ModeReport, SParamSolution};
pub use param::ScaleParam;

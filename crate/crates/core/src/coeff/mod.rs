//! Coefficient rows `A_{n,k}(s)` of `P_n^{h_s}(x)`.

mod exact;
mod product;
mod recurrence;

pub use exact::{
    binomial_row, exact_row, exact_row_integer_s, exact_row_integer_s_capped, factorial,
    ratio_to_f64, stirling_row, ExactRow, ExactRowKind, DEFAULT_EXPONENT_CAP,
};
pub use product::{
    bernoulli_probs, log_partition, reflection_residual, row_product, LogValue, ProbabilityRow,
    ReflectionResidual,
};
pub use recurrence::{
    normalize_raw, row_recurrence, row_recurrence_capped, ExtFloat, DEFAULT_RECURRENCE_CAP,
};

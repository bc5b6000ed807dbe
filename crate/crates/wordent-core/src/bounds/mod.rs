//! Candidate complexity bounds `f`: parsing, exact evaluation, growth
//! analysis, admissibility conditions, regularization, and the effective
//! rich-factor formulas.
//!
//! A bound is a function `f : N -> R+` constraining factor complexity
//! (`p_w(n) <= f(n)`). Everything downstream — slice enumeration, entropy
//! brackets, dimension reports — consumes the [`BoundSpec`] type defined
//! here. Evaluation is exact wherever the value is rational and falls back
//! to certified enclosures otherwise; ceilings and comparisons are resolved
//! by adaptive precision, never by floating-point rounding.

pub mod ast;
pub mod conditions;
pub mod e0;
pub mod effective;
mod envelope;
mod spec;

pub use ast::{parse_expr, ExprAst};
pub use conditions::{
    check_conditions, regularize, ConditionOutcome, ConditionsReport,
    Monotonicity, Regularized, TailEvidence,
};
pub use e0::{e0_bounds, fekete_upper, AnalyticValue, E0Bounds, E0Lower, E0LowerMethod, FeketeUpper};
pub use effective::{
    f_qc, g_qc, g_qc_family, g_qc_tilde, rich_factor_search, GqcVariant,
    RichOutcome,
};
pub use envelope::{EnvelopeCert, GrowthRate};
pub use spec::{
    parse_bound, parse_rational, rational_to_text, BoundForm, BoundSpec,
    E0Kind, LogParam, Preset, TailRule,
};

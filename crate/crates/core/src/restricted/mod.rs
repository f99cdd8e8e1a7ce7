//! Distinguishability restricted to PPT and separable measurements.

mod measures;
mod order;
mod ppt;
mod robustness;
mod sep;

pub use measures::{
    continuity_bound, measured_relent, order_relent_bound, order_trace_bound, pinsker_lower, relative_entropy,
    ContinuityBound, CONTINUITY_KAPPA,
};
pub use order::{sep_order_epsilon, sep_order_slack};
pub use ppt::{ppt_norm, ppt_norm_certified, ppt_norm_program, PptNorm};
pub use robustness::ppt_relaxed_robustness;
pub use sep::{
    sep_norm_bracket, sep_overlap_bracket, BracketOptions, DpsLevel, LowerCertificate, NormBracket, ProductVector,
    UpperCertificate,
};

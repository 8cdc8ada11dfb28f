//! Growth diagnostics for entire functions and the chain of checks that
//! decides when integer-valued interpolation data force a polynomial.

mod bounds;
mod estimates;
mod pipeline;

pub use bounds::{cauchy_derivative_bound, ln_polya_bound, polya_threshold, stirling_bounds, GrowthParams, StirlingBounds};
pub use estimates::{
    check_growth_condition, default_r_grid, estimate_directional_type, geometric_grid, sup_norm, sup_norm_about,
    DirectionalType, GrowthCondition, SupNormEstimate, SupNormOptions, Verdict,
};
pub use pipeline::{
    finite_exception_scan, theorem_pipeline, DegreeCertificate, Exception, Fixture, PipelineOptions, PipelineReport,
    TypeCondition,
};

//! Admissible exponents, mixed space-time norms and the bounded-ratio
//! estimators.

pub mod admissible;
pub mod mixed;
pub mod pipeline;
pub mod report;
pub mod smoothing;
pub mod strichartz;
pub mod strichartz_smoothing;

pub use admissible::{enumerate_admissible, AdmissibleTriple};
pub use mixed::{mixed_norm, mixed_norm_of, stream_free, time_norm, trapezoid_weights, TimeNorm};
pub use pipeline::{
    endpoint_pipeline, ChartDiagnostics, PipelineCharts, PipelineConfig, PipelineRun,
};
pub use report::{RatioMember, RatioReport};
pub use smoothing::{
    prepare_cutoff, smoothing_frequency_sweep, smoothing_member, smoothing_ratio,
    smoothing_ratio_inhomogeneous, smoothing_time_log, SmoothingConfig, SweepData,
};
pub use strichartz::{strichartz_ratio, strichartz_scaling, ScalingSweep, StrichartzConfig};
pub use strichartz_smoothing::{
    strichartz_smoothing_ratio, strichartz_smoothing_sweep, StrichartzSmoothingConfig,
};

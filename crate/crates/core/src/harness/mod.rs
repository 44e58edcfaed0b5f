//! Artifact plumbing around the pipeline: instance files, seeded point
//! generators, end-to-end runs with oracle checks, JSON reports and SVG
//! drawings.

mod generate;
mod instance;
mod report;
mod run;
mod svg;
pub mod truth;

pub use generate::{generate_instance, GenerateError, Mode, SPAN};
pub use instance::{instance_digest, parse_instance, write_instance, InstanceError};
pub use report::{
    AbstractSummary, Check, CheckStatus, FailureKind, GeneratorInfo, RunReport, StageFailure, StageTiming, Verdict,
};
pub use run::{
    matching_permutations, run_abstract, run_enumerate, run_reconstruct, AbstractOptions, EnumerateSummary,
    ReconstructOptions, ReconstructRun,
};
pub use svg::{emit_svg, Overlay};
pub use truth::VerificationStats;

use serde::Serialize;

use crate::abstract_kn::BranchAudit;
use crate::reconstruct::ReconstructionAudit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One invariant evaluated during a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        let status = if passed { CheckStatus::Pass } else { CheckStatus::Fail };
        Check { name: name.to_string(), status, detail: detail.into() }
    }

    pub fn skipped(name: &str, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), status: CheckStatus::Skipped, detail: detail.into() }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

/// How a stage failure maps onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    /// Malformed or unsupported input (exit 2).
    Input,
    /// A size cap was hit (exit 3).
    ResourceCap,
    /// The pipeline rejected a valid input (exit 1).
    Pipeline,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageFailure {
    pub stage: String,
    pub kind: FailureKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageTiming {
    pub stage: String,
    pub millis: f64,
}

/// Where the points came from, when they were generated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorInfo {
    pub mode: String,
    pub seed: u64,
}

/// Abstract `K_n` results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbstractSummary {
    pub vertices: usize,
    pub branches: Option<BranchAudit>,
    /// Label permutations mapping the recovered trees onto the originals.
    pub matching_permutations: Option<usize>,
    pub automorphism_count: Option<u64>,
}

/// One JSON document per run. Field order is fixed by declaration order;
/// `timings` is the only part that varies between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub parallel: bool,
    pub instance_digest: Option<String>,
    pub n: usize,
    pub generator: Option<GeneratorInfo>,
    pub shuffle_seed: u64,
    pub sst_count: Option<usize>,
    pub tree_graph_edges: Option<usize>,
    pub diameter: Option<u32>,
    pub crossing_digest: Option<String>,
    pub reconstruction: Option<ReconstructionAudit>,
    #[serde(rename = "abstract")]
    pub abstract_summary: Option<AbstractSummary>,
    pub checks: Vec<Check>,
    pub failure: Option<StageFailure>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<StageTiming>>,
}

impl RunReport {
    pub(crate) fn new(command: &str, n: usize, shuffle_seed: u64) -> Self {
        RunReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parallel: crate::is_parallel(),
            instance_digest: None,
            n,
            generator: None,
            shuffle_seed,
            sst_count: None,
            tree_graph_edges: None,
            diameter: None,
            crossing_digest: None,
            reconstruction: None,
            abstract_summary: None,
            checks: Vec::new(),
            failure: None,
            verdict: Verdict::Fail,
            timings: Some(Vec::new()),
        }
    }

    pub(crate) fn fail(&mut self, stage: &str, kind: FailureKind, message: impl ToString) {
        self.failure = Some(StageFailure { stage: stage.to_string(), kind, message: message.to_string() });
    }

    pub(crate) fn time(&mut self, stage: &str, start: std::time::Instant) {
        let millis = start.elapsed().as_secs_f64() * 1e3;
        if let Some(t) = self.timings.as_mut() {
            t.push(StageTiming { stage: stage.to_string(), millis });
        }
    }

    /// PASS iff no stage failed and no enabled check failed.
    pub(crate) fn finish(mut self) -> Self {
        let ok = self.failure.is_none() && self.checks.iter().all(Check::passed);
        self.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// 0 pass, 1 verification failure, 2 input error, 3 resource cap.
    pub fn exit_code(&self) -> i32 {
        match (&self.failure, self.verdict) {
            (Some(f), _) if f.kind == FailureKind::Input => 2,
            (Some(f), _) if f.kind == FailureKind::ResourceCap => 3,
            (_, Verdict::Pass) => 0,
            (_, Verdict::Fail) => 1,
        }
    }

    /// The report without timings.
    pub fn stable(&self) -> RunReport {
        RunReport { timings: None, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// JSON without timings; identical across repeated runs.
    pub fn stable_json(&self) -> String {
        self.stable().to_json()
    }
}

//! Run statistics written next to the kernel.

use serde::Serialize;

use crate::reductions::RuleCounts;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub preprocess_ms: f64,
    pub partition_ms: f64,
    pub local_ms: f64,
    pub lp_ms: f64,
    pub finish_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundStats {
    pub round: usize,
    pub live_before: usize,
    pub local_removed: usize,
    pub lp_removed: usize,
    /// Reduction tracking cut the local phase short.
    pub stopped: bool,
}

/// One live-vertex count taken by the tracking monitor.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SizeSample {
    pub round: usize,
    pub elapsed_ms: f64,
    pub live: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunStats {
    pub input_vertices: usize,
    pub input_edges: usize,
    pub preprocessed_vertices: usize,
    pub kernel_vertices: usize,
    pub kernel_edges: usize,
    pub offset: usize,
    pub mode: String,
    pub workers: usize,
    pub blocks: usize,
    pub tracking: bool,
    pub cut_edges: usize,
    pub rounds: usize,
    pub tracking_stops: usize,
    /// Net live vertices removed, per rule.
    pub removals: RuleCounts,
    pub round_log: Vec<RoundStats>,
    pub size_samples: Vec<SizeSample>,
    pub audit_checks: usize,
    pub audit_failures: usize,
    pub timings: Timings,
}

impl RunStats {
    /// Copy with every wall-clock dependent field cleared.
    pub fn without_timings(&self) -> RunStats {
        RunStats { timings: Timings::default(), size_samples: Vec::new(), ..self.clone() }
    }
}

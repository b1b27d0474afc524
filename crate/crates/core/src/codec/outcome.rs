//! Aggregated results of Monte-Carlo end-to-end simulations.

use serde::{Deserialize, Serialize};

/// Echo of the effective simulation configuration, embedded in every outcome
/// so a result file is reproducible on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfigEcho {
    pub topology: String,
    pub rate1: f64,
    pub rate2: f64,
    pub n: usize,
    pub blocks: usize,
    pub trials: u64,
    pub seed: u64,
    pub theta_mode: String,
    pub noise_scale: f64,
}

/// Error counts from one simulation run. A trial counts as an error when any
/// reconstructed source block differs from what was transmitted. Stages can
/// co-fail, so the per-stage counts may sum to more than `errors`; they never
/// sum to less.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutcome {
    pub trials: u64,
    pub errors: u64,
    pub error_rate: f64,
    /// Trials where the relay misdecoded at least one block.
    pub relay_errors: u64,
    /// Trials where the destination's channel decoding missed a message.
    pub destination_errors: u64,
    /// Trials where channel decoding succeeded but source reconstruction
    /// still failed.
    pub source_errors: u64,
    /// Worst error rate over the phase grid, present only in worst-grid mode.
    pub sup_error_estimate: Option<f64>,
    pub config: SimConfigEcho,
}

impl SimOutcome {
    /// Assembles an outcome, deriving the error rate.
    pub fn from_counts(
        errors: u64,
        relay_errors: u64,
        destination_errors: u64,
        source_errors: u64,
        config: SimConfigEcho,
    ) -> Self {
        let trials = config.trials;
        debug_assert!(errors <= relay_errors + destination_errors + source_errors || errors == 0);
        Self {
            trials,
            errors,
            error_rate: errors as f64 / trials as f64,
            relay_errors,
            destination_errors,
            source_errors,
            sup_error_estimate: None,
            config,
        }
    }
}

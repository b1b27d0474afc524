//! Desk-scale source and channel coding: random binning with exact joint
//! decoding, Gaussian codebooks, block-Markov relay schedules, and end-to-end
//! Monte-Carlo pipelines whose exhaustive searches are segmented to stay
//! within explicit budgets.

pub mod binning;
pub mod codebook;
pub mod mac;
pub mod marc;
pub mod outcome;
pub mod pair;
pub mod schedule;
pub mod segment;

pub use binning::{sw_decode, sw_encode, BinningCode, SW_PAIR_BUDGET};
pub use codebook::GaussianCodebook;
pub use mac::{ml_decode_mac, simulate_mac_e2e};
pub use marc::{simulate_marc_df, DfOptions};
pub use outcome::{SimConfigEcho, SimOutcome};
pub use pair::{PairDecoder, DECODE_PAIR_BUDGET};
pub use schedule::{build_schedule, Schedule, Slot};
pub use segment::{plan_segments, Segment, PAIR_BITS_BUDGET};

use crate::channel::PhaseVector;
use crate::source::JointSourcePMF;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// How channel phases behave across the trials of a simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrialPhases {
    /// One fixed phase vector for every trial.
    Held { theta: PhaseVector },
    /// Phases redrawn uniformly at every symbol (receiver still knows them).
    PerSymbol,
    /// A fresh uniform phase vector per trial, held over that trial.
    RandomHeld,
    /// Rerun the trials at each point of a gauge-fixed phase grid and report
    /// the worst error rate as a lower bound on the supremum.
    WorstGrid { points: usize },
}

impl TrialPhases {
    /// Stable one-token description used in outputs.
    pub fn describe(&self) -> String {
        match self {
            TrialPhases::Held { theta } => {
                let parts: Vec<String> = theta.phases.iter().map(|p| p.to_string()).collect();
                format!("non_ergodic:{}", parts.join(";"))
            }
            TrialPhases::PerSymbol => "ergodic_uniform".to_string(),
            TrialPhases::RandomHeld => "random_held".to_string(),
            TrialPhases::WorstGrid { points } => format!("worst_grid:{points}"),
        }
    }
}

/// Draws `n` i.i.d. symbol pairs from the joint source law by CDF inversion.
pub fn draw_source_block(
    pmf: &JointSourcePMF,
    n: usize,
    rng: &mut impl Rng,
) -> (Vec<usize>, Vec<usize>) {
    let mut cdf = Vec::with_capacity(pmf.alphabet_u * pmf.alphabet_v);
    let mut acc = 0.0;
    for row in &pmf.probs {
        for &p in row {
            acc += p;
            cdf.push(acc);
        }
    }
    let mut u_seq = Vec::with_capacity(n);
    let mut v_seq = Vec::with_capacity(n);
    for _ in 0..n {
        let draw = rng.gen::<f64>();
        let idx = cdf.partition_point(|&c| c <= draw).min(cdf.len() - 1);
        u_seq.push(idx / pmf.alphabet_v);
        v_seq.push(idx % pmf.alphabet_v);
    }
    (u_seq, v_seq)
}

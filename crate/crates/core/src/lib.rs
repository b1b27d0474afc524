//! Reliable-communication regions, adversarial-phase minimax mutual
//! information, and Monte-Carlo achievability simulation for phase-incoherent
//! Gaussian multi-user networks.
//!
//! The crate models channels in which every path applies an unknown,
//! potentially adversarial carrier phase on top of a known real amplitude
//! gain. For each supported topology it computes the entropy-triple region in
//! which a correlated source pair can be reliably delivered, evaluates the
//! gain conditions under which that region is tight, minimizes Gaussian
//! mutual information over the phase parameters, and simulates the end-to-end
//! achievability pipeline (distributed binning, block-Markov relaying, joint
//! maximum-likelihood decoding) at desk scale.
//!
//! # Example
//!
//! ```
//! use pinc_core::{compute_region, ChannelSpec, Topology};
//!
//! let spec = ChannelSpec::new(Topology::Mac, &[1.0, 1.0], &[1.0, 1.0], 1.0).unwrap();
//! let region = compute_region(&spec).unwrap();
//! assert_eq!(region.bound_h_u_given_v, Some(1.0));
//! assert!((region.bound_h_uv - 3f64.log2()).abs() < 1e-12);
//! ```

pub mod channel;
pub mod codec;
pub mod error;
pub mod minimax;
pub mod regions;
pub mod rng;
pub mod sim;
pub mod source;

pub use channel::{validate_channel, ChannelSpec, PhaseVector, Topology, ALL_TOPOLOGIES};
pub use codec::{
    build_schedule, ml_decode_mac, plan_segments, simulate_mac_e2e, simulate_marc_df, sw_decode,
    sw_encode, BinningCode, DfOptions, GaussianCodebook, PairDecoder, Schedule, SimConfigEcho,
    SimOutcome, Slot, TrialPhases,
};
pub use error::{Error, Result};
pub use minimax::{
    ergodic_avg_mi, ergodic_avg_mi_mc, independence_report, mi_discrete_input, mi_gaussian,
    min_theta_mi, min_theta_mi_numeric, sigma_v_sq, verify_independence_optimal, Estimate,
    GaussianInputSpec, IndependenceReport, MinimaxMethod, MinimaxOptions, MinimaxResult,
};
pub use regions::{
    check_gain_conditions, check_gain_conditions_with, compute_region, is_feasible, BoundSlack,
    Boundary, Condition, ConditionReport, Feasibility, MarcConditionVariant, RegionBounds,
};
pub use sim::{random_phase_vector, sample_phases, transmit, ChannelUse, PhaseMode};
pub use source::{entropy_triple, make_dsbs, EntropyTriple, JointSourcePMF};

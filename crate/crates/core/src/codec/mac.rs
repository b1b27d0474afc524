//! End-to-end two-sender simulation: correlated source blocks are binned,
//! bin indices select Gaussian codewords, and the receiver runs exact
//! maximum-likelihood pair decoding followed by joint source reconstruction.
//! Blocks are segmented so the pair search never exceeds its budget.

use crate::channel::{ChannelSpec, PhaseVector, Topology};
use crate::codec::binning::{sw_decode, BinningCode};
use crate::codec::codebook::GaussianCodebook;
use crate::codec::outcome::{SimConfigEcho, SimOutcome};
use crate::codec::pair::{
    rotate_constant, rotate_per_symbol, PairDecoder, DECODER_CACHE_PAIR_LIMIT,
};
use crate::codec::segment::{join_message, plan_segments, split_message, Segment};
use crate::codec::{draw_source_block, TrialPhases};
use crate::error::{Error, Result};
use crate::rng::{self, derive_seed, purpose};
use crate::sim::{transmit, PhaseMode};
use crate::source::JointSourcePMF;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// Grid points allowed in one worst-phase sweep.
const WORST_GRID_LIMIT: usize = 4096;

/// Exact joint ML decoding of one received block on the two-sender channel,
/// given the codebooks and the realized (held) phases.
pub fn ml_decode_mac(
    y: &[Complex64],
    cb1: &GaussianCodebook,
    cb2: &GaussianCodebook,
    theta: &PhaseVector,
    spec: &ChannelSpec,
) -> Result<(usize, usize)> {
    spec.ensure_valid()?;
    if spec.topology != Topology::Mac {
        return Err(Error::Argument(format!(
            "pairwise ML decoding is defined for the two-sender channel, got {}",
            spec.topology
        )));
    }
    theta.ensure_matches(spec.topology)?;
    let r1 = rotate_constant(&cb1.codewords, spec.gain("g1"), theta.phases[0]);
    let r2 = rotate_constant(&cb2.codewords, spec.gain("g2"), theta.phases[1]);
    PairDecoder::new(r1, r2)?.decode(y)
}

struct MacCode {
    code1: BinningCode,
    code2: BinningCode,
    plan: Vec<Segment>,
    books1: Vec<GaussianCodebook>,
    books2: Vec<GaussianCodebook>,
    starts: Vec<usize>,
}

fn build_mac_code(
    pmf: &JointSourcePMF,
    spec: &ChannelSpec,
    rates: (f64, f64),
    n: usize,
    seed: u64,
) -> Result<MacCode> {
    let code1 = BinningCode::new(n, rates.0, pmf.alphabet_u, derive_seed(seed, 0x51))?;
    let code2 = BinningCode::new(n, rates.1, pmf.alphabet_v, derive_seed(seed, 0x52))?;
    let plan = plan_segments(n, code1.bits, code2.bits)?;
    let mut books1 = Vec::with_capacity(plan.len());
    let mut books2 = Vec::with_capacity(plan.len());
    let mut starts = Vec::with_capacity(plan.len());
    let mut start = 0usize;
    for (s, seg) in plan.iter().enumerate() {
        books1.push(GaussianCodebook::generate(
            seg.len,
            1usize << seg.bits1,
            spec.power("p1"),
            seed,
            (1 << 12) | s as u64,
        )?);
        books2.push(GaussianCodebook::generate(
            seg.len,
            1usize << seg.bits2,
            spec.power("p2"),
            seed,
            (2 << 12) | s as u64,
        )?);
        starts.push(start);
        start += seg.len;
    }
    Ok(MacCode {
        code1,
        code2,
        plan,
        books1,
        books2,
        starts,
    })
}

fn concat_codewords(books: &[GaussianCodebook], parts: &[u64], n: usize) -> Vec<Complex64> {
    let mut x = Vec::with_capacity(n);
    for (book, &part) in books.iter().zip(parts) {
        x.extend_from_slice(&book.codewords[part as usize]);
    }
    x
}

/// Simulates source-channel blocks over the two-sender channel and reports
/// error counts per stage.
#[allow(clippy::too_many_arguments)]
pub fn simulate_mac_e2e(
    pmf: &JointSourcePMF,
    spec: &ChannelSpec,
    rates: (f64, f64),
    n: usize,
    trials: u64,
    phases: &TrialPhases,
    noise_scale: f64,
    seed: u64,
) -> Result<SimOutcome> {
    spec.ensure_valid()?;
    pmf.validate()?;
    if spec.topology != Topology::Mac {
        return Err(Error::Argument(format!(
            "end-to-end two-sender simulation requires topology mac, got {}",
            spec.topology
        )));
    }
    if trials == 0 {
        return Err(Error::Argument("trial count must be at least 1".into()));
    }

    if let TrialPhases::WorstGrid { points } = *phases {
        if points == 0 || points > WORST_GRID_LIMIT {
            return Err(Error::Budget(format!(
                "worst-phase grid of {points} points is outside 1..={WORST_GRID_LIMIT}"
            )));
        }
        let mut worst: Option<SimOutcome> = None;
        for k in 0..points {
            let theta = PhaseVector::new(vec![0.0, k as f64 * TAU / points as f64])?;
            let held = TrialPhases::Held { theta };
            let outcome = simulate_mac_e2e(pmf, spec, rates, n, trials, &held, noise_scale, seed)?;
            if worst
                .as_ref()
                .map_or(true, |w| outcome.error_rate > w.error_rate)
            {
                worst = Some(outcome);
            }
        }
        let mut worst = worst.expect("grid has at least one point");
        worst.sup_error_estimate = Some(worst.error_rate);
        worst.config.theta_mode = phases.describe();
        return Ok(worst);
    }

    if let TrialPhases::Held { theta } = phases {
        theta.ensure_matches(spec.topology)?;
    }

    let code = build_mac_code(pmf, spec, rates, n, seed)?;
    let g1 = spec.gain("g1");
    let g2 = spec.gain("g2");

    // Held phases admit one decoder per segment across all trials, as long as
    // the cross tables behind them fit the cache budget; otherwise the trials
    // fall back to building decoders on the fly.
    let cache_pairs: u128 = code
        .plan
        .iter()
        .map(|seg| 1u128 << (seg.bits1 + seg.bits2))
        .sum();
    let held_decoders: Option<Vec<PairDecoder>> = match phases {
        TrialPhases::Held { theta } if cache_pairs <= DECODER_CACHE_PAIR_LIMIT => Some(
            code.plan
                .iter()
                .enumerate()
                .map(|(s, _)| {
                    PairDecoder::new(
                        rotate_constant(&code.books1[s].codewords, g1, theta.phases[0]),
                        rotate_constant(&code.books2[s].codewords, g2, theta.phases[1]),
                    )
                })
                .collect::<Result<_>>()?,
        ),
        _ => None,
    };

    // Per-trial streams make trials independent, and the summed counts are
    // order-free, so the outcome is identical for any worker count.
    let counts = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<[u64; 3]> {
            let mut src = rng::stream_rng(seed, rng::stream_id(trial, purpose::SOURCE, 0));
            let (u, v) = draw_source_block(pmf, n, &mut src);
            let bin_u = code.code1.encode(&u)?;
            let bin_v = code.code2.encode(&v)?;
            let parts1 = split_message(bin_u, &code.plan, 1);
            let parts2 = split_message(bin_v, &code.plan, 2);
            let x1 = concat_codewords(&code.books1, &parts1, n);
            let x2 = concat_codewords(&code.books2, &parts2, n);

            let mode = match phases {
                TrialPhases::Held { theta } => PhaseMode::NonErgodic {
                    theta: theta.clone(),
                },
                TrialPhases::RandomHeld => PhaseMode::NonErgodic {
                    theta: random_trial_phases(spec.topology, seed, trial),
                },
                TrialPhases::PerSymbol => PhaseMode::ErgodicUniform,
                TrialPhases::WorstGrid { .. } => unreachable!("handled above"),
            };
            let block = transmit(
                spec,
                &[x1, x2],
                &mode,
                noise_scale,
                derive_seed(seed, (trial << 8) | 0x11),
            )?;
            let y = &block.outputs[0];

            let mut hat1 = Vec::with_capacity(code.plan.len());
            let mut hat2 = Vec::with_capacity(code.plan.len());
            for (s, seg) in code.plan.iter().enumerate() {
                let lo = code.starts[s];
                let hi = lo + seg.len;
                let (a, b) = match (&held_decoders, &mode) {
                    (Some(decoders), _) => decoders[s].decode(&y[lo..hi])?,
                    (None, PhaseMode::NonErgodic { theta }) => PairDecoder::new(
                        rotate_constant(&code.books1[s].codewords, g1, theta.phases[0]),
                        rotate_constant(&code.books2[s].codewords, g2, theta.phases[1]),
                    )?
                    .decode(&y[lo..hi])?,
                    (None, PhaseMode::ErgodicUniform) => {
                        let th1: Vec<f64> =
                            block.phases_used[lo..hi].iter().map(|row| row[0]).collect();
                        let th2: Vec<f64> =
                            block.phases_used[lo..hi].iter().map(|row| row[1]).collect();
                        PairDecoder::new(
                            rotate_per_symbol(&code.books1[s].codewords, g1, &th1),
                            rotate_per_symbol(&code.books2[s].codewords, g2, &th2),
                        )?
                        .decode(&y[lo..hi])?
                    }
                };
                hat1.push(a as u64);
                hat2.push(b as u64);
            }
            let bin_u_hat = join_message(&hat1, &code.plan, 1);
            let bin_v_hat = join_message(&hat2, &code.plan, 2);

            let dest_err = bin_u_hat != bin_u || bin_v_hat != bin_v;
            let err = match sw_decode(bin_u_hat, bin_v_hat, pmf, &code.code1, &code.code2) {
                Ok((u_hat, v_hat)) => u_hat != u || v_hat != v,
                // A misdecoded bin can fall outside the code image; that trial
                // simply failed.
                Err(Error::Argument(_)) => true,
                Err(e) => return Err(e),
            };
            Ok([
                u64::from(err),
                u64::from(dest_err),
                u64::from(err && !dest_err),
            ])
        })
        .try_reduce(
            || [0u64; 3],
            |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2]]),
        )?;

    Ok(SimOutcome::from_counts(
        counts[0],
        0,
        counts[1],
        counts[2],
        SimConfigEcho {
            topology: spec.topology.to_string(),
            rate1: rates.0,
            rate2: rates.1,
            n,
            blocks: 1,
            trials,
            seed,
            theta_mode: phases.describe(),
            noise_scale,
        },
    ))
}

pub(crate) fn random_trial_phases(topology: Topology, seed: u64, trial: u64) -> PhaseVector {
    crate::sim::random_phase_vector(topology, derive_seed(seed, (trial << 8) | 0x12))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::make_dsbs;

    fn unit_mac() -> ChannelSpec {
        ChannelSpec::new(Topology::Mac, &[1.0, 1.0], &[1.0, 1.0], 1.0).unwrap()
    }

    #[test]
    fn ml_decoding_recovers_noiseless_blocks() {
        let spec = unit_mac();
        let cb1 = GaussianCodebook::generate(8, 16, 1.0, 5, 0).unwrap();
        let cb2 = GaussianCodebook::generate(8, 16, 1.0, 5, 1).unwrap();
        let theta = PhaseVector::new(vec![0.7, 4.0]).unwrap();
        let h1 = Complex64::from_polar(1.0, 0.7);
        let h2 = Complex64::from_polar(1.0, 4.0);
        let y: Vec<Complex64> = (0..8)
            .map(|t| h1 * cb1.codewords[9][t] + h2 * cb2.codewords[3][t])
            .collect();
        assert_eq!(
            ml_decode_mac(&y, &cb1, &cb2, &theta, &spec).unwrap(),
            (9, 3)
        );
    }

    #[test]
    fn ml_decoding_breaks_ties_toward_the_lowest_pair() {
        let spec = unit_mac();
        let mut cb1 = GaussianCodebook::generate(4, 2, 1.0, 6, 0).unwrap();
        cb1.codewords[1] = cb1.codewords[0].clone();
        let cb2 = GaussianCodebook::generate(4, 1, 1.0, 6, 1).unwrap();
        let theta = PhaseVector::zeros(Topology::Mac);
        let y: Vec<Complex64> = (0..4)
            .map(|t| cb1.codewords[0][t] + cb2.codewords[0][t])
            .collect();
        assert_eq!(
            ml_decode_mac(&y, &cb1, &cb2, &theta, &spec).unwrap(),
            (0, 0)
        );
    }

    #[test]
    fn noiseless_full_rate_blocks_always_reconstruct() {
        let pmf = make_dsbs(0.11).unwrap();
        let spec = unit_mac();
        for phases in [
            TrialPhases::Held {
                theta: PhaseVector::new(vec![0.3, 5.9]).unwrap(),
            },
            TrialPhases::PerSymbol,
            TrialPhases::RandomHeld,
        ] {
            let out = simulate_mac_e2e(&pmf, &spec, (1.0, 1.0), 8, 20, &phases, 0.0, 77).unwrap();
            assert_eq!(out.errors, 0, "{}", phases.describe());
            assert_eq!(out.destination_errors, 0);
            assert_eq!(out.source_errors, 0);
            assert_eq!(out.error_rate, 0.0);
            assert_eq!(out.trials, 20);
        }
    }

    #[test]
    fn outcomes_are_reproducible_for_a_seed() {
        let pmf = make_dsbs(0.11).unwrap();
        let spec = unit_mac();
        let phases = TrialPhases::RandomHeld;
        let a = simulate_mac_e2e(&pmf, &spec, (0.9, 0.9), 12, 30, &phases, 1.0, 5).unwrap();
        let b = simulate_mac_e2e(&pmf, &spec, (0.9, 0.9), 12, 30, &phases, 1.0, 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn worst_grid_dominates_any_single_held_phase() {
        let pmf = make_dsbs(0.11).unwrap();
        let spec = unit_mac();
        let grid = TrialPhases::WorstGrid { points: 8 };
        let worst = simulate_mac_e2e(&pmf, &spec, (0.9, 0.9), 8, 40, &grid, 1.0, 9).unwrap();
        assert_eq!(worst.sup_error_estimate, Some(worst.error_rate));
        assert_eq!(worst.config.theta_mode, "worst_grid:8");
        for k in [0usize, 3, 5] {
            let theta = PhaseVector::new(vec![0.0, k as f64 * TAU / 8.0]).unwrap();
            let held = simulate_mac_e2e(
                &pmf,
                &spec,
                (0.9, 0.9),
                8,
                40,
                &TrialPhases::Held { theta },
                1.0,
                9,
            )
            .unwrap();
            assert!(worst.error_rate >= held.error_rate);
        }
    }

    #[test]
    fn stage_counts_explain_every_error() {
        let pmf = make_dsbs(0.11).unwrap();
        let spec = unit_mac();
        let out = simulate_mac_e2e(
            &pmf,
            &spec,
            (0.7, 0.7),
            16,
            200,
            &TrialPhases::Held {
                theta: PhaseVector::zeros(Topology::Mac),
            },
            1.0,
            3,
        )
        .unwrap();
        assert!(out.errors <= out.destination_errors + out.source_errors);
        assert_eq!(out.relay_errors, 0);
        assert_eq!(out.error_rate, out.errors as f64 / 200.0);
    }

    #[test]
    fn invalid_requests_are_rejected() {
        let pmf = make_dsbs(0.11).unwrap();
        let spec = unit_mac();
        let held = TrialPhases::Held {
            theta: PhaseVector::zeros(Topology::Mac),
        };
        assert!(matches!(
            simulate_mac_e2e(&pmf, &spec, (1.0, 1.0), 8, 0, &held, 1.0, 1),
            Err(Error::Argument(_))
        ));
        let marc = ChannelSpec::new(Topology::Marc, &[1.0; 5], &[1.0; 3], 1.0).unwrap();
        assert!(matches!(
            simulate_mac_e2e(&pmf, &marc, (1.0, 1.0), 8, 1, &held, 1.0, 1),
            Err(Error::Argument(_))
        ));
        let wrong = TrialPhases::Held {
            theta: PhaseVector::new(vec![0.0, 0.0, 0.0]).unwrap(),
        };
        assert!(matches!(
            simulate_mac_e2e(&pmf, &spec, (1.0, 1.0), 8, 1, &wrong, 1.0, 1),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            simulate_mac_e2e(&pmf, &spec, (23.0, 0.0), 1, 1, &held, 1.0, 1),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            simulate_mac_e2e(
                &pmf,
                &spec,
                (1.0, 1.0),
                8,
                1,
                &TrialPhases::WorstGrid { points: 0 },
                1.0,
                1
            ),
            Err(Error::Budget(_))
        ));
    }
}

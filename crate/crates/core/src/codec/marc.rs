//! Decode-and-forward simulation for the relay topologies. Encoders follow a
//! block-Markov schedule; the relay decodes each fresh message pair forward
//! and repeats it one block later, while the destination decodes backward
//! from the final block, peeling already-known layers out of each received
//! block before the joint pair search.

use crate::channel::{ChannelSpec, Topology};
use crate::codec::binning::{sw_decode, BinningCode};
use crate::codec::codebook::GaussianCodebook;
use crate::codec::mac::random_trial_phases;
use crate::codec::outcome::{SimConfigEcho, SimOutcome};
use crate::codec::pair::{PairDecoder, DECODER_CACHE_PAIR_LIMIT};
use crate::codec::schedule::{relay_df_schedule, Schedule, Slot};
use crate::codec::segment::{join_message, plan_segments, split_message, Segment};
use crate::codec::{draw_source_block, TrialPhases};
use crate::error::{Error, Result};
use crate::rng::{self, derive_seed, purpose};
use crate::sim::{transmit, PhaseMode};
use crate::source::JointSourcePMF;
use num_complex::Complex64;
use rayon::prelude::*;

const MAX_BLOCKS: usize = 32;
const MAX_SEGMENTS: usize = 256;

/// Tuning knobs for a decode-and-forward run.
#[derive(Debug, Clone, PartialEq)]
pub struct DfOptions {
    /// Multiplies the spec's noise variance; 0 gives a noiseless channel.
    pub noise_scale: f64,
    /// Per-encoder power fractions across that encoder's schedule slots;
    /// each row must sum to 1. `None` splits power equally.
    pub power_fractions: Option<[Vec<f64>; 3]>,
}

impl Default for DfOptions {
    fn default() -> Self {
        Self {
            noise_scale: 1.0,
            power_fractions: None,
        }
    }
}

fn slot_owner(sched: &Schedule, encoder: usize, slot: usize) -> usize {
    sched.rows[encoder]
        .iter()
        .find_map(|slots| match slots[slot] {
            Slot::Message { encoder: owner, .. } => Some(owner),
            Slot::Filler => None,
        })
        .expect("every slot carries a message in some block")
}

fn owner_bits(seg: &Segment, owner: usize) -> u32 {
    if owner == 1 {
        seg.bits1
    } else {
        seg.bits2
    }
}

fn resolve_fractions(sched: &Schedule, options: &DfOptions) -> Result<[Vec<f64>; 3]> {
    let counts: Vec<usize> = sched.rows.iter().map(|row| row[0].len()).collect();
    match &options.power_fractions {
        None => Ok([
            vec![1.0 / counts[0] as f64; counts[0]],
            vec![1.0 / counts[1] as f64; counts[1]],
            vec![1.0 / counts[2] as f64; counts[2]],
        ]),
        Some(rows) => {
            for (e, row) in rows.iter().enumerate() {
                if row.len() != counts[e] {
                    return Err(Error::Validation(format!(
                        "power fractions for encoder {} list {} entries, schedule has {} slots",
                        e + 1,
                        row.len(),
                        counts[e]
                    )));
                }
                if row.iter().any(|f| !f.is_finite() || *f < 0.0) {
                    return Err(Error::Validation(
                        "power fractions must be finite and nonnegative".into(),
                    ));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > 1e-9 {
                    return Err(Error::Validation(format!(
                        "power fractions for encoder {} sum to {sum}, expected 1",
                        e + 1
                    )));
                }
            }
            Ok(rows.clone())
        }
    }
}

struct DfCode {
    code1: BinningCode,
    code2: BinningCode,
    plan: Vec<Segment>,
    starts: Vec<usize>,
    /// `books[encoder][slot][segment]`, sized by the slot owner's bits.
    books: Vec<Vec<Vec<GaussianCodebook>>>,
}

fn build_df_code(
    pmf: &JointSourcePMF,
    spec: &ChannelSpec,
    sched: &Schedule,
    rates: (f64, f64),
    n: usize,
    seed: u64,
    fractions: &[Vec<f64>; 3],
) -> Result<DfCode> {
    let code1 = BinningCode::new(n, rates.0, pmf.alphabet_u, derive_seed(seed, 0x51))?;
    let code2 = BinningCode::new(n, rates.1, pmf.alphabet_v, derive_seed(seed, 0x52))?;
    let plan = plan_segments(n, code1.bits, code2.bits)?;
    if plan.len() > MAX_SEGMENTS {
        return Err(Error::Budget(format!(
            "{} segments exceed the {MAX_SEGMENTS} limit",
            plan.len()
        )));
    }
    let starts: Vec<usize> = plan
        .iter()
        .scan(0usize, |acc, seg| {
            let start = *acc;
            *acc += seg.len;
            Some(start)
        })
        .collect();
    let power_names = spec.topology.power_names();
    let mut books = Vec::with_capacity(3);
    for e in 0..3 {
        let slot_count = sched.rows[e][0].len();
        let mut per_slot = Vec::with_capacity(slot_count);
        for (k, &fraction) in fractions[e].iter().enumerate().take(slot_count) {
            let owner = slot_owner(sched, e, k);
            let power = spec.power(power_names[e]) * fraction;
            let per_seg = plan
                .iter()
                .enumerate()
                .map(|(s, seg)| {
                    GaussianCodebook::generate(
                        seg.len,
                        1usize << owner_bits(seg, owner),
                        power,
                        seed,
                        ((e as u64 + 1) << 12) | ((k as u64) << 8) | s as u64,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            per_slot.push(per_seg);
        }
        books.push(per_slot);
    }
    Ok(DfCode {
        code1,
        code2,
        plan,
        starts,
        books,
    })
}

/// Sums one encoder's scheduled layers for transmission block `t`.
fn build_input(
    code: &DfCode,
    sched: &Schedule,
    encoder: usize,
    t: usize,
    n: usize,
    msg: &dyn Fn(usize, usize) -> u64,
) -> Vec<Complex64> {
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for (k, slot) in sched.rows[encoder][t - 1].iter().enumerate() {
        let parts = match slot {
            Slot::Filler => None,
            Slot::Message {
                encoder: owner,
                block,
            } => Some(split_message(msg(*owner, *block), &code.plan, *owner)),
        };
        for s in 0..code.plan.len() {
            let idx = parts.as_ref().map_or(0, |p| p[s] as usize);
            let word = &code.books[encoder][k][s].codewords[idx];
            for (i, z) in word.iter().enumerate() {
                x[code.starts[s] + i] += z;
            }
        }
    }
    debug_assert_eq!(x.len(), n);
    x
}

/// Where one decoding stage looks: which received block, which receive
/// paths, and which two messages are still unknown there.
#[derive(Clone, Copy)]
struct StageView<'a> {
    rx_paths: &'a [(usize, usize)],
    t: usize,
    unknown1: (usize, usize),
    unknown2: (usize, usize),
}

/// Builds the per-segment pair decoders for one stage by superimposing, for
/// each unknown message, every scheduled layer that carries it toward the
/// stage's receiver. The tables depend only on the phases, not on the trial.
fn stage_decoders(
    phases: &[Vec<f64>],
    view: StageView,
    gains: &[f64],
    code: &DfCode,
    sched: &Schedule,
) -> Result<Vec<PairDecoder>> {
    let mut decoders = Vec::with_capacity(code.plan.len());
    for (s, seg) in code.plan.iter().enumerate() {
        let lo = code.starts[s];
        let mut table_a = vec![vec![Complex64::new(0.0, 0.0); seg.len]; 1 << seg.bits1];
        let mut table_b = vec![vec![Complex64::new(0.0, 0.0); seg.len]; 1 << seg.bits2];
        let mut saw_a = false;
        let mut saw_b = false;
        for &(path, tx) in view.rx_paths {
            let h: Vec<Complex64> = phases[lo..lo + seg.len]
                .iter()
                .map(|row| Complex64::from_polar(gains[path], row[path]))
                .collect();
            for (k, slot) in sched.rows[tx][view.t - 1].iter().enumerate() {
                let book = &code.books[tx][k][s];
                let table = match slot {
                    Slot::Message { encoder, block } if (*encoder, *block) == view.unknown1 => {
                        saw_a = true;
                        &mut table_a
                    }
                    Slot::Message { encoder, block } if (*encoder, *block) == view.unknown2 => {
                        saw_b = true;
                        &mut table_b
                    }
                    _ => continue,
                };
                for (w, word) in book.codewords.iter().enumerate() {
                    for (i, z) in word.iter().enumerate() {
                        table[w][i] += h[i] * z;
                    }
                }
            }
        }
        if !saw_a || !saw_b {
            return Err(Error::Argument(format!(
                "block {} does not carry both messages this stage must decode",
                view.t
            )));
        }
        decoders.push(PairDecoder::new(table_a, table_b)?);
    }
    Ok(decoders)
}

/// Jointly decodes the two unknown messages of one stage from a received
/// block, subtracting every filler and already-known layer first.
#[allow(clippy::too_many_arguments)]
fn decode_stage(
    decoders: &[PairDecoder],
    y: &[Complex64],
    phases: &[Vec<f64>],
    view: StageView,
    gains: &[f64],
    code: &DfCode,
    sched: &Schedule,
    known: &dyn Fn(usize, usize) -> u64,
) -> Result<(u64, u64)> {
    let mut parts1 = Vec::with_capacity(code.plan.len());
    let mut parts2 = Vec::with_capacity(code.plan.len());
    for (s, seg) in code.plan.iter().enumerate() {
        let lo = code.starts[s];
        let hi = lo + seg.len;
        let mut base = y[lo..hi].to_vec();
        for &(path, tx) in view.rx_paths {
            let h: Vec<Complex64> = phases[lo..hi]
                .iter()
                .map(|row| Complex64::from_polar(gains[path], row[path]))
                .collect();
            for (k, slot) in sched.rows[tx][view.t - 1].iter().enumerate() {
                let book = &code.books[tx][k][s];
                let word = match slot {
                    Slot::Filler => &book.codewords[0],
                    Slot::Message { encoder, block }
                        if (*encoder, *block) == view.unknown1
                            || (*encoder, *block) == view.unknown2 =>
                    {
                        continue
                    }
                    Slot::Message { encoder, block } => {
                        let idx = split_message(known(*encoder, *block), &code.plan, *encoder)[s];
                        &book.codewords[idx as usize]
                    }
                };
                for (i, z) in word.iter().enumerate() {
                    base[i] -= h[i] * z;
                }
            }
        }
        let (a, b) = decoders[s].decode(&base)?;
        parts1.push(a as u64);
        parts2.push(b as u64);
    }
    Ok((
        join_message(&parts1, &code.plan, 1),
        join_message(&parts2, &code.plan, 2),
    ))
}

/// Per-segment decoders for every relay stage and every destination stage,
/// shared across trials when the phases are held.
type StageDecoderCache = (Vec<Vec<PairDecoder>>, Vec<Vec<PairDecoder>>);

/// Simulates decode-and-forward source-channel transmission over a relay
/// topology, reporting relay, destination, and reconstruction error counts.
#[allow(clippy::too_many_arguments)]
pub fn simulate_marc_df(
    pmf: &JointSourcePMF,
    spec: &ChannelSpec,
    rates: (f64, f64),
    n: usize,
    blocks: usize,
    trials: u64,
    phases: &TrialPhases,
    seed: u64,
    options: &DfOptions,
) -> Result<SimOutcome> {
    spec.ensure_valid()?;
    pmf.validate()?;
    if !matches!(
        spec.topology,
        Topology::Marc | Topology::UnccMarc | Topology::UccMarc
    ) {
        return Err(Error::Argument(format!(
            "decode-and-forward simulation needs a relay topology, got {}",
            spec.topology
        )));
    }
    if blocks == 0 || blocks > MAX_BLOCKS {
        return Err(Error::Argument(format!(
            "block count must lie in 1..={MAX_BLOCKS}, got {blocks}"
        )));
    }
    if trials == 0 {
        return Err(Error::Argument("trial count must be at least 1".into()));
    }
    match phases {
        TrialPhases::WorstGrid { .. } => {
            return Err(Error::Argument(
                "worst-phase sweeps are only available on the two-sender channel".into(),
            ));
        }
        TrialPhases::Held { theta } => theta.ensure_matches(spec.topology)?,
        _ => {}
    }

    let sched = relay_df_schedule(spec.topology, blocks)?;
    let fractions = resolve_fractions(&sched, options)?;
    let code = build_df_code(pmf, spec, &sched, rates, n, seed, &fractions)?;
    let gains: Vec<f64> = spec
        .topology
        .gain_names()
        .iter()
        .map(|name| spec.gain(name))
        .collect();
    let rx_dest = spec.topology.receiver_paths()[0];
    let rx_relay = spec.topology.receiver_paths()[1];
    let relay_view = |t: usize| StageView {
        rx_paths: rx_relay,
        t,
        unknown1: (1, t),
        unknown2: (2, t),
    };
    let dest_view = |t: usize| StageView {
        rx_paths: rx_dest,
        t,
        unknown1: (1, t - 1),
        unknown2: (2, t - 1),
    };

    // Held phases admit one set of stage decoders shared by every trial, as
    // long as the cross tables behind them fit the cache budget.
    let held_cache: Option<StageDecoderCache> = match phases {
        TrialPhases::Held { theta } => {
            let per_stage: u128 = code
                .plan
                .iter()
                .map(|seg| 1u128 << (seg.bits1 + seg.bits2))
                .sum();
            if per_stage * 2 * blocks as u128 <= DECODER_CACHE_PAIR_LIMIT {
                let rows = vec![theta.phases.clone(); n];
                let relay_decoders = (1..=blocks)
                    .map(|t| stage_decoders(&rows, relay_view(t), &gains, &code, &sched))
                    .collect::<Result<Vec<_>>>()?;
                let dest_decoders = (2..=blocks + 1)
                    .map(|t| stage_decoders(&rows, dest_view(t), &gains, &code, &sched))
                    .collect::<Result<Vec<_>>>()?;
                Some((relay_decoders, dest_decoders))
            } else {
                None
            }
        }
        _ => None,
    };

    // Per-trial streams make trials independent, and the summed counts are
    // order-free, so the outcome is identical for any worker count.
    let counts = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<[u64; 4]> {
            let mut u_blocks = Vec::with_capacity(blocks);
            let mut v_blocks = Vec::with_capacity(blocks);
            let mut w1 = Vec::with_capacity(blocks);
            let mut w2 = Vec::with_capacity(blocks);
            for b in 0..blocks {
                let mut src =
                    rng::stream_rng(seed, rng::stream_id(trial, purpose::SOURCE, b as u64));
                let (u, v) = draw_source_block(pmf, n, &mut src);
                w1.push(code.code1.encode(&u)?);
                w2.push(code.code2.encode(&v)?);
                u_blocks.push(u);
                v_blocks.push(v);
            }

            let mode = match phases {
                TrialPhases::Held { theta } => PhaseMode::NonErgodic {
                    theta: theta.clone(),
                },
                TrialPhases::RandomHeld => PhaseMode::NonErgodic {
                    theta: random_trial_phases(spec.topology, seed, trial),
                },
                TrialPhases::PerSymbol => PhaseMode::ErgodicUniform,
                TrialPhases::WorstGrid { .. } => unreachable!("rejected above"),
            };

            let mut rel1 = vec![0u64; blocks];
            let mut rel2 = vec![0u64; blocks];
            let mut dest_blocks = Vec::with_capacity(blocks + 1);
            for t in 1..=blocks + 1 {
                let truth = |o: usize, b: usize| if o == 1 { w1[b - 1] } else { w2[b - 1] };
                let x1 = build_input(&code, &sched, 0, t, n, &truth);
                let x2 = build_input(&code, &sched, 1, t, n, &truth);
                let relay_est = |o: usize, b: usize| if o == 1 { rel1[b - 1] } else { rel2[b - 1] };
                let xr = build_input(&code, &sched, 2, t, n, &relay_est);
                let block = transmit(
                    spec,
                    &[x1, x2, xr],
                    &mode,
                    options.noise_scale,
                    derive_seed(seed, (trial << 8) | (0x20 + t as u64)),
                )?;
                if t <= blocks {
                    let view = relay_view(t);
                    let fresh;
                    let decoders = match &held_cache {
                        Some((relay_decoders, _)) => &relay_decoders[t - 1],
                        None => {
                            fresh =
                                stage_decoders(&block.phases_used, view, &gains, &code, &sched)?;
                            &fresh
                        }
                    };
                    let (m1, m2) = decode_stage(
                        decoders,
                        &block.outputs[1],
                        &block.phases_used,
                        view,
                        &gains,
                        &code,
                        &sched,
                        &relay_est,
                    )?;
                    rel1[t - 1] = m1;
                    rel2[t - 1] = m2;
                }
                dest_blocks.push((block.outputs[0].clone(), block.phases_used));
            }

            let mut dst1 = vec![0u64; blocks];
            let mut dst2 = vec![0u64; blocks];
            for t in (2..=blocks + 1).rev() {
                let (y, phases_used) = &dest_blocks[t - 1];
                let dest_est = |o: usize, b: usize| if o == 1 { dst1[b - 1] } else { dst2[b - 1] };
                let view = dest_view(t);
                let fresh;
                let decoders = match &held_cache {
                    Some((_, dest_decoders)) => &dest_decoders[t - 2],
                    None => {
                        fresh = stage_decoders(phases_used, view, &gains, &code, &sched)?;
                        &fresh
                    }
                };
                let (m1, m2) = decode_stage(
                    decoders,
                    y,
                    phases_used,
                    view,
                    &gains,
                    &code,
                    &sched,
                    &dest_est,
                )?;
                dst1[t - 2] = m1;
                dst2[t - 2] = m2;
            }

            let relay_err = (0..blocks).any(|b| rel1[b] != w1[b] || rel2[b] != w2[b]);
            let dest_err = (0..blocks).any(|b| dst1[b] != w1[b] || dst2[b] != w2[b]);
            let mut err = false;
            for b in 0..blocks {
                match sw_decode(dst1[b], dst2[b], pmf, &code.code1, &code.code2) {
                    Ok((u_hat, v_hat)) => {
                        if u_hat != u_blocks[b] || v_hat != v_blocks[b] {
                            err = true;
                            break;
                        }
                    }
                    Err(Error::Argument(_)) => {
                        err = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok([
                u64::from(err),
                u64::from(relay_err),
                u64::from(dest_err),
                u64::from(err && !dest_err),
            ])
        })
        .try_reduce(
            || [0u64; 4],
            |a, b| Ok([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]),
        )?;

    Ok(SimOutcome::from_counts(
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        SimConfigEcho {
            topology: spec.topology.to_string(),
            rate1: rates.0,
            rate2: rates.1,
            n,
            blocks,
            trials,
            seed,
            theta_mode: phases.describe(),
            noise_scale: options.noise_scale,
        },
    ))
}

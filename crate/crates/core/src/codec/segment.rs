//! Splits one channel block into segments so every joint decode stays within
//! the exhaustive-search budget. Message bits are spread as evenly as
//! possible, pairing one encoder's heavier segments with the other's lighter
//! ones to minimize the worst per-segment candidate count.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Joint candidate pairs allowed per segment, as bits: 2^22.
pub const PAIR_BITS_BUDGET: u32 = 22;

/// One segment of a channel block: its symbol span and the message bits each
/// encoder sends within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub len: usize,
    pub bits1: u32,
    pub bits2: u32,
}

fn even_split(total: usize, parts: usize) -> Vec<usize> {
    let base = total / parts;
    let extra = total % parts;
    (0..parts).map(|i| base + usize::from(i < extra)).collect()
}

/// Plans segments covering `n` symbols that carry `bits1` + `bits2` message
/// bits, keeping bits1_s + bits2_s <= PAIR_BITS_BUDGET in every segment.
pub fn plan_segments(n: usize, bits1: u32, bits2: u32) -> Result<Vec<Segment>> {
    if n == 0 {
        return Err(Error::Argument("block length must be at least 1".into()));
    }
    let total = bits1 as u64 + bits2 as u64;
    let mut count = (total.div_ceil(PAIR_BITS_BUDGET as u64)).max(1) as usize;
    loop {
        if count > n {
            return Err(Error::Budget(format!(
                "cannot fit {total} message bits into {n} symbols within \
                 2^{PAIR_BITS_BUDGET} candidate pairs per segment"
            )));
        }
        let b1 = even_split(bits1 as usize, count);
        let b2 = even_split(bits2 as usize, count);
        if (0..count).all(|i| b1[i] + b2[count - 1 - i] <= PAIR_BITS_BUDGET as usize) {
            let lens = even_split(n, count);
            return Ok((0..count)
                .map(|i| Segment {
                    len: lens[i],
                    bits1: b1[i] as u32,
                    bits2: b2[count - 1 - i] as u32,
                })
                .collect());
        }
        count += 1;
    }
}

/// Splits a message index into per-segment sub-indices for one encoder
/// (owner 1 uses bits1, owner 2 uses bits2), least-significant bits first.
pub fn split_message(w: u64, plan: &[Segment], owner: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(plan.len());
    let mut offset = 0u32;
    for seg in plan {
        let bits = if owner == 1 { seg.bits1 } else { seg.bits2 };
        out.push((w >> offset) & ((1u64 << bits) - 1));
        offset += bits;
    }
    out
}

/// Inverse of [`split_message`].
pub fn join_message(parts: &[u64], plan: &[Segment], owner: usize) -> u64 {
    let mut w = 0u64;
    let mut offset = 0u32;
    for (part, seg) in parts.iter().zip(plan) {
        let bits = if owner == 1 { seg.bits1 } else { seg.bits2 };
        w |= (part & ((1u64 << bits) - 1)) << offset;
        offset += bits;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn plans_cover_the_block_and_the_bits() {
        for (n, bits1, bits2) in [
            (24, 18, 19),
            (24, 22, 22),
            (8, 8, 8),
            (16, 16, 16),
            (10, 0, 0),
        ] {
            let plan = plan_segments(n, bits1, bits2).unwrap();
            assert_eq!(plan.iter().map(|s| s.len).sum::<usize>(), n);
            assert_eq!(plan.iter().map(|s| s.bits1).sum::<u32>(), bits1);
            assert_eq!(plan.iter().map(|s| s.bits2).sum::<u32>(), bits2);
            for seg in &plan {
                assert!(seg.bits1 + seg.bits2 <= PAIR_BITS_BUDGET);
                assert!(seg.len >= 1);
            }
        }
    }

    #[test]
    fn small_payloads_stay_in_one_segment() {
        let plan = plan_segments(8, 8, 8).unwrap();
        assert_eq!(plan.len(), 1);
        assert_eq!(
            plan[0],
            Segment {
                len: 8,
                bits1: 8,
                bits2: 8
            }
        );
    }

    #[test]
    fn oversized_payloads_are_refused() {
        assert!(matches!(plan_segments(2, 30, 30), Err(Error::Budget(_))));
        assert!(matches!(plan_segments(0, 1, 1), Err(Error::Argument(_))));
    }

    #[test]
    fn message_splitting_round_trips() {
        let plan = plan_segments(24, 18, 19).unwrap();
        for w in [0u64, 1, 0x2ffff, (1 << 18) - 1] {
            let parts = split_message(w, &plan, 1);
            assert_eq!(join_message(&parts, &plan, 1), w);
        }
        for w in [0u64, 5, (1 << 19) - 1] {
            let parts = split_message(w, &plan, 2);
            assert_eq!(join_message(&parts, &plan, 2), w);
        }
    }

    proptest! {
        #[test]
        fn planning_respects_budget_and_totals(
            n in 1usize..64,
            bits1 in 0u32..40,
            bits2 in 0u32..40,
        ) {
            match plan_segments(n, bits1, bits2) {
                Ok(plan) => {
                    prop_assert_eq!(plan.iter().map(|s| s.len).sum::<usize>(), n);
                    prop_assert_eq!(plan.iter().map(|s| s.bits1).sum::<u32>(), bits1);
                    prop_assert_eq!(plan.iter().map(|s| s.bits2).sum::<u32>(), bits2);
                    for seg in &plan {
                        prop_assert!(seg.bits1 + seg.bits2 <= PAIR_BITS_BUDGET);
                        prop_assert!(seg.len >= 1);
                    }
                }
                Err(Error::Budget(_)) => {
                    // Only legitimate when even one-bit-per-symbol segments
                    // could not satisfy the budget.
                    prop_assert!(bits1 as u64 + bits2 as u64 > PAIR_BITS_BUDGET as u64 * n as u64);
                }
                Err(other) => return Err(TestCaseError::fail(format!("{other}"))),
            }
        }
    }
}

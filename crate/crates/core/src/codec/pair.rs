//! Exhaustive maximum-likelihood decoding of a superposition of two unknown
//! codewords under additive Gaussian noise. The pair search expands the
//! squared distance around a precomputed cross-correlation table, dropping
//! the common `|y|^2` offset, so each candidate pair costs a constant number
//! of operations per received block without changing the argmin or its tie
//! order. Building a decoder costs one pass over all pairs, which pays off
//! whenever it decodes more than one block.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Candidate pairs allowed in one exhaustive decode: 2^22.
pub const DECODE_PAIR_BUDGET: u128 = 1 << 22;

/// Total candidate pairs a simulation may hold in prebuilt decoders at once;
/// the cross tables behind this many pairs occupy about 256 MiB.
pub(crate) const DECODER_CACHE_PAIR_LIMIT: u128 = 1 << 25;

/// Joint minimum-distance decoder over all pairs from two candidate tables.
/// Ties resolve to the lowest `(first, second)` index pair.
#[derive(Debug, Clone)]
pub struct PairDecoder {
    first: Vec<Vec<Complex64>>,
    second: Vec<Vec<Complex64>>,
    first_energy: Vec<f64>,
    second_energy: Vec<f64>,
    /// `2 Re<first[a], second[b]>`, row-major in `a`.
    cross: Vec<f64>,
    n: usize,
}

fn energies(words: &[Vec<Complex64>]) -> Vec<f64> {
    words
        .iter()
        .map(|w| w.iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

impl PairDecoder {
    /// Builds a decoder for `|y - first[a] - second[b]|^2` minimization.
    pub fn new(first: Vec<Vec<Complex64>>, second: Vec<Vec<Complex64>>) -> Result<Self> {
        if first.is_empty() || second.is_empty() {
            return Err(Error::Argument("candidate tables must be non-empty".into()));
        }
        let n = first[0].len();
        if first.iter().chain(second.iter()).any(|w| w.len() != n) {
            return Err(Error::Dimension(
                "all candidate codewords must share one length".into(),
            ));
        }
        let pairs = first.len() as u128 * second.len() as u128;
        if pairs > DECODE_PAIR_BUDGET {
            return Err(Error::Budget(format!(
                "{} x {} candidate pairs exceed the {DECODE_PAIR_BUDGET} decode limit",
                first.len(),
                second.len()
            )));
        }
        let mut cross = Vec::with_capacity(pairs as usize);
        for wa in &first {
            for wb in &second {
                let mut dot = 0.0;
                for t in 0..n {
                    dot += wa[t].re * wb[t].re + wa[t].im * wb[t].im;
                }
                cross.push(2.0 * dot);
            }
        }
        Ok(Self {
            first_energy: energies(&first),
            second_energy: energies(&second),
            first,
            second,
            cross,
            n,
        })
    }

    /// Returns the indices minimizing `|y - first[a] - second[b]|^2`.
    pub fn decode(&self, y: &[Complex64]) -> Result<(usize, usize)> {
        if y.len() != self.n {
            return Err(Error::Dimension(format!(
                "received block has {} symbols, candidates have {}",
                y.len(),
                self.n
            )));
        }
        // |y - a - b|^2 - |y|^2 = (E_a - 2 Re<y,a>) + (E_b - 2 Re<y,b>)
        //                       + 2 Re<a,b>; the dropped |y|^2 is common to
        // every pair, so the argmin and tie order are those of the full
        // distance.
        let shifted = |words: &[Vec<Complex64>], energy: &[f64]| -> Vec<f64> {
            words
                .iter()
                .zip(energy)
                .map(|(w, e)| {
                    let mut dot = 0.0;
                    for t in 0..self.n {
                        dot += y[t].re * w[t].re + y[t].im * w[t].im;
                    }
                    e - 2.0 * dot
                })
                .collect()
        };
        let alpha = shifted(&self.first, &self.first_energy);
        let beta = shifted(&self.second, &self.second_energy);
        let mut best = (0usize, 0usize);
        let mut best_d = f64::INFINITY;
        for (a, &da) in alpha.iter().enumerate() {
            let row = &self.cross[a * beta.len()..(a + 1) * beta.len()];
            for (b, &db) in beta.iter().enumerate() {
                let d = da + db + row[b];
                if d < best_d {
                    best_d = d;
                    best = (a, b);
                }
            }
        }
        Ok(best)
    }
}

/// Scales and rotates every codeword by `gain * exp(j * theta)`.
pub(crate) fn rotate_constant(
    words: &[Vec<Complex64>],
    gain: f64,
    theta: f64,
) -> Vec<Vec<Complex64>> {
    let h = Complex64::from_polar(gain, theta);
    words
        .iter()
        .map(|w| w.iter().map(|z| h * z).collect())
        .collect()
}

/// Applies a per-symbol rotation `gain * exp(j * thetas[t])` to every
/// codeword.
pub(crate) fn rotate_per_symbol(
    words: &[Vec<Complex64>],
    gain: f64,
    thetas: &[f64],
) -> Vec<Vec<Complex64>> {
    words
        .iter()
        .map(|w| {
            w.iter()
                .zip(thetas)
                .map(|(z, &th)| Complex64::from_polar(gain, th) * z)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::codebook::GaussianCodebook;

    fn add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    #[test]
    fn noiseless_superpositions_decode_exactly() {
        let cb1 = GaussianCodebook::generate(6, 16, 1.0, 3, 0).unwrap();
        let cb2 = GaussianCodebook::generate(6, 16, 1.5, 3, 1).unwrap();
        let dec = PairDecoder::new(cb1.codewords.clone(), cb2.codewords.clone()).unwrap();
        for (a, b) in [(0usize, 0usize), (3, 11), (15, 15), (7, 2)] {
            let y = add(&cb1.codewords[a], &cb2.codewords[b]);
            assert_eq!(dec.decode(&y).unwrap(), (a, b));
        }
    }

    #[test]
    fn exact_ties_resolve_to_the_lowest_pair() {
        // Duplicate entries make several pairs exactly equidistant; the scan
        // order must pick the smallest (first, second).
        let w = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)];
        let z = vec![Complex64::new(0.5, 0.5), Complex64::new(2.0, 0.0)];
        let dec = PairDecoder::new(vec![w.clone(), w.clone()], vec![z.clone(), z.clone()]).unwrap();
        let y = add(&w, &z);
        assert_eq!(dec.decode(&y).unwrap(), (0, 0));
    }

    #[test]
    fn single_candidate_tables_always_answer_zero() {
        let w = vec![Complex64::new(0.3, 0.4)];
        let dec = PairDecoder::new(vec![w.clone()], vec![w]).unwrap();
        let y = vec![Complex64::new(-9.0, 2.0)];
        assert_eq!(dec.decode(&y).unwrap(), (0, 0));
    }

    #[test]
    fn energy_expansion_matches_direct_distance() {
        let cb1 = GaussianCodebook::generate(5, 8, 1.0, 9, 0).unwrap();
        let cb2 = GaussianCodebook::generate(5, 8, 2.0, 9, 1).unwrap();
        let dec = PairDecoder::new(cb1.codewords.clone(), cb2.codewords.clone()).unwrap();
        let y: Vec<Complex64> = (0..5)
            .map(|t| Complex64::new(0.7 * t as f64 - 1.0, (t as f64).sin()))
            .collect();
        let fast = dec.decode(&y).unwrap();
        let mut slow = (0, 0);
        let mut slow_d = f64::INFINITY;
        for a in 0..8 {
            for b in 0..8 {
                let d: f64 = (0..5)
                    .map(|t| (y[t] - cb1.codewords[a][t] - cb2.codewords[b][t]).norm_sqr())
                    .sum();
                if d < slow_d {
                    slow_d = d;
                    slow = (a, b);
                }
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn rotations_preserve_decodability() {
        let cb1 = GaussianCodebook::generate(6, 8, 1.0, 21, 0).unwrap();
        let cb2 = GaussianCodebook::generate(6, 8, 1.0, 21, 1).unwrap();
        let thetas: Vec<f64> = (0..6).map(|t| 0.9 * t as f64).collect();
        let r1 = rotate_constant(&cb1.codewords, 2.0, 1.1);
        let r2 = rotate_per_symbol(&cb2.codewords, 0.5, &thetas);
        let dec = PairDecoder::new(r1.clone(), r2.clone()).unwrap();
        let y = add(&r1[5], &r2[2]);
        assert_eq!(dec.decode(&y).unwrap(), (5, 2));
    }

    #[test]
    fn oversized_searches_are_refused() {
        let word = vec![Complex64::new(1.0, 0.0)];
        let big = vec![word.clone(); 1 << 12];
        let bigger = vec![word.clone(); (1 << 10) + 1];
        assert!(matches!(
            PairDecoder::new(big, bigger),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            PairDecoder::new(vec![], vec![word.clone()]),
            Err(Error::Argument(_))
        ));
        let short = vec![Complex64::new(0.0, 0.0); 2];
        assert!(matches!(
            PairDecoder::new(vec![word.clone()], vec![short]),
            Err(Error::Dimension(_))
        ));
        let dec = PairDecoder::new(vec![word.clone()], vec![word]).unwrap();
        assert!(matches!(
            dec.decode(&[Complex64::new(0.0, 0.0); 3]),
            Err(Error::Dimension(_))
        ));
    }
}

//! Random binning of source sequences and joint typical-pair decoding. Bins
//! are computed by XORing per-position random table entries, which makes the
//! binary map affine over GF(2); preimages are then affine subspaces that can
//! be enumerated by Gaussian elimination instead of scanning the whole
//! sequence space.

use crate::error::{Error, Result};
use crate::rng::{self, purpose};
use crate::source::JointSourcePMF;
use rand::Rng;

/// Joint candidate pairs allowed in one bin-pair decode: 2^26.
pub const SW_PAIR_BUDGET: u128 = 1 << 26;

/// Sequences allowed in one exhaustive preimage scan: 2^26.
const SCAN_BUDGET: u128 = 1 << 26;

/// Free GF(2) dimensions allowed when enumerating a preimage: 2^26 members.
const FREE_BITS_BUDGET: u32 = 26;

fn sequence_count(alphabet: usize, n: usize) -> Option<u128> {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.checked_mul(alphabet as u128)?;
    }
    Some(total)
}

/// A random binning code mapping length-`n` sequences over `0..alphabet` to
/// `2^bits` bins. At full rate the map is the positional mixed-radix index,
/// so it is injective and decoding is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct BinningCode {
    pub n: usize,
    pub rate: f64,
    pub alphabet: usize,
    pub bits: u32,
    table: Vec<u64>,
    injective: bool,
}

impl BinningCode {
    /// Builds a code with `ceil(n * rate)` bin-index bits, seeded
    /// deterministically.
    pub fn new(n: usize, rate: f64, alphabet: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("sequence length must be at least 1".into()));
        }
        if alphabet < 2 {
            return Err(Error::Argument(format!(
                "alphabet size must be at least 2, got {alphabet}"
            )));
        }
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::Argument(format!(
                "rate must be finite and nonnegative, got {rate}"
            )));
        }
        // Subtracting a hair before ceil keeps n * rate that is an integer
        // up to rounding from gaining a spurious extra bit.
        let bits = (n as f64 * rate - 1e-9).ceil().max(0.0) as u32;
        if bits > 63 {
            return Err(Error::Budget(format!(
                "{bits} bin-index bits exceed the 63-bit limit"
            )));
        }
        let injective = match sequence_count(alphabet, n) {
            Some(count) => count <= 1u128 << bits,
            None => false,
        };
        let mut table_rng = rng::stream_rng(seed, rng::stream_id(0, purpose::BINNING, 0));
        let table = (0..n * alphabet).map(|_| table_rng.gen::<u64>()).collect();
        Ok(Self {
            n,
            rate,
            alphabet,
            bits,
            table,
            injective,
        })
    }

    /// Number of bins, `2^bits`.
    pub fn bins(&self) -> u64 {
        1u64 << self.bits
    }

    /// True when distinct sequences always land in distinct bins.
    pub fn is_injective(&self) -> bool {
        self.injective
    }

    fn mask(&self) -> u64 {
        if self.bits == 0 {
            0
        } else {
            u64::MAX >> (64 - self.bits)
        }
    }

    fn check_sequence(&self, seq: &[usize]) -> Result<()> {
        if seq.len() != self.n {
            return Err(Error::Dimension(format!(
                "sequence has {} symbols, code expects {}",
                seq.len(),
                self.n
            )));
        }
        if let Some(&s) = seq.iter().find(|&&s| s >= self.alphabet) {
            return Err(Error::Argument(format!(
                "symbol {s} is outside the alphabet 0..{}",
                self.alphabet
            )));
        }
        Ok(())
    }

    /// Maps a sequence to its bin index.
    pub fn encode(&self, seq: &[usize]) -> Result<u64> {
        self.check_sequence(seq)?;
        if self.injective {
            let mut idx: u64 = 0;
            for &s in seq.iter().rev() {
                idx = idx * self.alphabet as u64 + s as u64;
            }
            return Ok(idx);
        }
        let mut bin = 0u64;
        for (i, &s) in seq.iter().enumerate() {
            bin ^= self.table[i * self.alphabet + s];
        }
        Ok(bin & self.mask())
    }

    /// Enumerates every sequence mapping to `bin` (possibly none).
    pub fn preimage(&self, bin: u64) -> Result<Vec<Vec<usize>>> {
        if self.bits < 64 && bin >> self.bits != 0 {
            return Err(Error::Argument(format!(
                "bin {bin} is outside the {} bins of this code",
                self.bins()
            )));
        }
        if self.injective {
            let count = sequence_count(self.alphabet, self.n).unwrap();
            if bin as u128 >= count {
                return Ok(Vec::new());
            }
            let mut rem = bin;
            let seq = (0..self.n)
                .map(|_| {
                    let s = (rem % self.alphabet as u64) as usize;
                    rem /= self.alphabet as u64;
                    s
                })
                .collect();
            return Ok(vec![seq]);
        }
        if self.alphabet == 2 {
            return self.preimage_binary(bin);
        }
        let count = sequence_count(self.alphabet, self.n)
            .filter(|&c| c <= SCAN_BUDGET)
            .ok_or_else(|| {
                Error::Budget(format!(
                    "scanning {}^{} sequences exceeds the {SCAN_BUDGET} limit",
                    self.alphabet, self.n
                ))
            })?;
        let mut out = Vec::new();
        let mut seq = vec![0usize; self.n];
        for _ in 0..count {
            if self.encode(&seq)? == bin {
                out.push(seq.clone());
            }
            for s in seq.iter_mut() {
                *s += 1;
                if *s < self.alphabet {
                    break;
                }
                *s = 0;
            }
        }
        Ok(out)
    }

    /// Binary preimage via GF(2) elimination: the bin of a binary sequence x
    /// is c ^ (XOR of a_i over set bits), so solutions of A x = bin ^ c form
    /// an affine subspace enumerated from its free coordinates.
    fn preimage_binary(&self, bin: u64) -> Result<Vec<Vec<usize>>> {
        debug_assert_eq!(self.alphabet, 2);
        if self.n > 64 {
            return Err(Error::Budget(format!(
                "binary preimage solving supports up to 64 positions, got {}",
                self.n
            )));
        }
        let mask = self.mask();
        let mut c = 0u64;
        let mut cols = Vec::with_capacity(self.n);
        for i in 0..self.n {
            c ^= self.table[i * 2];
            cols.push((self.table[i * 2] ^ self.table[i * 2 + 1]) & mask);
        }
        c &= mask;
        let b = bin ^ c;

        // rows[j] holds bit i per variable; trans[j] records which original
        // rows were XORed into row j, so the matching RHS bit is
        // parity(trans[j] & b).
        let bits = self.bits as usize;
        let mut rows: Vec<u64> = (0..bits)
            .map(|j| {
                cols.iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, col)| acc | (((col >> j) & 1) << i))
            })
            .collect();
        let mut trans: Vec<u64> = (0..bits).map(|j| 1u64 << j).collect();
        let mut pivot_vars = Vec::new();
        let mut rank = 0usize;
        for var in 0..self.n {
            let Some(p) = (rank..bits).find(|&j| (rows[j] >> var) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            trans.swap(rank, p);
            for j in 0..bits {
                if j != rank && (rows[j] >> var) & 1 == 1 {
                    rows[j] ^= rows[rank];
                    trans[j] ^= trans[rank];
                }
            }
            pivot_vars.push(var);
            rank += 1;
        }
        let parity = |x: u64| (x.count_ones() & 1) as u64;
        if (rank..bits).any(|j| parity(trans[j] & b) == 1) {
            return Ok(Vec::new());
        }
        let rhs: Vec<u64> = (0..rank).map(|j| parity(trans[j] & b)).collect();
        let free_vars: Vec<usize> = (0..self.n).filter(|v| !pivot_vars.contains(v)).collect();
        if free_vars.len() as u32 > FREE_BITS_BUDGET {
            return Err(Error::Budget(format!(
                "preimage with {} free positions exceeds the 2^{FREE_BITS_BUDGET} \
                 enumeration limit",
                free_vars.len()
            )));
        }
        let mut out = Vec::with_capacity(1usize << free_vars.len());
        for combo in 0u64..(1u64 << free_vars.len()) {
            let mut x = 0u64;
            for (k, &v) in free_vars.iter().enumerate() {
                x |= ((combo >> k) & 1) << v;
            }
            for r in 0..rank {
                x |= (parity(rows[r] & x) ^ rhs[r]) << pivot_vars[r];
            }
            out.push((0..self.n).map(|i| ((x >> i) & 1) as usize).collect());
        }
        Ok(out)
    }
}

/// Bins one source sequence.
pub fn sw_encode(code: &BinningCode, seq: &[usize]) -> Result<u64> {
    code.encode(seq)
}

/// Jointly decodes a bin pair to the most probable candidate sequence pair
/// under the source law; exact ties resolve to the lexicographically lowest
/// pair.
pub fn sw_decode(
    bin_u: u64,
    bin_v: u64,
    pmf: &JointSourcePMF,
    code_u: &BinningCode,
    code_v: &BinningCode,
) -> Result<(Vec<usize>, Vec<usize>)> {
    pmf.validate()?;
    if code_u.n != code_v.n {
        return Err(Error::Dimension(format!(
            "codes bin different lengths: {} vs {}",
            code_u.n, code_v.n
        )));
    }
    if code_u.alphabet != pmf.alphabet_u || code_v.alphabet != pmf.alphabet_v {
        return Err(Error::Dimension(
            "code alphabets must match the source alphabets".into(),
        ));
    }
    let pre_u = code_u.preimage(bin_u)?;
    let pre_v = code_v.preimage(bin_v)?;
    if pre_u.is_empty() || pre_v.is_empty() {
        return Err(Error::Argument(
            "a bin with an empty preimage cannot be decoded".into(),
        ));
    }
    let pairs = pre_u.len() as u128 * pre_v.len() as u128;
    if pairs > SW_PAIR_BUDGET {
        return Err(Error::Budget(format!(
            "{} x {} candidate sequences exceed the {SW_PAIR_BUDGET} pair limit",
            pre_u.len(),
            pre_v.len()
        )));
    }
    let log_p: Vec<Vec<f64>> = (0..pmf.alphabet_u)
        .map(|u| {
            (0..pmf.alphabet_v)
                .map(|v| {
                    let p = pmf.prob(u, v);
                    if p > 0.0 {
                        p.ln()
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect()
        })
        .collect();
    let binary = pmf.alphabet_u == 2
        && pmf.alphabet_v == 2
        && code_u.n <= 64
        && log_p.iter().flatten().all(|l| l.is_finite());
    let (iu, iv) = if binary {
        best_binary_pair(&pre_u, &pre_v, code_u.n, &log_p)
    } else {
        best_generic_pair(&pre_u, &pre_v, &log_p)
    };
    Ok((pre_u[iu].clone(), pre_v[iv].clone()))
}

fn best_generic_pair(
    pre_u: &[Vec<usize>],
    pre_v: &[Vec<usize>],
    log_p: &[Vec<f64>],
) -> (usize, usize) {
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, u) in pre_u.iter().enumerate() {
        for (j, v) in pre_v.iter().enumerate() {
            let ll: f64 = u.iter().zip(v).map(|(&a, &b)| log_p[a][b]).sum();
            let better = match &best {
                None => true,
                Some((bll, bi, bj)) => {
                    ll > *bll || (ll == *bll && (u, v) < (&pre_u[*bi], &pre_v[*bj]))
                }
            };
            if better {
                best = Some((ll, i, j));
            }
        }
    }
    let (_, i, j) = best.expect("preimages are non-empty");
    (i, j)
}

/// Binary candidates pack into bit masks with position 0 highest, so mask
/// order equals sequence order and the log-likelihood becomes affine in
/// |u|, |v|, and |u & v|: one popcount per pair instead of a length-n scan.
fn best_binary_pair(
    pre_u: &[Vec<usize>],
    pre_v: &[Vec<usize>],
    n: usize,
    log_p: &[Vec<f64>],
) -> (usize, usize) {
    let pack = |seq: &Vec<usize>| seq.iter().fold(0u64, |acc, &s| (acc << 1) | s as u64);
    let mu: Vec<u64> = pre_u.iter().map(&pack).collect();
    let mv: Vec<u64> = pre_v.iter().map(&pack).collect();
    let l00 = log_p[0][0];
    let per_u = log_p[1][0] - l00;
    let per_v = log_p[0][1] - l00;
    let per_both = log_p[1][1] - log_p[1][0] - log_p[0][1] + l00;
    let base = n as f64 * l00;
    let v_terms: Vec<f64> = mv.iter().map(|v| per_v * v.count_ones() as f64).collect();

    let mut best = f64::NEG_INFINITY;
    let mut arg = (0usize, 0usize);
    let mut arg_masks = (u64::MAX, u64::MAX);
    for (i, &u) in mu.iter().enumerate() {
        let u_term = base + per_u * u.count_ones() as f64;
        for (j, &v) in mv.iter().enumerate() {
            let ll = u_term + v_terms[j] + per_both * (u & v).count_ones() as f64;
            if ll > best || (ll == best && (u, v) < arg_masks) {
                best = ll;
                arg = (i, j);
                arg_masks = (u, v);
            }
        }
    }
    arg
}

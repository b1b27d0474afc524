//! Correlated memoryless source model: finite-alphabet joint PMFs and their
//! entropy quantities, all in bits (base-2 logarithms, 0*log0 = 0).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Sum-to-one check tolerance (absolute).
pub const PMF_SUM_TOL: f64 = 1e-12;
/// Entries below this are treated as exact zeros in entropy sums.
pub const PMF_ZERO_TOL: f64 = 1e-15;

/// Joint distribution p(u, v) over alphabets indexed 0..|U|-1 and 0..|V|-1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSourcePMF {
    /// |U|, number of rows of `probs`.
    pub alphabet_u: usize,
    /// |V|, number of columns of `probs`.
    pub alphabet_v: usize,
    /// Probability mass, `probs[u][v]`; entries >= 0, summing to 1
    /// within 1e-12 absolute.
    pub probs: Vec<Vec<f64>>,
}

impl JointSourcePMF {
    /// Builds and validates a PMF from its mass matrix.
    pub fn new(probs: Vec<Vec<f64>>) -> Result<Self> {
        let alphabet_u = probs.len();
        let alphabet_v = probs.first().map_or(0, |row| row.len());
        let pmf = Self {
            alphabet_u,
            alphabet_v,
            probs,
        };
        pmf.validate()?;
        Ok(pmf)
    }

    /// Checks every invariant, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        if self.alphabet_u == 0 || self.alphabet_v == 0 {
            return Err(Error::Validation("alphabet sizes must be positive".into()));
        }
        if self.probs.len() != self.alphabet_u {
            return Err(Error::Validation(format!(
                "probs has {} rows, alphabet_u is {}",
                self.probs.len(),
                self.alphabet_u
            )));
        }
        for (u, row) in self.probs.iter().enumerate() {
            if row.len() != self.alphabet_v {
                return Err(Error::Validation(format!(
                    "probs row {} has {} entries, alphabet_v is {}",
                    u,
                    row.len(),
                    self.alphabet_v
                )));
            }
            for (v, &p) in row.iter().enumerate() {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::Validation(format!(
                        "probability entry ({u},{v}) must be finite and nonnegative, got {p}"
                    )));
                }
            }
        }
        let sum: f64 = self.probs.iter().flatten().sum();
        if (sum - 1.0).abs() > PMF_SUM_TOL {
            return Err(Error::Validation(format!(
                "probability mass must sum to 1 within {PMF_SUM_TOL:e}, got {sum}"
            )));
        }
        Ok(())
    }

    /// p(u, v).
    pub fn prob(&self, u: usize, v: usize) -> f64 {
        self.probs[u][v]
    }

    /// Marginal distribution of U.
    pub fn marginal_u(&self) -> Vec<f64> {
        self.probs.iter().map(|row| row.iter().sum()).collect()
    }

    /// Marginal distribution of V.
    pub fn marginal_v(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.alphabet_v];
        for row in &self.probs {
            for (v, &p) in row.iter().enumerate() {
                out[v] += p;
            }
        }
        out
    }
}

/// The five entropy quantities of a joint source, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyTriple {
    pub h_u_given_v: f64,
    pub h_v_given_u: f64,
    pub h_uv: f64,
    pub h_u: f64,
    pub h_v: f64,
}

fn entropy_term(p: f64) -> f64 {
    if p <= PMF_ZERO_TOL {
        0.0
    } else {
        -p * p.log2()
    }
}

fn entropy(dist: impl IntoIterator<Item = f64>) -> f64 {
    dist.into_iter().map(entropy_term).sum()
}

/// Computes all five entropies of a joint PMF.
///
/// Conditionals are computed as differences (H(U|V) = H(U,V) - H(V)) so the
/// chain-rule identities hold to within a rounding error; tiny negative
/// results from that subtraction are clamped to zero.
pub fn entropy_triple(pmf: &JointSourcePMF) -> Result<EntropyTriple> {
    pmf.validate()?;
    let h_uv = entropy(pmf.probs.iter().flatten().copied());
    let h_u = entropy(pmf.marginal_u());
    let h_v = entropy(pmf.marginal_v());
    let h_u_given_v = (h_uv - h_v).max(0.0);
    let h_v_given_u = (h_uv - h_u).max(0.0);
    Ok(EntropyTriple {
        h_u_given_v,
        h_v_given_u,
        h_uv,
        h_u,
        h_v,
    })
}

/// Doubly symmetric binary source: uniform binary marginals with
/// P[U != V] = `crossover`.
pub fn make_dsbs(crossover: f64) -> Result<JointSourcePMF> {
    if !(0.0..=1.0).contains(&crossover) || !crossover.is_finite() {
        return Err(Error::Validation(format!(
            "crossover must lie in [0, 1], got {crossover}"
        )));
    }
    let same = (1.0 - crossover) / 2.0;
    let diff = crossover / 2.0;
    JointSourcePMF::new(vec![vec![same, diff], vec![diff, same]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn triple(pmf: &JointSourcePMF) -> EntropyTriple {
        entropy_triple(pmf).unwrap()
    }

    #[test]
    fn perfectly_correlated_binary() {
        let t = triple(&make_dsbs(0.0).unwrap());
        assert_eq!(
            (t.h_u_given_v, t.h_v_given_u, t.h_uv, t.h_u, t.h_v),
            (0.0, 0.0, 1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn independent_uniform_binary() {
        let pmf = JointSourcePMF::new(vec![vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        let t = triple(&pmf);
        assert_eq!(
            (t.h_u_given_v, t.h_v_given_u, t.h_uv, t.h_u, t.h_v),
            (1.0, 1.0, 2.0, 1.0, 1.0)
        );
    }

    #[test]
    fn dsbs_011_entropies() {
        let t = triple(&make_dsbs(0.11).unwrap());
        // Direct 4-atom summation: H(U,V) = 1 + h2(0.11), H(U|V) = h2(0.11).
        let h2 = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        assert_abs_diff_eq!(t.h_u_given_v, h2(0.11), epsilon = 1e-12);
        assert_abs_diff_eq!(t.h_v_given_u, h2(0.11), epsilon = 1e-12);
        assert_abs_diff_eq!(t.h_uv, 1.0 + h2(0.11), epsilon = 1e-12);
        assert!((t.h_u_given_v - 0.4999).abs() < 1e-4);
        assert!((t.h_uv - 1.4999).abs() < 1e-4);
    }

    #[test]
    fn dsbs_entries() {
        let pmf = make_dsbs(0.11).unwrap();
        assert_eq!(pmf.probs, vec![vec![0.445, 0.055], vec![0.055, 0.445]]);
        assert_eq!(
            make_dsbs(0.0).unwrap().probs,
            vec![vec![0.5, 0.0], vec![0.0, 0.5]]
        );
        assert_eq!(
            make_dsbs(1.0).unwrap().probs,
            vec![vec![0.0, 0.5], vec![0.5, 0.0]]
        );
    }

    #[test]
    fn dsbs_rejects_out_of_range() {
        assert!(make_dsbs(-0.1).is_err());
        assert!(make_dsbs(1.1).is_err());
        assert!(make_dsbs(f64::NAN).is_err());
    }

    #[test]
    fn invalid_pmfs_name_the_violation() {
        let err = JointSourcePMF::new(vec![vec![0.5, -0.5], vec![0.5, 0.5]]).unwrap_err();
        assert!(err.to_string().contains("nonnegative"), "{err}");
        let err = JointSourcePMF::new(vec![vec![0.5, 0.4]]).unwrap_err();
        assert!(err.to_string().contains("sum to 1"), "{err}");
    }

    #[test]
    fn consistency_identities() {
        let pmf =
            JointSourcePMF::new(vec![vec![0.31, 0.04, 0.12], vec![0.05, 0.22, 0.26]]).unwrap();
        let t = triple(&pmf);
        assert!(t.h_u_given_v >= 0.0 && t.h_u_given_v <= t.h_u + 1e-9);
        assert!(t.h_v_given_u >= 0.0 && t.h_v_given_u <= t.h_v + 1e-9);
        assert!(t.h_u <= t.h_uv + 1e-9 && t.h_v <= t.h_uv + 1e-9);
        assert_abs_diff_eq!(t.h_uv, t.h_u_given_v + t.h_v, epsilon = 1e-9);
        assert_abs_diff_eq!(t.h_uv, t.h_v_given_u + t.h_u, epsilon = 1e-9);
        assert!(t.h_uv <= t.h_u + t.h_v + 1e-9);
    }

    #[test]
    fn dsbs_crossover_symmetry() {
        for p in [0.0, 0.11, 0.3, 0.5] {
            let a = triple(&make_dsbs(p).unwrap());
            let b = triple(&make_dsbs(1.0 - p).unwrap());
            assert_abs_diff_eq!(a.h_uv, b.h_uv, epsilon = 1e-12);
            assert_abs_diff_eq!(a.h_u_given_v, b.h_u_given_v, epsilon = 1e-12);
            assert_abs_diff_eq!(a.h_v_given_u, b.h_v_given_u, epsilon = 1e-12);
        }
    }
}

//! Adversarial-phase minimization of Gaussian mutual information.
//!
//! For jointly Gaussian inputs with correlation matrix rho, the output of a
//! phase-rotated sum channel V = sum_i g_i e^{j theta_i} X_i + Z is Gaussian,
//! so the mutual information is log2(sigma_v_sq / N). An adversary choosing
//! the phases can always cancel whatever the correlation contributes, which
//! is why independent inputs maximize the minimax value. This module
//! evaluates the objective, minimizes it (closed forms where available,
//! grid-seeded coordinate descent otherwise), verifies independence
//! optimality over sampled correlation matrices, and computes ergodic-phase
//! averages plus a discrete-constellation Monte-Carlo baseline.

use crate::channel::{wrap_angle, PhaseVector};
use crate::error::{Error, Result};
use crate::rng::{complex_gaussian, purpose, stream_id, stream_rng, uniform_angle};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI, TAU};

/// Tolerance for the Hermitian, unit-diagonal, and |rho| <= 1 checks.
const MATRIX_TOL: f64 = 1e-12;
/// Eigenvalue floor for the positive-semidefinite check.
const PSD_TOL: f64 = -1e-9;
/// A descent sweep stops once it improves the objective by less than this.
const SWEEP_TOL_BITS: f64 = 1e-12;
/// Number of best grid cells used as descent starting points.
const DESCENT_STARTS: usize = 8;
/// Refusal threshold for grid enumeration (grid_points^(m-1) cells).
const GRID_CELL_BUDGET: u64 = 1 << 26;

/// Jointly Gaussian input description: per-branch gains and powers, noise
/// power, and the m x m complex correlation matrix (row-major) defined by
/// E[X_i conj(X_j)] = rho_ij sqrt(P_i P_j).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianInputSpec {
    pub gains: Vec<f64>,
    pub powers: Vec<f64>,
    /// Noise power N, watts; the noise is circularly symmetric with N/2 per
    /// real component.
    pub noise: f64,
    /// Row-major m x m correlation matrix with unit diagonal.
    pub rho: Vec<Complex64>,
}

impl GaussianInputSpec {
    /// Independent inputs: identity correlation.
    pub fn independent(gains: Vec<f64>, powers: Vec<f64>, noise: f64) -> Result<Self> {
        let m = gains.len();
        let mut rho = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..m {
            rho[i * m + i] = Complex64::new(1.0, 0.0);
        }
        Self::with_rho(gains, powers, noise, rho)
    }

    /// Builds and validates a spec with an explicit correlation matrix.
    pub fn with_rho(
        gains: Vec<f64>,
        powers: Vec<f64>,
        noise: f64,
        rho: Vec<Complex64>,
    ) -> Result<Self> {
        let spec = Self {
            gains,
            powers,
            noise,
            rho,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Branch count m.
    pub fn m(&self) -> usize {
        self.gains.len()
    }

    /// True when every off-diagonal correlation is exactly zero.
    pub fn is_independent(&self) -> bool {
        let m = self.m();
        (0..m).all(|i| {
            (0..m).all(|j| {
                let r = self.rho[i * m + j];
                i == j || (r.re == 0.0 && r.im == 0.0)
            })
        })
    }

    /// Checks dimensions, ranges, Hermitian symmetry, the unit diagonal,
    /// |rho_ij| <= 1, and positive semidefiniteness within tolerance.
    pub fn validate(&self) -> Result<()> {
        let m = self.m();
        if m == 0 {
            return Err(Error::Validation("at least one branch is required".into()));
        }
        if self.powers.len() != m {
            return Err(Error::Dimension(format!(
                "{} gains but {} powers",
                m,
                self.powers.len()
            )));
        }
        if self.rho.len() != m * m {
            return Err(Error::Dimension(format!(
                "correlation matrix must be {m}x{m}, got {} entries",
                self.rho.len()
            )));
        }
        for (i, &g) in self.gains.iter().enumerate() {
            if g < 0.0 || !g.is_finite() {
                return Err(Error::Validation(format!(
                    "gain {i} must be nonnegative and finite, got {g}"
                )));
            }
        }
        for (i, &p) in self.powers.iter().enumerate() {
            if p < 0.0 || !p.is_finite() {
                return Err(Error::Validation(format!(
                    "power {i} must be nonnegative and finite, got {p}"
                )));
            }
        }
        if self.noise <= 0.0 || !self.noise.is_finite() {
            return Err(Error::Validation(format!(
                "noise power must be positive and finite, got {}",
                self.noise
            )));
        }
        for i in 0..m {
            let d = self.rho[i * m + i];
            if (d.re - 1.0).abs() > MATRIX_TOL || d.im.abs() > MATRIX_TOL {
                return Err(Error::Validation(format!(
                    "correlation diagonal entry {i} must be 1, got {d}"
                )));
            }
            for j in 0..m {
                let r = self.rho[i * m + j];
                if !r.re.is_finite() || !r.im.is_finite() {
                    return Err(Error::Validation(format!(
                        "correlation entry ({i},{j}) must be finite"
                    )));
                }
                if r.norm() > 1.0 + MATRIX_TOL {
                    return Err(Error::Validation(format!(
                        "correlation entry ({i},{j}) has magnitude {} > 1",
                        r.norm()
                    )));
                }
                if (r - self.rho[j * m + i].conj()).norm() > MATRIX_TOL {
                    return Err(Error::Validation(format!(
                        "correlation matrix is not Hermitian at ({i},{j})"
                    )));
                }
            }
        }
        // PSD via the 2m x 2m real embedding [[Re, -Im], [Im, Re]], whose
        // spectrum duplicates the Hermitian matrix's spectrum.
        let embed = DMatrix::from_fn(2 * m, 2 * m, |r, c| {
            let entry = self.rho[(r % m) * m + (c % m)];
            match (r < m, c < m) {
                (true, true) | (false, false) => entry.re,
                (true, false) => -entry.im,
                (false, true) => entry.im,
            }
        });
        let min_eig = embed
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_TOL {
            return Err(Error::Validation(format!(
                "correlation matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(())
    }

    fn ensure_theta(&self, theta: &PhaseVector) -> Result<()> {
        if theta.len() != self.m() {
            return Err(Error::Dimension(format!(
                "phase vector has {} entries for {} branches",
                theta.len(),
                self.m()
            )));
        }
        Ok(())
    }

    /// Sum of g_i^2 P_i, folded left to right.
    fn received_power(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.m() {
            acc += self.gains[i] * self.gains[i] * self.powers[i];
        }
        acc
    }
}

/// Objective evaluation without validation; theta length must equal m.
fn sigma_raw(spec: &GaussianInputSpec, theta: &[f64]) -> f64 {
    let m = spec.m();
    let mut sigma = spec.received_power() + spec.noise;
    for i in 0..m {
        for j in (i + 1)..m {
            let r = spec.rho[i * m + j];
            if r.re == 0.0 && r.im == 0.0 {
                continue;
            }
            let amp =
                2.0 * spec.gains[i] * spec.gains[j] * (spec.powers[i] * spec.powers[j]).sqrt();
            let d = theta[i] - theta[j];
            // Re{rho e^{jd}} with rho = a + jb is a cos d - b sin d.
            sigma += amp * (r.re * d.cos() - r.im * d.sin());
        }
    }
    sigma
}

/// Output variance of V = sum g_i e^{j theta_i} X_i + Z.
pub fn sigma_v_sq(spec: &GaussianInputSpec, theta: &PhaseVector) -> Result<f64> {
    spec.validate()?;
    spec.ensure_theta(theta)?;
    Ok(sigma_raw(spec, &theta.phases))
}

/// Gaussian mutual information log2(sigma_v_sq / N), in bits.
pub fn mi_gaussian(spec: &GaussianInputSpec, theta: &PhaseVector) -> Result<f64> {
    spec.validate()?;
    spec.ensure_theta(theta)?;
    Ok((sigma_raw(spec, &theta.phases) / spec.noise).log2())
}

/// How a minimax value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimaxMethod {
    ClosedForm,
    Grid,
    Descent,
}

/// Knobs for the numeric minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimaxOptions {
    /// Grid points per free dimension (one dimension is gauge-fixed to 0).
    pub grid_points: usize,
    /// Run coordinate descent from the best grid cells.
    pub refine: bool,
}

impl Default for MinimaxOptions {
    fn default() -> Self {
        Self {
            grid_points: 64,
            refine: true,
        }
    }
}

/// Result of minimizing the Gaussian mutual information over phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxResult {
    /// Minimized mutual information, bits.
    pub value: f64,
    /// Minimizing phases; re-evaluating at them reproduces `value`.
    pub argmin_phases: PhaseVector,
    pub method: MinimaxMethod,
    /// Grid points per free dimension used, 0 on closed-form paths.
    pub grid_resolution: usize,
}

/// Minimizes mi_gaussian over the phase vector.
///
/// Exactly-zero off-diagonal correlation and m = 2 use closed forms; larger
/// problems fall back to the grid-seeded coordinate descent of
/// [`min_theta_mi_numeric`].
pub fn min_theta_mi(spec: &GaussianInputSpec, options: &MinimaxOptions) -> Result<MinimaxResult> {
    spec.validate()?;
    if spec.is_independent() {
        // Zero correlation kills every phase-bearing term: the adversary is
        // powerless and the value is the independent-input rate itself.
        return Ok(MinimaxResult {
            value: (1.0 + spec.received_power() / spec.noise).log2(),
            argmin_phases: PhaseVector {
                phases: vec![0.0; spec.m()],
            },
            method: MinimaxMethod::ClosedForm,
            grid_resolution: 0,
        });
    }
    if spec.m() == 2 {
        let (g1, g2) = (spec.gains[0], spec.gains[1]);
        let (p1, p2) = (spec.powers[0], spec.powers[1]);
        let r = spec.rho[1];
        let sigma =
            g1 * g1 * p1 + g2 * g2 * p2 + spec.noise - 2.0 * g1 * g2 * (p1 * p2).sqrt() * r.norm();
        // The cross term is |rho| cos(arg rho - theta2) under the theta1 = 0
        // gauge, minimized at theta2 = arg rho + pi.
        let theta2 = if r.norm() == 0.0 {
            0.0
        } else {
            wrap_angle(r.arg() + PI)
        };
        return Ok(MinimaxResult {
            value: (sigma / spec.noise).log2(),
            argmin_phases: PhaseVector {
                phases: vec![0.0, theta2],
            },
            method: MinimaxMethod::ClosedForm,
            grid_resolution: 0,
        });
    }
    min_theta_mi_numeric(spec, options)
}

/// Grid-seeded coordinate-descent minimizer, usable at any m.
///
/// Enumerates a gauge-fixed grid (theta_0 = 0) of grid_points per free
/// dimension, then golden-section coordinate descent from the best
/// eight cells; the returned value never exceeds any grid evaluation.
pub fn min_theta_mi_numeric(
    spec: &GaussianInputSpec,
    options: &MinimaxOptions,
) -> Result<MinimaxResult> {
    spec.validate()?;
    let m = spec.m();
    let points = options.grid_points.max(2);
    let free = m - 1;
    let cells = (points as u64)
        .checked_pow(free as u32)
        .filter(|&c| c <= GRID_CELL_BUDGET)
        .ok_or_else(|| {
            Error::Budget(format!(
                "phase grid of {points}^{free} cells exceeds {GRID_CELL_BUDGET}; lower grid_points"
            ))
        })?;
    let step = TAU / points as f64;
    // Best cells kept sorted ascending; strict inequality keeps the earliest
    // cell on ties, making the start set deterministic.
    let mut starts: Vec<(f64, Vec<f64>)> = Vec::with_capacity(DESCENT_STARTS + 1);
    let mut theta = vec![0.0; m];
    for cell in 0..cells {
        let mut rem = cell;
        for d in 0..free {
            theta[d + 1] = (rem % points as u64) as f64 * step;
            rem /= points as u64;
        }
        let sigma = sigma_raw(spec, &theta);
        if starts.len() < DESCENT_STARTS || sigma < starts.last().unwrap().0 {
            let pos = starts.partition_point(|(s, _)| *s <= sigma);
            starts.insert(pos, (sigma, theta.clone()));
            starts.truncate(DESCENT_STARTS);
        }
    }
    let (mut best_sigma, mut best_theta) = starts[0].clone();
    let grid_sigma = best_sigma;
    let grid_theta = starts[0].1.clone();
    if options.refine {
        for (_, start) in &starts {
            let mut th = start.clone();
            let sigma = coordinate_descent(spec, &mut th, points);
            if sigma < best_sigma {
                best_sigma = sigma;
                best_theta = th;
            }
        }
    }
    let wrapped: Vec<f64> = best_theta.iter().map(|&t| wrap_angle(t)).collect();
    let mut value = (sigma_raw(spec, &wrapped) / spec.noise).log2();
    let mut argmin = wrapped;
    // Guard against wrap-induced rounding ever placing the refined value
    // above the raw grid minimum.
    let grid_value = (grid_sigma / spec.noise).log2();
    if value > grid_value {
        value = grid_value;
        argmin = grid_theta;
    }
    Ok(MinimaxResult {
        value,
        argmin_phases: PhaseVector { phases: argmin },
        method: if options.refine {
            MinimaxMethod::Descent
        } else {
            MinimaxMethod::Grid
        },
        grid_resolution: points,
    })
}

/// Sweeps coordinates 1..m (0 is gauge-fixed), bracketing each 1-D slice on
/// the grid and refining by golden section, until a sweep improves the
/// objective by less than SWEEP_TOL_BITS. Returns the best sigma; theta holds
/// the matching phases.
fn coordinate_descent(spec: &GaussianInputSpec, theta: &mut [f64], points: usize) -> f64 {
    let step = TAU / points as f64;
    let mut best = sigma_raw(spec, theta);
    for _ in 0..200 {
        let sweep_start = best;
        for k in 1..theta.len() {
            let saved = theta[k];
            let mut slice_best = f64::INFINITY;
            let mut slice_idx = 0usize;
            for i in 0..points {
                theta[k] = i as f64 * step;
                let s = sigma_raw(spec, theta);
                if s < slice_best {
                    slice_best = s;
                    slice_idx = i;
                }
            }
            // The slice is a single-harmonic sinusoid, so the grid argmin
            // plus one step on each side brackets its continuous minimum.
            let lo = slice_idx as f64 * step - step;
            let hi = slice_idx as f64 * step + step;
            let refined = golden_min(spec, theta, k, lo, hi);
            let (cand_t, cand_s) = if refined <= slice_best {
                (theta[k], refined)
            } else {
                (slice_idx as f64 * step, slice_best)
            };
            if cand_s < best {
                theta[k] = cand_t;
                best = cand_s;
            } else {
                theta[k] = saved;
            }
        }
        if (sweep_start / spec.noise).log2() - (best / spec.noise).log2() < SWEEP_TOL_BITS {
            break;
        }
    }
    best
}

/// Golden-section minimization of the k-th coordinate slice on [lo, hi];
/// sets theta[k] to the best point and returns its sigma.
fn golden_min(spec: &GaussianInputSpec, theta: &mut [f64], k: usize, lo: f64, hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    fn eval(spec: &GaussianInputSpec, theta: &mut [f64], k: usize, t: f64) -> f64 {
        theta[k] = t;
        sigma_raw(spec, theta)
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = eval(spec, theta, k, c);
    let mut fd = eval(spec, theta, k, d);
    while hi - lo > 1e-11 {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = eval(spec, theta, k, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = eval(spec, theta, k, d);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = eval(spec, theta, k, mid);
    let (bt, bs) = if fc <= fd && fc <= fm {
        (c, fc)
    } else if fd <= fm {
        (d, fd)
    } else {
        (mid, fm)
    };
    theta[k] = bt;
    bs
}

/// Outcome of comparing the phase-adversarial minimum across correlation
/// matrices against the independent-input value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndependenceReport {
    /// Largest phase-adversarial minimum over the evaluated matrices.
    pub max_over_rho_of_min: f64,
    /// Minimax value of the independent (rho = 0) input.
    pub independent_value: f64,
    /// Correlation matrix attaining the maximum, row-major.
    pub witness_rho: Vec<Complex64>,
    /// Index of the witness within `values`.
    pub witness_index: usize,
    /// Phase-adversarial minimum for each evaluated matrix, in order.
    pub values: Vec<f64>,
    /// Whether the maximum is attained at rho = 0 within 1e-9 bits.
    pub max_at_independent: bool,
}

/// Samples `rho_samples` random PSD correlation matrices, always augmented
/// with the identity (rho = 0) and the all-ones rank-1 extremes, and reports
/// whether independent inputs attain the maximum minimax value.
pub fn verify_independence_optimal(
    gains: &[f64],
    powers: &[f64],
    noise: f64,
    rho_samples: usize,
    seed: u64,
) -> Result<IndependenceReport> {
    if rho_samples < 1 {
        return Err(Error::Argument("rho_samples must be at least 1".into()));
    }
    let m = gains.len();
    let mut rhos = Vec::with_capacity(rho_samples + 2);
    let mut identity = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        identity[i * m + i] = Complex64::new(1.0, 0.0);
    }
    rhos.push(identity);
    rhos.push(vec![Complex64::new(1.0, 0.0); m * m]);
    for s in 0..rho_samples {
        rhos.push(random_correlation(m, seed, s as u64));
    }
    independence_report(gains, powers, noise, &rhos)
}

/// Like [`verify_independence_optimal`] but over an explicit, unaugmented
/// list of correlation matrices.
pub fn independence_report(
    gains: &[f64],
    powers: &[f64],
    noise: f64,
    rhos: &[Vec<Complex64>],
) -> Result<IndependenceReport> {
    if rhos.is_empty() {
        return Err(Error::Argument(
            "at least one correlation matrix is required".into(),
        ));
    }
    let options = MinimaxOptions::default();
    let independent_value = min_theta_mi(
        &GaussianInputSpec::independent(gains.to_vec(), powers.to_vec(), noise)?,
        &options,
    )?
    .value;
    // Indexed parallel collection keeps the ordering, so results are
    // identical for any worker count.
    let values: Vec<f64> = rhos
        .par_iter()
        .map(|rho| {
            let spec =
                GaussianInputSpec::with_rho(gains.to_vec(), powers.to_vec(), noise, rho.clone())?;
            Ok(min_theta_mi(&spec, &options)?.value)
        })
        .collect::<Result<_>>()?;
    let mut witness_index = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[witness_index] {
            witness_index = i;
        }
    }
    let max_over_rho_of_min = values[witness_index];
    Ok(IndependenceReport {
        max_over_rho_of_min,
        independent_value,
        witness_rho: rhos[witness_index].clone(),
        witness_index,
        values,
        max_at_independent: max_over_rho_of_min <= independent_value + 1e-9,
    })
}

/// Random unit-diagonal PSD correlation matrix from a seeded complex factor:
/// C = F F^H normalized by its diagonal.
fn random_correlation(m: usize, seed: u64, index: u64) -> Vec<Complex64> {
    let mut rng = stream_rng(seed, stream_id(index, purpose::RHO, 0));
    loop {
        let f: Vec<Complex64> = (0..m * m)
            .map(|_| complex_gaussian(&mut rng, 1.0))
            .collect();
        let mut c = vec![Complex64::new(0.0, 0.0); m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..m {
                    acc += f[i * m + k] * f[j * m + k].conj();
                }
                c[i * m + j] = acc;
            }
        }
        let diag: Vec<f64> = (0..m).map(|i| c[i * m + i].re).collect();
        if diag.iter().any(|&d| d < 1e-9) {
            continue;
        }
        for i in 0..m {
            for j in 0..m {
                c[i * m + j] = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    c[i * m + j] / (diag[i] * diag[j]).sqrt()
                };
            }
        }
        return c;
    }
}

/// A numeric estimate with an optional Monte-Carlo standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// Estimated value, bits.
    pub value: f64,
    /// Standard error; present only for Monte-Carlo estimates of 2+ samples.
    pub stderr: Option<f64>,
    /// Samples or quadrature nodes used; 0 when the value is closed-form.
    pub samples: usize,
}

/// Average mutual information under i.i.d. uniform per-symbol phases.
///
/// Exactly-zero correlation is closed-form (the value is phase-free); m = 2
/// uses periodic-trapezoid quadrature over the phase difference; m >= 3 falls
/// back to Monte Carlo with a reported standard error.
pub fn ergodic_avg_mi(spec: &GaussianInputSpec, samples: usize, seed: u64) -> Result<Estimate> {
    spec.validate()?;
    if samples < 1 {
        return Err(Error::Argument("sample count must be at least 1".into()));
    }
    if spec.is_independent() {
        return Ok(Estimate {
            value: (1.0 + spec.received_power() / spec.noise).log2(),
            stderr: None,
            samples: 0,
        });
    }
    if spec.m() == 2 {
        // Only the phase difference enters, and the integrand depends on
        // |rho| alone after shifting the period; the uniform trapezoid rule
        // is spectrally accurate for smooth periodic integrands.
        let (g1, g2) = (spec.gains[0], spec.gains[1]);
        let (p1, p2) = (spec.powers[0], spec.powers[1]);
        let s = g1 * g1 * p1 + g2 * g2 * p2 + spec.noise;
        let c = 2.0 * g1 * g2 * (p1 * p2).sqrt() * spec.rho[1].norm();
        let mut acc = 0.0;
        for k in 0..samples {
            let phi = TAU * k as f64 / samples as f64;
            acc += ((s + c * phi.cos()) / spec.noise).log2();
        }
        return Ok(Estimate {
            value: acc / samples as f64,
            stderr: None,
            samples,
        });
    }
    ergodic_avg_mi_mc(spec, samples, seed)
}

/// Monte-Carlo ergodic average at any m (the quadrature-free path).
pub fn ergodic_avg_mi_mc(spec: &GaussianInputSpec, samples: usize, seed: u64) -> Result<Estimate> {
    spec.validate()?;
    if samples < 1 {
        return Err(Error::Argument("sample count must be at least 1".into()));
    }
    let mut rng = stream_rng(seed, stream_id(0, purpose::MC, 0));
    let mut theta = vec![0.0; spec.m()];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        for t in theta.iter_mut() {
            *t = uniform_angle(&mut rng);
        }
        let v = (sigma_raw(spec, &theta) / spec.noise).log2();
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / samples as f64;
    let stderr = if samples >= 2 {
        let var = ((sum_sq - sum * sum / samples as f64) / (samples as f64 - 1.0)).max(0.0);
        Some((var / samples as f64).sqrt())
    } else {
        None
    };
    Ok(Estimate {
        value: mean,
        stderr,
        samples,
    })
}

/// Monte-Carlo mutual information of a finite joint constellation over the
/// phase-rotated sum channel, receiver knowing theta.
///
/// Each constellation point is one joint input vector (length m) carrying a
/// prior; a single-point constellation returns 0 exactly.
pub fn mi_discrete_input(
    points: &[Vec<Complex64>],
    priors: &[f64],
    gains: &[f64],
    theta: &PhaseVector,
    noise: f64,
    mc_samples: usize,
    seed: u64,
) -> Result<Estimate> {
    if points.is_empty() {
        return Err(Error::Argument("constellation must be non-empty".into()));
    }
    if priors.len() != points.len() {
        return Err(Error::Dimension(format!(
            "{} constellation points but {} priors",
            points.len(),
            priors.len()
        )));
    }
    let m = gains.len();
    if theta.len() != m {
        return Err(Error::Dimension(format!(
            "phase vector has {} entries for {m} branches",
            theta.len()
        )));
    }
    for (l, point) in points.iter().enumerate() {
        if point.len() != m {
            return Err(Error::Dimension(format!(
                "constellation point {l} has {} entries for {m} branches",
                point.len()
            )));
        }
    }
    let mass: f64 = priors.iter().sum();
    if priors.iter().any(|&p| p < 0.0 || !p.is_finite()) || (mass - 1.0).abs() > 1e-9 {
        return Err(Error::Validation(format!(
            "priors must be nonnegative and sum to 1, got sum {mass}"
        )));
    }
    if noise <= 0.0 || !noise.is_finite() {
        return Err(Error::Validation(format!(
            "noise power must be positive and finite, got {noise}"
        )));
    }
    if mc_samples < 1 {
        return Err(Error::Argument("mc_samples must be at least 1".into()));
    }
    if points.len() == 1 {
        return Ok(Estimate {
            value: 0.0,
            stderr: None,
            samples: 0,
        });
    }
    let h: Vec<Complex64> = (0..m)
        .map(|i| Complex64::from_polar(gains[i], theta.phases[i]))
        .collect();
    let received: Vec<Complex64> = points
        .iter()
        .map(|x| x.iter().zip(&h).map(|(xi, hi)| hi * xi).sum())
        .collect();
    let mut cdf = Vec::with_capacity(priors.len());
    let mut acc = 0.0;
    for &p in priors {
        acc += p;
        cdf.push(acc);
    }
    let mut rng = stream_rng(seed, stream_id(0, purpose::MC, 1));
    let mut exponents = vec![0.0; received.len()];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..mc_samples {
        let u: f64 = rng.gen();
        let k = cdf.partition_point(|&c| c <= u).min(received.len() - 1);
        let y = received[k] + complex_gaussian(&mut rng, noise);
        let dk = (y - received[k]).norm_sqr();
        // info = -log2 sum_l p_l exp(-(d_l - d_k)/N), computed max-shifted.
        let mut max_e = f64::NEG_INFINITY;
        for (e, s) in exponents.iter_mut().zip(&received) {
            *e = -((y - s).norm_sqr() - dk) / noise;
            if *e > max_e {
                max_e = *e;
            }
        }
        let mut mix = 0.0;
        for (l, &e) in exponents.iter().enumerate() {
            mix += priors[l] * (e - max_e).exp();
        }
        let v = -(max_e + mix.ln()) / LN_2;
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / mc_samples as f64;
    let stderr = if mc_samples >= 2 {
        let var = ((sum_sq - sum * sum / mc_samples as f64) / (mc_samples as f64 - 1.0)).max(0.0);
        Some((var / mc_samples as f64).sqrt())
    } else {
        None
    };
    Ok(Estimate {
        value: mean,
        stderr,
        samples: mc_samples,
    })
}

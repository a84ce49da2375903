//! Monte Carlo over Haar-distributed unitary spectra: sampling, evaluation of
//! `Λ_N(z) = det(I − zU†)` and its derivative, moment estimators, and zero
//! counting for `Λ'_N`.
//!
//! Draws are organised in fixed-size batches. Batch `b` uses a `ChaCha8Rng`
//! seeded with the master seed on stream `b`, and batch statistics are merged
//! in batch order, so the result depends only on `(seed, samples,
//! batch_size)` and not on how batches are scheduled across workers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::roots::find_roots;

/// Name of the pseudo-random generator recorded with every estimate.
pub const GENERATOR: &str = "ChaCha8Rng";
/// Default number of draws per RNG stream.
pub const DEFAULT_BATCH_SIZE: u64 = 1000;
/// Factors `|1 − z e^{−iθ}|` below this trigger a resample.
pub const SINGULAR_TOL: f64 = 1e-14;
/// Roots of `Λ'` this close to the counting circle are reported as ambiguous.
pub const BOUNDARY_TOL: f64 = 1e-8;

/// Redraws allowed per batch before a near-singular run is reported as an error.
pub const MAX_RESAMPLES_PER_BATCH: u64 = 1000;
const TWO_PI: f64 = 2.0 * PI;

/// Eigenphases `θ_1, …, θ_N ∈ [0, 2π)` of one unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSample {
    phases: Vec<f64>,
}

impl SpectrumSample {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(invalid!("spectrum must contain at least one phase"));
        }
        if let Some(p) = phases.iter().find(|p| !(0.0..TWO_PI).contains(*p)) {
            return Err(invalid!("phase {p} outside [0, 2pi)"));
        }
        Ok(SpectrumSample { phases })
    }

    /// Builds a sample from eigenvalues, keeping only their arguments.
    pub fn from_eigenvalues(eigs: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        Self::new(eigs.into_iter().map(|z| wrap_phase(z.arg())).collect())
    }

    pub fn n(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Gaps between circularly consecutive phases (they sum to `2π`).
    pub fn spacings(&self) -> Vec<f64> {
        let mut p = self.phases.clone();
        p.sort_by(f64::total_cmp);
        let mut gaps: Vec<f64> = p.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.push(p[0] + TWO_PI - p[p.len() - 1]);
        gaps
    }
}

fn wrap_phase(t: f64) -> f64 {
    let mut w = libm::fmod(t, TWO_PI);
    if w < 0.0 {
        w += TWO_PI;
    }
    if w >= TWO_PI {
        0.0
    } else {
        w
    }
}

/// How Haar-random spectra are generated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sampler {
    /// Complex Ginibre matrix, QR with the phases of `diag R` folded into
    /// `Q`, then eigenvalues of the dense unitary. `O(N³)` per draw.
    #[default]
    GinibreQr,
    /// Independent Verblunsky coefficients (Killip–Nenciu) run through the
    /// Szegő recursion; eigenvalues are the roots of the resulting
    /// orthogonal polynomial. `O(N²)` per draw.
    Verblunsky,
}

impl Sampler {
    pub fn name(self) -> &'static str {
        match self {
            Sampler::GinibreQr => "ginibre-qr",
            Sampler::Verblunsky => "verblunsky",
        }
    }
}

/// Draws one CUE spectrum of size `n`.
pub fn sample_spectrum<R: Rng + ?Sized>(n: usize, sampler: Sampler, rng: &mut R) -> Result<SpectrumSample> {
    if n == 0 {
        return Err(invalid!("N must be >= 1"));
    }
    match sampler {
        Sampler::GinibreQr => ginibre_spectrum(n, rng),
        Sampler::Verblunsky => verblunsky_spectrum(n, rng),
    }
}

/// Haar unitary `U = Q · diag(R_jj/|R_jj|)` from a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let scale = core::f64::consts::FRAC_1_SQRT_2;
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn ginibre_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SpectrumSample> {
    let u = haar_unitary(n, rng);
    let eigs = u
        .eigenvalues()
        .ok_or_else(|| Error::NoConvergence(format!("Schur iteration failed for N={n}")))?;
    SpectrumSample::from_eigenvalues(eigs.iter().copied())
}

/// Verblunsky coefficients `α_0, …, α_{N−1}` of a CUE matrix: `|α_k|² ~
/// Beta(1, N−k−1)` with uniform phase, and `α_{N−1}` uniform on the circle.
pub fn verblunsky_coefficients<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let m = (n - k - 1) as f64;
            let modulus = if k + 1 == n {
                1.0
            } else {
                let u: f64 = rng.random();
                libm::sqrt(1.0 - libm::pow(u, 1.0 / m))
            };
            let phase: f64 = rng.random::<f64>() * TWO_PI;
            Complex64::from_polar(modulus, phase)
        })
        .collect()
}

/// Coefficients (ascending) of the monic orthogonal polynomial `Φ_N` with the
/// given Verblunsky coefficients: `Φ_{k+1} = zΦ_k − ᾱ_k Φ_k*`.
pub fn szego_polynomial(alpha: &[Complex64]) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    let mut star = vec![Complex64::new(1.0, 0.0)];
    for a in alpha {
        let mut next = vec![zero; phi.len() + 1];
        let mut next_star = vec![zero; phi.len() + 1];
        for k in 0..phi.len() {
            next[k + 1] += phi[k];
            next[k] -= a.conj() * star[k];
            next_star[k] += star[k];
            next_star[k + 1] -= a * phi[k];
        }
        phi = next;
        star = next_star;
    }
    phi
}

fn verblunsky_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SpectrumSample> {
    let phi = szego_polynomial(&verblunsky_coefficients(n, rng));
    SpectrumSample::from_eigenvalues(find_roots(&phi)?.roots)
}

/// `Λ_N(z)` and `Λ'_N(z)` at one point, with `log|Λ_N(z)|` accumulated as a
/// sum of logarithms so that it stays finite at large `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaEval {
    pub value: Complex64,
    pub derivative: Complex64,
    pub log_abs: f64,
    /// `Λ'/Λ = −Σ e^{−iθ}/(1 − z e^{−iθ})`.
    pub log_derivative: Complex64,
}

impl LambdaEval {
    /// `log|Λ'_N(z)|`, finite even when `Λ'` itself would overflow.
    pub fn log_abs_derivative(&self) -> f64 {
        self.log_abs + libm::log(self.log_derivative.norm())
    }
}

/// Evaluates `Λ = Π(1 − z e^{−iθ_j})` and `Λ' = Λ · Σ −e^{−iθ_j}/(1 − z e^{−iθ_j})`.
///
/// Fails with `NearSingular` if some factor has modulus below
/// [`SINGULAR_TOL`].
pub fn eval_lambda_and_deriv(sample: &SpectrumSample, z: Complex64) -> Result<LambdaEval> {
    let one = Complex64::new(1.0, 0.0);
    let mut value = one;
    let mut log_abs = 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    for &t in &sample.phases {
        let e = Complex64::from_polar(1.0, -t);
        let factor = one - z * e;
        let m = factor.norm();
        if m < SINGULAR_TOL {
            return Err(Error::NearSingular(format!("|1 - z e^(-i theta)| = {m:e} at theta = {t}")));
        }
        value *= factor;
        log_abs += libm::log(m);
        sum -= e / factor;
    }
    Ok(LambdaEval { value, derivative: value * sum, log_abs, log_derivative: sum })
}

/// `|Λ'_N(z)|^{2s}` for one spectrum.
pub fn moment_sample(sample: &SpectrumSample, s: f64, z: Complex64) -> Result<f64> {
    if s == 0.0 {
        return Ok(1.0);
    }
    let ev = eval_lambda_and_deriv(sample, z)?;
    if ev.log_derivative.norm() == 0.0 && s < 0.0 {
        return Err(Error::NearSingular("Lambda' vanishes at z".into()));
    }
    Ok(libm::exp(2.0 * s * ev.log_abs_derivative()))
}

/// `|Λ'(z₂)/Λ(z₂)|^{2h} |Λ(z₁)|^{2s}` for one spectrum.
pub fn joint_sample(sample: &SpectrumSample, s: f64, h: f64, z1: Complex64, z2: Complex64) -> Result<f64> {
    let mut out = 1.0;
    if s != 0.0 {
        out *= libm::exp(2.0 * s * eval_lambda_and_deriv(sample, z1)?.log_abs);
    }
    if h != 0.0 {
        let ld = eval_lambda_and_deriv(sample, z2)?.log_derivative.norm();
        if ld == 0.0 && h < 0.0 {
            return Err(Error::NearSingular("Lambda'/Lambda vanishes at z2".into()));
        }
        out *= libm::pow(ld, 2.0 * h);
    }
    Ok(out)
}

/// Sampling plan shared by all estimators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub seed: u64,
    pub samples: u64,
    pub batch_size: u64,
    pub sampler: Sampler,
}

impl McConfig {
    pub fn new(seed: u64, samples: u64) -> Result<Self> {
        if samples < 2 {
            return Err(invalid!("need at least 2 samples, got {samples}"));
        }
        Ok(McConfig { seed, samples, batch_size: DEFAULT_BATCH_SIZE, sampler: Sampler::default() })
    }

    pub fn with_sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn with_batch_size(mut self, batch_size: u64) -> Result<Self> {
        if batch_size == 0 {
            return Err(invalid!("batch size must be positive"));
        }
        self.batch_size = batch_size;
        Ok(self)
    }

    pub fn batches(&self) -> u64 {
        self.samples.div_ceil(self.batch_size)
    }

    /// Draw count of batch `b` (the last batch may be short).
    pub fn batch_len(&self, b: u64) -> u64 {
        let start = b * self.batch_size;
        self.batch_size.min(self.samples.saturating_sub(start))
    }

    /// The RNG for batch `b`: master seed, stream `b`.
    pub fn batch_rng(&self, b: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(b);
        rng
    }
}

/// Running count / mean / centred sum of squares (Welford), mergeable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BatchStats {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
    /// Number of draws rejected as near-singular and redrawn.
    pub resampled: u64,
    /// Individual values, retained only when requested.
    pub values: Vec<f64>,
}

impl BatchStats {
    pub fn push(&mut self, x: f64, keep: bool) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        if keep {
            self.values.push(x);
        }
    }

    /// Combines two batches (Chan et al. pairwise update).
    pub fn merge(&mut self, other: BatchStats) {
        if other.count == 0 {
            self.resampled += other.resampled;
            return;
        }
        if self.count == 0 {
            let resampled = self.resampled;
            *self = other;
            self.resampled += resampled;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.count as f64, other.count as f64);
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
        self.resampled += other.resampled;
        self.values.extend(other.values);
    }
}

/// Runs batch `b` of `config`, applying `f` to each of its spectra.
/// Near-singular draws are discarded and redrawn from the same stream.
pub fn run_batch<F>(n: usize, config: &McConfig, b: u64, keep_values: bool, f: F) -> Result<BatchStats>
where
    F: Fn(&SpectrumSample) -> Result<f64>,
{
    let mut rng = config.batch_rng(b);
    let mut stats = BatchStats::default();
    let len = config.batch_len(b);
    while stats.count < len {
        let sample = sample_spectrum(n, config.sampler, &mut rng)?;
        match f(&sample) {
            Ok(x) => stats.push(x, keep_values),
            Err(Error::NearSingular(msg)) => {
                stats.resampled += 1;
                if stats.resampled > MAX_RESAMPLES_PER_BATCH {
                    return Err(Error::NearSingular(format!("too many resamples in batch {b}: {msg}")));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(stats)
}

/// Result of a Monte Carlo estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub generator: &'static str,
    pub sampler: Sampler,
    pub resampled: u64,
    /// Share of the total carried by the largest 1% of draws; reported for
    /// negative exponents, where a few draws near zeros dominate.
    pub top_share: Option<f64>,
}

/// Fraction of `Σ values` contributed by the largest 1% (at least one) of them.
pub fn top_percent_share(values: &[f64]) -> f64 {
    let total: f64 = values.iter().sum();
    if values.is_empty() || total == 0.0 {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    let k = (v.len() / 100).max(1);
    v[..k].iter().sum::<f64>() / total
}

/// Turns merged batch statistics into an estimate.
pub fn finish(config: &McConfig, stats: BatchStats) -> MomentEstimate {
    let n = stats.count as f64;
    let variance = if stats.count > 1 { stats.m2 / (n - 1.0) } else { 0.0 };
    let top_share = if stats.values.is_empty() { None } else { Some(top_percent_share(&stats.values)) };
    MomentEstimate {
        mean: stats.mean,
        std_error: libm::sqrt(variance / n),
        samples: stats.count,
        seed: config.seed,
        generator: GENERATOR,
        sampler: config.sampler,
        resampled: stats.resampled,
        top_share,
    }
}

/// Sequential estimator: all batches in order on the current thread.
pub fn estimate_with<F>(n: usize, config: &McConfig, keep_values: bool, f: F) -> Result<MomentEstimate>
where
    F: Fn(&SpectrumSample) -> Result<f64>,
{
    let mut total = BatchStats::default();
    for b in 0..config.batches() {
        total.merge(run_batch(n, config, b, keep_values, &f)?);
    }
    Ok(finish(config, total))
}

fn check_moment_args(n: usize, s: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid!("N must be >= 1"));
    }
    if !(s > -1.0) {
        return Err(invalid!("s must exceed -1, got {s}"));
    }
    Ok(())
}

/// Estimates `E|Λ'_N(z)|^{2s}`.
pub fn estimate_moment(n: usize, s: f64, z: Complex64, config: &McConfig) -> Result<MomentEstimate> {
    check_moment_args(n, s)?;
    estimate_with(n, config, s < 0.0, |sample| moment_sample(sample, s, z))
}

/// Validates the arguments of a joint moment.
pub fn check_joint_args(n: usize, s: f64, h: f64, z1: Complex64, z2: Complex64) -> Result<()> {
    check_moment_args(n, s)?;
    if !(h > -1.0) {
        return Err(invalid!("h must exceed -1, got {h}"));
    }
    if !(z1.norm() < 1.0 && z2.norm() < 1.0) {
        return Err(invalid!("joint moment requires |z1|, |z2| < 1"));
    }
    Ok(())
}

/// Estimates `E[|Λ'(z₂)/Λ(z₂)|^{2h} |Λ(z₁)|^{2s}]`.
pub fn estimate_joint_moment(
    n: usize,
    s: f64,
    h: f64,
    z1: Complex64,
    z2: Complex64,
    config: &McConfig,
) -> Result<MomentEstimate> {
    check_joint_args(n, s, h, z1, z2)?;
    estimate_with(n, config, s < 0.0 || h < 0.0, |sample| joint_sample(sample, s, h, z1, z2))
}

/// Coefficients of `Λ_N(z)` in ascending powers of `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCoeffs {
    coeffs: Vec<Complex64>,
}

impl PolyCoeffs {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients of `Λ'_N`, degree `N − 1`.
    pub fn derivative(&self) -> Vec<Complex64> {
        self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }
}

/// Order in which to multiply out linear factors: greedy Leja ordering, each
/// next point maximising the product of distances to those already taken.
/// Multiplying neighbouring roots first builds binomial-sized intermediate
/// coefficients that later cancel; the Leja order keeps partial products
/// close to `1 − c z^k` and the result accurate to rounding.
fn leja_order(points: &[Complex64]) -> Vec<usize> {
    let n = points.len();
    let mut order = Vec::with_capacity(n);
    let mut taken = vec![false; n];
    let mut score = vec![0.0f64; n];
    let mut next = 0;
    for _ in 0..n {
        order.push(next);
        taken[next] = true;
        let chosen = points[next];
        let mut best: Option<usize> = None;
        for i in 0..n {
            if taken[i] {
                continue;
            }
            score[i] += libm::log((points[i] - chosen).norm());
            if best.is_none_or(|b| score[i] > score[b]) {
                best = Some(i);
            }
        }
        next = best.unwrap_or(0);
    }
    order
}

/// Multiplies out `Π(1 − z e^{−iθ_j})` one linear factor at a time (in Leja
/// order of the eigenvalues).
pub fn poly_coeffs(sample: &SpectrumSample) -> PolyCoeffs {
    let e: Vec<Complex64> = sample.phases.iter().map(|&t| Complex64::from_polar(1.0, -t)).collect();
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for i in leja_order(&e) {
        c.push(Complex64::new(0.0, 0.0));
        for k in (1..c.len()).rev() {
            let prev = c[k - 1];
            c[k] -= e[i] * prev;
        }
    }
    PolyCoeffs { coeffs: c }
}

/// Roots of `Λ'_N` (empty for `N = 1`).
pub fn derivative_zeros(sample: &SpectrumSample) -> Result<Vec<Complex64>> {
    let d = poly_coeffs(sample).derivative();
    Ok(find_roots(&d)?.roots)
}

/// Number of roots strictly inside `|z| < r`, plus how many of them lie
/// within [`BOUNDARY_TOL`] of the circle (counted by the sign of `|z| − r`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ZeroCount {
    pub count: usize,
    pub ambiguous: usize,
}

pub fn count_inside(roots: &[Complex64], r: f64) -> ZeroCount {
    let mut out = ZeroCount::default();
    for z in roots {
        let m = z.norm();
        if (m - r).abs() < BOUNDARY_TOL {
            out.ambiguous += 1;
        }
        if m < r {
            out.count += 1;
        }
    }
    out
}

/// Number of zeros of `Λ'_N` in the disc `|z| < r`.
pub fn count_zeros_inside(sample: &SpectrumSample, r: f64) -> Result<ZeroCount> {
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid!("requires 0 < r < 1, got {r}"));
    }
    Ok(count_inside(&derivative_zeros(sample)?, r))
}

//! Parallel Monte Carlo. Batch `b` always draws from stream `b` of the
//! master seed and batches are merged in index order, so results are the
//! same for every thread count (and equal to the sequential estimator).

use std::sync::atomic::{AtomicU64, Ordering};

use cuemom_core::mc::{
    count_inside, derivative_zeros, finish, run_batch, sample_spectrum, BatchStats, McConfig, MomentEstimate,
    SpectrumSample, MAX_RESAMPLES_PER_BATCH,
};
use cuemom_core::{Error, Result};
use rayon::prelude::*;

/// Prints `done/total` to stderr at every tenth of the run.
pub struct Progress {
    label: String,
    total: u64,
    done: AtomicU64,
    enabled: bool,
}

impl Progress {
    pub fn new(label: &str, total: u64, enabled: bool) -> Self {
        Progress { label: label.into(), total, done: AtomicU64::new(0), enabled: enabled && total >= 10 }
    }

    fn tick(&self) {
        let done = self.done.fetch_add(1, Ordering::Relaxed) + 1;
        if self.enabled && (done * 10 / self.total) != ((done - 1) * 10 / self.total) {
            eprintln!("{}: {done}/{} batches", self.label, self.total);
        }
    }
}

/// Parallel counterpart of [`cuemom_core::mc::estimate_with`].
pub fn estimate<F>(n: usize, config: &McConfig, keep_values: bool, f: F, progress: &Progress) -> Result<MomentEstimate>
where
    F: Fn(&SpectrumSample) -> Result<f64> + Sync,
{
    let batches: Vec<BatchStats> = (0..config.batches())
        .into_par_iter()
        .map(|b| {
            let stats = run_batch(n, config, b, keep_values, &f);
            progress.tick();
            stats
        })
        .collect::<Result<_>>()?;
    let mut total = BatchStats::default();
    for stats in batches {
        total.merge(stats);
    }
    Ok(finish(config, total))
}

/// Per-radius statistics of a zero-count sweep.
#[derive(Clone, Debug)]
pub struct ZeroSweep {
    pub radii: Vec<f64>,
    /// Zero counts in `|z| < r`.
    pub counts: Vec<MomentEstimate>,
    /// `Σ_{|ρ|<r} log(r/|ρ|)`, Jensen's integral `∫₀^r n(t)/t dt`.
    pub log_integrals: Vec<MomentEstimate>,
    /// Roots within the boundary tolerance of each radius.
    pub ambiguous: Vec<u64>,
}

#[derive(Default)]
struct SweepBatch {
    counts: Vec<BatchStats>,
    logs: Vec<BatchStats>,
    ambiguous: Vec<u64>,
    resampled: u64,
}

fn sweep_batch(n: usize, radii: &[f64], config: &McConfig, b: u64) -> Result<SweepBatch> {
    let mut rng = config.batch_rng(b);
    let mut out = SweepBatch {
        counts: vec![BatchStats::default(); radii.len()],
        logs: vec![BatchStats::default(); radii.len()],
        ambiguous: vec![0; radii.len()],
        resampled: 0,
    };
    let mut drawn = 0;
    while drawn < config.batch_len(b) {
        let sample = sample_spectrum(n, config.sampler, &mut rng)?;
        let roots = match derivative_zeros(&sample) {
            Ok(r) => r,
            Err(Error::NearSingular(msg)) => {
                out.resampled += 1;
                if out.resampled > MAX_RESAMPLES_PER_BATCH {
                    return Err(Error::NearSingular(msg));
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        for (i, &r) in radii.iter().enumerate() {
            let c = count_inside(&roots, r);
            out.counts[i].push(c.count as f64, false);
            out.ambiguous[i] += c.ambiguous as u64;
            let jensen: f64 = roots.iter().map(|z| z.norm()).filter(|&m| m < r).map(|m| (r / m).ln()).sum();
            out.logs[i].push(jensen, false);
        }
        drawn += 1;
    }
    Ok(out)
}

/// Zero counts of `Λ'_N` for all `radii` from the same spectra.
pub fn zero_sweep(n: usize, radii: &[f64], config: &McConfig, progress: &Progress) -> Result<ZeroSweep> {
    let batches: Vec<SweepBatch> = (0..config.batches())
        .into_par_iter()
        .map(|b| {
            let out = sweep_batch(n, radii, config, b);
            progress.tick();
            out
        })
        .collect::<Result<_>>()?;
    let k = radii.len();
    let mut counts = vec![BatchStats::default(); k];
    let mut logs = vec![BatchStats::default(); k];
    let mut ambiguous = vec![0; k];
    let mut resampled = 0;
    for batch in batches {
        for (i, (c, l)) in batch.counts.into_iter().zip(batch.logs).enumerate() {
            counts[i].merge(c);
            logs[i].merge(l);
            ambiguous[i] += batch.ambiguous[i];
        }
        resampled += batch.resampled;
    }
    let to_estimates = |stats: Vec<BatchStats>| -> Vec<MomentEstimate> {
        stats
            .into_iter()
            .map(|mut s| {
                s.resampled = resampled;
                finish(config, s)
            })
            .collect()
    };
    Ok(ZeroSweep { radii: radii.to_vec(), counts: to_estimates(counts), log_integrals: to_estimates(logs), ambiguous })
}

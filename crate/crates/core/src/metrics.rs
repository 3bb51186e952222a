//! Figures of merit computed from traces. All statistics are taken on the
//! dBm values directly.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scene::Receiver;
use crate::simulation::SimulationTrace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DbStats {
    pub mean: f64,
    pub median: f64,
    pub p10: f64,
    pub p90: f64,
}

/// `baseline − trace` per statistic; positive means the trace is lower.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatDeltas {
    pub mean: f64,
    pub median: f64,
    pub p10: f64,
    pub p90: f64,
}

/// Share of steps `>= skip_steps` on which the receiver's objective holds.
pub fn satisfaction_fraction(
    trace: &SimulationTrace,
    receiver: &Receiver,
    skip_steps: usize,
) -> Result<f64> {
    let series = trace.series(&receiver.id)?;
    fraction_met(&series, skip_steps, |p| receiver.is_satisfied(p))
}

pub(crate) fn fraction_met(series: &[f64], skip: usize, met: impl Fn(f64) -> bool) -> Result<f64> {
    if skip >= series.len() {
        return Err(Error::EmptyEvaluationWindow {
            skip,
            steps: series.len(),
        });
    }
    let window = &series[skip..];
    let hits = window.iter().filter(|&&p| met(p)).count();
    Ok(hits as f64 / window.len() as f64)
}

/// Linear interpolation between closest ranks, `h = q·(n − 1)`, on sorted
/// input.
fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = q * (sorted.len() - 1) as f64;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn db_statistics(series: &[f64]) -> Result<DbStats> {
    if series.is_empty() {
        return Err(Error::NoSamples);
    }
    let mut sorted: Vec<f64> = series.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(DbStats {
        mean: series.iter().sum::<f64>() / series.len() as f64,
        median: percentile_sorted(&sorted, 0.5),
        p10: percentile_sorted(&sorted, 0.1),
        p90: percentile_sorted(&sorted, 0.9),
    })
}

/// Statistics of one receiver over steps `>= skip_steps`.
pub fn receiver_statistics(
    trace: &SimulationTrace,
    receiver_id: &str,
    skip_steps: usize,
) -> Result<DbStats> {
    let series = trace.series(receiver_id)?;
    if skip_steps >= series.len() {
        return Err(Error::EmptyEvaluationWindow {
            skip: skip_steps,
            steps: series.len(),
        });
    }
    db_statistics(&series[skip_steps..])
}

/// Baseline statistics minus trace statistics for one receiver, each over
/// its own steps `>= skip_steps`.
pub fn compare_traces(
    baseline: &SimulationTrace,
    trace: &SimulationTrace,
    receiver_id: &str,
    skip_steps: usize,
) -> Result<StatDeltas> {
    let b = receiver_statistics(baseline, receiver_id, skip_steps)?;
    let t = receiver_statistics(trace, receiver_id, skip_steps)?;
    Ok(StatDeltas {
        mean: b.mean - t.mean,
        median: b.median - t.median,
        p10: b.p10 - t.p10,
        p90: b.p90 - t.p90,
    })
}

//! The work behind each CLI subcommand, separated from argument parsing and
//! file IO so it can be driven directly from tests.

use anyhow::{bail, Context, Result};
use risray_core::control::preferred_settings;
use risray_core::metrics::receiver_statistics;
use risray_core::simulation::{assemble_trace, baseline_powers};
use risray_core::{
    compare_traces, context_schedule, satisfaction_fraction, static_schedule, sweep_schedule,
    Objective, Policy, PowerMap, ProbeReport, RisSchedule, SimulationTrace,
};

use crate::config::ScenarioConfig;
use crate::formats::{self, MetricsReport, ReceiverMetrics};
use crate::parallel;

/// Which panel orientation a map is drawn for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapTarget {
    Angle(f64),
    Baseline,
}

pub fn map(cfg: &ScenarioConfig, target: MapTarget, resolution: f64) -> Result<PowerMap> {
    let scene = &cfg.scene;
    scene.ensure_valid()?;
    let walls = match target {
        MapTarget::Angle(deg) => scene.walls_for_setting(scene.ris.setting_index_of(deg)?)?,
        MapTarget::Baseline => scene.baseline_walls()?,
    };
    Ok(parallel::power_map(
        &scene.tx,
        &walls,
        &scene.bounds,
        resolution,
        &cfg.propagation,
    )?)
}

pub fn sweep(cfg: &ScenarioConfig) -> Result<ProbeReport> {
    Ok(parallel::probe_reports(&cfg.scene, &cfg.propagation)?)
}

pub fn objectives(cfg: &ScenarioConfig) -> Vec<Objective> {
    cfg.objective_receivers()
        .into_iter()
        .map(Objective::for_receiver)
        .collect()
}

/// Schedule for the configured policy. The probe report is only consulted
/// by the context policy.
pub fn schedule(cfg: &ScenarioConfig, report: &ProbeReport) -> Result<RisSchedule> {
    let sim = &cfg.simulation;
    let n = cfg.scene.ris.setting_count();
    Ok(match sim.policy {
        Policy::Static => {
            let idx = cfg.scene.ris.setting_index_of(sim.static_angle_deg)?;
            static_schedule(idx, n, sim.dwell, sim.intervals)?
        }
        Policy::Sweep => sweep_schedule(n, sim.dwell, sim.intervals)?,
        Policy::Context => context_schedule(report, &objectives(cfg), n, sim.dwell, sim.intervals)?,
    })
}

/// Steps spent probing before the policy acts on what it measured.
pub fn probe_steps(cfg: &ScenarioConfig) -> usize {
    match cfg.simulation.policy {
        Policy::Context => cfg.scene.ris.setting_count() * cfg.simulation.dwell,
        Policy::Static | Policy::Sweep => 0,
    }
}

pub struct RunOutput {
    pub trace: SimulationTrace,
    pub baseline: SimulationTrace,
    pub metrics: MetricsReport,
    /// Settings the context policy cycles through after probing.
    pub preferred: Vec<usize>,
}

pub fn run(cfg: &ScenarioConfig) -> Result<RunOutput> {
    let cfg = cfg.clone().validate()?;
    let report = sweep(&cfg)?;
    let schedule = schedule(&cfg, &report)?;
    schedule.check_against(cfg.scene.ris.setting_count())?;
    let trace = assemble_trace(&cfg.scene, &schedule, |s| &report.rows[s]);

    let plain = baseline_powers(&cfg.scene, &cfg.propagation)?;
    let flat = RisSchedule::new(schedule.dwell_steps, vec![0; schedule.intervals()])?;
    let baseline = assemble_trace(&cfg.scene, &flat, |_| &plain);

    let preferred = match cfg.simulation.policy {
        Policy::Context => preferred_settings(&report, &objectives(&cfg))?,
        _ => Vec::new(),
    };
    let skip = probe_steps(&cfg);
    let receivers = cfg
        .scene
        .receivers
        .iter()
        .map(|r| {
            Ok(ReceiverMetrics {
                receiver: r.id.clone(),
                role: r.role.as_str(),
                threshold_dbm: r.threshold_dbm,
                satisfaction_fraction: satisfaction_fraction(&trace, r, 0)?,
                satisfaction_fraction_post_probe: satisfaction_fraction(&trace, r, skip)?,
                stats: receiver_statistics(&trace, &r.id, 0)?,
                stats_post_probe: receiver_statistics(&trace, &r.id, skip)?,
                deltas: Some(compare_traces(&baseline, &trace, &r.id, 0)?),
                deltas_post_probe: Some(compare_traces(&baseline, &trace, &r.id, skip)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let metrics = MetricsReport {
        policy: cfg.simulation.policy.as_str(),
        steps: trace.steps(),
        probe_steps: skip,
        receivers,
    };
    Ok(RunOutput {
        trace,
        baseline,
        metrics,
        preferred,
    })
}

/// Baseline-minus-trace statistics for every receiver both traces share,
/// in the trace's column order.
pub fn compare(baseline_csv: &str, trace_csv: &str, skip_steps: usize) -> Result<String> {
    let baseline = formats::parse_trace_csv(baseline_csv).context("baseline trace")?;
    let trace = formats::parse_trace_csv(trace_csv).context("trace")?;
    let shared: Vec<&String> = trace
        .receiver_ids
        .iter()
        .filter(|id| baseline.receiver_ids.contains(id))
        .collect();
    if shared.is_empty() {
        bail!("traces share no receiver");
    }
    let deltas = shared
        .into_iter()
        .map(|id| {
            Ok((
                id.clone(),
                compare_traces(&baseline, &trace, id, skip_steps)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(formats::deltas_json(skip_steps, &deltas))
}

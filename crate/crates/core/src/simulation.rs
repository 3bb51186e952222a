//! Time-stepped runs. The world is static apart from the RIS, so every step
//! is a lookup into the power a receiver sees at the active setting.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::control::{ProbeReport, RisSchedule};
use crate::error::{Error, Result};
use crate::propagation::{received_power_with, ImageTracer, PropagationParams};
use crate::scene::{Scene, Wall};

/// Per-step received power at each receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub receiver_ids: Vec<String>,
    /// Active RIS setting per step.
    pub settings: Vec<usize>,
    /// `powers[step][receiver]`, dBm.
    pub powers: Vec<Vec<f64>>,
}

impl SimulationTrace {
    pub fn steps(&self) -> usize {
        self.settings.len()
    }

    pub fn column_index(&self, receiver_id: &str) -> Result<usize> {
        self.receiver_ids
            .iter()
            .position(|id| id == receiver_id)
            .ok_or_else(|| Error::UnknownReceiver(receiver_id.into()))
    }

    /// Power series of one receiver.
    pub fn series(&self, receiver_id: &str) -> Result<Vec<f64>> {
        let c = self.column_index(receiver_id)?;
        Ok(self.powers.iter().map(|row| row[c]).collect())
    }
}

/// Power at every receiver for one wall set.
pub fn receiver_powers(
    scene: &Scene,
    walls: &[Wall],
    params: &PropagationParams,
) -> Result<Vec<f64>> {
    let tracer = ImageTracer::new(scene.tx.position, walls, params);
    scene
        .receivers
        .iter()
        .map(|r| received_power_with(&tracer, &scene.tx, r.position, params))
        .collect()
}

/// Receiver powers with the panel as a plain wall at its base orientation.
pub fn baseline_powers(scene: &Scene, params: &PropagationParams) -> Result<Vec<f64>> {
    receiver_powers(scene, &scene.baseline_walls()?, params)
}

/// Receiver powers for every RIS setting.
pub fn probe_reports(scene: &Scene, params: &PropagationParams) -> Result<ProbeReport> {
    scene.ensure_valid()?;
    let rows = (0..scene.ris.setting_count())
        .map(|s| receiver_powers(scene, &scene.walls_for_setting(s)?, params))
        .collect::<Result<Vec<_>>>()?;
    ProbeReport::new(scene.receivers.iter().map(|r| r.id.clone()).collect(), rows)
}

/// Runs `schedule` on `scene`. Each distinct setting is traced once; its
/// powers are replicated over every step it is active.
pub fn run_simulation(
    scene: &Scene,
    schedule: &RisSchedule,
    params: &PropagationParams,
) -> Result<SimulationTrace> {
    scene.ensure_valid()?;
    schedule.check_against(scene.ris.setting_count())?;
    let mut cache: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for &s in &schedule.entries {
        if !cache.contains_key(&s) {
            cache.insert(
                s,
                receiver_powers(scene, &scene.walls_for_setting(s)?, params)?,
            );
        }
    }
    Ok(assemble_trace(scene, schedule, |s| &cache[&s]))
}

/// Builds a trace from per-setting receiver powers.
pub fn assemble_trace<'a>(
    scene: &Scene,
    schedule: &RisSchedule,
    powers_for: impl Fn(usize) -> &'a Vec<f64>,
) -> SimulationTrace {
    let steps = schedule.total_steps();
    let mut settings = Vec::with_capacity(steps);
    let mut powers = Vec::with_capacity(steps);
    for &s in &schedule.entries {
        let row = powers_for(s);
        for _ in 0..schedule.dwell_steps {
            settings.push(s);
            powers.push(row.clone());
        }
    }
    SimulationTrace {
        receiver_ids: scene.receivers.iter().map(|r| r.id.clone()).collect(),
        settings,
        powers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{static_schedule, sweep_schedule};
    use alloc::vec;

    #[test]
    fn probe_shape() {
        let scene = Scene::reference();
        let report = probe_reports(&scene, &PropagationParams::default()).unwrap();
        assert_eq!(report.setting_count(), 9);
        assert_eq!(report.receiver_ids, vec!["A", "B", "C"]);
    }

    #[test]
    fn single_setting_panel() {
        let mut scene = Scene::reference();
        scene.ris.angle_set_deg = vec![0.0];
        let report = probe_reports(&scene, &PropagationParams::default()).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].len(), 3);
    }

    #[test]
    fn setting_zero_matches_plain_wall() {
        let scene = Scene::reference();
        let params = PropagationParams::default();
        let report = probe_reports(&scene, &params).unwrap();
        let zero = scene.ris.setting_index_of(0.0).unwrap();
        let baseline = baseline_powers(&scene, &params).unwrap();
        for (a, b) in report.rows[zero].iter().zip(&baseline) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn trace_factors_through_probe() {
        let scene = Scene::reference();
        let params = PropagationParams::default();
        let report = probe_reports(&scene, &params).unwrap();
        let schedule = sweep_schedule(9, 2, 16).unwrap();
        let trace = run_simulation(&scene, &schedule, &params).unwrap();
        assert_eq!(trace.steps(), 32);
        for (step, row) in trace.powers.iter().enumerate() {
            assert_eq!(trace.settings[step], schedule.setting_at(step).unwrap());
            assert_eq!(row, &report.rows[trace.settings[step]]);
        }
    }

    #[test]
    fn unknown_setting_in_schedule() {
        let scene = Scene::reference();
        let schedule = RisSchedule::new(1, vec![0, 9]).unwrap();
        assert!(matches!(
            run_simulation(&scene, &schedule, &PropagationParams::default()),
            Err(Error::ScheduleUnknownSetting { index: 9, count: 9 })
        ));
    }

    #[test]
    fn static_trace_is_constant() {
        let scene = Scene::reference();
        let schedule = static_schedule(4, 9, 3, 4).unwrap();
        let trace = run_simulation(&scene, &schedule, &PropagationParams::default()).unwrap();
        assert!(trace.powers.windows(2).all(|w| w[0] == w[1]));
        assert!(matches!(trace.series("Z"), Err(Error::UnknownReceiver(_))));
    }
}

//! RIS control policies.
//!
//! - static: hold one setting (the plain-wall reference when that setting is
//!   the base orientation),
//! - sweep: blind triangle wave `0, 1, ..., n-1, n-2, ..., 1, 0, ...`,
//! - context: probe every setting once, then cycle through the settings that
//!   the receivers reported as best for their objectives.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scene::{Receiver, Role};

/// Setting indices per dwell interval, each held for `dwell_steps` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RisSchedule {
    pub dwell_steps: usize,
    pub entries: Vec<usize>,
}

impl RisSchedule {
    pub fn new(dwell_steps: usize, entries: Vec<usize>) -> Result<Self> {
        if dwell_steps == 0 {
            return Err(Error::InvalidParameter("dwell must be >= 1 step"));
        }
        if entries.is_empty() {
            return Err(Error::InvalidParameter(
                "schedule needs at least one interval",
            ));
        }
        Ok(Self {
            dwell_steps,
            entries,
        })
    }

    pub fn total_steps(&self) -> usize {
        self.dwell_steps * self.entries.len()
    }

    pub fn intervals(&self) -> usize {
        self.entries.len()
    }

    /// Active setting at time step `step`.
    pub fn setting_at(&self, step: usize) -> Option<usize> {
        self.entries.get(step / self.dwell_steps).copied()
    }

    /// Checks every entry against a panel with `n_settings` settings.
    pub fn check_against(&self, n_settings: usize) -> Result<()> {
        match self.entries.iter().find(|&&e| e >= n_settings) {
            Some(&index) => Err(Error::ScheduleUnknownSetting {
                index,
                count: n_settings,
            }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    Static,
    Sweep,
    Context,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Static => "static",
            Policy::Sweep => "sweep",
            Policy::Context => "context",
        }
    }

    pub fn parse(s: &str) -> Option<Policy> {
        match s {
            "static" => Some(Policy::Static),
            "sweep" => Some(Policy::Sweep),
            "context" => Some(Policy::Context),
            _ => None,
        }
    }
}

/// Received power per RIS setting (rows) and receiver (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub receiver_ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ProbeReport {
    pub fn new(receiver_ids: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows.iter().any(|r| r.len() != receiver_ids.len()) {
            return Err(Error::InvalidParameter(
                "probe report must be a complete matrix",
            ));
        }
        Ok(Self { receiver_ids, rows })
    }

    pub fn setting_count(&self) -> usize {
        self.rows.len()
    }

    pub fn column_index(&self, receiver_id: &str) -> Result<usize> {
        self.receiver_ids
            .iter()
            .position(|id| id == receiver_id)
            .ok_or_else(|| Error::UnknownReceiver(receiver_id.to_string()))
    }

    pub fn column(&self, receiver_id: &str) -> Result<Vec<f64>> {
        let c = self.column_index(receiver_id)?;
        Ok(self.rows.iter().map(|r| r[c]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub receiver_id: String,
    pub sense: Sense,
    pub threshold_dbm: f64,
}

impl Objective {
    /// Detectors and subscribers maximize, victims minimize.
    pub fn for_receiver(r: &Receiver) -> Self {
        let sense = match r.role {
            Role::Detector | Role::Subscriber => Sense::Maximize,
            Role::Victim => Sense::Minimize,
        };
        Self {
            receiver_id: r.id.clone(),
            sense,
            threshold_dbm: r.threshold_dbm,
        }
    }

    pub fn is_met(&self, power_dbm: f64) -> bool {
        match self.sense {
            Sense::Maximize => power_dbm >= self.threshold_dbm,
            Sense::Minimize => power_dbm < self.threshold_dbm,
        }
    }
}

/// Holds `setting_index` for `n_intervals` intervals.
pub fn static_schedule(
    setting_index: usize,
    n_settings: usize,
    dwell_steps: usize,
    n_intervals: usize,
) -> Result<RisSchedule> {
    if setting_index >= n_settings {
        return Err(Error::UnknownSetting {
            index: setting_index,
            count: n_settings,
        });
    }
    RisSchedule::new(dwell_steps, alloc::vec![setting_index; n_intervals])
}

/// Triangle-wave setting for interval `k`: period `2(n − 1)`, or 1 when a
/// single setting exists.
pub fn triangle_wave(n_settings: usize, k: usize) -> usize {
    if n_settings <= 1 {
        return 0;
    }
    let period = 2 * (n_settings - 1);
    let phase = k % period;
    if phase < n_settings {
        phase
    } else {
        period - phase
    }
}

/// Blind left-to-right-and-back sweep over all settings.
pub fn sweep_schedule(
    n_settings: usize,
    dwell_steps: usize,
    n_intervals: usize,
) -> Result<RisSchedule> {
    if n_settings == 0 {
        return Err(Error::InvalidParameter("panel needs at least one setting"));
    }
    let entries = (0..n_intervals)
        .map(|k| triangle_wave(n_settings, k))
        .collect();
    RisSchedule::new(dwell_steps, entries)
}

/// Setting that best serves `objective`; ties go to the lowest index.
pub fn best_setting(report: &ProbeReport, objective: &Objective) -> Result<usize> {
    let c = report.column_index(&objective.receiver_id)?;
    let mut best = 0;
    for (i, row) in report.rows.iter().enumerate().skip(1) {
        let better = match objective.sense {
            Sense::Maximize => row[c] > report.rows[best][c],
            Sense::Minimize => row[c] < report.rows[best][c],
        };
        if better {
            best = i;
        }
    }
    Ok(best)
}

/// Best settings of each objective in declaration order, duplicates removed.
pub fn preferred_settings(report: &ProbeReport, objectives: &[Objective]) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    for o in objectives {
        let s = best_setting(report, o)?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Probe every setting once in ascending order, then round-robin through
/// the receivers' preferred settings.
pub fn context_schedule(
    report: &ProbeReport,
    objectives: &[Objective],
    n_settings: usize,
    dwell_steps: usize,
    n_intervals: usize,
) -> Result<RisSchedule> {
    if objectives.is_empty() {
        return Err(Error::InvalidParameter(
            "context policy needs at least one objective",
        ));
    }
    if n_settings == 0 || report.setting_count() != n_settings {
        return Err(Error::InvalidParameter(
            "probe report does not match the panel",
        ));
    }
    if n_intervals < n_settings {
        return Err(Error::HorizonShorterThanProbe {
            intervals: n_intervals,
            settings: n_settings,
        });
    }
    let preferred = preferred_settings(report, objectives)?;
    let entries = (0..n_settings)
        .chain((0..n_intervals - n_settings).map(|k| preferred[k % preferred.len()]))
        .collect();
    RisSchedule::new(dwell_steps, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn report(col: &[f64]) -> ProbeReport {
        ProbeReport::new(vec!["B".into()], col.iter().map(|&v| vec![v]).collect()).unwrap()
    }

    fn objective(id: &str, sense: Sense) -> Objective {
        Objective {
            receiver_id: id.into(),
            sense,
            threshold_dbm: -80.0,
        }
    }

    /// One column per objective; each column peaks (or dips) at `bests[i]`.
    fn report_with_bests(n: usize, bests: &[usize]) -> (ProbeReport, Vec<Objective>) {
        let ids: Vec<String> = (0..bests.len()).map(|i| alloc::format!("R{i}")).collect();
        let rows = (0..n)
            .map(|s| {
                bests
                    .iter()
                    .map(|&b| if s == b { -50.0 } else { -90.0 })
                    .collect()
            })
            .collect();
        let objs = ids
            .iter()
            .map(|id| objective(id, Sense::Maximize))
            .collect();
        (ProbeReport::new(ids, rows).unwrap(), objs)
    }

    #[test]
    fn static_examples() {
        let s = static_schedule(4, 9, 1, 5).unwrap();
        assert_eq!(s.entries, vec![4; 5]);
        assert_eq!(static_schedule(0, 9, 3, 2).unwrap().total_steps(), 6);
        assert!(matches!(
            static_schedule(9, 9, 1, 5),
            Err(Error::UnknownSetting { .. })
        ));
        assert!(static_schedule(0, 9, 0, 5).is_err());
        assert!(static_schedule(0, 9, 1, 0).is_err());
    }

    #[test]
    fn sweep_examples() {
        let s = sweep_schedule(9, 1, 16).unwrap();
        assert_eq!(
            s.entries,
            vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 7, 6, 5, 4, 3, 2, 1]
        );
        assert_eq!(sweep_schedule(1, 1, 4).unwrap().entries, vec![0, 0, 0, 0]);
        assert_eq!(
            sweep_schedule(3, 1, 7).unwrap().entries,
            vec![0, 1, 2, 1, 0, 1, 2]
        );
        assert_eq!(
            sweep_schedule(2, 1, 5).unwrap().entries,
            vec![0, 1, 0, 1, 0]
        );
    }

    #[test]
    fn sweep_period_visits() {
        for n in 2..12 {
            let s = sweep_schedule(n, 1, 2 * (n - 1)).unwrap();
            for setting in 0..n {
                let visits = s.entries.iter().filter(|&&e| e == setting).count();
                let expected = if setting == 0 || setting == n - 1 {
                    1
                } else {
                    2
                };
                assert_eq!(visits, expected, "n={n} setting={setting}");
            }
        }
    }

    #[test]
    fn best_setting_examples() {
        let r = report(&[-80.0, -75.0, -90.0]);
        assert_eq!(
            best_setting(&r, &objective("B", Sense::Maximize)).unwrap(),
            1
        );
        assert_eq!(
            best_setting(&r, &objective("B", Sense::Minimize)).unwrap(),
            2
        );
        let r = report(&[-70.0, -70.0, -90.0]);
        assert_eq!(
            best_setting(&r, &objective("B", Sense::Maximize)).unwrap(),
            0
        );
        let r = report(&[-90.0, -70.0, -90.0]);
        assert_eq!(
            best_setting(&r, &objective("B", Sense::Minimize)).unwrap(),
            0
        );
        assert!(matches!(
            best_setting(&r, &objective("Z", Sense::Minimize)),
            Err(Error::UnknownReceiver(_))
        ));
    }

    #[test]
    fn context_single_best_is_held() {
        let (r, objs) = report_with_bests(9, &[8]);
        let s = context_schedule(&r, &objs, 9, 1, 12).unwrap();
        assert_eq!(s.entries, vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 8, 8, 8]);
    }

    #[test]
    fn context_round_robin() {
        let (r, objs) = report_with_bests(9, &[8, 1, 0]);
        let s = context_schedule(&r, &objs, 9, 1, 15).unwrap();
        assert_eq!(s.entries, vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 8, 1, 0, 8, 1, 0]);
    }

    #[test]
    fn context_deduplicates_bests() {
        let (r, objs) = report_with_bests(9, &[5, 5]);
        let s = context_schedule(&r, &objs, 9, 1, 11).unwrap();
        assert_eq!(s.entries, vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 5, 5]);
    }

    #[test]
    fn context_horizon_too_short() {
        let (r, objs) = report_with_bests(9, &[5]);
        assert!(matches!(
            context_schedule(&r, &objs, 9, 1, 8),
            Err(Error::HorizonShorterThanProbe {
                intervals: 8,
                settings: 9
            })
        ));
        assert!(context_schedule(&r, &[], 9, 1, 20).is_err());
    }

    #[test]
    fn schedule_lookup_and_check() {
        let s = RisSchedule::new(3, vec![2, 0, 5]).unwrap();
        assert_eq!(s.total_steps(), 9);
        assert_eq!(s.setting_at(0), Some(2));
        assert_eq!(s.setting_at(5), Some(0));
        assert_eq!(s.setting_at(8), Some(5));
        assert_eq!(s.setting_at(9), None);
        assert!(s.check_against(6).is_ok());
        assert_eq!(
            s.check_against(5),
            Err(Error::ScheduleUnknownSetting { index: 5, count: 5 })
        );
    }

    #[test]
    fn objective_from_role() {
        let p = crate::geometry::Point2::new(0.0, 0.0);
        let v = Receiver::new("C", p, Role::Victim, -85.0);
        assert_eq!(Objective::for_receiver(&v).sense, Sense::Minimize);
        let d = Receiver::new("A", p, Role::Detector, -95.0);
        let o = Objective::for_receiver(&d);
        assert_eq!(o.sense, Sense::Maximize);
        assert!(o.is_met(-95.0) && !o.is_met(-95.5));
    }
}

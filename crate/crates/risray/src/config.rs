//! Scenario files.
//!
//! A flat, sectioned `key = value` format:
//!
//! ```text
//! [scene]
//! bounds = 0, 0, 20, 8
//! wall = 0, 0, 20, 0, 15          # x1, y1, x2, y2 [, loss_db]; repeatable
//! wall_loss_db = 15               # loss for walls given without one
//! ris.pivot = 20, 3
//! ris.half_length = 1.5
//! ris.orientation_deg = 90
//! ris.angles = -20:20:5           # start:stop:step, or a comma list
//! ris.loss_db = 1
//! tx.position = 2, 1.5
//! receiver = A, 15.5, 6.8, detector, -95   # id, x, y, role, threshold_dbm
//!
//! [propagation]
//! max_order = 3
//! power_floor_dbm = -150
//! summation = incoherent
//! tx.power_dbm = 0
//! tx.frequency_hz = 3500000000
//!
//! [simulation]
//! policy = context
//! dwell = 1
//! intervals = 64
//! resolution = 0.1
//! static_angle_deg = 0
//! objectives = A, B, C
//! ```
//!
//! Every key is optional; missing keys take the reference-scene defaults.
//! Any `wall` line replaces the default wall list, and any `receiver` line
//! replaces the default receivers. `#` starts a comment.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use risray_core::scene::angle_range;
use risray_core::{
    Point2, Policy, PropagationParams, Receiver, Role, Scene, Segment, Summation, Wall,
};
use thiserror::Error;

/// Largest accepted bounce order; the image tree grows as walls^order.
pub const MAX_ORDER_LIMIT: usize = 8;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config not found: {}", .0.display())]
    NotFound(PathBuf),
    #[error("reading {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid scenario: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub policy: Policy,
    pub dwell: usize,
    pub intervals: usize,
    /// Power-map cell size, meters.
    pub resolution: f64,
    /// Setting held by the static policy, degrees.
    pub static_angle_deg: f64,
    /// Receivers whose objectives drive the context policy, in round-robin
    /// order. Empty means every receiver in declaration order.
    pub objectives: Vec<String>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            policy: Policy::Context,
            dwell: 1,
            intervals: 64,
            resolution: 0.1,
            static_angle_deg: 0.0,
            objectives: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scene: Scene,
    pub propagation: PropagationParams,
    pub simulation: SimulationConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scene: Scene::reference(),
            propagation: PropagationParams::default(),
            simulation: SimulationConfig::default(),
        }
    }
}

impl ScenarioConfig {
    /// Every broken invariant, scene first.
    pub fn violations(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .scene
            .validate()
            .iter()
            .map(|v| v.to_string())
            .collect();
        let sim = &self.simulation;
        if sim.dwell == 0 {
            out.push("simulation.dwell must be >= 1".into());
        }
        if sim.intervals == 0 {
            out.push("simulation.intervals must be >= 1".into());
        }
        if !(sim.resolution.is_finite() && sim.resolution > 0.0) {
            out.push("simulation.resolution must be > 0".into());
        }
        if self.propagation.max_order > MAX_ORDER_LIMIT {
            out.push(format!(
                "propagation.max_order must be <= {MAX_ORDER_LIMIT}"
            ));
        }
        if !self.propagation.power_floor_dbm.is_finite() {
            out.push("propagation.power_floor_dbm must be finite".into());
        }
        if self
            .scene
            .ris
            .setting_index_of(sim.static_angle_deg)
            .is_err()
        {
            out.push(format!(
                "simulation.static_angle_deg {} is not in the RIS angle set",
                sim.static_angle_deg
            ));
        }
        for id in &sim.objectives {
            if self.scene.receiver(id).is_none() {
                out.push(format!("objective refers to unknown receiver id {id:?}"));
            }
        }
        if sim.policy == Policy::Context && sim.intervals < self.scene.ris.setting_count() {
            out.push("simulation.intervals is shorter than the context probe phase".into());
        }
        out
    }

    pub fn validate(self) -> Result<Self, ConfigError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(ConfigError::Invalid(v))
        }
    }

    /// Objective receivers for the context policy.
    pub fn objective_receivers(&self) -> Vec<&Receiver> {
        if self.simulation.objectives.is_empty() {
            self.scene.receivers.iter().collect()
        } else {
            self.simulation
                .objectives
                .iter()
                .filter_map(|id| self.scene.receiver(id))
                .collect()
        }
    }

    /// Canonical text form; [`parse_scenario`] reads it back unchanged.
    pub fn dump(&self) -> String {
        let s = &self.scene;
        let p = &self.propagation;
        let sim = &self.simulation;
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "[scene]");
        let b = s.bounds;
        let _ = writeln!(
            w,
            "bounds = {}, {}, {}, {}",
            b.min.x, b.min.y, b.max.x, b.max.y
        );
        for wall in &s.walls {
            let (a, z) = (wall.segment.a, wall.segment.b);
            let _ = writeln!(
                w,
                "wall = {}, {}, {}, {}, {}",
                a.x, a.y, z.x, z.y, wall.reflection_loss_db
            );
        }
        let _ = writeln!(w, "ris.pivot = {}, {}", s.ris.pivot.x, s.ris.pivot.y);
        let _ = writeln!(w, "ris.half_length = {}", s.ris.half_length);
        let _ = writeln!(w, "ris.orientation_deg = {}", s.ris.base_orientation_deg);
        let _ = writeln!(w, "ris.angles = {}", join(&s.ris.angle_set_deg));
        let _ = writeln!(w, "ris.loss_db = {}", s.ris.reflection_loss_db);
        let _ = writeln!(w, "tx.position = {}, {}", s.tx.position.x, s.tx.position.y);
        for r in &s.receivers {
            let _ = writeln!(
                w,
                "receiver = {}, {}, {}, {}, {}",
                r.id,
                r.position.x,
                r.position.y,
                r.role.as_str(),
                r.threshold_dbm
            );
        }
        let _ = writeln!(w, "\n[propagation]");
        let _ = writeln!(w, "max_order = {}", p.max_order);
        let _ = writeln!(w, "power_floor_dbm = {}", p.power_floor_dbm);
        let _ = writeln!(w, "summation = {}", p.summation.as_str());
        let _ = writeln!(w, "tx.power_dbm = {}", s.tx.power_dbm);
        let _ = writeln!(w, "tx.frequency_hz = {}", s.tx.frequency_hz);
        let _ = writeln!(w, "\n[simulation]");
        let _ = writeln!(w, "policy = {}", sim.policy.as_str());
        let _ = writeln!(w, "dwell = {}", sim.dwell);
        let _ = writeln!(w, "intervals = {}", sim.intervals);
        let _ = writeln!(w, "resolution = {}", sim.resolution);
        let _ = writeln!(w, "static_angle_deg = {}", sim.static_angle_deg);
        if !sim.objectives.is_empty() {
            let _ = writeln!(w, "objectives = {}", sim.objectives.join(", "));
        }
        out
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Scene,
    Propagation,
    Simulation,
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => ConfigError::NotFound(path.to_path_buf()),
        _ => ConfigError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    parse_scenario(&text)
}

/// Parses and validates scenario text.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut cfg = ScenarioConfig::default();
    let mut section: Option<Section> = None;
    let mut walls: Vec<(usize, [f64; 4], Option<f64>)> = Vec::new();
    let mut wall_loss = Scene::REFERENCE_WALL_LOSS_DB;
    let mut receivers: Vec<Receiver> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| ConfigError::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = Some(match name.trim() {
                "scene" => Section::Scene,
                "propagation" => Section::Propagation,
                "simulation" => Section::Simulation,
                other => return Err(err(format!("unknown section [{other}]"))),
            });
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(err(format!("expected `key = value`, got {line:?}")));
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(section) = section else {
            return Err(err(format!("key {key:?} appears before any section")));
        };
        let scene = &mut cfg.scene;
        match (section, key) {
            (Section::Scene, "bounds") => {
                let v = numbers(value, 4).map_err(err)?;
                scene.bounds = risray_core::Bounds::new(v[0], v[1], v[2], v[3]);
            }
            (Section::Scene, "wall") => {
                let v = list(value).map_err(err)?;
                if !(v.len() == 4 || v.len() == 5) {
                    return Err(err("wall takes x1, y1, x2, y2 [, loss_db]".into()));
                }
                walls.push((line_no, [v[0], v[1], v[2], v[3]], v.get(4).copied()));
            }
            (Section::Scene, "wall_loss_db") => wall_loss = number(value).map_err(err)?,
            (Section::Scene, "ris.pivot") => scene.ris.pivot = point(value).map_err(err)?,
            (Section::Scene, "ris.half_length") => {
                scene.ris.half_length = number(value).map_err(err)?
            }
            (Section::Scene, "ris.orientation_deg") => {
                scene.ris.base_orientation_deg = number(value).map_err(err)?
            }
            (Section::Scene, "ris.angles") => {
                scene.ris.angle_set_deg = angles(value).map_err(err)?
            }
            (Section::Scene, "ris.loss_db") => {
                scene.ris.reflection_loss_db = number(value).map_err(err)?
            }
            (Section::Scene, "tx.position") => scene.tx.position = point(value).map_err(err)?,
            (Section::Scene, "receiver") => receivers.push(receiver(value).map_err(err)?),
            (Section::Propagation, "max_order") => {
                cfg.propagation.max_order = integer(value).map_err(err)?
            }
            (Section::Propagation, "power_floor_dbm") => {
                cfg.propagation.power_floor_dbm = number(value).map_err(err)?
            }
            (Section::Propagation, "summation") => {
                cfg.propagation.summation = Summation::parse(value)
                    .ok_or_else(|| err(format!("unknown summation {value:?}")))?
            }
            (Section::Propagation, "tx.power_dbm") => {
                scene.tx.power_dbm = number(value).map_err(err)?
            }
            (Section::Propagation, "tx.frequency_hz") => {
                scene.tx.frequency_hz = number(value).map_err(err)?
            }
            (Section::Simulation, "policy") => {
                cfg.simulation.policy =
                    Policy::parse(value).ok_or_else(|| err(format!("unknown policy {value:?}")))?
            }
            (Section::Simulation, "dwell") => cfg.simulation.dwell = integer(value).map_err(err)?,
            (Section::Simulation, "intervals") => {
                cfg.simulation.intervals = integer(value).map_err(err)?
            }
            (Section::Simulation, "resolution") => {
                cfg.simulation.resolution = number(value).map_err(err)?
            }
            (Section::Simulation, "static_angle_deg") => {
                cfg.simulation.static_angle_deg = number(value).map_err(err)?
            }
            (Section::Simulation, "objectives") => {
                cfg.simulation.objectives = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            _ => return Err(err(format!("unknown key {key:?} in this section"))),
        }
    }

    if walls.is_empty() {
        for w in &mut cfg.scene.walls {
            w.reflection_loss_db = wall_loss;
        }
    } else {
        cfg.scene.walls = walls
            .into_iter()
            .map(|(line, [ax, ay, bx, by], loss)| {
                let segment =
                    Segment::new(Point2::new(ax, ay), Point2::new(bx, by)).map_err(|e| {
                        ConfigError::Parse {
                            line,
                            message: e.to_string(),
                        }
                    })?;
                Ok(Wall {
                    segment,
                    reflection_loss_db: loss.unwrap_or(wall_loss),
                })
            })
            .collect::<Result<_, ConfigError>>()?;
    }
    if !receivers.is_empty() {
        cfg.scene.receivers = receivers;
    }
    cfg.validate()
}

fn number(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| format!("expected a number, got {:?}", s.trim()))
}

fn integer(s: &str) -> Result<usize, String> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| format!("expected a non-negative integer, got {:?}", s.trim()))
}

fn list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(number).collect()
}

fn numbers(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v = list(s)?;
    if v.len() != n {
        return Err(format!(
            "expected {n} comma-separated numbers, got {}",
            v.len()
        ));
    }
    Ok(v)
}

fn point(s: &str) -> Result<Point2, String> {
    let v = numbers(s, 2)?;
    Ok(Point2::new(v[0], v[1]))
}

fn angles(s: &str) -> Result<Vec<f64>, String> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err("angle range is start:stop:step".into());
        }
        let (start, stop, step) = (number(parts[0])?, number(parts[1])?, number(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err("angle range needs step > 0 and stop >= start".into());
        }
        Ok(angle_range(start, stop, step))
    } else {
        list(s)
    }
}

fn receiver(s: &str) -> Result<Receiver, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err("receiver takes id, x, y, role, threshold_dbm".into());
    }
    if parts[0].is_empty() {
        return Err("receiver id is empty".into());
    }
    let role = Role::parse(parts[3]).ok_or_else(|| format!("unknown role {:?}", parts[3]))?;
    Ok(Receiver::new(
        parts[0],
        Point2::new(number(parts[1])?, number(parts[2])?),
        role,
        number(parts[4])?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_reference_scenario() {
        assert_eq!(parse_scenario("").unwrap(), ScenarioConfig::default());
        assert_eq!(
            parse_scenario("# nothing\n\n").unwrap(),
            ScenarioConfig::default()
        );
    }

    #[test]
    fn single_override() {
        let cfg = parse_scenario("[propagation]\ntx.power_dbm = 10\n").unwrap();
        let mut expected = ScenarioConfig::default();
        expected.scene.tx.power_dbm = 10.0;
        assert_eq!(cfg, expected);
    }

    #[test]
    fn angle_range_syntax() {
        let cfg = parse_scenario("[scene]\nris.angles = -20:20:5\n").unwrap();
        assert_eq!(cfg.scene.ris.setting_count(), 9);
        let cfg = parse_scenario("[scene]\nris.angles = -10, 0, 10\n[simulation]\nintervals = 5")
            .unwrap();
        assert_eq!(cfg.scene.ris.angle_set_deg, vec![-10.0, 0.0, 10.0]);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let e = parse_scenario("[scene]\n\nbounds 0,0,1,1\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 3, .. }), "{e}");
        let e = parse_scenario("max_order = 2\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 1, .. }));
        let e = parse_scenario("[scene]\nris.pivot = 1\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 2, .. }));
        let e = parse_scenario("[propagation]\nmax_order = -1\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 2, .. }));
        let e = parse_scenario("[nope]\n").unwrap_err();
        assert!(e.to_string().contains("line 1"));
        let e = parse_scenario("[scene]\nwall = 1, 1, 1, 1\n").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { line: 2, .. }));
    }

    #[test]
    fn violations_are_aggregated() {
        let text =
            "[scene]\nreceiver = A, -1, -1, detector, -90\nreceiver = A, 5, 5, victim, -90\n\
                    [simulation]\ndwell = 0\n";
        let ConfigError::Invalid(v) = parse_scenario(text).unwrap_err() else {
            panic!("expected validation errors");
        };
        assert_eq!(v.len(), 3, "{v:?}");
        assert!(v[0].contains("position outside bounds"));
        assert!(v[1].contains("duplicate receiver id"));
        assert!(v[2].contains("dwell"));
    }

    #[test]
    fn wall_loss_applies_to_walls_without_their_own() {
        let cfg = parse_scenario("[scene]\nwall_loss_db = 9\n").unwrap();
        assert!(cfg.scene.walls.iter().all(|w| w.reflection_loss_db == 9.0));
        let cfg = parse_scenario("[scene]\nwall_loss_db = 9\nwall = 0,0,20,0\nwall = 0,8,20,8,3\n")
            .unwrap();
        assert_eq!(cfg.scene.walls.len(), 2);
        assert_eq!(cfg.scene.walls[0].reflection_loss_db, 9.0);
        assert_eq!(cfg.scene.walls[1].reflection_loss_db, 3.0);
    }

    #[test]
    fn dump_round_trips() {
        let cfg = ScenarioConfig::default();
        assert_eq!(parse_scenario(&cfg.dump()).unwrap(), cfg);
        let text = "[scene]\nris.angles = -7.5, 0, 2.25\nreceiver = Z, 3.3, 1.1, victim, -88.125\n\
                    [propagation]\ntx.frequency_hz = 2.412e9\nmax_order = 2\n\
                    [simulation]\npolicy = sweep\ndwell = 3\nintervals = 17\nobjectives = Z\n";
        let cfg = parse_scenario(text).unwrap();
        assert_eq!(parse_scenario(&cfg.dump()).unwrap(), cfg);
    }

    #[test]
    fn unknown_objective_and_angle() {
        let e = parse_scenario("[simulation]\nobjectives = Q\nstatic_angle_deg = 7\n").unwrap_err();
        let ConfigError::Invalid(v) = e else { panic!() };
        assert_eq!(v.len(), 2);
    }
}

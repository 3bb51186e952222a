//! The simulated world: opaque walls, one rotatable RIS panel, a transmitter
//! and a set of receivers with role-specific objectives.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Segment, Vec2};

/// Two angles closer than this (degrees) name the same RIS setting.
const ANGLE_MATCH_DEG: f64 = 1e-9;

/// An opaque specular reflector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wall {
    pub segment: Segment,
    pub reflection_loss_db: f64,
}

impl Wall {
    pub fn new(segment: Segment, reflection_loss_db: f64) -> Result<Self> {
        if !(reflection_loss_db.is_finite() && reflection_loss_db >= 0.0) {
            return Err(Error::InvalidParameter("reflection loss must be >= 0 dB"));
        }
        Ok(Self {
            segment,
            reflection_loss_db,
        })
    }
}

/// A flat reflecting panel rotated about its midpoint through a discrete set
/// of angles.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPanel {
    pub pivot: Point2,
    pub half_length: f64,
    /// Direction of the panel at angle 0, degrees counter-clockwise from +x.
    pub base_orientation_deg: f64,
    /// Rotation offsets, strictly increasing.
    pub angle_set_deg: Vec<f64>,
    pub reflection_loss_db: f64,
}

impl RisPanel {
    /// The −20°..20° in 5° steps actuation range.
    pub fn default_angles() -> Vec<f64> {
        angle_range(-20.0, 20.0, 5.0)
    }

    pub fn setting_count(&self) -> usize {
        self.angle_set_deg.len()
    }

    fn wall_at(&self, offset_deg: f64) -> Result<Wall> {
        let u: Vec2 = Vec2::from_angle_deg(self.base_orientation_deg + offset_deg);
        let a = self.pivot + u * self.half_length;
        let b = self.pivot - u * self.half_length;
        Wall::new(Segment::new(a, b)?, self.reflection_loss_db)
    }

    /// The panel as a wall for `setting_index`.
    pub fn segment(&self, setting_index: usize) -> Result<Wall> {
        let offset =
            self.angle_set_deg
                .get(setting_index)
                .copied()
                .ok_or(Error::UnknownSetting {
                    index: setting_index,
                    count: self.setting_count(),
                })?;
        self.wall_at(offset)
    }

    /// The panel at its base orientation, i.e. the plain wall fragment it
    /// replaces.
    pub fn base_wall(&self) -> Result<Wall> {
        self.wall_at(0.0)
    }

    /// Index of the setting whose angle equals `deg`.
    pub fn setting_index_of(&self, deg: f64) -> Result<usize> {
        self.angle_set_deg
            .iter()
            .position(|a| (a - deg).abs() <= ANGLE_MATCH_DEG)
            .ok_or(Error::UnknownAngle(deg))
    }
}

/// `start, start + step, ...` up to and including `stop` (within rounding).
pub fn angle_range(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || stop < start {
        return vec![start];
    }
    let n = libm::floor((stop - start) / step + 1e-9) as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmitter {
    pub position: Point2,
    pub power_dbm: f64,
    pub frequency_hz: f64,
}

/// What a receiver wants from the signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// Spectrum-occupancy sensor: wants power at or above its threshold.
    Detector,
    /// Desired-signal receiver: wants power at or above its threshold.
    Subscriber,
    /// Interference victim: wants power strictly below its threshold.
    Victim,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Detector => "detector",
            Role::Subscriber => "subscriber",
            Role::Victim => "victim",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "detector" => Some(Role::Detector),
            "subscriber" => Some(Role::Subscriber),
            "victim" => Some(Role::Victim),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Receiver {
    pub id: String,
    pub position: Point2,
    pub role: Role,
    pub threshold_dbm: f64,
}

impl Receiver {
    pub fn new(id: &str, position: Point2, role: Role, threshold_dbm: f64) -> Self {
        Self {
            id: id.into(),
            position,
            role,
            threshold_dbm,
        }
    }

    /// Whether `power_dbm` meets this receiver's objective. Samples exactly at
    /// the threshold count as received and as interfered.
    pub fn is_satisfied(&self, power_dbm: f64) -> bool {
        match self.role {
            Role::Detector | Role::Subscriber => power_dbm >= self.threshold_dbm,
            Role::Victim => power_dbm < self.threshold_dbm,
        }
    }
}

/// Axis-aligned rectangle, inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: Point2,
    pub max: Point2,
}

impl Bounds {
    pub const fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        Self {
            min: Point2::new(min_x, min_y),
            max: Point2::new(max_x, max_y),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.min.is_finite() && self.max.is_finite() && self.width() > 0.0 && self.height() > 0.0)
    }
}

/// One broken scene invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    DegenerateBounds,
    OutsideBounds(String),
    NonFinite(String),
    DuplicateReceiverId(String),
    NoReceivers,
    NonPositiveFrequency,
    NegativeLoss(String),
    NonPositiveHalfLength,
    EmptyAngleSet,
    AnglesNotIncreasing,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegenerateBounds => f.write_str("degenerate bounds"),
            Violation::OutsideBounds(what) => write!(f, "position outside bounds: {what}"),
            Violation::NonFinite(what) => write!(f, "non-finite value: {what}"),
            Violation::DuplicateReceiverId(id) => write!(f, "duplicate receiver id: {id}"),
            Violation::NoReceivers => f.write_str("scene has no receivers"),
            Violation::NonPositiveFrequency => f.write_str("frequency must be > 0"),
            Violation::NegativeLoss(what) => write!(f, "negative reflection loss: {what}"),
            Violation::NonPositiveHalfLength => f.write_str("RIS half length must be > 0"),
            Violation::EmptyAngleSet => f.write_str("RIS angle set is empty"),
            Violation::AnglesNotIncreasing => f.write_str("RIS angle set not strictly increasing"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub bounds: Bounds,
    pub walls: Vec<Wall>,
    pub ris: RisPanel,
    pub tx: Transmitter,
    pub receivers: Vec<Receiver>,
}

impl Scene {
    /// Wall reflection loss of the reference room, dB per bounce.
    pub const REFERENCE_WALL_LOSS_DB: f64 = 15.0;

    /// The reference room used by the command line when no overrides are
    /// given.
    ///
    /// A 20 m × 8 m room with an interior wall at x = 8 hanging from the
    /// ceiling. The transmitter sits low on the left and sees the RIS on the
    /// right wall through the gap under the interior wall; receivers A and B
    /// are shadowed from it, and C is lit by the RIS at its base orientation.
    pub fn reference() -> Scene {
        let p = Point2::new;
        let loss = Self::REFERENCE_WALL_LOSS_DB;
        let wall = |a: Point2, b: Point2| Wall {
            segment: Segment { a, b },
            reflection_loss_db: loss,
        };
        Scene {
            bounds: Bounds::new(0.0, 0.0, 20.0, 8.0),
            walls: vec![
                wall(p(0.0, 0.0), p(20.0, 0.0)),
                wall(p(0.0, 8.0), p(20.0, 8.0)),
                wall(p(0.0, 0.0), p(0.0, 8.0)),
                wall(p(20.0, 0.0), p(20.0, 1.5)),
                wall(p(20.0, 4.5), p(20.0, 8.0)),
                wall(p(8.0, 2.0), p(8.0, 8.0)),
            ],
            ris: RisPanel {
                pivot: p(20.0, 3.0),
                half_length: 1.5,
                base_orientation_deg: 90.0,
                angle_set_deg: RisPanel::default_angles(),
                reflection_loss_db: 1.0,
            },
            tx: Transmitter {
                position: p(2.0, 1.5),
                power_dbm: 0.0,
                frequency_hz: 3.5e9,
            },
            receivers: vec![
                Receiver::new("A", p(15.5, 6.8), Role::Detector, -95.0),
                Receiver::new("B", p(13.5, 7.0), Role::Subscriber, -85.0),
                Receiver::new("C", p(8.5, 3.5), Role::Victim, -85.0),
            ],
        }
    }

    /// Every broken invariant, in a stable order. Empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let bounds_ok = !self.bounds.is_degenerate();
        if !bounds_ok {
            out.push(Violation::DegenerateBounds);
        }
        let check_point = |what: String, p: Point2, out: &mut Vec<Violation>| {
            if !p.is_finite() {
                out.push(Violation::NonFinite(what));
            } else if bounds_ok && !self.bounds.contains(p) {
                out.push(Violation::OutsideBounds(what));
            }
        };
        check_point("transmitter".into(), self.tx.position, &mut out);
        check_point("RIS pivot".into(), self.ris.pivot, &mut out);
        for r in &self.receivers {
            check_point(format!("receiver {}", r.id), r.position, &mut out);
        }
        for (i, w) in self.walls.iter().enumerate() {
            if !(w.segment.a.is_finite() && w.segment.b.is_finite()) {
                out.push(Violation::NonFinite(format!("wall {i}")));
            }
            if !(w.reflection_loss_db >= 0.0) {
                out.push(Violation::NegativeLoss(format!("wall {i}")));
            }
        }

        let mut seen = BTreeSet::new();
        for r in &self.receivers {
            if !seen.insert(r.id.as_str()) {
                out.push(Violation::DuplicateReceiverId(r.id.clone()));
            }
            if !r.threshold_dbm.is_finite() {
                out.push(Violation::NonFinite(format!(
                    "threshold of receiver {}",
                    r.id
                )));
            }
        }
        if self.receivers.is_empty() {
            out.push(Violation::NoReceivers);
        }

        if !(self.tx.frequency_hz.is_finite() && self.tx.frequency_hz > 0.0) {
            out.push(Violation::NonPositiveFrequency);
        }
        if !self.tx.power_dbm.is_finite() {
            out.push(Violation::NonFinite("transmitter power".into()));
        }

        let ris = &self.ris;
        if !(ris.half_length.is_finite() && ris.half_length > 0.0) {
            out.push(Violation::NonPositiveHalfLength);
        }
        if !(ris.reflection_loss_db >= 0.0) {
            out.push(Violation::NegativeLoss("RIS".into()));
        }
        if !ris.base_orientation_deg.is_finite() || ris.angle_set_deg.iter().any(|a| !a.is_finite())
        {
            out.push(Violation::NonFinite("RIS angle".into()));
        }
        if ris.angle_set_deg.is_empty() {
            out.push(Violation::EmptyAngleSet);
        } else if ris.angle_set_deg.windows(2).any(|w| !(w[0] < w[1])) {
            out.push(Violation::AnglesNotIncreasing);
        }
        out
    }

    /// Errors with every violation if the scene is invalid.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidScene(v))
        }
    }

    /// Static walls plus the RIS at `setting_index`. The RIS is last.
    pub fn walls_for_setting(&self, setting_index: usize) -> Result<Vec<Wall>> {
        let mut walls = self.walls.clone();
        walls.push(self.ris.segment(setting_index)?);
        Ok(walls)
    }

    /// Static walls plus the panel as a plain wall at its base orientation.
    pub fn baseline_walls(&self) -> Result<Vec<Wall>> {
        let mut walls = self.walls.clone();
        walls.push(self.ris.base_wall()?);
        Ok(walls)
    }

    pub fn receiver(&self, id: &str) -> Option<&Receiver> {
        self.receivers.iter().find(|r| r.id == id)
    }
}
